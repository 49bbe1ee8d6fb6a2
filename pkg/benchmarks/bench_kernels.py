"""Time the numba and numpy flavours of each kernel on desk-scale inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from micromaser import MaserParams, _backend, kernels, thermal_distribution
from micromaser.fock import rabi_tables
from micromaser.steady_state import generator_matrix, transit_steps


def cases(n_max):
    P = thermal_distribution(30.0, n_max).probs
    s, c = rabi_tables(math.pi / 10, n_max + 2)
    gt = math.pi / 2
    nsteps = transit_steps(gt, n_max)
    A = generator_matrix(MaserParams(N=100, gt=0.3, n_th=0.01, n_max=n_max))
    return {
        "alpha_sums": lambda k: k(P, s, c),
        "two_atom_passage": lambda k: k(P, s, c),
        "one_atom_gain": lambda k: k(P, s, c),
        "transit_rk4": lambda k: k(P, 1e-2, 0.01, gt / nsteps, nsteps),
        "gth_stationary": lambda k: k(A),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n-max", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _backend.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"n_max={args.n_max}, best of {args.repeat}")
    print(f"{'kernel':18s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speed-up':>9s}")
    for name, call in cases(args.n_max).items():
        fast = getattr(kernels, name + "_numba")
        slow = getattr(kernels, name + "_numpy")
        a, b = call(fast), call(slow)  # also triggers compilation
        assert np.allclose(a, b, rtol=1e-10, atol=1e-14), name
        times = []
        for k in (slow, fast):
            number = 1 if name == "transit_rk4" else 20
            t = min(timeit.repeat(lambda: call(k), number=number, repeat=args.repeat)) / number
            times.append(1e3 * t)
        print(f"{name:18s} {times[0]:12.3f} {times[1]:12.3f} {times[0] / times[1]:8.1f}x")


if __name__ == "__main__":
    main()
