"""Cavity entropy before and after two atoms, and the parameter sweeps."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields
import logging
import math

import numpy as np

from . import kernels
from .entangle import analyze, two_atom_state
from .errors import MicromaserError, TruncationError
from .fock import TAIL_TOL, PhotonDistribution, rabi_tables, shannon_entropy, variance_ratio
from .steady_state import steady_state

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepRow:
    D: float
    gt: float
    kappa_ratio: float
    EF: float
    C: float
    tangle: float
    M: float
    v: float
    S_ss: float
    S_2: float
    dS: float
    error: str = None

    @classmethod
    def columns(cls):
        return [f.name for f in fields(cls) if f.name != "error"]

    def values(self):
        return astuple(self)[:-1]

    @classmethod
    def failed(cls, params, message):
        nan = math.nan
        return cls(params.D, params.gt, params.kappa_ratio,
                   nan, nan, nan, nan, nan, nan, nan, nan, error=message)


def post_passage_distribution(P, gt):
    """Field after two excited atoms have crossed a field ``P`` (no damping).

    ``P2_m = P_m c_m^4 + P_{m-1} s_{m-1}^2 (c_m^2 + c_{m-1}^2)
    + P_{m-2} s_{m-2}^2 s_{m-1}^2`` with ``s_n, c_n`` at ``gt sqrt(n+1)``.
    The result lives on a ladder two rungs taller, so it is exactly trace
    preserving; mass landing on those two new rungs must stay below the
    truncation tolerance.
    """
    s, c = rabi_tables(gt, P.n_max + 2)
    out = kernels.two_atom_passage(P.probs, s, c)
    spill = float(out[-2:].sum())
    if spill >= TAIL_TOL:
        raise TruncationError(f"post-passage mass {spill:.3e} above n_max={P.n_max}",
                              tail=spill, n_max=P.n_max)
    return PhotonDistribution(out)


def entropy_transfer(P_ss, gt, base=2.0):
    """``(S_ss, S_2, S_2 - S_ss)``; the difference is reported signed."""
    S_ss = shannon_entropy(P_ss, base)
    S_2 = shannon_entropy(post_passage_distribution(P_ss, gt), base)
    return S_ss, S_2, S_2 - S_ss


def evaluate_point(params, gain="unitary", base=2.0):
    P, _ = steady_state(params, gain)
    report = analyze(two_atom_state(P, params.gt, params.theta))
    S_ss, S_2, dS = entropy_transfer(P, params.gt, base)
    return SweepRow(
        D=params.D, gt=params.gt, kappa_ratio=params.kappa_ratio,
        EF=report.eof, C=report.concurrence, tangle=report.tangle,
        M=report.horodecki_m, v=variance_ratio(P),
        S_ss=S_ss, S_2=S_2, dS=dS,
    )


def _safe_point(args):
    params, gain, base = args
    try:
        return evaluate_point(params, gain, base)
    except MicromaserError as exc:
        log.warning("point %s failed: %s", params, exc)
        return SweepRow.failed(params, str(exc))


def _run(jobs, workers):
    if workers is None or workers <= 1 or len(jobs) <= 1:
        return [_safe_point(j) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_safe_point, jobs))


def sweep_D(params_base, D_grid, gain="unitary", base=2.0, workers=1):
    """One row per pump parameter ``D``, with ``gt = D / sqrt(N)``."""
    root = math.sqrt(params_base.N)
    jobs = [(params_base.replace(gt=float(D) / root), gain, base) for D in D_grid]
    return _run(jobs, workers)


def sweep_kappa(params_base, kappa_grid, gt_list, base=2.0, workers=1):
    """Damped-transit rows over ``gt_list x kappa_grid`` (``gt`` outer)."""
    jobs = [(params_base.replace(gt=float(gt), kappa_ratio=float(k)), "damped", base)
            for gt in gt_list for k in kappa_grid]
    return _run(jobs, workers)


# --------------------------------------------------------------------------
# curve features

def local_maxima(y):
    """Indices of strict interior local maxima; a plateau counts once, at its left end."""
    y = np.asarray(y, dtype=float)
    peaks = []
    i = 1
    while i < len(y) - 1:
        if y[i] > y[i - 1]:
            j = i
            while j + 1 < len(y) and y[j + 1] == y[i]:
                j += 1
            if j + 1 < len(y) and y[j + 1] < y[i]:
                peaks.append(i)
            i = j + 1
        else:
            i += 1
    return peaks


def peak_prominence(y, i):
    """Height of peak ``i`` above the higher of the two flanking minima."""
    y = np.asarray(y, dtype=float)
    left = y[:i + 1]
    right = y[i:]
    higher_left = np.nonzero(left > y[i])[0]
    higher_right = np.nonzero(right > y[i])[0]
    lo = higher_left[-1] if higher_left.size else 0
    hi = i + higher_right[0] if higher_right.size else len(y) - 1
    return float(y[i] - max(y[lo:i + 1].min(), y[i:hi + 1].min()))
