"""Acceptance gate: one test per criterion, summarised at the end of the run."""
import math
import time

import numpy as np
import pytest
import scipy.stats

from conftest import dense_post_passage, dense_two_atom, random_distribution
from micromaser import (MaserParams, TwoAtomState, coarse_grained_steady_state, concurrence,
                        density_matrix, evaluate_point, fjm_steady_state, horodecki_m,
                        kernels, steady_state, sweep_D, sweep_kappa, thermal_distribution,
                        two_atom_state)
from micromaser.cli import FIG1_GT, main
from micromaser.entangle import analyze, horodecki_m_general, wootters_concurrence
from micromaser.fock import rabi_tables
from micromaser.transfer import local_maxima, peak_prominence

FIG2_BASE = MaserParams(N=100, gt=0.0, kappa_ratio=1e-6, n_th=0.01)
FIG2_GRID = np.linspace(0.2, 40.0, 200)
FIG1_BASE = MaserParams(N=100, gt=0.0, n_th=0.01)
FIG1_GRID = np.geomspace(1e-6, 1e-1, 25)


@pytest.fixture
def summary(record_property):
    def note(text):
        record_property("summary", text)
        print(text)
    return note


@pytest.fixture(scope="module")
def fig2():
    t0 = time.perf_counter()
    rows = sweep_D(FIG2_BASE, FIG2_GRID)
    return rows, time.perf_counter() - t0


@pytest.fixture(scope="module")
def fig1():
    return sweep_kappa(FIG1_BASE, FIG1_GRID, FIG1_GT)


def random_x_state(rng):
    pops = rng.dirichlet(np.full(4, 0.6))
    a1, a2, a3, a5 = pops
    a4 = rng.uniform(-1, 1) * math.sqrt(a2 * a3)
    return TwoAtomState(a1, a2, a3, a4, a5, theta=rng.uniform(-math.pi, math.pi))


def test_criterion_1_completeness(rng, summary):
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        P = random_distribution(rng, int(rng.integers(1, 200)))
        a1, a2, a3, _, a5 = two_atom_state(P, rng.uniform(0, 10)).alphas
        worst = max(worst, abs(a1 + a2 + a3 + a5 - 1.0))
    elapsed = time.perf_counter() - t0
    summary(f"max |sum - 1| = {worst:.2e} over 1000 cases in {elapsed:.2f} s")
    assert worst <= 1e-10
    assert elapsed < 10


def test_criterion_2_concurrence_oracles(rng, summary):
    dc = dm = 0.0
    for _ in range(1000):
        state = random_x_state(rng)
        rho = density_matrix(state)
        dc = max(dc, abs(concurrence(state) - wootters_concurrence(rho)))
        dm = max(dm, abs(horodecki_m(state)[0] - horodecki_m_general(rho)))
    summary(f"max |C - C_wootters| = {dc:.2e}, max |M - M_pauli| = {dm:.2e}")
    assert dc <= 1e-10 and dm <= 1e-10


def test_criterion_3_steady_state_oracle(summary):
    worst = 0.0
    for N in (1.0, 10.0, 50.0, 100.0, 200.0):
        for gt in (0.05, 0.3, 1.0, math.pi / 2, 2.7):
            for nth in (0.0, 0.01, 0.1, 0.5, 1.0):
                P, used = steady_state(MaserParams(N=N, gt=gt, n_th=nth, kappa_ratio=1e-6))
                worst = max(worst, float(np.abs(P.probs - fjm_steady_state(used).probs).sum()))
    thermal = 0.0
    for nth in (0.0, 0.01, 0.5, 2.0):
        P = coarse_grained_steady_state(MaserParams(N=100, gt=0.0, n_th=nth, n_max=256))
        thermal = max(thermal, float(np.abs(P.probs - thermal_distribution(nth, 256).probs).sum()))
    vac = coarse_grained_steady_state(MaserParams(N=100, gt=math.pi, n_th=0.0, n_max=256))
    exact = vac.probs[0] == 1.0 and not vac.probs[1:].any()
    summary(f"unitary vs product L1 {worst:.2e} (125 pts); thermal L1 {thermal:.2e}; "
            f"exact vacuum {exact}")
    assert worst <= 1e-10 and thermal <= 1e-12 and exact


def test_criterion_4_dense_operator_oracle(rng, summary):
    da = dp = 0.0
    for _ in range(100):
        P = random_distribution(rng, 12)
        gt = rng.uniform(0, 6)
        dense = dense_two_atom(P.probs, gt)
        a = two_atom_state(P, gt).alphas
        ref = (dense[0, 0].real, dense[2, 2].real, dense[1, 1].real, dense[1, 2].real,
               dense[3, 3].real)
        da = max(da, float(np.abs(np.subtract(a, ref)).max()))
        post = kernels.two_atom_passage(P.probs, *rabi_tables(gt, 14))
        dp = max(dp, float(np.abs(post - dense_post_passage(P.probs, gt)).max()))
    summary(f"alpha traces {da:.2e}, post-passage field {dp:.2e}")
    assert da <= 1e-12 and dp <= 1e-12


def _nearest(D, x):
    return int(np.argmin(np.abs(np.asarray(D) - x)))


def test_criterion_5_fig2(fig2, summary):
    rows, elapsed = fig2
    D = np.array([r.D for r in rows])
    EF = np.array([r.EF for r in rows])
    v = np.array([r.v for r in rows])
    # entropy given up by the cavity to the two atoms
    loss = np.array([r.S_ss - r.S_2 for r in rows])
    step = D[1] - D[0]

    v_peaks = [D[i] for i in local_maxima(v)]
    v_ok = any(0.5 <= d <= 1.5 for d in v_peaks)

    low = D <= 30.0
    ef, ls = EF[low], loss[low]
    span = ef.max() - ef.min()
    ef_peaks = [i for i in local_maxima(ef) if peak_prominence(ef, i) > 0.05 * span]
    loss_peaks = local_maxima(ls)
    colocated = all(any(abs(D[i] - D[j]) <= step + 1e-12 for j in loss_peaks)
                    for i in ef_peaks)

    with np.errstate(invalid="ignore"):
        rho = scipy.stats.spearmanr(ef, ls).statistic if np.ptp(ef) > 0 else math.nan
    corr_ok = rho > 0.8

    i30, i38 = _nearest(D, 30.0), _nearest(D, 38.0)
    full_span = EF.max() - EF.min()
    diverge = loss[i38] > loss[i30] and abs(EF[i38] - EF[i30]) < 0.2 * full_span

    summary(f"v peak near 1: {v_ok} (first at D={v_peaks[0]:.2f}); "
            f"{len(ef_peaks)} EF peaks co-located: {colocated}; spearman {rho:.3f}; "
            f"divergence {diverge} (EF range {full_span:.3g}); {elapsed:.1f} s")
    assert v_ok
    assert colocated
    assert corr_ok, f"rank correlation {rho} (EF range over D<=30 is {span})"
    assert diverge
    assert elapsed < 60


@pytest.mark.slow
def test_criterion_6_fig1(fig1, summary):
    n = len(FIG1_GRID)
    monotone = {}
    for k, gt in enumerate(FIG1_GT):
        ef = np.array([r.EF for r in fig1[k * n:(k + 1) * n]])
        monotone[gt] = float(np.max(np.diff(ef), initial=0.0))
    drop = {}
    with np.errstate(invalid="ignore", divide="ignore"):
        for gt in FIG1_GT:
            base = evaluate_point(FIG1_BASE.replace(gt=gt, kappa_ratio=1e-6), "damped").EF
            at = evaluate_point(FIG1_BASE.replace(gt=gt, kappa_ratio=1e-2), "damped").EF
            drop[gt] = (base - at) / base if base > 0 else math.nan
    trapped = FIG1_GT[1:]
    faster = all(drop[gt] > drop[FIG1_GT[0]] for gt in trapped)
    summary("max EF rise per angle " +
            ", ".join(f"{gt:.3f}:{monotone[gt]:.2e}" for gt in FIG1_GT) +
            "; relative drop at 1e-2 " + ", ".join(f"{gt:.3f}:{drop[gt]:.3g}" for gt in FIG1_GT))
    assert all(rise <= 1e-4 for rise in monotone.values()), monotone
    assert faster, drop


def test_criterion_7_bell_scan(fig2, summary):
    rows, _ = fig2
    i = int(np.argmax([r.M for r in rows]))
    best = rows[i]
    summary(f"max M = {best.M:.6f} at D = {best.D:.3f}")
    if best.M <= 1.0:
        pytest.xfail(f"discrepancy finding: the expected Bell violation is absent, "
                     f"max M = {best.M:.6f} at D = {best.D:.3f}")
    assert best.M > 1.0


@pytest.mark.slow
def test_criterion_8_truncation(fig2, fig1, summary):
    rows, _ = fig2
    worst_u = 0.0
    for D, row in zip(FIG2_GRID, rows):
        p = FIG2_BASE.replace(gt=float(D) / 10.0, n_max=2 * FIG2_BASE.n_max)
        worst_u = max(worst_u, float(np.abs(np.subtract(row.values(),
                                                       evaluate_point(p).values())).max()))
    n = len(FIG1_GRID)
    worst_d = 0.0
    for k, gt in enumerate(FIG1_GT):
        for j in (0, n - 1):
            row = fig1[k * n + j]
            p = FIG1_BASE.replace(gt=gt, kappa_ratio=float(FIG1_GRID[j]), n_max=512)
            worst_d = max(worst_d, float(np.abs(np.subtract(
                row.values(), evaluate_point(p, "damped").values())).max()))
    summary(f"max field change on doubling n_max: unitary {worst_u:.2e} (200 rows), "
            f"damped {worst_d:.2e} (8 rows)")
    assert worst_u <= 1e-8 and worst_d <= 1e-8


def test_criterion_9_theta_invariance(rng, summary):
    thetas = (0.0, 0.7, math.pi / 2, -2.9)
    worst = 0.0
    for _ in range(50):
        p = MaserParams(N=float(rng.uniform(1, 150)), gt=float(rng.uniform(0, 4)),
                        n_th=float(rng.uniform(0, 1)), kappa_ratio=1e-6)
        rows = [evaluate_point(p.replace(theta=t)) for t in thetas]
        state = two_atom_state(steady_state(p)[0], p.gt)
        dense = []
        for t in thetas:
            rho = density_matrix(TwoAtomState(*state.alphas, theta=t))
            dense.append((wootters_concurrence(rho), horodecki_m_general(rho)))
        for r in rows[1:]:
            worst = max(worst, abs(r.EF - rows[0].EF), abs(r.C - rows[0].C),
                        abs(r.tangle - rows[0].tangle), abs(r.M - rows[0].M))
        for c, m in dense[1:]:
            worst = max(worst, abs(c - dense[0][0]), abs(m - dense[0][1]))
    summary(f"max spread across theta = {worst:.2e} (50 points x 4 angles)")
    assert worst <= 1e-12


def test_criterion_10_cli_determinism(tmp_path, summary):
    outputs = []
    for tag, workers in (("a", 1), ("b", 1), ("c", 4)):
        path = tmp_path / f"fig2_{tag}.csv"
        assert main(["fig2", "-o", str(path), "--workers", str(workers)]) == 0
        outputs.append(path.read_bytes())
    same = outputs[0] == outputs[1] == outputs[2]
    nrows = outputs[0].count(b"\n") - 1
    summary(f"fig2 CSV byte-identical across runs and workers 1/4: {same} ({nrows} rows)")
    assert same
