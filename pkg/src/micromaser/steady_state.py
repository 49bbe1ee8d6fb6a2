"""Steady-state cavity photon statistics of the one-atom micromaser.

Units: ``g = 1``.  The cavity decay rate is then ``kappa = kappa_ratio``,
an atom spends ``t = gt`` inside the cavity, and atoms arrive at
``R = N * kappa`` so that ``N`` atoms cross per photon lifetime.

Three routes to the stationary distribution are provided:

* :func:`fjm_steady_state` -- the closed detailed-balance product;
* :func:`coarse_grained_steady_state` with ``gain="unitary"`` -- the null
  vector of ``R (G - 1) + L`` with the lossless transit map;
* the same with ``gain="damped"`` -- the transit map includes cavity
  damping while the atom is inside, which makes ``P`` depend on
  ``kappa_ratio`` at fixed ``N``.
"""
from dataclasses import dataclass, replace
import math

import numpy as np
import scipy.sparse

from . import kernels
from .errors import IntegrationError, InvalidParameterError, SolveError, TruncationError
from .fock import TAIL_TOL, PhotonDistribution, rabi_tables

GAIN_MODES = ("unitary", "damped")
DEFAULT_N_MAX = 256
MAX_N_MAX = 4096
RICHARDSON_TOL = 1e-9


@dataclass(frozen=True)
class MaserParams:
    N: float
    gt: float
    kappa_ratio: float = 0.0
    n_th: float = 0.0
    n_max: int = DEFAULT_N_MAX
    theta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("N", "gt", "kappa_ratio", "n_th", "theta", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(name, "must be finite")
        if not self.N > 0:
            raise InvalidParameterError("N", f"must be > 0, got {self.N}")
        if self.gt < 0:
            raise InvalidParameterError("gt", f"must be >= 0, got {self.gt}")
        if self.kappa_ratio < 0:
            raise InvalidParameterError("kappa_ratio", f"must be >= 0, got {self.kappa_ratio}")
        if self.n_th < 0:
            raise InvalidParameterError("n_th", f"must be >= 0, got {self.n_th}")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise InvalidParameterError("n_max", f"must be an integer >= 1, got {self.n_max}")
        if self.gamma != 0:
            raise InvalidParameterError("gamma", "atomic damping is not modelled; must be 0")
        object.__setattr__(self, "n_max", int(self.n_max))

    @property
    def D(self):
        """Pump parameter ``gt * sqrt(N)``."""
        return self.gt * math.sqrt(self.N)

    @property
    def kappa(self):
        return self.kappa_ratio

    @property
    def arrival_rate(self):
        return self.N * self.kappa_ratio

    def replace(self, **changes):
        return replace(self, **changes)


def _check_gain(gain):
    if gain not in GAIN_MODES:
        raise InvalidParameterError("gain", f"expected one of {GAIN_MODES}, got {gain!r}")


# --------------------------------------------------------------------------
# closed form

def fjm_steady_state(params, check=True):
    """Detailed-balance product
    ``P_n = P_0 prod_k [n_th k + N sin^2(gt sqrt k)] / [(1+n_th) k]``.

    Evaluated in log space.  Independent of ``kappa_ratio``.
    """
    n_max, nth = params.n_max, params.n_th
    k = np.arange(1, n_max + 1, dtype=np.float64)
    s, _ = rabi_tables(params.gt, n_max)
    ratio = (nth * k + params.N * s * s) / ((1.0 + nth) * k)
    with np.errstate(divide="ignore"):
        logp = np.concatenate(([0.0], np.cumsum(np.log(ratio))))
    P = PhotonDistribution(np.exp(logp - logp.max()))
    return P.check_truncation() if check else P


# --------------------------------------------------------------------------
# single-atom transit maps

def unitary_gain_map(P, gt):
    """Lossless passage of one excited atom:
    ``P'_n = P_n cos^2(gt sqrt(n+1)) + P_{n-1} sin^2(gt sqrt n)``.

    The top rung of the truncated ladder has no emission partner and keeps
    its population, so the map is exactly trace preserving.
    """
    s, c = rabi_tables(gt, P.n_max + 2)
    return PhotonDistribution(kernels.one_atom_gain(P.probs, s, c))


def transit_steps(gt, n_max):
    """Number of fixed RK4 steps, with ``h <= min(0.01/sqrt(n_max), gt/1000)``."""
    if gt <= 0:
        return 0
    h_max = min(0.01 / math.sqrt(n_max), gt / 1000.0)
    return int(math.ceil(gt / h_max - 1e-9))


def damped_gain_map(P, params, richardson=True):
    """Transit of one excited atom with cavity damping active throughout.

    Integrates the resonant Jaynes-Cummings doublets plus the
    finite-temperature damping of populations and ``|e,n><g,n+1|``
    coherences, then traces out the atom.  With ``richardson`` the step is
    halved once and the RK4 error estimate ``|P_h - P_h/2| / 15`` must stay
    below ``RICHARDSON_TOL``; the half-step result is returned.
    """
    if P.n_max != params.n_max:
        params = params.replace(n_max=P.n_max)
    nsteps = transit_steps(params.gt, P.n_max)
    if nsteps == 0:
        return P
    gt, kappa, nth = params.gt, params.kappa, params.n_th
    out = kernels.transit_rk4(P.probs, kappa, nth, gt / nsteps, nsteps)
    if richardson:
        fine = kernels.transit_rk4(P.probs, kappa, nth, gt / (2 * nsteps), 2 * nsteps)
        err = float(np.abs(out - fine).sum()) / 15.0
        if not err <= RICHARDSON_TOL:
            raise IntegrationError(f"RK4 error estimate {err:.2e} exceeds "
                                   f"{RICHARDSON_TOL:.0e} for {params}")
        out = fine
    drift = abs(out.sum() - 1.0)
    if not drift <= 1e-9:
        raise IntegrationError(f"transit lost probability {drift:.2e} for {params}")
    return PhotonDistribution(out)


# --------------------------------------------------------------------------
# generators

def _damping_bands(m, nth):
    """(sub, diag, sup) of the birth-death generator at unit decay rate."""
    n = np.arange(m, dtype=np.float64)
    down = (nth + 1.0) * n
    up = nth * (n + 1.0)
    up[-1] = 0.0
    return up[:-1].copy(), -(up + down), down[1:].copy()


def damping_generator(params):
    """Tridiagonal field-damping generator ``L`` (sparse, columns sum to 0).

    ``dP_n/dt = kappa (n_th+1) [(n+1) P_{n+1} - n P_n]
    + kappa n_th [n P_{n-1} - (n+1) P_n]`` on the truncated ladder.
    """
    sub, diag, sup = _damping_bands(params.n_max + 1, params.n_th)
    k = params.kappa
    return scipy.sparse.diags([k * sub, k * diag, k * sup], [-1, 0, 1], format="csr")


def transit_generator(m, kappa, nth):
    """Dense generator of the transit ODE on ``(p_e, p_g, Im c)``.

    ``Re c`` is dropped: it is never fed by the atom-field coupling and starts
    at zero, so it stays zero.  Ordering: ``p_e[0..m-1], p_g[0..m-1],
    Im c[0..m-2]``.
    """
    dim = 3 * m - 1
    M = np.zeros((dim, dim))
    sub, diag, sup = _damping_bands(m, nth)
    idx = np.arange(m)
    for off in (0, m):
        M[off + idx, off + idx] = kappa * diag
        M[off + idx[1:], off + idx[:-1]] = kappa * sub
        M[off + idx[:-1], off + idx[1:]] = kappa * sup
    k = np.arange(m - 1, dtype=np.float64)
    aad = nth * (np.arange(m) + 1.0)
    aad[-1] = 0.0
    closs = 0.5 * (nth + 1.0) * (2.0 * k + 1.0) + 0.5 * (aad[:-1] + aad[1:])
    cup = (nth + 1.0) * np.sqrt((k + 1.0) * (k + 2.0))
    cdn = nth * np.sqrt(k * (k + 1.0))
    y = 2 * m + np.arange(m - 1)
    M[y, y] = -kappa * closs
    M[y[:-1], y[1:]] = kappa * cup[:-1]
    M[y[1:], y[:-1]] = kappa * cdn[1:]
    om = np.sqrt(k + 1.0)
    e = np.arange(m - 1)
    g = m + np.arange(1, m)
    M[e, y] += -2.0 * om
    M[g, y] += 2.0 * om
    M[y, e] += om
    M[y, g] += -om
    return M


def damped_gain_matrix(params):
    """Column-stochastic matrix of :func:`damped_gain_map` on the ladder.

    The RK4 step of a linear autonomous system is the fixed matrix
    ``S = 1 + hM + (hM)^2/2 + (hM)^3/6 + (hM)^4/24``; with a power-of-two
    step count ``K`` the whole transit is ``S^K``, formed by ``log2 K``
    squarings.  ``K`` is the smallest power of two not below
    :func:`transit_steps`, so the step bound still holds.
    """
    m = params.n_max + 1
    nsteps = transit_steps(params.gt, params.n_max)
    if nsteps == 0:
        return np.eye(m)
    squarings = max(int(math.ceil(math.log2(nsteps))), 0)
    h = params.gt / (1 << squarings)
    hM = h * transit_generator(m, params.kappa, params.n_th)
    eye = np.eye(hM.shape[0])
    S = eye + hM @ (eye + hM @ (0.5 * eye + hM @ (eye / 6.0 + hM / 24.0)))
    for _ in range(squarings):
        S = S @ S
    return S[:m, :m] + S[m:2 * m, :m]


# --------------------------------------------------------------------------
# stationary solves

def _finish(x, params):
    total = x.sum()
    if not (np.all(np.isfinite(x)) and total > 0):
        raise SolveError(f"non-finite stationary solution for {params}")
    x = x / total
    return PhotonDistribution(x).check_truncation()


def generator_matrix(params, gain="unitary"):
    """Dense ``N (G - 1) + L`` at unit decay rate (the generator over ``kappa``).

    With ``gain="unitary"`` this is tridiagonal; the damped transit matrix
    fills it in below and above the diagonal.
    """
    _check_gain(gain)
    m = params.n_max + 1
    idx = np.arange(m)
    if gain == "unitary":
        s, _ = rabi_tables(params.gt, m)
        e = s[:m - 1] ** 2
        A = np.zeros((m, m))
        A[idx[:-1], idx[:-1]] = -params.N * e
        A[idx[1:], idx[:-1]] = params.N * e
    else:
        A = params.N * (damped_gain_matrix(params) - np.eye(m))
    sub, diag, sup = _damping_bands(m, params.n_th)
    A[idx, idx] += diag
    A[idx[1:], idx[:-1]] += sub
    A[idx[:-1], idx[1:]] += sup
    return A


def coarse_grained_steady_state(params, gain="unitary"):
    """Stationary point of ``dP/dt = R (G(P) - P) + L P`` with ``R = N kappa``.

    The equation is divided through by ``kappa`` so ``kappa_ratio = 0`` is
    admissible.  The null vector comes from GTH elimination, which reads
    only the off-diagonal rates.  An LU solve goes through the diagonal
    ``N (G_nn - 1)``, whose cancellation leaves absolute errors that swamp
    the tail once the distribution spans many decades.
    """
    A = generator_matrix(params, gain)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = kernels.gth_stationary(A)
    return _finish(x, params)


def steady_state(params, gain="unitary", escalate=True, max_n_max=MAX_N_MAX):
    """Coarse-grained steady state, doubling ``n_max`` until the tail passes.

    Returns ``(P, params)`` where ``params.n_max`` is the ladder actually used.
    """
    while True:
        try:
            return coarse_grained_steady_state(params, gain), params
        except TruncationError:
            if not escalate or 2 * params.n_max > max_n_max:
                raise
            params = params.replace(n_max=2 * params.n_max)
