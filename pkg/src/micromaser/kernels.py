"""Hot numeric kernels, each in a numba and a pure numpy flavour.

The public names at the bottom are bound to one flavour at import time
according to :mod:`micromaser._backend`.  Both flavours stay importable
(``*_numpy`` / ``*_numba``) so tests and the benchmark can compare them.

All kernels take precomputed Rabi tables ``s[n] = sin(gt*sqrt(n+1))`` and
``c[n] = cos(gt*sqrt(n+1))`` rather than ``gt`` itself.
"""
import numpy as np

from . import _backend
from ._backend import njit


# --------------------------------------------------------------------------
# two-atom traces

def alpha_sums_numpy(P, s, c):
    m = P.shape[0]
    s0, c0 = s[:m], c[:m]
    c1, s1 = c[1:m + 1], s[1:m + 1]
    w = P * s0 * s0
    out = np.empty(5)
    out[0] = np.sum(P * c0 ** 4)
    out[1] = np.sum(w * c1 * c1)
    out[2] = np.sum(w * c0 * c0)
    out[3] = np.sum(w * c0 * c1)
    out[4] = np.sum(w * s1 * s1)
    return out


def _alpha_sums_loop(P, s, c):
    out = np.zeros(5)
    for n in range(P.shape[0]):
        p = P[n]
        if p == 0.0:
            continue
        cc = c[n] * c[n]
        w = p * s[n] * s[n]
        out[0] += p * cc * cc
        out[1] += w * c[n + 1] * c[n + 1]
        out[2] += w * cc
        out[3] += w * c[n] * c[n + 1]
        out[4] += w * s[n + 1] * s[n + 1]
    return out


# --------------------------------------------------------------------------
# field after two atoms, output ladder extended by two rungs

def two_atom_passage_numpy(P, s, c):
    m = P.shape[0]
    s0, c0 = s[:m], c[:m]
    c1, s1 = c[1:m + 1], s[1:m + 1]
    w = P * s0 * s0
    out = np.zeros(m + 2)
    out[:m] += P * c0 ** 4
    out[1:m + 1] += w * (c1 * c1 + c0 * c0)
    out[2:] += w * s1 * s1
    return out


def _two_atom_passage_loop(P, s, c):
    m = P.shape[0]
    out = np.zeros(m + 2)
    for n in range(m):
        p = P[n]
        cc = c[n] * c[n]
        w = p * s[n] * s[n]
        out[n] += p * cc * cc
        out[n + 1] += w * (c[n + 1] * c[n + 1] + cc)
        out[n + 2] += w * s[n + 1] * s[n + 1]
    return out


# --------------------------------------------------------------------------
# undamped single-atom gain; the top rung has no partner and cannot emit

def one_atom_gain_numpy(P, s, c):
    m = P.shape[0]
    e = s[:m - 1] ** 2
    out = np.empty(m)
    out[:m - 1] = P[:m - 1] * (1.0 - e)
    out[m - 1] = P[m - 1]
    out[1:] += P[:m - 1] * e
    return out


def _one_atom_gain_loop(P, s, c):
    m = P.shape[0]
    out = np.zeros(m)
    for n in range(m - 1):
        e = s[n] * s[n]
        out[n] += P[n] * (1.0 - e)
        out[n + 1] += P[n] * e
    out[m - 1] += P[m - 1]
    return out


# --------------------------------------------------------------------------
# damped transit: fixed-step RK4 over (p_e, p_g, Re c, Im c)
#
# c(n) is the |e,n><g,n+1| element.  Cavity damping uses the truncated
# ladder operators, so no thermal excitation leaves the top rung.

def _damping_coefficients(m, nth):
    n = np.arange(m, dtype=np.float64)
    down = (nth + 1.0) * n                  # X[n] -> X[n-1]
    up = nth * (n + 1.0)                    # X[n] -> X[n+1]
    up[m - 1] = 0.0
    k = np.arange(m - 1, dtype=np.float64)
    # coherence |k><k+1|: loss, feed from k+1 (emission), feed from k-1 (absorption)
    aad = nth * (np.arange(m, dtype=np.float64) + 1.0)
    aad[m - 1] = 0.0
    closs = 0.5 * (nth + 1.0) * (2.0 * k + 1.0) + 0.5 * (aad[:m - 1] + aad[1:])
    cfrom_up = (nth + 1.0) * np.sqrt((k + 1.0) * (k + 2.0))
    cfrom_dn = nth * np.sqrt(k * (k + 1.0))
    omega = np.sqrt(k + 1.0)
    return down, up, closs, cfrom_up, cfrom_dn, omega


def _rhs_numpy(y, m, kappa, coef, dy):
    down, up, closs, cfrom_up, cfrom_dn, omega = coef
    pe = y[:m]
    pg = y[m:2 * m]
    rc = y[2 * m:3 * m - 1]
    ic = y[3 * m - 1:]
    dpe = dy[:m]
    dpg = dy[m:2 * m]
    drc = dy[2 * m:3 * m - 1]
    dic = dy[3 * m - 1:]
    for X, dX in ((pe, dpe), (pg, dpg)):
        dX[:] = -(up + down) * X
        dX[:-1] += down[1:] * X[1:]
        dX[1:] += up[:-1] * X[:-1]
        dX *= kappa
    for C, dC in ((rc, drc), (ic, dic)):
        dC[:] = -closs * C
        dC[:-1] += cfrom_up[:-1] * C[1:]
        dC[1:] += cfrom_dn[1:] * C[:-1]
        dC *= kappa
    dpe[:-1] -= 2.0 * omega * ic
    dpg[1:] += 2.0 * omega * ic
    dic += omega * (pe[:-1] - pg[1:])


def transit_rk4_numpy(P, kappa, nth, h, nsteps):
    m = P.shape[0]
    coef = _damping_coefficients(m, nth)
    y = np.zeros(4 * m - 2)
    y[:m] = P
    k1 = np.empty_like(y)
    k2 = np.empty_like(y)
    k3 = np.empty_like(y)
    k4 = np.empty_like(y)
    for _ in range(nsteps):
        _rhs_numpy(y, m, kappa, coef, k1)
        _rhs_numpy(y + 0.5 * h * k1, m, kappa, coef, k2)
        _rhs_numpy(y + 0.5 * h * k2, m, kappa, coef, k3)
        _rhs_numpy(y + h * k3, m, kappa, coef, k4)
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y[:m] + y[m:2 * m]


def _rhs_loop(y, m, kappa, down, up, closs, cfrom_up, cfrom_dn, omega, dy):
    e0, g0, r0, i0 = 0, m, 2 * m, 3 * m - 1
    for base in (e0, g0):
        for n in range(m):
            v = -(up[n] + down[n]) * y[base + n]
            if n + 1 < m:
                v += down[n + 1] * y[base + n + 1]
            if n > 0:
                v += up[n - 1] * y[base + n - 1]
            dy[base + n] = kappa * v
    mc = m - 1
    for base in (r0, i0):
        for k in range(mc):
            v = -closs[k] * y[base + k]
            if k + 1 < mc:
                v += cfrom_up[k] * y[base + k + 1]
            if k > 0:
                v += cfrom_dn[k] * y[base + k - 1]
            dy[base + k] = kappa * v
    for k in range(mc):
        om = omega[k]
        im = y[i0 + k]
        dy[e0 + k] -= 2.0 * om * im
        dy[g0 + k + 1] += 2.0 * om * im
        dy[i0 + k] += om * (y[e0 + k] - y[g0 + k + 1])


def _transit_rk4_loop(P, kappa, h, nsteps, down, up, closs, cfrom_up, cfrom_dn, omega):
    m = P.shape[0]
    dim = 4 * m - 2
    y = np.zeros(dim)
    for n in range(m):
        y[n] = P[n]
    tmp = np.empty(dim)
    k1 = np.empty(dim)
    k2 = np.empty(dim)
    k3 = np.empty(dim)
    k4 = np.empty(dim)
    for _ in range(nsteps):
        _rhs_loop(y, m, kappa, down, up, closs, cfrom_up, cfrom_dn, omega, k1)
        for i in range(dim):
            tmp[i] = y[i] + 0.5 * h * k1[i]
        _rhs_loop(tmp, m, kappa, down, up, closs, cfrom_up, cfrom_dn, omega, k2)
        for i in range(dim):
            tmp[i] = y[i] + 0.5 * h * k2[i]
        _rhs_loop(tmp, m, kappa, down, up, closs, cfrom_up, cfrom_dn, omega, k3)
        for i in range(dim):
            tmp[i] = y[i] + h * k3[i]
        _rhs_loop(tmp, m, kappa, down, up, closs, cfrom_up, cfrom_dn, omega, k4)
        for i in range(dim):
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    out = np.empty(m)
    for n in range(m):
        out[n] = y[n] + y[m + n]
    return out


# --------------------------------------------------------------------------
# stationary vector of a rate matrix (Grassmann-Taksar-Heyman elimination)

def _gth_prepare(A):
    """Row-convention rates ``Q[i, j]`` (i -> j) from a column generator.

    The diagonal is never read; rounding-level negative rates are zeroed.
    """
    Q = np.array(A.T, dtype=np.float64, order="C")
    np.fill_diagonal(Q, 0.0)
    np.maximum(Q, 0.0, out=Q)
    return Q


def _gth_back_loop(Q):
    n = Q.shape[0]
    pi = np.zeros(n)
    pi[0] = 1.0
    for k in range(1, n):
        acc = 0.0
        for i in range(k):
            acc += pi[i] * Q[i, k]
        pi[k] = acc
    return pi / pi.sum()


def gth_stationary_numpy(A):
    """Stationary vector of the column generator ``A`` (``A[j, i]``: rate i -> j).

    States are censored out from the top down.  Only sums and products of
    nonnegative rates occur, so tiny entries keep full relative accuracy.
    """
    Q = _gth_prepare(A)
    for k in range(Q.shape[0] - 1, 0, -1):
        Q[:k, k] /= Q[k, :k].sum()
        Q[:k, :k] += np.outer(Q[:k, k], Q[k, :k])
    pi = np.zeros(Q.shape[0])
    pi[0] = 1.0
    for k in range(1, Q.shape[0]):
        pi[k] = pi[:k] @ Q[:k, k]
    return pi / pi.sum()


def _gth_eliminate_loop(Q):
    n = Q.shape[0]
    for k in range(n - 1, 0, -1):
        s = 0.0
        for j in range(k):
            s += Q[k, j]
        for i in range(k):
            Q[i, k] /= s
        for i in range(k):
            f = Q[i, k]
            if f != 0.0:
                for j in range(k):
                    Q[i, j] += f * Q[k, j]
    return Q


# --------------------------------------------------------------------------
# compiled flavours

alpha_sums_numba = njit(_alpha_sums_loop)
two_atom_passage_numba = njit(_two_atom_passage_loop)
one_atom_gain_numba = njit(_one_atom_gain_loop)
_rhs_loop = njit(_rhs_loop)
_transit_rk4_compiled = njit(_transit_rk4_loop)
_gth_eliminate_compiled = njit(_gth_eliminate_loop)
_gth_back_compiled = njit(_gth_back_loop)


def transit_rk4_numba(P, kappa, nth, h, nsteps):
    coef = _damping_coefficients(P.shape[0], nth)
    return _transit_rk4_compiled(np.ascontiguousarray(P, dtype=np.float64),
                                 float(kappa), float(h), int(nsteps), *coef)


def gth_stationary_numba(A):
    return _gth_back_compiled(_gth_eliminate_compiled(_gth_prepare(A)))


if _backend.USE_NUMBA:
    alpha_sums = alpha_sums_numba
    two_atom_passage = two_atom_passage_numba
    one_atom_gain = one_atom_gain_numba
    transit_rk4 = transit_rk4_numba
    gth_stationary = gth_stationary_numba
else:
    alpha_sums = alpha_sums_numpy
    two_atom_passage = two_atom_passage_numpy
    one_atom_gain = one_atom_gain_numpy
    transit_rk4 = transit_rk4_numpy
    gth_stationary = gth_stationary_numpy
