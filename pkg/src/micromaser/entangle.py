"""Joint state of two successive atoms and its entanglement measures.

Field operators acting on a Fock state:
``A|n> = cos(gt sqrt(n+1)) |n>`` (atom leaves excited) and
``D|n> = -i sin(gt sqrt(n+1)) |n+1>`` (atom leaves in the ground state).
For a diagonal field the two-atom density matrix is an X-state in the basis
``|ee>, |eg>, |ge>, |gg>`` (first letter: first atom) with diagonal
``(alpha1, alpha3, alpha2, alpha5)`` and the single coherence
``alpha4 exp(i theta)`` between ``|eg>`` and ``|ge>``.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidParameterError
from .fock import rabi_tables

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class TwoAtomState:
    alpha1: float
    alpha2: float
    alpha3: float
    alpha4: float
    alpha5: float
    theta: float = 0.0

    def validate(self, tol=1e-10):
        a1, a2, a3, a4, a5 = self.alphas
        if min(a1, a2, a3, a5) < -tol:
            raise InvalidParameterError("alpha", f"negative population in {self}")
        if abs(a1 + a2 + a3 + a5 - 1.0) > tol:
            raise InvalidParameterError("alpha", f"trace {a1 + a2 + a3 + a5!r} != 1")
        if a4 * a4 > a2 * a3 + 1e-12:
            raise InvalidParameterError("alpha4", "coherence exceeds the positivity bound")
        return self

    @property
    def alphas(self):
        return (self.alpha1, self.alpha2, self.alpha3, self.alpha4, self.alpha5)


@dataclass(frozen=True)
class EntanglementReport:
    concurrence: float
    eof: float
    tangle: float
    horodecki_m: float
    bell_violated: bool


def two_atom_state(P, gt, theta=0.0):
    """The five traces ``alpha1..alpha5`` for field ``P`` and Rabi angle ``gt``.

    With ``s_n = sin(gt sqrt(n+1))`` and ``c_n = cos(gt sqrt(n+1))``::

        alpha1 = sum P_n c_n^4
        alpha2 = sum P_n s_n^2 c_{n+1}^2     (A D: first atom emits)
        alpha3 = sum P_n s_n^2 c_n^2         (D A: second atom emits)
        alpha4 = sum P_n s_n^2 c_n c_{n+1}
        alpha5 = sum P_n s_n^2 s_{n+1}^2

    The sums need no truncation: every term uses only ``P_n`` with
    ``n <= n_max``.
    """
    s, c = rabi_tables(gt, P.n_max + 2)
    a = kernels.alpha_sums(P.probs, s, c)
    return TwoAtomState(*(float(x) for x in a), theta=float(theta))


def density_matrix(state):
    state.validate()
    a1, a2, a3, a4, a5 = state.alphas
    rho = np.diag(np.array([a1, a3, a2, a5], dtype=complex))
    rho[1, 2] = a4 * np.exp(1j * state.theta)
    rho[2, 1] = np.conj(rho[1, 2])
    return rho


def concurrence(state):
    """Wootters concurrence of the X-state.

    The spin-flip eigenvalues are ``(|a4| +- sqrt(a2 a3))^2`` and
    ``a1 a5`` twice; with ``|a4| <= sqrt(a2 a3)`` the ordered combination
    collapses to ``2 max(0, |a4| - sqrt(a1 a5))``.
    """
    a1, a2, a3, a4, a5 = state.alphas
    roots = np.sqrt(np.clip(
        [(abs(a4) + np.sqrt(max(a2 * a3, 0.0))) ** 2,
         (abs(a4) - np.sqrt(max(a2 * a3, 0.0))) ** 2,
         a1 * a5, a1 * a5], 0.0, None))
    roots = np.sort(roots, kind="stable")[::-1]
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def binary_entropy(x):
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def entanglement_of_formation(c):
    if c < -1e-12 or c > 1.0 + 1e-12:
        raise InvalidParameterError("concurrence", f"must lie in [0, 1], got {c}")
    c = min(max(c, 0.0), 1.0)
    if c == 0.0:
        return 0.0
    return binary_entropy(0.5 * (1.0 + np.sqrt(1.0 - c * c)))


def horodecki_m(state):
    """Sum of the two largest eigenvalues of ``T^T T``; violation iff ``> 1``.

    For this X-state the eigenvalues are ``(2 a4)^2`` twice and
    ``(a1 - a2 - a3 + a5)^2``.
    """
    a1, a2, a3, a4, a5 = state.alphas
    ev = sorted([(2.0 * a4) ** 2, (2.0 * a4) ** 2, (a1 - a2 - a3 + a5) ** 2])
    m = float(ev[1] + ev[2])
    return m, m > 1.0


def analyze(state):
    c = concurrence(state)
    m, violated = horodecki_m(state)
    return EntanglementReport(
        concurrence=c,
        eof=entanglement_of_formation(c),
        tangle=c * c,
        horodecki_m=m,
        bell_violated=violated,
    )


# --------------------------------------------------------------------------
# general two-qubit routes, valid for any 4x4 density matrix

def _psd_sqrt(rho):
    w, v = np.linalg.eigh(rho)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def wootters_concurrence(rho):
    """Concurrence from the spin-flipped state ``(sy x sy) rho* (sy x sy)``.

    The square roots of the eigenvalues of ``rho rho~`` are taken as the
    singular values of ``sqrt(rho) sqrt(rho~)``, which avoids amplifying
    round-off in near-zero eigenvalues.
    """
    yy = np.kron(_SIGMA[1], _SIGMA[1])
    flipped = yy @ rho.conj() @ yy
    roots = np.linalg.svd(_psd_sqrt(rho) @ _psd_sqrt(flipped), compute_uv=False)
    roots = np.sort(roots)[::-1]
    return float(max(0.0, roots[0] - roots[1] - roots[2] - roots[3]))


def correlation_matrix(rho):
    """``T_ij = Tr(rho sigma_i x sigma_j)``."""
    return np.array([[np.trace(rho @ np.kron(si, sj)).real for sj in _SIGMA]
                     for si in _SIGMA])


def horodecki_m_general(rho):
    T = correlation_matrix(rho)
    ev = np.sort(np.linalg.eigvalsh(T.T @ T))
    return float(ev[-1] + ev[-2])
