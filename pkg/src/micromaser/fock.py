"""Photon-number distributions on a truncated Fock ladder.

The cavity field stays diagonal in the number basis, so a state is just the
vector ``P[n]``, ``n = 0..n_max``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, TruncationError

#: round-off negatives smaller than this are clamped to zero
NEG_FLOOR = 1e-14
#: largest top-rung probability accepted as converged
TAIL_TOL = 1e-10

_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class PhotonDistribution:
    """Probabilities ``probs[n]`` for ``n = 0..n_max``, normalised on creation.

    Entries in ``[-NEG_FLOOR, 0)`` are clamped to zero before normalising;
    anything more negative is rejected.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=np.float64)
        if p.ndim != 1 or p.size < 2:
            raise InvalidParameterError("probs", "need a 1-D vector with n_max >= 1")
        if not np.all(np.isfinite(p)):
            raise InvalidParameterError("probs", "non-finite entries")
        if p.min() < -NEG_FLOOR:
            raise InvalidParameterError("probs", f"negative entry {p.min():.3e}")
        p[p < 0.0] = 0.0
        total = p.sum()
        if total <= 0.0:
            raise InvalidParameterError("probs", "zero total probability")
        p /= total
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def fock(cls, n, n_max):
        p = np.zeros(n_max + 1)
        p[n] = 1.0
        return cls(p)

    @classmethod
    def vacuum(cls, n_max):
        return cls.fock(0, n_max)

    @property
    def n_max(self):
        return self.probs.size - 1

    @property
    def tail_mass(self):
        return float(self.probs[-1])

    def check_truncation(self, tol=TAIL_TOL):
        """Raise :class:`TruncationError` if the top rung holds ``>= tol``."""
        if self.tail_mass >= tol:
            raise TruncationError(
                f"tail mass {self.tail_mass:.3e} at n_max={self.n_max} "
                f"exceeds {tol:.0e}; raise n_max",
                tail=self.tail_mass, n_max=self.n_max)
        return self

    def padded(self, n_max):
        """The same distribution on a ladder at least as tall."""
        if n_max < self.n_max:
            raise ValueError("cannot shrink a distribution")
        out = np.zeros(n_max + 1)
        out[:self.probs.size] = self.probs
        return PhotonDistribution(out)

    def __len__(self):
        return self.probs.size

    def __repr__(self):
        mean, _ = mean_and_variance(self)
        return f"PhotonDistribution(n_max={self.n_max}, mean={mean:.6g})"


def thermal_distribution(n_th, n_max):
    """Bose-Einstein distribution ``n_th**n / (1+n_th)**(n+1)``, renormalised."""
    if not n_th >= 0.0:
        raise InvalidParameterError("n_th", f"must be >= 0, got {n_th}")
    if n_max < 1:
        raise InvalidParameterError("n_max", f"must be >= 1, got {n_max}")
    n = np.arange(n_max + 1)
    if n_th == 0.0:
        p = (n == 0).astype(float)
    else:
        p = np.exp(n * np.log(n_th / (1.0 + n_th)))
    return PhotonDistribution(p)


def mean_and_variance(P):
    p = P.probs
    n = np.arange(p.size, dtype=np.float64)
    mean = float(np.dot(n, p))
    second = float(np.dot(n * n, p))
    return mean, max(second - mean * mean, 0.0)


def variance_ratio(P):
    """``sqrt(Var(n) / <n>)``; 0 for the vacuum, where it is undefined."""
    mean, var = mean_and_variance(P)
    if mean <= 0.0:
        return 0.0
    return float(np.sqrt(var / mean))


def shannon_entropy(P, base=2.0):
    """Entropy of the distribution, summed from ``n = 0``, with ``0 log 0 = 0``."""
    if not base > 1.0:
        raise InvalidParameterError("base", f"must be > 1, got {base}")
    p = P.probs[P.probs > 0.0]
    return float(-np.sum(p * np.log(p)) / np.log(base))


def rabi_tables(gt, size):
    """Arrays ``sin(gt*sqrt(n+1))`` and ``cos(gt*sqrt(n+1))`` for ``n < size``.

    Sines below the rounding resolution of their argument are set to exactly
    zero, so trapping angles such as ``gt = pi`` block the ladder exactly.
    """
    x = gt * np.sqrt(np.arange(1, size + 1, dtype=np.float64))
    s = np.sin(x)
    c = np.cos(x)
    exact_zero = np.abs(s) <= 4.0 * _EPS * np.maximum(np.abs(x), 1.0)
    s[exact_zero] = 0.0
    c[exact_zero] = np.sign(c[exact_zero])
    return s, c


def rabi_sin(n, gt):
    if n < 0:
        raise InvalidParameterError("n", "photon number must be >= 0")
    s, _ = rabi_tables(gt, n + 1)
    return float(s[n])


def rabi_cos(n, gt):
    if n < 0:
        raise InvalidParameterError("n", "photon number must be >= 0")
    _, c = rabi_tables(gt, n + 1)
    return float(c[n])
