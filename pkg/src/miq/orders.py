"""Matrix comparisons by singular values and in the Loewner order.

* ``A <= B`` (Loewner): ``B - A`` is positive semidefinite.
* ``A ≼ B`` (weak majorization): every Ky Fan norm of ``A`` is at most that of
  ``B``; equivalently ``||A|| <= ||B||`` for every unitarily invariant norm.
* ``A ≪ B`` (dominance): ``s_k(A) <= s_k(B)`` for every ``k <= dim A``.

Verdicts carry the signed margin ``min_k (rhs_k - lhs_k)`` so that callers can
tell a clean pass from a near miss.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from miq.linalg import LinalgError, eig_hermitian, hermitian, singular_values

DEFAULT_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class SingularProfile:
    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if np.any(~np.isfinite(v)) or np.any(v < 0) or np.any(np.diff(v) > 0):
            raise ValueError("singular profile must be finite, nonnegative and descending")

    def __len__(self):
        return len(self.values)

    def ky_fan(self) -> "KyFanProfile":
        return KyFanProfile(np.cumsum(self.values))


@dataclass(frozen=True, eq=False)
class KyFanProfile:
    """Partial sums ``sum_{i<=k} s_i`` for ``k = 1..n``."""

    partial_sums: np.ndarray

    def is_concave(self, tol: float = 1e-12) -> bool:
        inc = np.diff(np.concatenate([[0.0], self.partial_sums]))
        scale = tol * max(1.0, float(self.partial_sums[-1])) if len(inc) else tol
        return bool(np.all(inc >= -scale) and np.all(np.diff(inc) <= scale))


@dataclass(frozen=True)
class OrderVerdict:
    holds: bool
    worst_index: int
    margin: float
    tol: float

    @property
    def near_miss(self) -> bool:
        return self.holds and self.margin < 0


def singular_profile(a) -> SingularProfile:
    return SingularProfile(singular_values(a))


def ky_fan_norm(a, k: int) -> float:
    """Sum of the ``k`` largest singular values (``k=1``: operator, ``k=n``: trace)."""
    s = singular_values(a)
    if not 1 <= k <= len(s):
        raise IndexError(f"Ky Fan index {k} out of range 1..{len(s)}")
    return float(s[:k].sum())


def default_tol(rhs_scale: float, scale: float = 1.0) -> float:
    """``1e-8 * max(1, ||B||_(n))``, optionally multiplied by ``scale``."""
    return scale * DEFAULT_RTOL * max(1.0, float(rhs_scale))


def _verdict(lhs: np.ndarray, rhs: np.ndarray, tol: float | None) -> OrderVerdict:
    if len(lhs) == 0:
        return OrderVerdict(True, 0, 0.0, 0.0 if tol is None else tol)
    gap = rhs - lhs
    k = int(np.argmin(gap))
    margin = float(gap[k])
    if tol is None:
        tol = default_tol(rhs[-1])
    return OrderVerdict(margin >= -tol, k + 1, margin, tol)


def majorization_verdict(s_lhs: np.ndarray, s_rhs: np.ndarray, tol: float | None = None) -> OrderVerdict:
    """Weak majorization from precomputed descending singular values."""
    if len(s_lhs) != len(s_rhs):
        raise LinalgError(f"dimension mismatch: {len(s_lhs)} vs {len(s_rhs)}")
    lhs, rhs = np.cumsum(s_lhs), np.cumsum(s_rhs)
    if tol is None and len(rhs):
        tol = default_tol(rhs[-1])
    return _verdict(lhs, rhs, tol)


def dominance_verdict(s_lhs: np.ndarray, s_rhs: np.ndarray, tol: float | None = None) -> OrderVerdict:
    """Entrywise dominance from precomputed descending singular values."""
    n, big_n = len(s_lhs), len(s_rhs)
    if n > big_n:
        raise LinalgError(f"dominance needs dim A <= dim B, got {n} > {big_n}")
    if tol is None and big_n:
        tol = default_tol(np.sum(s_rhs))
    return _verdict(np.asarray(s_lhs), np.asarray(s_rhs)[:n], tol)


def weakly_majorized(a, b, tol: float | None = None) -> OrderVerdict:
    """Decide ``A ≼ B``: ``||A||_(k) <= ||B||_(k) + tol`` for all ``k``.

    ``worst_index`` is the 1-based ``k`` with the smallest margin.  With
    ``tol=None`` the default ``1e-8 * max(1, ||B||_(n))`` is used.
    """
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise LinalgError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return majorization_verdict(singular_values(a), singular_values(b), tol)


def dominated(a, b, tol: float | None = None) -> OrderVerdict:
    """Decide ``A ≪ B``: ``s_k(A) <= s_k(B) + tol`` for ``k <= dim A <= dim B``."""
    return dominance_verdict(singular_values(a), singular_values(b), tol)


def loewner_leq(a, b, tol: float | None = None) -> bool:
    """``A <= B`` in the Loewner order: ``min eig(B - A) >= -tol``."""
    a, b = hermitian(a), hermitian(b)
    if a.shape != b.shape:
        raise LinalgError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if a.shape[0] == 0:
        return True
    w = eig_hermitian(b - a).eigenvalues
    if tol is None:
        tol = default_tol(singular_values(b).sum())
    return bool(w[-1] >= -tol)
