"""Dense complex linear algebra on small square matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The validating
constructors :func:`as_matrix`, :func:`hermitian` and :func:`psd` return
read-only copies, so a value that passed validation cannot be mutated later.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from miq import _kernels

MAX_SWEEPS = 64
OFF_DIAGONAL_TOL = 1e-14
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10

_EPS = np.finfo(float).eps


class LinalgError(ValueError):
    pass


class NotHermitianError(LinalgError):
    pass


class NotPsdError(LinalgError):
    pass


class DomainError(LinalgError):
    """An eigenvalue falls outside the domain of the function applied to it."""


class ConvergenceError(ArithmeticError):
    """The Jacobi iteration did not converge within the sweep cap."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def as_matrix(a) -> np.ndarray:
    """Validate a square finite matrix and return a read-only complex copy."""
    m = np.array(a, dtype=np.complex128, copy=True)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LinalgError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise LinalgError("matrix has non-finite entries")
    return _frozen(m)


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    if a.size == 0:
        return True
    scale = max(1.0, float(np.abs(a).max()))
    return float(np.abs(a - a.conj().T).max()) <= tol * scale


def hermitian(a) -> np.ndarray:
    """Validate a Hermitian matrix; the stored form is exactly ``(M + M*)/2``."""
    m = as_matrix(a)
    if not is_hermitian(m):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    return _frozen((m + m.conj().T) / 2)


def psd(a) -> np.ndarray:
    """Validate a positive semidefinite matrix.

    Rejects inputs whose smallest eigenvalue is below
    ``-PSD_TOL * max(1, largest eigenvalue)``; nothing is repaired.
    """
    m = hermitian(a)
    if m.shape[0]:
        w = eig_hermitian(m).eigenvalues
        if w[-1] < -PSD_TOL * max(1.0, w[0]):
            raise NotPsdError(f"smallest eigenvalue {w[-1]:.3e} is negative")
    return m


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues in descending order and matching orthonormal eigenvectors."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.eigenvalues) @ self.vectors.conj().T


@dataclass(frozen=True, eq=False)
class SvdFactors:
    singulars: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singulars) @ self.right.conj().T


def eig_hermitian(a, max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Sweeps stop once the off-diagonal Frobenius mass is at most
    ``1e-14 * ||A||_F``.  Ties keep their original diagonal order.

    Raises
    ------
    ConvergenceError
        If ``max_sweeps`` sweeps are not enough.
    """
    m = np.ascontiguousarray(a, dtype=np.complex128)
    n = m.shape[0]
    if n == 0:
        return EigenDecomposition(_frozen(np.zeros(0)), _frozen(np.zeros((0, 0), complex)))
    w, v, sweeps = _kernels.jacobi_eigh(m, max_sweeps, OFF_DIAGONAL_TOL)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(_frozen(w[order]), _frozen(v[:, order]), sweeps)


def _complete_basis(u: np.ndarray, k: int) -> np.ndarray:
    """Replace columns ``k:`` of ``u`` by an orthonormal completion of ``u[:, :k]``."""
    n = u.shape[0]
    basis = [u[:, j] for j in range(k)]
    for e in np.eye(n, dtype=np.complex128):
        if len(basis) == n:
            break
        x = e.copy()
        for _ in range(2):
            for b in basis:
                x -= (b.conj() @ x) * b
        nx = np.linalg.norm(x)
        if nx > 1e-8:
            basis.append(x / nx)
    return np.column_stack(basis) if basis else np.zeros((n, 0), complex)


def svd(a, max_sweeps: int = MAX_SWEEPS) -> SvdFactors:
    """Singular value decomposition ``A = U diag(s) V*`` with ``s`` descending.

    One-sided Jacobi: column rotations of ``A`` diagonalize ``A*A`` without
    forming it, so small singular values keep absolute accuracy of order
    ``eps * ||A||``.  Left vectors belonging to zero singular values are
    completed by orthonormalization.
    """
    m = np.ascontiguousarray(a, dtype=np.complex128)
    n = m.shape[0]
    if n == 0:
        empty = _frozen(np.zeros((0, 0), complex))
        return SvdFactors(_frozen(np.zeros(0)), empty, empty)
    work, v, sweeps = _kernels.jacobi_svd(m, max_sweeps, max(n, 4) * _EPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    s = np.sqrt(np.einsum("ij,ij->j", work.real, work.real) + np.einsum("ij,ij->j", work.imag, work.imag))
    order = np.argsort(-s, kind="stable")
    s = s[order]
    work = work[:, order]
    v = v[:, order]
    cutoff = n * _EPS * s[0] if s[0] > 0 else 0.0
    k = int(np.count_nonzero(s > max(cutoff, 1e-300)))
    u = np.zeros((n, n), dtype=np.complex128)
    u[:, :k] = work[:, :k] / s[:k]
    if k < n:
        u = _complete_basis(u, k)
    return SvdFactors(_frozen(s), _frozen(u), _frozen(v))


def singular_values(a) -> np.ndarray:
    """Descending singular values; same kernel as :func:`svd`, no left factor.

    Also accepts rectangular input (one value per column).
    """
    m = np.ascontiguousarray(a, dtype=np.complex128)
    n = m.shape[1]
    if m.size == 0:
        return np.zeros(0)
    work, _, sweeps = _kernels.jacobi_svd(m, MAX_SWEEPS, max(n, 4) * _EPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")
    s = np.sqrt(np.einsum("ij,ij->j", work.real, work.real) + np.einsum("ij,ij->j", work.imag, work.imag))
    return np.sort(s)[::-1]


def matrix_abs(a) -> np.ndarray:
    """``|A| = (A*A)^{1/2}``.

    Hermitian inputs go through their eigendecomposition (``V |L| V*``), all
    others through the SVD (``V diag(s) V*``).
    """
    m = as_matrix(a)
    if is_hermitian(m):
        e = eig_hermitian((m + m.conj().T) / 2)
        out = (e.vectors * np.abs(e.eigenvalues)) @ e.vectors.conj().T
    else:
        f = svd(m)
        out = (f.right * f.singulars) @ f.right.conj().T
    return _frozen((out + out.conj().T) / 2)


def jordan_split(d) -> tuple[np.ndarray, np.ndarray]:
    """Split a Hermitian ``D`` as ``D+ - D-`` with ``D+ D- = 0``, both PSD."""
    m = hermitian(d)
    e = eig_hermitian(m)
    pos = np.where(e.eigenvalues > 0, e.eigenvalues, 0.0)
    neg = np.where(e.eigenvalues < 0, -e.eigenvalues, 0.0)
    v, vh = e.vectors, e.vectors.conj().T
    d_plus = (v * pos) @ vh
    d_minus = (v * neg) @ vh
    return (_frozen((d_plus + d_plus.conj().T) / 2), _frozen((d_minus + d_minus.conj().T) / 2))


def direct_sum(a, b) -> np.ndarray:
    """Block diagonal ``[[A, 0], [0, B]]``; either block may be 0x0."""
    a = np.atleast_2d(np.asarray(a, dtype=np.complex128)) if np.size(a) else np.zeros((0, 0), complex)
    b = np.atleast_2d(np.asarray(b, dtype=np.complex128)) if np.size(b) else np.zeros((0, 0), complex)
    na, nb = a.shape[0], b.shape[0]
    out = np.zeros((na + nb, na + nb), dtype=np.complex128)
    out[:na, :na] = a
    out[na:, na:] = b
    return _frozen(out)


def apply_fn(f: Callable, a, domain: tuple[float, float] | None = None) -> np.ndarray:
    """Functional calculus ``f(A) = V diag(f(l_i)) V*`` for Hermitian ``A``.

    ``f`` must accept a real array.  The domain defaults to ``f.domain`` when
    present, otherwise the whole line.  If the domain starts at 0, eigenvalues
    down to ``-PSD_TOL * max(1, l_max)`` are clamped to 0; anything further
    outside raises :class:`DomainError`.
    """
    m = hermitian(a)
    n = m.shape[0]
    if n == 0:
        return m
    lo, hi = domain if domain is not None else getattr(f, "domain", (-np.inf, np.inf))
    e = eig_hermitian(m)
    w = e.eigenvalues
    slack = PSD_TOL * max(1.0, float(np.abs(w).max()))
    if w[-1] < lo - slack or w[0] > hi + slack:
        raise DomainError(f"spectrum [{w[-1]:.3e}, {w[0]:.3e}] leaves domain [{lo}, {hi}]")
    w = np.clip(w, lo, hi)
    fw = np.asarray(f(w), dtype=float)
    out = (e.vectors * fw) @ e.vectors.conj().T
    return _frozen((out + out.conj().T) / 2)


def to_json(a) -> dict:
    """Matrix JSON form: ``{"n": n, "re": [...], "im": [...]}``, row-major."""
    m = np.asarray(a, dtype=np.complex128)
    return {"n": int(m.shape[0]), "re": m.real.ravel().tolist(), "im": m.imag.ravel().tolist()}


def from_json(obj: dict) -> np.ndarray:
    try:
        n = obj["n"]
        re, im = obj["re"], obj["im"]
    except (KeyError, TypeError) as exc:
        raise LinalgError(f"malformed matrix record: {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise LinalgError(f"bad dimension field {n!r}")
    if len(re) != n * n or len(im) != n * n:
        raise LinalgError(f"dimension field n={n} does not match {len(re)} real / {len(im)} imaginary entries")
    m = np.array(re, dtype=float).reshape(n, n) + 1j * np.array(im, dtype=float).reshape(n, n)
    return as_matrix(m)
