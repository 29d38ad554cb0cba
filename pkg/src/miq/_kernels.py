"""Numba-compiled Jacobi kernels.

Both kernels use the same complex plane rotation.  For a 2x2 Hermitian block
``[[a, b], [conj(b), d]]`` with ``b = |b| exp(i phi)`` the rotation is

    G = [[c, sigma], [-conj(sigma), c]],   sigma = s * exp(i phi)

where ``(c, s)`` is the classical real symmetric Jacobi pair for the block
``[[a, |b|], [|b|, d]]``.  ``G`` has a real diagonal, so eigenvector phases are
left alone.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _rotation(a, d, b):
    ab = abs(b)
    phase = b / ab
    tau = (d - a) / (2.0 * ab)
    if tau >= 0.0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    sigma = t * c * phase
    return c, sigma, t * ab


@njit(cache=True)
def jacobi_eigh(a, max_sweeps, tol):
    """Cyclic Jacobi on a Hermitian matrix.

    Returns ``(eigenvalues, vectors, sweeps)``; ``sweeps == -1`` signals that
    the off-diagonal mass was still above ``tol * ||a||_F`` after
    ``max_sweeps`` sweeps.  Eigenvalues come back unsorted.
    """
    n = a.shape[0]
    w = a.copy()
    v = np.eye(n, dtype=np.complex128)
    norm = 0.0
    for i in range(n):
        for j in range(n):
            norm += w[i, j].real ** 2 + w[i, j].imag ** 2
    norm = np.sqrt(norm)
    target = tol * norm
    skip = 1e-300 + 1e-18 * norm

    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += w[i, j].real ** 2 + w[i, j].imag ** 2
        if np.sqrt(off) <= target:
            evals = np.empty(n)
            for i in range(n):
                evals[i] = w[i, i].real
            return evals, v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = w[p, q]
                if abs(b) <= skip:
                    continue
                app = w[p, p].real
                aqq = w[q, q].real
                c, sigma, shift = _rotation(app, aqq, b)
                sc = np.conj(sigma)
                for k in range(n):
                    xp = w[k, p]
                    xq = w[k, q]
                    w[k, p] = c * xp - sc * xq
                    w[k, q] = sigma * xp + c * xq
                for k in range(n):
                    xp = w[p, k]
                    xq = w[q, k]
                    w[p, k] = c * xp - sigma * xq
                    w[q, k] = sc * xp + c * xq
                for k in range(n):
                    xp = v[k, p]
                    xq = v[k, q]
                    v[k, p] = c * xp - sc * xq
                    v[k, q] = sigma * xp + c * xq
                w[p, q] = 0.0
                w[q, p] = 0.0
                w[p, p] = app - shift
                w[q, q] = aqq + shift

    return np.zeros(n), v, -1


@njit(cache=True)
def jacobi_svd(a, max_sweeps, tol):
    """One-sided (Hestenes) Jacobi: rotate columns of ``a`` until orthogonal.

    This diagonalizes ``a* a`` implicitly with the same rotations as
    :func:`jacobi_eigh`, without squaring the condition number.  Returns
    ``(work, vectors, sweeps)`` with ``a @ vectors == work`` and mutually
    orthogonal columns in ``work``; ``sweeps == -1`` on non-convergence.
    """
    m = a.shape[0]
    n = a.shape[1]
    w = a.copy()
    v = np.eye(n, dtype=np.complex128)
    # columns below this squared norm are numerically zero; rotating them
    # only stirs rounding noise and can stall convergence of wide inputs
    frob2 = 0.0
    for k in range(m):
        for j in range(n):
            frob2 += w[k, j].real ** 2 + w[k, j].imag ** 2
    negligible = (tol * tol) * frob2

    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0 + 0.0j
                for k in range(m):
                    xp = w[k, p]
                    xq = w[k, q]
                    alpha += xp.real ** 2 + xp.imag ** 2
                    beta += xq.real ** 2 + xq.imag ** 2
                    gamma += np.conj(xp) * xq
                g = abs(gamma)
                if g <= 1e-300 or g <= tol * np.sqrt(alpha * beta) or min(alpha, beta) <= negligible:
                    continue
                rotated = True
                c, sigma, _ = _rotation(alpha, beta, gamma)
                sc = np.conj(sigma)
                for k in range(m):
                    xp = w[k, p]
                    xq = w[k, q]
                    w[k, p] = c * xp - sc * xq
                    w[k, q] = sigma * xp + c * xq
                for k in range(n):
                    xp = v[k, p]
                    xq = v[k, q]
                    v[k, p] = c * xp - sc * xq
                    v[k, q] = sigma * xp + c * xq
        if not rotated:
            return w, v, sweep
    return w, v, -1
