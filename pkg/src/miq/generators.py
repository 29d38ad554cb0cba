"""Deterministic random ensembles of PSD matrices, contractions and pairs.

Every draw comes from ``numpy.random.Generator(PCG64(seed))``.  Complex
Gaussian matrices are filled row-major, the whole real block first and then
the whole imaginary block, each entry standard normal.  Per-trial seeds are
derived from a master seed with :func:`derive_seed`, so a trial can be
replayed from its own seed alone.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import asdict, dataclass, field

import numpy as np

from miq.linalg import singular_values

PSD_KINDS = ("wishart", "spectral", "rank_deficient")
PAIR_KINDS = ("wishart", "spectral", "rank_deficient", "commuting_pair", "near_pair")


def derive_seed(master: int, *keys) -> int:
    """Split a master seed: first 8 bytes of BLAKE2b over the packed keys.

    Integer keys are packed as signed 64-bit little endian, strings as UTF-8
    with a length prefix.  The result is a nonnegative 63-bit integer.
    """
    h = hashlib.blake2b(digest_size=8)
    for k in (master, *keys):
        if isinstance(k, str):
            raw = k.encode()
            h.update(b"s" + struct.pack("<q", len(raw)) + raw)
        else:
            h.update(b"i" + struct.pack("<q", int(k)))
    return int.from_bytes(h.digest(), "little") >> 1


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameters of one ensemble draw.

    ``spectrum`` bounds the eigenvalues of ``spectral`` and ``commuting_pair``
    draws, ``zeros`` is the number of exact zero eigenvalues of a
    ``rank_deficient`` draw (default ``n // 2``), ``delta`` is the perturbation
    size of a ``near_pair``.
    """

    kind: str
    n: int
    seed: int
    spectrum: tuple[float, float] = (0.0, 3.0)
    zeros: int | None = None
    delta: float = 0.5
    eigenvalues: tuple[float, ...] | None = field(default=None)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["spectrum"] = list(self.spectrum)
        if self.eigenvalues is not None:
            d["eigenvalues"] = list(self.eigenvalues)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EnsembleSpec":
        d = dict(d)
        d["spectrum"] = tuple(d.get("spectrum", (0.0, 3.0)))
        if d.get("eigenvalues") is not None:
            d["eigenvalues"] = tuple(d["eigenvalues"])
        return cls(**d)


def complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    re = rng.standard_normal((rows, cols))
    im = rng.standard_normal((rows, cols))
    return re + 1j * im


def _orthonormalize(g: np.ndarray) -> np.ndarray:
    # Gram-Schmidt twice; equals QR with positive diagonal R, hence Haar
    q = np.array(g, dtype=np.complex128)
    n = q.shape[1]
    for j in range(n):
        for _ in range(2):
            for i in range(j):
                q[:, j] -= (q[:, i].conj() @ q[:, j]) * q[:, i]
        q[:, j] /= np.linalg.norm(q[:, j])
    return q


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    return _orthonormalize(complex_gaussian(rng, n, n))


def _hermitize(a: np.ndarray) -> np.ndarray:
    return (a + a.conj().T) / 2


def _draw_psd(rng: np.random.Generator, spec: EnsembleSpec) -> np.ndarray:
    n = spec.n
    if spec.kind == "wishart":
        g = complex_gaussian(rng, n, n)
        return _hermitize(g @ g.conj().T / n)
    if spec.kind == "spectral":
        if spec.eigenvalues is not None:
            lam = np.asarray(spec.eigenvalues, dtype=float)
            if lam.shape != (n,):
                raise ValueError(f"need {n} eigenvalues, got {lam.shape}")
        else:
            lam = rng.uniform(*spec.spectrum, size=n)
        if np.any(lam < 0):
            raise ValueError("prescribed eigenvalues must be nonnegative")
        u = random_unitary(rng, n)
        return _hermitize((u * lam) @ u.conj().T)
    if spec.kind == "rank_deficient":
        zeros = n // 2 if spec.zeros is None else spec.zeros
        if not 0 <= zeros <= n:
            raise ValueError(f"zeros must lie in [0, {n}], got {zeros}")
        g = complex_gaussian(rng, n, n - zeros)
        return _hermitize(g @ g.conj().T / n)
    raise ValueError(f"unknown PSD ensemble {spec.kind!r}")


def random_psd(spec: EnsembleSpec) -> np.ndarray:
    """One PSD draw: ``wishart`` (G G*/n), ``spectral`` (U diag(l) U*) or
    ``rank_deficient`` (G G*/n with G of width n - zeros)."""
    if spec.n < 1:
        raise ValueError("n must be at least 1")
    return _draw_psd(rng_for(spec.seed), spec)


def random_contraction(n: int, m: int | None = None, seed: int = 0, scale: float | None = None) -> np.ndarray:
    """An ``n x m`` matrix with operator norm at most 1.

    A complex Gaussian draw divided by its operator norm, times a factor that
    is uniform on [0, 1] unless ``scale`` is given.
    """
    m = n if m is None else m
    if n < 1 or m < 1:
        raise ValueError("contraction dimensions must be positive")
    rng = rng_for(seed)
    g = complex_gaussian(rng, n, m)
    u = rng.uniform(0.0, 1.0) if scale is None else float(scale)
    if not 0.0 <= u <= 1.0:
        raise ValueError("scale must lie in [0, 1]")
    top = singular_values(g)[0]
    return g * (u / top)


def random_pair(kind: str, n: int, delta: float = 0.5, seed: int = 0,
                spectrum: tuple[float, float] = (0.0, 3.0)) -> tuple[np.ndarray, np.ndarray]:
    """A pair ``(A, B)`` of PSD matrices.

    ``commuting_pair`` shares a random eigenbasis with independent spectra;
    ``near_pair`` is ``B = A + delta * P`` with ``P`` PSD of unit operator norm,
    so ``A <= B``; the remaining kinds are two independent draws.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = rng_for(seed)
    if kind == "commuting_pair":
        u = random_unitary(rng, n)
        la = rng.uniform(*spectrum, size=n)
        lb = rng.uniform(*spectrum, size=n)
        return _hermitize((u * la) @ u.conj().T), _hermitize((u * lb) @ u.conj().T)
    if kind == "near_pair":
        a = _draw_psd(rng, EnsembleSpec("wishart", n, 0))
        p = _draw_psd(rng, EnsembleSpec("wishart", n, 0))
        p = p / singular_values(p)[0]
        return a, _hermitize(a + delta * p)
    if kind in PSD_KINDS:
        spec = EnsembleSpec(kind, n, 0, spectrum=spectrum)
        return _draw_psd(rng, spec), _draw_psd(rng, spec)
    raise ValueError(f"unknown pair ensemble {kind!r}")


def is_contraction(c, tol: float = 1e-12) -> bool:
    return bool(singular_values(np.asarray(c))[0] <= 1.0 + tol)
