"""Noncommutative polynomials in matrix variables.

A polynomial is a sparse map from words to complex coefficients.  A word is a
tuple of 0-based variable indices, so ``(0, 1)`` is ``X1 X2`` and ``()`` is the
constant term, which evaluates to ``alpha * I``.  The text form uses 1-based
names: ``"2*x1*x2 - 3*x2 + 1"``.
"""

from __future__ import annotations

import re
from itertools import product

import numpy as np

from miq.generators import rng_for

MAX_ARITY = 8
MAX_DEGREE = 4
MAX_TERMS = 20

Word = tuple[int, ...]


class NcPolynomial:
    """Immutable noncommutative polynomial with ``arity`` variables."""

    __slots__ = ("arity", "_terms")

    def __init__(self, arity: int, terms: dict | None = None):
        if not 0 <= arity <= MAX_ARITY:
            raise ValueError(f"arity must lie in [0, {MAX_ARITY}], got {arity}")
        clean: dict[Word, complex] = {}
        for word, coef in (terms or {}).items():
            word = tuple(int(i) for i in word)
            if any(not 0 <= i < arity for i in word):
                raise ValueError(f"word {word} uses a variable outside 0..{arity - 1}")
            coef = complex(coef)
            if coef != 0:
                clean[word] = clean.get(word, 0) + coef
        self.arity = arity
        self._terms = {w: c for w, c in sorted(clean.items(), key=lambda kv: (len(kv[0]), kv[0])) if c != 0}

    @property
    def terms(self) -> dict[Word, complex]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        return isinstance(other, NcPolynomial) and self.arity == other.arity and self._terms == other._terms

    def __hash__(self):
        return hash((self.arity, tuple(self._terms.items())))

    def __add__(self, other: "NcPolynomial") -> "NcPolynomial":
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return NcPolynomial(self.arity, out)

    def __neg__(self):
        return NcPolynomial(self.arity, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def abs(self) -> "NcPolynomial":
        """``|P|``: every coefficient replaced by its modulus."""
        return NcPolynomial(self.arity, {w: abs(c) for w, c in self._terms.items()})

    def __call__(self, *xs):
        return evaluate(self, xs)

    def __repr__(self):
        return f"NcPolynomial({self.arity}, {self._terms!r})"

    def __str__(self):
        return format_poly(self)

    def to_dict(self) -> dict:
        return {"arity": self.arity,
                "terms": [[list(w), c.real, c.imag] for w, c in self._terms.items()]}

    @classmethod
    def from_dict(cls, d: dict) -> "NcPolynomial":
        return cls(d["arity"], {tuple(w): complex(re, im) for w, re, im in d["terms"]})


def abs_poly(p: NcPolynomial) -> NcPolynomial:
    return p.abs()


def evaluate(p: NcPolynomial, xs, n: int | None = None) -> np.ndarray:
    """``sum alpha_w X_{w1} ... X_{wl}``; the empty word contributes ``alpha I``.

    Products of shared prefixes are computed once.
    """
    xs = [np.asarray(x, dtype=np.complex128) for x in xs]
    if len(xs) != p.arity:
        raise ValueError(f"polynomial has arity {p.arity}, got {len(xs)} matrices")
    if n is None:
        if not xs:
            raise ValueError("dimension needed when there are no variables")
        n = xs[0].shape[0]
    for x in xs:
        if x.shape != (n, n):
            raise ValueError(f"expected {n}x{n} matrices, got {x.shape}")
    out = np.zeros((n, n), dtype=np.complex128)
    prefixes: dict[Word, np.ndarray] = {}
    for word, coef in p._terms.items():
        if not word:
            out += coef * np.eye(n)
            continue
        k = len(word)
        while k > 1 and word[:k] not in prefixes:
            k -= 1
        prod = prefixes.get(word[:k], xs[word[0]]) if k > 1 else xs[word[0]]
        for j in range(k, len(word)):
            prod = prod @ xs[word[j]]
            prefixes[word[: j + 1]] = prod
        out += coef * prod
    return out


def all_words(arity: int, max_degree: int) -> list[Word]:
    return [w for length in range(max_degree + 1) for w in product(range(arity), repeat=length)]


def random_poly(d: int, max_degree: int, terms: int, seed: int) -> NcPolynomial:
    """Random polynomial with up to ``terms`` distinct words of mixed lengths.

    Each word length ``0..max_degree`` carries equal total probability;
    coefficients are ``r exp(i theta)`` with ``r`` uniform on ``(0, 1]``.
    """
    if d < 1 or max_degree < 1 or terms < 1:
        raise ValueError("d, max_degree and terms must be positive")
    if d > MAX_ARITY or max_degree > MAX_DEGREE or terms > MAX_TERMS:
        raise ValueError(f"caps: arity <= {MAX_ARITY}, degree <= {MAX_DEGREE}, terms <= {MAX_TERMS}")
    rng = rng_for(seed)
    words = all_words(d, max_degree)
    weights = np.array([1.0 / d ** len(w) for w in words])
    weights /= weights.sum()
    k = min(terms, len(words))
    picks = rng.choice(len(words), size=k, replace=False, p=weights)
    r = 1.0 - rng.uniform(0.0, 1.0, size=k)
    theta = rng.uniform(0.0, 2 * np.pi, size=k)
    return NcPolynomial(d, {words[i]: r[j] * np.exp(1j * theta[j]) for j, i in enumerate(picks)})


def monomial(arity: int, *word: int, coef: complex = 1.0) -> NcPolynomial:
    return NcPolynomial(arity, {tuple(word): coef})


def parse_poly(text: str, arity: int | None = None) -> NcPolynomial:
    """Parse ``"2*x1*x2 - 3*x2 + 1"``.  Real coefficients only."""
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty polynomial")
    # split on signs that are not part of an exponent such as 1e-3
    pieces = re.split(r"(?<![eE])([+-])", src)
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    terms: dict[Word, complex] = {}
    top = 0
    for sign_text, body in zip(pieces[::2], pieces[1::2]):
        if not body:
            raise ValueError(f"missing term after {sign_text!r} in polynomial {text!r}")
        coef = -1.0 if sign_text == "-" else 1.0
        word = []
        for factor in body.split("*"):
            if re.fullmatch(r"x[1-9][0-9]*", factor):
                idx = int(factor[1:])
                word.append(idx - 1)
                top = max(top, idx)
            else:
                try:
                    coef *= float(factor)
                except ValueError:
                    raise ValueError(f"bad factor {factor!r} in polynomial {text!r}") from None
        terms[tuple(word)] = terms.get(tuple(word), 0) + coef
    if arity is None:
        arity = top
    elif top > arity:
        raise ValueError(f"polynomial uses x{top} but arity is {arity}")
    return NcPolynomial(arity, terms)


def _fmt_coef(c: complex) -> str:
    if c.imag == 0:
        return repr(c.real)
    return f"({c.real!r}{c.imag:+}j)"


def format_poly(p: NcPolynomial) -> str:
    """Text form; real-coefficient output parses back with :func:`parse_poly`."""
    if not p._terms:
        return "0"
    out = ""
    for w, c in p._terms.items():
        factors = [f"x{i + 1}" for i in w]
        sign = "+"
        if c.imag == 0 and c.real < 0:
            sign, c = "-", -c
        if c == 1 and factors:
            body = "*".join(factors)
        else:
            body = "*".join([_fmt_coef(c)] + factors)
        if not out:
            out = body if sign == "+" else "-" + body
        else:
            out += f" {sign} {body}"
    return out
