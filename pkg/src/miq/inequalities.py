"""One executable predicate per matrix inequality.

Every check returns a :class:`CheckResult` whose ``margin`` is the smallest
``rhs_k - lhs_k`` over the compared indices.  For ``≼`` these are Ky Fan sums
and for ``≪`` single singular values; trace inequalities compare one number.
A check holds when ``margin >= -tol`` with ``tol = tol_scale * 1e-8 * max(1, ||RHS||)``.

Statements whose natural form is the dominance ``≪`` are checked with
:func:`miq.orders.dominated`, never with the weaker majorization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from miq.functions import REAL_LINE, ConvexFn, PlainFn, brick, fn_product, fn_sum
from miq.linalg import apply_fn, direct_sum, hermitian, matrix_abs, psd, singular_values
from miq.ncpoly import NcPolynomial, evaluate
from miq.orders import default_tol, dominance_verdict, majorization_verdict

STATEMENT_TAGS = (
    "ando", "diff_dominance", "withD", "fsll", "lemma_sum", "lemma_product",
    "lemma_poly", "main_theorem", "cor_product", "cor_pair", "cor_weighted_sum",
    "cor_exp", "convex_theorem", "trace_monotone", "trace_convex", "cx_search",
)

COROLLARY_FAMILIES = ("product", "pair", "weighted_sum", "exp")


class PreconditionError(ValueError):
    """Generated inputs do not satisfy the hypothesis of the statement."""


@dataclass
class CheckResult:
    id: str
    holds: bool
    margin: float
    worst_k: int
    tol: float
    inputs_digest: dict = field(default_factory=dict)
    lhs: np.ndarray | None = field(default=None, repr=False)
    rhs: np.ndarray | None = field(default=None, repr=False)

    @property
    def near_miss(self) -> bool:
        return self.holds and self.margin < 0


def _ky_fan_result(tag, lhs_mat, rhs_mat, tol_scale, norm=None) -> CheckResult:
    s_lhs, s_rhs = singular_values(lhs_mat), singular_values(rhs_mat)
    tol = default_tol(s_rhs.sum(), tol_scale)
    if norm is None:
        v = majorization_verdict(s_lhs, s_rhs, tol)
        return CheckResult(tag, v.holds, v.margin, v.worst_index, tol, lhs=np.cumsum(s_lhs), rhs=np.cumsum(s_rhs))
    k = _norm_index(norm, len(s_lhs))
    lhs, rhs = float(s_lhs[:k].sum()), float(s_rhs[:k].sum())
    margin = rhs - lhs
    return CheckResult(tag, margin >= -tol, margin, k, tol, lhs=np.array([lhs]), rhs=np.array([rhs]))


def _norm_index(norm, n):
    if norm == "op":
        return 1
    if norm == "trace":
        return n
    if isinstance(norm, int) and 1 <= norm <= n:
        return norm
    raise ValueError(f"unknown norm {norm!r}; expected 'op', 'trace' or a Ky Fan index")


def _dominance_result(tag, lhs_mat, rhs_mat, tol_scale) -> CheckResult:
    s_lhs, s_rhs = singular_values(lhs_mat), singular_values(rhs_mat)
    tol = default_tol(s_rhs.sum(), tol_scale)
    v = dominance_verdict(s_lhs, s_rhs, tol)
    return CheckResult(tag, v.holds, v.margin, v.worst_index, tol, lhs=s_lhs, rhs=s_rhs[: len(s_lhs)])


def _pair(a, b):
    a, b = psd(a), psd(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def _brick_matrix(s, a):
    return apply_fn(lambda t: brick(t, s), a, (0.0, np.inf))


def check_ando(f, a, b, tol_scale: float = 1.0, norm=None) -> CheckResult:
    """``f(B) - f(A) ≼ f(|B - A|)`` for all Ky Fan norms at once.

    With ``norm`` (``"op"``, ``"trace"`` or an index ``k``) only that Ky Fan
    norm is compared; the counterexample search uses this form.
    """
    a, b = _pair(a, b)
    lhs = f.matrix(b) - f.matrix(a)
    rhs = f.matrix(matrix_abs(b - a))
    return _ky_fan_result("ando", lhs, rhs, tol_scale, norm)


def check_diff_dominance(a, b, tol_scale: float = 1.0) -> CheckResult:
    """``B - A ≪ B ⊕ A`` for PSD ``A, B``."""
    a, b = _pair(a, b)
    return _dominance_result("diff_dominance", b - a, direct_sum(b, a), tol_scale)


def check_withD(s: float, a, d, tol_scale: float = 1.0) -> CheckResult:
    """``f_s(A + D) - f_s(A) ≪ f_s(D)``."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    a, d = _pair(a, d)
    lhs = _brick_matrix(s, a + d) - _brick_matrix(s, a)
    return _dominance_result("withD", lhs, _brick_matrix(s, d), tol_scale)


def check_fsll(s: float, a, b, tol_scale: float = 1.0) -> CheckResult:
    """``f_s(B) - f_s(A) ≪ f_s(|B - A|)``."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    a, b = _pair(a, b)
    lhs = _brick_matrix(s, b) - _brick_matrix(s, a)
    return _dominance_result("fsll", lhs, _brick_matrix(s, matrix_abs(b - a)), tol_scale)


def _require_majorized(xs, fs, d, what="A"):
    if len(xs) != len(fs):
        raise ValueError(f"{len(xs)} matrices for {len(fs)} functions")
    for i, (x, f) in enumerate(zip(xs, fs)):
        r = _ky_fan_result("pre", x, f.matrix(d), 1.0)
        if not r.holds:
            raise PreconditionError(f"{what}_{i + 1} is not weakly majorized by {f}(D) (margin {r.margin:.3e})")


def check_lemma_sum(d, gs, xs, tol_scale: float = 1.0) -> CheckResult:
    """``sum A_i ≼ (sum g_i)(D)`` given ``A_i ≼ g_i(D)``."""
    d = psd(d)
    _require_majorized(xs, gs, d)
    lhs = reduce(np.add, [np.asarray(x) for x in xs])
    return _ky_fan_result("lemma_sum", lhs, fn_sum(*gs).matrix(d), tol_scale)


def check_lemma_product(d, gs, xs, tol_scale: float = 1.0) -> CheckResult:
    """``A_1 ... A_d ≼ (g_1 ... g_d)(D)`` given ``A_i ≼ g_i(D)``."""
    d = psd(d)
    _require_majorized(xs, gs, d)
    lhs = reduce(np.matmul, [np.asarray(x) for x in xs])
    return _ky_fan_result("lemma_product", lhs, fn_product(*gs).matrix(d), tol_scale)


def check_lemma_poly(d, gs, xs, p: NcPolynomial, tol_scale: float = 1.0) -> CheckResult:
    """``P(A_1..A_d) ≼ |P|(g_1(D)..g_d(D))`` given ``A_i ≼ g_i(D)``."""
    d = psd(d)
    if p.arity != len(gs):
        raise ValueError(f"polynomial arity {p.arity} but {len(gs)} functions")
    _require_majorized(xs, gs, d)
    n = d.shape[0]
    lhs = evaluate(p, xs, n)
    rhs = evaluate(p.abs(), [g.matrix(d) for g in gs], n)
    return _ky_fan_result("lemma_poly", lhs, rhs, tol_scale)


def canonical_signs(d: int) -> tuple[int, ...]:
    """Alternating orientation: ``+`` is ``g(B) - g(A)``, ``-`` is ``g(A) - g(B)``."""
    return tuple(1 if i % 2 == 0 else -1 for i in range(d))


def check_main_theorem(p: NcPolynomial, gs, hs, a, b, cs, signs=None, tol_scale: float = 1.0) -> CheckResult:
    """Polynomial comparison in differences of operator monotone functions.

    ``P(±(g_1(B)-g_1(A)), ..., ±(g_d(B)-g_d(A)), C_1, ..., C_e)
    ≼ |P|(g_1(|B-A|), ..., g_d(|B-A|), h_1(|B-A|), ..., h_e(|B-A|))``,
    given ``C_i ≼ h_i(|A-B|)``.  ``signs`` defaults to
    :func:`canonical_signs`.
    """
    a, b = _pair(a, b)
    if p.arity != len(gs) + len(hs):
        raise ValueError(f"polynomial arity {p.arity} but {len(gs)} + {len(hs)} arguments")
    signs = canonical_signs(len(gs)) if signs is None else tuple(signs)
    if len(signs) != len(gs) or any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be one +1/-1 per monotone function")
    dabs = matrix_abs(b - a)
    _require_majorized(cs, hs, dabs, "C")
    n = a.shape[0]
    diffs = [g.matrix(b) - g.matrix(a) for g in gs]
    args = [x if s > 0 else -x for x, s in zip(diffs, signs)] + [np.asarray(c) for c in cs]
    lhs = evaluate(p, args, n)
    rhs = evaluate(p.abs(), [g.matrix(dabs) for g in gs] + [h.matrix(dabs) for h in hs], n)
    return _ky_fan_result("main_theorem", lhs, rhs, tol_scale)


def _exp_hermitian(x):
    return apply_fn(np.exp, hermitian(x), REAL_LINE)


def check_corollaries(family: str, a, b, gs, hs=(), tol_scale: float = 1.0) -> CheckResult:
    """The four norm inequalities derived from the polynomial comparison.

    ``product``:      prod (g_i(B) - g_i(A))          ≼ prod g_i(|B-A|)
    ``pair``:         (A - B)(g_1(A) - g_1(B))          ≼ |A-B| g_1(|A-B|)
    ``weighted_sum``: sum h_i(|A-B|)(g_i(A) - g_i(B))  ≼ sum (h_i g_i)(|A-B|)
    ``exp``:          (A - B) exp(g_1(A) - g_1(B))      ≼ (A - B) exp(g_1(|A-B|))
    """
    a, b = _pair(a, b)
    dabs = matrix_abs(b - a)
    gs = tuple(gs)
    if not gs:
        raise ValueError("at least one monotone function is needed")
    if family == "product":
        lhs = reduce(np.matmul, [g.matrix(b) - g.matrix(a) for g in gs])
        rhs = fn_product(*gs).matrix(dabs)
    elif family == "pair":
        g = gs[0]
        lhs = (a - b) @ (g.matrix(a) - g.matrix(b))
        rhs = dabs @ g.matrix(dabs)
    elif family == "weighted_sum":
        if len(hs) != len(gs):
            raise ValueError("weighted_sum needs one h per g")
        lhs = reduce(np.add, [h.matrix(dabs) @ (g.matrix(a) - g.matrix(b)) for g, h in zip(gs, hs)])
        rhs = fn_sum(*[fn_product(h, g) for g, h in zip(gs, hs)]).matrix(dabs)
    elif family == "exp":
        g = gs[0]
        lhs = (a - b) @ _exp_hermitian(g.matrix(a) - g.matrix(b))
        rhs = (a - b) @ _exp_hermitian(g.matrix(dabs))
    else:
        raise ValueError(f"unknown corollary family {family!r}; expected one of {COROLLARY_FAMILIES}")
    return _ky_fan_result(f"cor_{family}", lhs, rhs, tol_scale)


def check_convex_theorem(f: ConvexFn, h, a, b, tol_scale: float = 1.0) -> CheckResult:
    """``(h f)(|B-A|) ≼ h(|B-A|) (f(B) - f(A))``; note the reversed direction."""
    a, b = _pair(a, b)
    dabs = matrix_abs(b - a)
    lhs = fn_product(h, f).matrix(dabs)
    rhs = h.matrix(dabs) @ (f.matrix(b) - f.matrix(a))
    return _ky_fan_result("convex_theorem", lhs, rhs, tol_scale)


def _trace_result(tag, small: float, big: float, tol_scale: float) -> CheckResult:
    tol = default_tol(max(abs(small), abs(big)), tol_scale)
    margin = big - small
    return CheckResult(tag, margin >= -tol, margin, 1, tol, lhs=np.array([small]), rhs=np.array([big]))


def _require_parity(h, allowed):
    if not isinstance(h, PlainFn) or h.parity not in allowed:
        raise ValueError(f"{h} needs a parity tag in {allowed}")
    if not h.vanishes_at_zero:
        raise ValueError(f"{h} must vanish at 0")


def check_trace_monotone(h: PlainFn, g, a, b, tol_scale: float = 1.0) -> CheckResult:
    """``|Tr h(B-A)(g(B) - g(A))| <= Tr (h g)(|B-A|)`` for odd or even ``h``."""
    _require_parity(h, ("odd", "even"))
    a, b = _pair(a, b)
    hd = h.matrix(b - a)
    lhs = abs(np.trace(hd @ (g.matrix(b) - g.matrix(a))).real)
    rhs = np.trace(fn_product(h.on_halfline(), g).matrix(matrix_abs(b - a))).real
    return _trace_result("trace_monotone", float(lhs), float(rhs), tol_scale)


def check_trace_convex(h: PlainFn, f: ConvexFn, a, b, tol_scale: float = 1.0) -> CheckResult:
    """``Tr h(B-A)(f(B) - f(A)) >= Tr (h f)(|B-A|)`` for odd ``h``."""
    _require_parity(h, ("odd",))
    a, b = _pair(a, b)
    big = np.trace(h.matrix(b - a) @ (f.matrix(b) - f.matrix(a))).real
    small = np.trace(fn_product(h.on_halfline(), f).matrix(matrix_abs(b - a))).real
    return _trace_result("trace_convex", float(small), float(big), tol_scale)
