import numpy as np
import pytest

from miq import functions as fn
from miq import inequalities as ineq
from miq.functions import BrickFn, ConvexFn, MonotoneFn, PlainFn
from miq.generators import PAIR_KINDS, random_contraction, random_pair
from miq.linalg import matrix_abs
from miq.ncpoly import NcPolynomial, monomial, random_poly

from conftest import random_psd


def np_fn(f, a):
    """Independent functional calculus through numpy's eigh."""
    w, v = np.linalg.eigh(a)
    return (v * f(np.clip(w, 0, None))) @ v.conj().T


def np_kyfan(m):
    return np.cumsum(np.linalg.svd(m, compute_uv=False))


def pairs(count, n_range=(2, 6), seed=0):
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(*n_range))
        yield random_pair(PAIR_KINDS[i % 5], n, delta=float(rng.uniform(0, 1.5)), seed=seed * 10_000 + i)


def congruent(x, seed):
    v = random_contraction(x.shape[0], seed=seed)
    return v.conj().T @ x @ v


class TestAndo:
    def test_equal_matrices(self, rng):
        a = random_psd(rng, 4)
        for f in fn.MONOTONE_CATALOGUE:
            r = ineq.check_ando(f, a, a)
            assert r.holds and r.margin >= 0 and np.allclose(r.lhs, 0)

    def test_scalar(self):
        r = ineq.check_ando(BrickFn(1.0), [[1.0]], [[4.0]])
        assert r.lhs[0] == pytest.approx(0.3) and r.rhs[0] == pytest.approx(0.75)
        assert r.margin == pytest.approx(0.45) and r.holds

    def test_numpy_oracle(self, rng):
        f = MonotoneFn("power", 0.5)
        a, b = random_psd(rng, 5), random_psd(rng, 5)
        r = ineq.check_ando(f, a, b)
        lhs = np_kyfan(np_fn(np.sqrt, b) - np_fn(np.sqrt, a))
        w, v = np.linalg.eigh(b - a)
        rhs = np_kyfan((v * np.sqrt(np.abs(w))) @ v.conj().T)
        assert np.allclose(r.lhs, lhs, atol=1e-12) and np.allclose(r.rhs, rhs, atol=1e-12)

    def test_random(self):
        for a, b in pairs(60):
            for f in fn.MONOTONE_CATALOGUE:
                assert ineq.check_ando(f, a, b).holds

    def test_single_norm(self, rng):
        a, b = random_psd(rng, 3), random_psd(rng, 3)
        f = fn.MonotoneFn("log1p")
        full = ineq.check_ando(f, a, b)
        op = ineq.check_ando(f, a, b, norm="op")
        tr = ineq.check_ando(f, a, b, norm="trace")
        assert op.margin == full.rhs[0] - full.lhs[0]
        assert tr.worst_k == 3 and tr.margin == pytest.approx(full.rhs[-1] - full.lhs[-1])
        with pytest.raises(ValueError):
            ineq.check_ando(f, a, b, norm="frobenius")

    def test_rejects_non_psd(self):
        with pytest.raises(ValueError):
            ineq.check_ando(BrickFn(1.0), np.diag([1.0, -1.0]), np.eye(2))


class TestDominanceLemmas:
    def test_diff_scalar(self):
        r = ineq.check_diff_dominance([[1.0]], [[4.0]])
        assert r.lhs[0] == pytest.approx(3.0) and r.rhs[0] == pytest.approx(4.0) and r.holds

    def test_diff_zero_a(self, rng):
        b = random_psd(rng, 4)
        r = ineq.check_diff_dominance(np.zeros((4, 4)), b)
        assert r.holds and abs(r.margin) <= 1e-12

    def test_withd_identity_brick_is_equality(self, rng):
        a, d = random_psd(rng, 4), random_psd(rng, 4)
        r = ineq.check_withD(0.0, a, d)
        assert r.holds and abs(r.margin) <= 1e-12

    def test_withd_zero_d(self, rng):
        r = ineq.check_withD(1.0, random_psd(rng, 3), np.zeros((3, 3)))
        assert np.allclose(r.lhs, 0, atol=1e-14) and r.holds

    def test_fsll_scalar(self):
        r = ineq.check_fsll(1.0, [[1.0]], [[4.0]])
        assert r.lhs[0] == pytest.approx(0.3) and r.rhs[0] == pytest.approx(0.75)

    def test_fsll_equal(self, rng):
        a = random_psd(rng, 4)
        r = ineq.check_fsll(0.5, a, a)
        assert np.allclose(r.lhs, 0) and np.allclose(r.rhs, 0) and r.holds

    def test_profiles_are_entrywise(self, rng):
        a, b = random_psd(rng, 4), random_psd(rng, 4)
        r = ineq.check_fsll(1.0, a, b)
        # dominance compares sorted singular values, not their partial sums
        assert np.all(np.diff(r.lhs) <= 0) and np.all(np.diff(r.rhs) <= 0)
        assert r.margin == pytest.approx(np.min(r.rhs - r.lhs))

    def test_random(self):
        for a, b in pairs(100, seed=1):
            assert ineq.check_diff_dominance(a, b).holds
            for s in (0.0, 0.1, 1.0, 10.0):
                assert ineq.check_withD(s, a, b).holds
                assert ineq.check_fsll(s, a, b).holds

    def test_negative_s(self):
        with pytest.raises(ValueError):
            ineq.check_fsll(-1.0, np.eye(2), np.eye(2))


class TestLemmaChain:
    gs = (MonotoneFn("power", 0.5), BrickFn(1.0).as_monotone(), PlainFn("min1"))

    def test_exact_inputs_are_equalities(self, rng):
        d = random_psd(rng, 4)
        xs = [g.matrix(d) for g in self.gs]
        r = ineq.check_lemma_sum(d, self.gs, xs)
        assert r.holds and abs(r.margin) <= 1e-12

    def test_single_function_is_precondition(self, rng):
        d = random_psd(rng, 4)
        x = congruent(self.gs[0].matrix(d), 5)
        pre = ineq._ky_fan_result("pre", x, self.gs[0].matrix(d), 1.0)
        r = ineq.check_lemma_sum(d, self.gs[:1], [x])
        assert r.margin == pre.margin
        assert ineq.check_lemma_product(d, self.gs[:1], [x]).margin == pre.margin

    def test_precondition_enforced(self, rng):
        d = random_psd(rng, 3)
        with pytest.raises(ineq.PreconditionError):
            ineq.check_lemma_sum(d, self.gs[:1], [5 * np.eye(3) + self.gs[0].matrix(d)])

    def test_random(self, rng):
        for trial in range(60):
            n = int(rng.integers(2, 6))
            dmat = random_psd(rng, n)
            k = int(rng.integers(1, 4))
            gs = [self.gs[i] for i in rng.integers(0, 3, k)]
            xs = [congruent(g.matrix(dmat), 100 * trial + i) for i, g in enumerate(gs)]
            p = random_poly(k, 3, 8, seed=trial)
            assert ineq.check_lemma_sum(dmat, gs, xs).holds
            assert ineq.check_lemma_product(dmat, gs, xs).holds
            assert ineq.check_lemma_poly(dmat, gs, xs, p).holds

    def test_poly_reductions(self, rng):
        d = random_psd(rng, 4)
        xs = [congruent(g.matrix(d), i) for i, g in enumerate(self.gs)]
        linear = NcPolynomial(3, {(0,): 1.0, (1,): 1.0, (2,): 1.0})
        word = monomial(3, 0, 1, 2)
        assert ineq.check_lemma_poly(d, self.gs, xs, linear).margin == pytest.approx(
            ineq.check_lemma_sum(d, self.gs, xs).margin, abs=1e-12)
        assert ineq.check_lemma_poly(d, self.gs, xs, word).margin == pytest.approx(
            ineq.check_lemma_product(d, self.gs, xs).margin, abs=1e-12)

    def test_arity_mismatch(self, rng):
        d = random_psd(rng, 2)
        with pytest.raises(ValueError):
            ineq.check_lemma_poly(d, self.gs[:1], [d], monomial(2, 0, 1))


class TestMainTheorem:
    def test_reduces_to_ando(self):
        p = monomial(1, 0)
        for a, b in pairs(40, seed=2):
            for g in fn.MONOTONE_CATALOGUE:
                main = ineq.check_main_theorem(p, [g], [], a, b, [])
                ando = ineq.check_ando(g, a, b)
                assert main.holds == ando.holds
                assert abs(main.margin - ando.margin) <= 1e-12

    def test_equal_matrices(self, rng):
        a = random_psd(rng, 3)
        p = NcPolynomial(3, {(0,): 1.0, (2, 1): -2.0, (0, 2): 0.5j})
        hs = [PlainFn("power", 2.0)]
        cs = [np.zeros((3, 3))]
        r = ineq.check_main_theorem(p, fn.MONOTONE_CATALOGUE[:2], hs, a, a, cs)
        assert r.holds and np.allclose(r.lhs, 0)

    def test_random_both_orientations(self, rng):
        for trial, (a, b) in enumerate(pairs(60, seed=3)):
            n = a.shape[0]
            d, e = int(rng.integers(1, 3)), int(rng.integers(0, 3))
            gs = [fn.MONOTONE_CATALOGUE[i] for i in rng.integers(0, 9, d)]
            hs = [fn.PLAIN_CATALOGUE[i] for i in rng.integers(0, 5, e)]
            dabs = matrix_abs(b - a)
            cs = [congruent(h.matrix(dabs), 7 * trial + i) for i, h in enumerate(hs)]
            p = random_poly(d + e, 3, 8, seed=trial)
            signs = ineq.canonical_signs(d)
            assert ineq.check_main_theorem(p, gs, hs, a, b, cs, signs).holds
            assert ineq.check_main_theorem(p, gs, hs, a, b, cs, [-s for s in signs]).holds
            assert n == a.shape[0]

    def test_signs_validated(self, rng):
        a = random_psd(rng, 2)
        with pytest.raises(ValueError):
            ineq.check_main_theorem(monomial(1, 0), fn.MONOTONE_CATALOGUE[:1], [], a, a, [], signs=[2])

    def test_canonical_signs(self):
        assert ineq.canonical_signs(3) == (1, -1, 1)


class TestCorollaries:
    def test_product_single_is_ando(self):
        for a, b in pairs(20, seed=4):
            g = MonotoneFn("power", 0.75)
            assert ineq.check_corollaries("product", a, b, [g]).margin == pytest.approx(
                ineq.check_ando(g, a, b).margin, abs=1e-12)

    @pytest.mark.parametrize("family", ineq.COROLLARY_FAMILIES)
    def test_random(self, family, rng):
        for a, b in pairs(40, seed=5):
            k = int(rng.integers(1, 4)) if family in ("product", "weighted_sum") else 1
            gs = [fn.MONOTONE_CATALOGUE[i] for i in rng.integers(0, 9, k)]
            hs = [fn.PLAIN_CATALOGUE[i] for i in rng.integers(0, 5, k)] if family == "weighted_sum" else []
            assert ineq.check_corollaries(family, a, b, gs, hs).holds

    def test_exp_numpy_oracle(self, rng):
        a, b = random_psd(rng, 3), random_psd(rng, 3)
        g = MonotoneFn("log1p")
        r = ineq.check_corollaries("exp", a, b, [g])
        x = np_fn(np.log1p, a) - np_fn(np.log1p, b)
        w, v = np.linalg.eigh(x)
        lhs = (a - b) @ (v * np.exp(w)) @ v.conj().T
        assert np.allclose(r.lhs, np_kyfan(lhs), atol=1e-10)

    def test_errors(self, rng):
        a = random_psd(rng, 2)
        with pytest.raises(ValueError):
            ineq.check_corollaries("cubic", a, a, fn.MONOTONE_CATALOGUE[:1])
        with pytest.raises(ValueError):
            ineq.check_corollaries("weighted_sum", a, a, fn.MONOTONE_CATALOGUE[:2], fn.PLAIN_CATALOGUE[:1])


class TestConvex:
    def test_equal_matrices(self, rng):
        a = random_psd(rng, 3)
        r = ineq.check_convex_theorem(ConvexFn("square"), PlainFn("min1"), a, a)
        assert np.allclose(r.lhs, 0) and np.allclose(r.rhs, 0) and r.holds

    def test_linear_identity_direction(self):
        # f(t) = t, h(t) = t: both sides have the singular values of |B-A|^2
        for a, b in pairs(20, seed=6):
            assert ineq.check_convex_theorem(ConvexFn("linear"), PlainFn("identity"), a, b).holds
            assert ineq.check_ando(MonotoneFn("brick", 0.0), a, b).holds

    def test_random(self):
        for a, b in pairs(20, seed=7):
            for f in fn.CONVEX_CATALOGUE:
                for h in fn.PLAIN_CATALOGUE:
                    assert ineq.check_convex_theorem(f, h, a, b).holds


class TestTrace:
    def test_equal_matrices(self, rng):
        a = random_psd(rng, 3)
        r = ineq.check_trace_monotone(fn.ODD_CATALOGUE[0], MonotoneFn("log1p"), a, a)
        assert r.lhs[0] == 0 and r.rhs[0] == 0 and r.holds
        r = ineq.check_trace_convex(fn.ODD_CATALOGUE[1], ConvexFn("square"), a, a)
        assert r.margin == 0 and r.holds

    def test_random(self):
        for a, b in pairs(30, seed=8):
            for h in fn.ODD_CATALOGUE + fn.EVEN_CATALOGUE:
                for g in fn.MONOTONE_CATALOGUE:
                    assert ineq.check_trace_monotone(h, g, a, b).holds
            for h in fn.ODD_CATALOGUE:
                for f in fn.CONVEX_CATALOGUE:
                    assert ineq.check_trace_convex(h, f, a, b).holds

    def test_parity_required(self, rng):
        a = random_psd(rng, 2)
        with pytest.raises(ValueError):
            ineq.check_trace_monotone(PlainFn("min1"), MonotoneFn("log1p"), a, a)
        with pytest.raises(ValueError):
            ineq.check_trace_convex(fn.EVEN_CATALOGUE[0], ConvexFn("square"), a, a)
