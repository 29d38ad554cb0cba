import numpy as np
import pytest

from miq.generators import (
    PAIR_KINDS, EnsembleSpec, complex_gaussian, derive_seed, is_contraction,
    random_contraction, random_pair, random_psd, random_unitary, rng_for,
)
from miq.linalg import eig_hermitian, singular_values
from miq.orders import loewner_leq


class TestSeeds:
    def test_derive_seed_is_stable(self):
        assert derive_seed(42, "ando", 3, 7) == derive_seed(42, "ando", 3, 7)
        assert derive_seed(42, "ando", 3, 7) != derive_seed(42, "ando", 3, 8)
        assert 0 <= derive_seed(2**63 - 1, "x") < 2**63

    def test_string_and_int_keys_differ(self):
        assert derive_seed(1, "1") != derive_seed(1, 1)

    def test_gaussian_fill_order(self):
        # real block first, then imaginary block, both row-major
        g = complex_gaussian(rng_for(3), 2, 3)
        raw = rng_for(3).standard_normal(12)
        assert np.array_equal(g.real.ravel(), raw[:6])
        assert np.array_equal(g.imag.ravel(), raw[6:])


class TestRandomPsd:
    def test_identity_spectrum(self):
        a = random_psd(EnsembleSpec("spectral", 4, seed=1, eigenvalues=(1.0,) * 4))
        assert np.allclose(a, np.eye(4), atol=1e-14)

    def test_rank_deficient_full(self):
        assert np.array_equal(random_psd(EnsembleSpec("rank_deficient", 3, seed=2, zeros=3)), np.zeros((3, 3)))

    def test_rank_deficient_has_exact_zeros(self):
        a = random_psd(EnsembleSpec("rank_deficient", 6, seed=4, zeros=2))
        w = eig_hermitian(a).eigenvalues
        assert np.all(w[:4] > 1e-6) and np.all(np.abs(w[4:]) < 1e-14)

    def test_wishart_seed_10(self):
        a = random_psd(EnsembleSpec("wishart", 5, seed=10))
        w = eig_hermitian(a).eigenvalues
        assert w[-1] >= -1e-10 * max(1, w[0])

    @pytest.mark.parametrize("kind", ["wishart", "spectral", "rank_deficient"])
    def test_deterministic(self, kind):
        spec = EnsembleSpec(kind, 5, seed=99)
        assert np.array_equal(random_psd(spec), random_psd(spec))
        assert EnsembleSpec.from_dict(spec.to_dict()) == spec

    def test_bad_params(self):
        with pytest.raises(ValueError):
            random_psd(EnsembleSpec("gumbel", 3, seed=0))
        with pytest.raises(ValueError):
            random_psd(EnsembleSpec("wishart", 0, seed=0))
        with pytest.raises(ValueError):
            random_psd(EnsembleSpec("spectral", 2, seed=0, eigenvalues=(1.0, -1.0)))

    def test_unitary(self):
        u = random_unitary(rng_for(5), 7)
        assert np.allclose(u.conj().T @ u, np.eye(7), atol=1e-13)


class TestContraction:
    def test_norm_bound(self):
        for seed in range(500):
            c = random_contraction(3, 4, seed=seed)
            assert c.shape == (3, 4)
            assert singular_values(c)[0] <= 1 + 1e-12

    def test_zero_scale(self):
        assert np.array_equal(random_contraction(3, seed=1, scale=0.0), np.zeros((3, 3)))

    def test_identity_predicate(self):
        assert is_contraction(np.eye(4))
        assert not is_contraction(2 * np.eye(4))


class TestPairs:
    def test_near_pair_zero_delta(self):
        a, b = random_pair("near_pair", 4, delta=0.0, seed=3)
        assert np.array_equal(a, b)

    def test_commuting(self):
        for seed in range(50):
            a, b = random_pair("commuting_pair", 5, seed=seed)
            assert np.linalg.norm(a @ b - b @ a) <= 1e-10

    def test_near_pair_ordered(self):
        for seed in range(300):
            a, b = random_pair("near_pair", 4, delta=0.7, seed=seed)
            assert loewner_leq(a, b)

    @pytest.mark.parametrize("kind", PAIR_KINDS)
    def test_all_kinds_psd_and_deterministic(self, kind):
        a, b = random_pair(kind, 4, seed=11)
        a2, b2 = random_pair(kind, 4, seed=11)
        assert np.array_equal(a, a2) and np.array_equal(b, b2)
        for m in (a, b):
            assert eig_hermitian(m).eigenvalues[-1] >= -1e-12

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            random_pair("nope", 2)
        with pytest.raises(ValueError):
            random_pair("near_pair", 2, delta=-1)
