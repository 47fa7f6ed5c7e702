import math

import numpy as np
import pytest
from scipy import stats

from complementarity.errors import BadRank, DomainError
from complementarity.localops import unitarity_residual
from complementarity.measures import concurrence_mixed, concurrence_pure
from complementarity.qstate import purity, validate_density
from complementarity.sampling import (
    SeededSource,
    haar_pure,
    random_density,
    random_local_unitary,
    werner,
)
from complementarity.localops import apply_local

from conftest import werner_oracle

GOLDEN_HAAR_SEED42 = np.array(
    [
        -0.43130943029974567 - 0.05186022535592948j,
        0.36033335345084344 - 0.00235445007137156j,
        -0.42545761067306215 + 0.36944219628018266j,
        -0.392817324710317 - 0.45785353318691957j,
    ]
)
GOLDEN_SU2_SEED42 = np.array(
    [
        [-0.2006419508365422 - 0.7096120995981471j, -0.6035049772315267 - 0.3032741632997942j],
        [0.6035049772315267 - 0.3032741632997942j, -0.2006419508365422 + 0.7096120995981471j],
    ]
)

# mean concurrence of Haar two-qubit states from a separate script:
# PCG64(2024), 4x10^5 first columns of QR-Haar unitaries (3 pi / 16 = 0.58905)
MEAN_C_REFERENCE = 0.5888937652987092
MEAN_C_REFERENCE_SE = 0.0003643880335860337


class TestSource:
    def test_golden_first_draws(self):
        np.testing.assert_allclose(haar_pure(SeededSource(42)).amplitudes, GOLDEN_HAAR_SEED42, atol=1e-15)
        np.testing.assert_allclose(random_local_unitary(SeededSource(42)).u1, GOLDEN_SU2_SEED42, atol=1e-15)

    def test_identical_streams(self):
        a, b = SeededSource(7), SeededSource(7)
        for _ in range(50):
            np.testing.assert_array_equal(haar_pure(a).amplitudes, haar_pure(b).amplitudes)
            np.testing.assert_array_equal(random_density(a).entries, random_density(b).entries)

    def test_children_differ(self):
        src = SeededSource(7)
        assert not np.array_equal(
            haar_pure(src.child(1)).amplitudes, haar_pure(src.child(2)).amplitudes
        )
        np.testing.assert_array_equal(
            haar_pure(src.child(3)).amplitudes, haar_pure(SeededSource(7, 3)).amplitudes
        )

    def test_seed_range(self):
        SeededSource(2**64 - 1)
        with pytest.raises(ValueError):
            SeededSource(-1)


class TestHaarPure:
    def test_normalized(self, src):
        for _ in range(100):
            assert abs(np.linalg.norm(haar_pure(src).amplitudes) - 1) <= 1e-12

    def test_beta_law(self):
        src = SeededSource(11)
        weights = np.array([abs(haar_pure(src).amplitudes[0]) ** 2 for _ in range(10_000)])
        result = stats.kstest(weights, stats.beta(1, 3).cdf)
        # 1% critical value of the one-sample KS statistic
        assert result.statistic < 1.63 / math.sqrt(len(weights))

    def test_unitary_invariance(self):
        # a fixed unitary leaves the |first amplitude|^2 law unchanged
        src = SeededSource(12)
        q, _ = np.linalg.qr(SeededSource(99).complex_normal((4, 4)))
        weights = np.array([abs((q @ haar_pure(src).amplitudes)[0]) ** 2 for _ in range(10_000)])
        assert stats.kstest(weights, stats.beta(1, 3).cdf).statistic < 1.63 / math.sqrt(10_000)

    def test_mean_concurrence(self):
        src = SeededSource(13)
        cs = np.array([concurrence_pure(haar_pure(src)) for _ in range(100_000)])
        se = cs.std(ddof=1) / math.sqrt(len(cs))
        assert abs(cs.mean() - MEAN_C_REFERENCE) <= 3 * math.hypot(se, MEAN_C_REFERENCE_SE)


class TestRandomDensity:
    def test_rank_one_pure(self, src):
        for _ in range(20):
            assert purity(random_density(src, 1)) == pytest.approx(1, abs=1e-10)

    def test_full_rank(self, src):
        for _ in range(20):
            assert np.linalg.eigvalsh(random_density(src, 4).entries).min() > 0

    @pytest.mark.parametrize("rank", [0, 5, 2.5])
    def test_bad_rank(self, src, rank):
        with pytest.raises(BadRank):
            random_density(src, rank)

    def test_passes_validation(self, src):
        for rank in (1, 2, 3, 4):
            rho = random_density(src, rank)
            validate_density(rho.entries)
            assert np.linalg.matrix_rank(rho.entries, tol=1e-10) == rank


class TestWerner:
    def test_endpoints(self):
        np.testing.assert_allclose(werner(0).entries, np.eye(4) / 4, atol=1e-16)
        assert concurrence_mixed(werner(0)) == 0
        assert concurrence_mixed(werner(1)) == pytest.approx(1, abs=1e-12)

    def test_entries(self):
        for p in (0.2, 0.6):
            np.testing.assert_allclose(werner(p).entries, werner_oracle(p), atol=1e-16)

    def test_p06(self):
        assert concurrence_mixed(werner(0.6)) == pytest.approx(0.4, abs=1e-9)

    def test_closed_form_grid(self):
        for p in np.linspace(0, 1, 101):
            assert concurrence_mixed(werner(p)) == pytest.approx(max(0, (3 * p - 1) / 2), abs=1e-9)

    @pytest.mark.parametrize("p", [-0.01, 1.01])
    def test_domain(self, p):
        with pytest.raises(DomainError):
            werner(p)


class TestLocalUnitaries:
    def test_unitary(self, src):
        for _ in range(100):
            U = random_local_unitary(src)
            assert unitarity_residual(U.u1) <= 1e-12
            assert unitarity_residual(U.u2) <= 1e-12
            assert abs(np.linalg.det(U.u1) - 1) <= 1e-12

    def test_reproducible(self):
        a, b = random_local_unitary(SeededSource(5)), random_local_unitary(SeededSource(5))
        np.testing.assert_array_equal(a.matrix, b.matrix)

    def test_bell_drift(self, src, bell_rho):
        drift = max(
            abs(concurrence_mixed(apply_local(random_local_unitary(src), bell_rho)) - 1)
            for _ in range(1000)
        )
        assert drift <= 1e-10

    def test_haar_rotation_of_pole(self):
        # Haar SU(2) sends |0> to a uniformly distributed Bloch point: z uniform on [-1, 1]
        src = SeededSource(21)
        z = [abs(random_local_unitary(src).u1[0, 0]) ** 2 * 2 - 1 for _ in range(5000)]
        assert stats.kstest(z, stats.uniform(-1, 2).cdf).statistic < 1.63 / math.sqrt(5000)
