import csv
import io
import math

import numpy as np
import pytest

from complementarity.errors import DomainError, EmptyPattern, NegativeCorrected
from complementarity.interferometer import (
    FringeData,
    corrected_two_particle_visibility,
    fringes_to_csv,
    matched_transducers,
    simulate_fringes,
    verify_triality_interferometric,
    visibility_from_fringes,
)
from complementarity.localops import maximize_visibility
from complementarity.measures import concurrence_mixed, concurrence_pure, local_quantities
from complementarity.qstate import make_pure, validate_density
from complementarity.sampling import bell_mixture, haar_pure, schmidt_state

PLUS_PLUS = make_pure([1, 1, 1, 1])


class TestSimulate:
    def test_bell_pattern(self, bell_state):
        f = simulate_fringes(bell_state, grid_n=64)
        np.testing.assert_allclose(f.marginal1, 0.5, atol=1e-12)
        np.testing.assert_allclose(f.marginal2, 0.5, atol=1e-12)
        s = f.phi1[:, None] + f.phi2[None, :]
        # <00|T(phi1) x T(phi2)|Phi+> = (1 - e^{i(phi1+phi2)}) / (2 sqrt 2)
        amp = (1 - np.exp(1j * s)) / (2 * math.sqrt(2))
        np.testing.assert_allclose(f.joint, np.abs(amp) ** 2, atol=1e-12)
        np.testing.assert_allclose(f.joint, 0.25 * (1 - np.cos(s)), atol=1e-12)

    def test_product_factorizes(self, product00):
        f = simulate_fringes(product00, grid_n=32)
        np.testing.assert_allclose(f.joint, np.outer(f.marginal1, f.marginal2), atol=1e-12)

    def test_maximally_mixed(self):
        f = simulate_fringes(validate_density(np.eye(4) / 4), grid_n=16)
        np.testing.assert_allclose(f.joint, 0.25, atol=1e-15)
        np.testing.assert_allclose(f.marginal1, 0.5, atol=1e-15)
        np.testing.assert_allclose(f.marginal2, 0.5, atol=1e-15)

    def test_probability_invariants(self, src):
        for _ in range(10):
            f = simulate_fringes(haar_pure(src), grid_n=24)
            assert f.ports.min() >= -1e-12 and f.ports.max() <= 1 + 1e-12
            np.testing.assert_allclose(f.ports.sum(axis=(2, 3)), 1, atol=1e-12)
            p1 = f.ports[:, :, 0, 0] + f.ports[:, :, 0, 1]
            p2 = f.ports[:, :, 0, 0] + f.ports[:, :, 1, 0]
            np.testing.assert_allclose(p1, f.marginal1[:, None] + 0 * p1, atol=1e-12)
            np.testing.assert_allclose(p2, f.marginal2[None, :] + 0 * p2, atol=1e-12)

    def test_phase_grid(self):
        f = simulate_fringes(PLUS_PLUS, grid_n=8)
        assert len(f.phase_grid) == 64
        assert f.phase_grid[1] == (0.0, pytest.approx(math.pi / 4))

    def test_grid_too_small(self, bell_state):
        with pytest.raises(ValueError):
            simulate_fringes(bell_state, grid_n=4)

    def test_non_unitary_transducer(self, bell_state):
        with pytest.raises(ValueError):
            simulate_fringes(bell_state, lambda p: np.eye(2) * 2, grid_n=8)


class TestVisibility:
    phases = 2 * math.pi * np.arange(64) / 64

    def test_constant(self):
        assert visibility_from_fringes(np.full(16, 0.5)) == 0

    def test_full(self):
        assert visibility_from_fringes(0.5 * (1 + np.cos(self.phases))) == pytest.approx(1, abs=1e-12)

    def test_partial(self):
        # max 0.8 at phi=0, min 0.2 at phi=pi, both on the grid
        v = visibility_from_fringes(0.5 * (1 + 0.6 * np.cos(self.phases)))
        assert v == pytest.approx(0.6, abs=1e-3)

    def test_refined_off_grid(self):
        shifted = 0.5 * (1 + 0.6 * np.cos(self.phases + 0.04))
        assert visibility_from_fringes(shifted, refine=True) == pytest.approx(0.6, abs=1e-12)
        assert abs(visibility_from_fringes(shifted) - 0.6) > 1e-6

    def test_zero_pattern(self):
        assert visibility_from_fringes(np.zeros(8)) == 0

    def test_empty(self):
        with pytest.raises(EmptyPattern):
            visibility_from_fringes([])
        with pytest.raises(EmptyPattern):
            visibility_from_fringes([0.1, 0.2])


class TestTwoParticleVisibility:
    def test_bell(self, bell_state):
        assert simulate_fringes(bell_state, grid_n=64).v12 == pytest.approx(1, abs=1e-6)

    def test_product(self):
        f = simulate_fringes(PLUS_PLUS, grid_n=64)
        corrected = f.joint - np.outer(f.marginal1, f.marginal2) + 0.25
        np.testing.assert_allclose(corrected, 0.25, atol=1e-12)
        assert f.v12 == pytest.approx(0, abs=1e-9)

    def test_separable_mixture(self):
        rho = bell_mixture()
        assert concurrence_mixed(rho) <= 1e-10
        assert simulate_fringes(rho, grid_n=64).v12 > 0.1

    @pytest.mark.parametrize("theta", [0.1, 0.3, 0.6, math.pi / 4, 1.2])
    def test_schmidt_equals_c(self, theta):
        s = schmidt_state(theta)
        f = simulate_fringes(s, grid_n=64)
        C = concurrence_pure(s)
        assert f.v12 == pytest.approx(C, abs=1e-6)
        assert corrected_two_particle_visibility(f, path="diagonal") == pytest.approx(C, abs=1e-6)

    def test_symmetric_transducers_bound(self, src):
        # V12^2 + V_k^2 <= 1 with beam splitters and phase shifters only
        for _ in range(10):
            s = haar_pure(src)
            f = simulate_fringes(s, grid_n=64)
            assert f.v12 <= concurrence_pure(s) + 1e-9
            assert f.v12**2 + f.v1**2 <= 1 + 1e-6
            assert f.v12**2 + f.v2**2 <= 1 + 1e-6

    def test_negative_corrected(self):
        n = 8
        phases = 2 * math.pi * np.arange(n) / n
        joint = np.zeros((n, n))
        marginal = np.ones(n)
        f = FringeData(phases, phases, joint, marginal, marginal, np.zeros((n, n, 2, 2)), 0.0, 0.0)
        with pytest.raises(NegativeCorrected):
            corrected_two_particle_visibility(f)

    def test_unknown_path(self, bell_state):
        with pytest.raises(ValueError):
            corrected_two_particle_visibility(simulate_fringes(bell_state, grid_n=8), path="x")


class TestTriality:
    def test_bell(self, bell_state):
        assert max(map(abs, verify_triality_interferometric(bell_state, 64))) <= 1e-6

    def test_product(self, product00):
        assert max(map(abs, verify_triality_interferometric(product00, 64))) <= 1e-6

    def test_random(self, src):
        for _ in range(5):
            assert max(map(abs, verify_triality_interferometric(haar_pure(src), 64))) <= 1e-4

    def test_marginal_visibility_matches(self, src):
        for _ in range(10):
            s = haar_pure(src)
            f = simulate_fringes(s, grid_n=256)
            assert f.v1 == pytest.approx(local_quantities(s, 1)[0], abs=1e-4)
            assert f.v2 == pytest.approx(local_quantities(s, 2)[0], abs=1e-4)

    def test_generalized_visibility_equality(self, src):
        # visibility-maximizing basis on k, matched partner: V12^2 + V_k^2 = 1
        for _ in range(5):
            s = haar_pure(src)
            for k in (1, 2):
                _, U = maximize_visibility(s, k)
                t1, t2 = matched_transducers(s, k, U.factor(k))
                f = simulate_fringes(s, t1, t2, grid_n=64)
                v_k = f.v1 if k == 1 else f.v2
                assert v_k == pytest.approx(local_quantities(s, k)[2], abs=1e-4)
                assert f.v12**2 + v_k**2 == pytest.approx(1, abs=1e-4)

    def test_coarse_grid_rejected(self, bell_state):
        with pytest.raises(ValueError):
            verify_triality_interferometric(bell_state, 32)

    def test_mixed_rejected(self):
        with pytest.raises(DomainError):
            verify_triality_interferometric(bell_mixture(), 64)


class TestCsv:
    def test_format(self, bell_state):
        f = simulate_fringes(bell_state, grid_n=8)
        rows = list(csv.reader(io.StringIO(fringes_to_csv(f))))
        assert rows[0] == ["phi1", "phi2", "p12", "p1", "p2"]
        assert len(rows) == 1 + 64
        assert rows[2][1] == f"{math.pi / 4:.12g}"
        assert all(len(r) == 5 for r in rows)
        assert float(rows[5][2]) == pytest.approx(f.joint[0, 4], abs=1e-12)

    def test_stream(self, bell_state, tmp_path):
        f = simulate_fringes(bell_state, grid_n=8)
        path = tmp_path / "f.csv"
        with open(path, "w", newline="") as fh:
            assert fringes_to_csv(f, fh) is None
        assert path.read_text() == fringes_to_csv(f)
