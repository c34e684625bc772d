"""Tests for the Hill equation: potential, monodromy, stability and Floquet solution."""

import logging

import numpy as np
import pytest

from singularity_chains.errors import DegeneracyError, InvalidMonodromyError, InvalidParameterError, StabilityError
from singularity_chains.models import HillPotential, StabilityClass
from singularity_chains.tools.hill_floquet import (
    classify_stability,
    floquet_solution,
    monodromy,
    potential_value,
)

SMALL = HillPotential(omega0=0.7, beta0=0.05, beta1=0.03 - 0.02j, beta2=0.04j)
# q = 1/4 + cos(Phi)/4 sits inside the first parametric resonance tongue
RESONANT = HillPotential(omega0=0.5, beta1=0.5, beta2=0.5)


@pytest.fixture(scope="module")
def small_solution():
    """Floquet solution of a weakly perturbed potential."""
    return floquet_solution(SMALL)


class TestPotential:
    """Tests for potential evaluation."""

    def test_constant_potential(self):
        """Vanishing betas leave Omega0^2."""
        assert potential_value(HillPotential(omega0=0.7), 1.3) == pytest.approx(0.49)

    def test_direct_evaluation(self):
        """beta0 = beta1 = 1, Omega0 = 1 at Phi = 0 gives 1 + 1/2 + 1."""
        assert potential_value(HillPotential(omega0=1.0, beta0=1.0, beta1=1.0), 0.0) == pytest.approx(2.5)

    def test_periodic(self):
        """q(Phi + 2 pi) = q(Phi)."""
        Phi = np.linspace(0.0, 3.0, 7)
        np.testing.assert_allclose(potential_value(SMALL, Phi + 2.0 * np.pi), potential_value(SMALL, Phi))

    def test_from_reals_needs_six_values(self):
        """beta is given as six reals."""
        assert HillPotential.from_reals(0.5, [1, 2, 0, 0, 0, -1]).beta2 == -1j
        with pytest.raises(ValueError):
            HillPotential.from_reals(0.5, [1.0, 2.0])


class TestMonodromy:
    """Tests for the monodromy matrix."""

    def test_boundary_constant_potential(self):
        """Omega0 = 1/2 gives trace -2."""
        assert np.trace(monodromy(HillPotential(omega0=0.5))) == pytest.approx(-2.0, abs=1e-8)

    def test_quarter_frequency(self):
        """Omega0 = 1/4 gives trace 0."""
        assert np.trace(monodromy(HillPotential(omega0=0.25))) == pytest.approx(0.0, abs=1e-8)

    def test_unit_determinant(self):
        """det M = 1 for any potential."""
        assert np.linalg.det(monodromy(SMALL)) == pytest.approx(1.0, abs=1e-9)

    def test_nonpositive_tolerance(self):
        """Tolerances must be positive."""
        with pytest.raises(InvalidParameterError):
            monodromy(SMALL, tol=0.0)


class TestClassifyStability:
    """Tests for trace classification."""

    def test_rotation_is_strongly_stable(self):
        """A quarter-turn rotation has index 1/4."""
        report = classify_stability(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        assert report.stability == StabilityClass.STRONGLY_STABLE
        assert report.index == pytest.approx(0.25)

    def test_minus_identity_is_boundary(self):
        """trace -2 lies on the boundary."""
        report = classify_stability(-np.eye(2))
        assert report.stability == StabilityClass.BOUNDARY
        assert report.index == pytest.approx(0.5)

    def test_hyperbolic_is_unstable(self):
        """trace 3 is unstable and has no index."""
        report = classify_stability(np.array([[3.0, 1.0], [-1.0, 0.0]]))
        assert report.stability == StabilityClass.UNSTABLE
        assert report.index is None

    def test_determinant_checked(self):
        """A matrix with det far from one is no monodromy."""
        with pytest.raises(InvalidMonodromyError):
            classify_stability(2.0 * np.eye(2))


class TestFloquetSolution:
    """Tests for the normalized Floquet solution."""

    def test_constant_potential_exact(self):
        """Omega0 = 0.7 gives g = 1/sqrt(0.7) and theta = 0.7 Phi."""
        fl = floquet_solution(HillPotential(omega0=0.7))
        np.testing.assert_allclose(fl.g, 1.0 / np.sqrt(0.7), rtol=1e-10)
        np.testing.assert_allclose(fl.theta, 0.7 * fl.phi, atol=1e-9)
        assert fl.quasi_momentum == pytest.approx(0.7, abs=1e-10)

    def test_boundary_constant_potential(self):
        """Omega0 = 1/2 takes the analytic constant-potential solution."""
        fl = floquet_solution(HillPotential(omega0=0.5))
        assert fl.stability == StabilityClass.BOUNDARY
        assert fl.quasi_momentum == pytest.approx(0.5)

    def test_boundary_with_complex_multipliers(self, caplog):
        """A non-constant potential inside the boundary band keeps its Floquet solution."""
        # beta1 alone leaves q constant, so the exact solution is known
        pot = HillPotential(omega0=0.501, beta1=0.01)
        with caplog.at_level(logging.WARNING, logger="singularity_chains.tools.hill_floquet"):
            fl = floquet_solution(pot, boundary_tol=1e-4)
        assert fl.stability == StabilityClass.BOUNDARY
        assert fl.quasi_momentum == pytest.approx(0.501, abs=1e-8)
        np.testing.assert_allclose(fl.g, 1.0 / np.sqrt(0.501), rtol=1e-8)
        assert "complex" in caplog.text

    def test_boundary_coexistence(self, caplog):
        """M = -I on the boundary gives the solution matching the constant potential."""
        pot = HillPotential(omega0=0.5, beta1=0.1)
        with caplog.at_level(logging.WARNING, logger="singularity_chains.tools.hill_floquet"):
            fl = floquet_solution(pot)
        assert fl.stability == StabilityClass.BOUNDARY
        assert fl.trace == pytest.approx(-2.0, abs=1e-9)
        assert fl.quasi_momentum == pytest.approx(0.5, abs=1e-8)
        np.testing.assert_allclose(fl.g, np.sqrt(2.0), rtol=1e-8)
        np.testing.assert_allclose(fl.wronskian(), 2j, atol=1e-8)
        assert "every solution is a Floquet solution" in caplog.text

    def test_boundary_jordan_block(self):
        """q = 0 has a single eigenvector and no Floquet basis."""
        with pytest.raises(DegeneracyError, match="no Floquet basis"):
            floquet_solution(HillPotential(omega0=0.0, beta1=0.1))

    def test_wronskian_normalization(self, small_solution):
        """conj(y) y' - y conj(y)' = 2i on the whole grid."""
        np.testing.assert_allclose(small_solution.wronskian(), 2j, atol=1e-8)

    def test_phase_and_amplitude(self, small_solution):
        """theta starts at zero, increases, and g is periodic."""
        assert small_solution.theta[0] == 0.0
        assert np.all(np.diff(small_solution.theta) > 0)
        assert small_solution.g[-1] == pytest.approx(small_solution.g[0], rel=1e-8)
        np.testing.assert_allclose(small_solution.theta_derivative(small_solution.phi), small_solution.g**-2, rtol=1e-6)

    def test_quasi_momentum_close_to_base_frequency(self, small_solution):
        """Small betas shift Omega by at most O(|beta|^2)."""
        assert abs(small_solution.quasi_momentum - SMALL.omega0) < SMALL.beta_norm() ** 2
        assert small_solution.kappa == pytest.approx(small_solution.quasi_momentum, abs=1e-6)

    def test_quasi_momentum_shift_is_at_least_quadratic(self):
        """Halving |beta| shrinks |Omega - Omega0| at least fourfold."""
        direction = np.array([0.6 + 0.3j, -0.4 + 0.2j, 0.3 - 0.5j])
        shifts = []
        for norm in (0.2, 0.1):
            beta = norm * direction / np.linalg.norm(direction)
            pot = HillPotential(omega0=0.7, beta0=beta[0], beta1=beta[1], beta2=beta[2])
            shifts.append(abs(floquet_solution(pot).quasi_momentum - 0.7))
        assert shifts[0] < 0.2**2
        assert shifts[0] > 1e-9
        assert shifts[0] / shifts[1] > 4.0

    def test_invert_theta(self, small_solution):
        """invert_theta undoes theta_at, also beyond one period."""
        tau = np.array([0.3, 5.0, 20.0])
        np.testing.assert_allclose(small_solution.theta_at(small_solution.invert_theta(tau)), tau, atol=1e-10)

    def test_unstable_rejected(self):
        """A potential inside a resonance tongue has no Floquet solution."""
        assert classify_stability(monodromy(RESONANT)).stability == StabilityClass.UNSTABLE
        with pytest.raises(StabilityError):
            floquet_solution(RESONANT)

    def test_grid_size(self):
        """Fewer than 8 grid intervals are rejected."""
        with pytest.raises(InvalidParameterError):
            floquet_solution(SMALL, grid_size=4)
