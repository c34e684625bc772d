"""Tests for the closed-form vortex trajectories."""

import numpy as np
import pytest

from singularity_chains.errors import InvalidParameterError, ResonanceError
from singularity_chains.models import ApproxTrajectoryParams, HillPotential, RotationSense, TrajectoryParams
from singularity_chains.tools.hill_floquet import floquet_solution
from singularity_chains.tools.trajectory import (
    angular_velocity_first_approx,
    branch_arctan,
    chain_consistency_residual,
    circle_approx,
    exact_position_complex,
    exact_trajectory_table,
    first_approx_amplitudes,
    first_approx_basis,
    first_approx_complex,
    phase_first_approx,
    phase_of_time,
    position_first_approx,
    position_of_time,
    rho0_of_time,
    rot_u_on_trajectory,
    velocity_of_time,
)

POT = HillPotential(omega0=0.7, beta0=0.05 + 0.02j, beta1=-0.03, beta2=0.04j)
PARAMS = TrajectoryParams(pot=POT, c=1.3, mu=0.8, t0=0.4, V0=0.1 - 0.2j, X0=0.5, omega=1.2)
FREE = HillPotential(omega0=0.7)


@pytest.fixture(scope="module")
def fl():
    """Floquet solution of the perturbed potential."""
    return floquet_solution(POT)


@pytest.fixture(scope="module")
def fl_free():
    """Floquet solution of the constant potential Omega0 = 0.7."""
    return floquet_solution(FREE)


class TestBranchArctan:
    """Tests for the continuous arctan(mu tan s) branch."""

    def test_identity_for_unit_mu(self):
        """mu = 1 gives F(s) = s."""
        s = np.linspace(-10.0, 10.0, 41)
        np.testing.assert_allclose(branch_arctan(1.0, s), s, atol=1e-14)

    def test_continuous_and_increasing(self):
        """F is strictly increasing across the poles of tan."""
        s = np.linspace(0.0, 4.0 * np.pi, 2001)
        assert np.all(np.diff(branch_arctan(0.3, s)) > 0)
        assert branch_arctan(0.3, np.pi) == pytest.approx(np.pi)


class TestExactFamily:
    """Tests for the exact closed-form family."""

    def test_phase_without_beta(self, fl_free):
        """beta = 0 and mu = 1 give Phi = omega t / (2 Omega0)."""
        par = TrajectoryParams(pot=FREE, c=1.0, mu=1.0, t0=0.3, omega=1.0)
        t = np.linspace(0.0, 20.0, 11)
        np.testing.assert_allclose(phase_of_time(t, par, fl_free), t / 1.4, atol=1e-8)

    def test_inertial_motion_without_beta(self, fl_free):
        """beta = 0 leaves the inertial circle X0 + (i/omega)(e^{-i omega t} - 1) V0."""
        par = TrajectoryParams(pot=FREE, c=1.0, mu=0.6, t0=0.3, V0=1.0 + 0.5j, X0=-1.0j, omega=2.0)
        t = np.linspace(0.0, 10.0, 21)
        rotation = np.exp(-2.0j * t)
        X1, X2 = position_of_time(t, par, fl_free)
        V1, V2 = velocity_of_time(t, par, fl_free)
        np.testing.assert_allclose(X1 + 1j * X2, -1.0j + 0.5j * (rotation - 1.0) * (1.0 + 0.5j), atol=1e-12)
        np.testing.assert_allclose(V1 + 1j * V2, rotation * (1.0 + 0.5j), atol=1e-12)

    def test_geopotential_on_boundary(self):
        """Omega0 = 1/2, |c| = 2, mu = omega = 1 give rho0 = 1/2."""
        pot = HillPotential(omega0=0.5)
        par = TrajectoryParams(pot=pot, c=-2.0, mu=1.0, omega=1.0)
        assert rho0_of_time(0.7, par, floquet_solution(pot)) == pytest.approx(0.5)

    def test_starts_at_position_constant(self, fl):
        """X(0) = X0 when t0 = 0."""
        par = PARAMS.model_copy(update={"t0": 0.0})
        assert abs(complex(exact_position_complex(0.0, par, fl)) - 0.5) < 1e-12

    @pytest.mark.parametrize("t", [0.7, 3.1, 9.4])
    def test_velocity_is_position_derivative(self, fl, t):
        """Central differences of X reproduce V, also beyond one phase period."""
        h = 1e-4 / PARAMS.omega
        X_plus = exact_position_complex(t + h, PARAMS, fl)
        X_minus = exact_position_complex(t - h, PARAMS, fl)
        V1, V2 = velocity_of_time(t, PARAMS, fl)
        V = V1 + 1j * V2
        assert abs((X_plus - X_minus) / (2.0 * h) - V) < 1e-5 * max(1.0, abs(V))

    def test_phase_increases(self, fl):
        """Phi(t) is strictly increasing."""
        t = np.linspace(-5.0, 30.0, 701)
        assert np.all(np.diff(phase_of_time(t, PARAMS, fl)) > 0)

    def test_geopotential_positive_and_bounded(self, fl):
        """rho0 stays positive and bounded over twenty Coriolis periods."""
        t = np.linspace(0.0, 20.0 * 2.0 * np.pi / PARAMS.omega, 2001)
        rho0 = rho0_of_time(t, PARAMS, fl)
        assert np.all(rho0 > 0)
        assert np.max(rho0) < 10.0 * np.min(rho0) / PARAMS.mu**2

    def test_affine_in_inertial_velocity(self, fl):
        """X depends affinely on V0."""
        t = np.linspace(0.0, 8.0, 17)
        base = exact_position_complex(t, PARAMS.model_copy(update={"V0": 0j}), fl)
        once = exact_position_complex(t, PARAMS, fl)
        twice = exact_position_complex(t, PARAMS.model_copy(update={"V0": 2.0 * PARAMS.V0}), fl)
        np.testing.assert_allclose(twice - base, 2.0 * (once - base), atol=1e-12)

    def test_table_columns(self, fl):
        """Rows carry t, X1, X2, V1, V2, rho0."""
        t = np.array([0.0, 1.0, 2.0])
        table = exact_trajectory_table(t, PARAMS, fl)
        assert table.shape == (3, 6)
        np.testing.assert_allclose(table[:, 5], rho0_of_time(t, PARAMS, fl))

    def test_chain_consistency(self, fl):
        """The closed-form rho0 satisfies the p equation of the chain."""
        t = np.linspace(0.5, 10.0, 20)
        assert np.max(np.abs(chain_consistency_residual(t, PARAMS, fl, 1e-4))) < 1e-8

    def test_nonpositive_step_rejected(self, fl):
        """The difference step must be positive."""
        with pytest.raises(InvalidParameterError):
            chain_consistency_residual(1.0, PARAMS, fl, 0.0)


class TestRotU:
    """Tests for the curl on the trajectory."""

    def test_value(self):
        """-c rho0 - omega with c = 3, rho0 = 1/2, omega = 1."""
        assert rot_u_on_trajectory(0.5, 3.0, 1.0) == pytest.approx(-2.5)

    def test_zero_c_rejected(self):
        """c = 0 is outside the solution class."""
        with pytest.raises(InvalidParameterError):
            rot_u_on_trajectory(0.5, 0.0, 1.0)


class TestFirstApproximation:
    """Tests for the first-approximation family."""

    def test_center_only(self):
        """With A1 alone the track is the point A1."""
        apar = ApproxTrajectoryParams(A1=1.0 - 2.0j, omega0=0.4, mu=0.8, omega=1.0)
        X1, X2 = position_first_approx(np.linspace(0.0, 10.0, 5), apar)
        np.testing.assert_allclose(X1, 1.0)
        np.testing.assert_allclose(X2, -2.0)

    def test_circle_for_unit_mu(self):
        """With A0 and mu = 1 the track lies on the circle |X - A1| = |A0|."""
        apar = ApproxTrajectoryParams(A0=3.0 + 4.0j, A1=1.0, omega0=0.4, mu=1.0, t0=0.2, omega=2.0)
        X = first_approx_complex(np.linspace(0.0, 10.0, 50), apar)
        np.testing.assert_allclose(np.abs(X - 1.0), 5.0, rtol=1e-12)

    def test_resonance_rejected(self):
        """Omega0 = 1/2 and 3/2 are resonant."""
        for omega0 in (0.5, 1.5):
            apar = ApproxTrajectoryParams(A0=1.0, omega0=omega0, mu=0.8, omega=1.0)
            with pytest.raises(ResonanceError):
                position_first_approx(1.0, apar)

    def test_basis_shape(self):
        """The basis has one column per amplitude."""
        apar = ApproxTrajectoryParams(omega0=0.4, mu=0.8, omega=1.0)
        assert first_approx_basis(np.zeros(10), apar).shape == (10, 5)

    def test_phase_without_ellipticity(self):
        """mu = 1 gives Phi = omega t / (2 Omega0)."""
        apar = ApproxTrajectoryParams(omega0=0.4, mu=1.0, t0=0.7, omega=1.0)
        np.testing.assert_allclose(phase_first_approx(np.array([0.0, 4.0]), apar), [0.0, 5.0], atol=1e-14)

    def test_angular_velocity_matches_track(self):
        """The angle of X - A1 turns at (dPhi/dt - omega)/2."""
        apar = ApproxTrajectoryParams(A0=1.0j, A1=2.0, omega0=0.4, mu=0.7, t0=0.3, omega=1.5)
        t = np.linspace(0.0, 6.0, 6001)
        angle = np.unwrap(np.angle(first_approx_complex(t, apar) - 2.0))
        rate = np.gradient(angle, t)
        np.testing.assert_allclose(rate[1:-1], angular_velocity_first_approx(t, apar)[1:-1], atol=1e-5)


def scaled_params(norm):
    """Exact-family constants with |beta| = norm along a fixed direction."""
    direction = np.array([0.6 + 0.3j, -0.4 + 0.2j, 0.3 - 0.5j])
    beta = norm * direction / np.linalg.norm(direction)
    pot = HillPotential(omega0=0.7, beta0=beta[0], beta1=beta[1], beta2=beta[2])
    return TrajectoryParams(pot=pot, c=1.3, mu=0.8, t0=0.4, V0=0.1 - 0.2j, X0=0.5, omega=1.2)


def first_approx_gap(norm, t):
    """Largest distance between the exact track and its first approximation."""
    par = scaled_params(norm)
    exact = exact_position_complex(t, par, floquet_solution(par.pot))
    return float(np.max(np.abs(exact - first_approx_complex(t, first_approx_amplitudes(par)))))


class TestFirstApproxAmplitudes:
    """Tests for the map from exact-family constants to A0..A4."""

    def test_inertial_motion_without_beta(self, fl_free):
        """beta = 0 leaves only A1 and A2, and the families agree."""
        par = TrajectoryParams(pot=FREE, c=1.3, mu=0.8, t0=0.4, V0=0.1 - 0.2j, X0=0.5, omega=1.2)
        apar = first_approx_amplitudes(par)
        assert (apar.A0, apar.A3, apar.A4) == (0j, 0j, 0j)
        assert apar.A1 == pytest.approx(0.5 - 1j * (0.1 - 0.2j) / 1.2)
        assert apar.A2 == pytest.approx(1j * (0.1 - 0.2j) / 1.2)
        t = np.linspace(0.0, 8.0, 33)
        np.testing.assert_allclose(first_approx_complex(t, apar), exact_position_complex(t, par, fl_free), atol=1e-10)

    def test_amplitudes(self):
        """A0, A3 and A4 follow the closed forms and keep the phase constants."""
        par = scaled_params(0.02)
        apar = first_approx_amplitudes(par)
        scale = np.sqrt(0.7) / np.sqrt(0.8 * 1.3 * 1.2)
        assert apar.A0 == pytest.approx(0.5j * scale * par.pot.beta0 / (0.49 - 0.25))
        assert apar.A3 == pytest.approx(-1j * scale * np.conj(par.pot.beta1) / (0.49 - 2.25))
        assert apar.A4 == pytest.approx(1j * scale * par.pot.beta2 / (0.49 - 0.25))
        assert (apar.omega0, apar.mu, apar.t0, apar.omega) == (0.7, 0.8, 0.4, 1.2)

    def test_close_to_exact(self):
        """At |beta| = 0.02 the gap is small next to the oscillating part."""
        apar = first_approx_amplitudes(scaled_params(0.02))
        size = abs(apar.A0) + abs(apar.A3) + abs(apar.A4)
        assert first_approx_gap(0.02, np.linspace(0.0, 8.0, 81)) < 0.05 * size

    def test_gap_shrinks_faster_than_square(self):
        """Halving |beta| shrinks the gap by more than four."""
        t = np.linspace(0.0, 8.0, 81)
        ratio = first_approx_gap(0.02, t) / first_approx_gap(0.01, t)
        assert ratio > 5.0

    def test_resonance_rejected(self):
        """Resonant Omega0 has no first approximation."""
        par = TrajectoryParams(pot=HillPotential(omega0=1.5, beta1=0.01), c=1.0, mu=0.8, omega=1.0)
        with pytest.raises(ResonanceError):
            first_approx_amplitudes(par)

    def test_linear_in_amplitudes(self):
        """The track is linear in A0..A4 for fixed Omega0, mu, t0 and omega."""
        shape = {"omega0": 0.45, "mu": 0.7, "t0": 0.3, "omega": 1.1}
        one = ApproxTrajectoryParams(A0=1.0 + 0.5j, A2=-0.3j, A4=0.2, **shape)
        two = ApproxTrajectoryParams(A0=-0.4j, A1=2.0, A3=0.1 + 0.1j, **shape)
        both = ApproxTrajectoryParams(
            **{name: 2.0 * getattr(one, name) - 3.0 * getattr(two, name) for name in ("A0", "A1", "A2", "A3", "A4")},
            **shape,
        )
        t = np.linspace(0.0, 12.0, 49)
        expected = 2.0 * first_approx_complex(t, one) - 3.0 * first_approx_complex(t, two)
        np.testing.assert_allclose(first_approx_complex(t, both), expected, atol=1e-13)


class TestCircleApprox:
    """Tests for the circle summary."""

    def test_counterclockwise(self):
        """mu > 2 Omega0 turns counterclockwise."""
        circle = circle_approx(ApproxTrajectoryParams(A0=3 + 4j, A1=1 - 2j, omega0=0.4, mu=0.9, omega=2.0))
        assert circle.center == (1.0, -2.0)
        assert circle.radius == pytest.approx(5.0)
        assert circle.sense == RotationSense.COUNTERCLOCKWISE
        assert circle.angular_velocity_at_t0 == pytest.approx(0.125)
        assert circle.mean_angular_velocity == pytest.approx(0.25)

    def test_clockwise(self):
        """mu < 2 Omega0 turns clockwise."""
        circle = circle_approx(ApproxTrajectoryParams(A0=1.0, omega0=0.6, mu=0.9, omega=2.0))
        assert circle.sense == RotationSense.CLOCKWISE
        assert circle.angular_velocity_at_t0 < 0

    def test_indeterminate(self):
        """mu = 2 Omega0 has no definite sense."""
        circle = circle_approx(ApproxTrajectoryParams(A0=1.0, omega0=0.4, mu=0.8, omega=2.0))
        assert circle.sense == RotationSense.INDETERMINATE

    def test_rate_at_t0_agrees(self):
        """The circle's rate at t0 equals the track's angular velocity there."""
        apar = ApproxTrajectoryParams(A0=1.0, omega0=0.35, mu=0.6, t0=1.1, omega=1.7)
        assert angular_velocity_first_approx(1.1, apar) == pytest.approx(circle_approx(apar).angular_velocity_at_t0)
