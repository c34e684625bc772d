"""Tests for model validation and serialization."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from singularity_chains.models import (
    FitBounds,
    FloquetSolution,
    HillPotential,
    HopfChainState,
    ObservedTrack,
    RunConfig,
    StabilityClass,
    TrajectoryParams,
    VortexChainState,
    VortexInitialConditions,
    VortexSeries,
)


class TestComplexNumber:
    """Tests for complex constants in JSON documents."""

    @pytest.mark.parametrize("value", [[1.0, 2.0], (1, 2), "1+2j", "1 + 2j", 1 + 2j])
    def test_accepted_forms(self, value):
        """Pairs, strings and complex numbers are accepted."""
        assert HillPotential(omega0=1.0, beta0=value).beta0 == 1 + 2j

    def test_real_number(self):
        """A real number has zero imaginary part."""
        assert HillPotential(omega0=1.0, beta1=3).beta1 == 3 + 0j

    def test_boolean_rejected(self):
        """Booleans are not numbers here."""
        with pytest.raises(ValidationError):
            HillPotential(omega0=1.0, beta2=True)

    def test_serialized_as_pair(self):
        """Complex constants are written as [re, im]."""
        data = json.loads(HillPotential(omega0=0.4, beta0=1 - 2j).model_dump_json())
        assert data["beta0"] == [1.0, -2.0]
        assert data["beta1"] == [0.0, 0.0]


class TestHopfChainState:
    """Tests for the shock-front chain state."""

    def test_order_from_coefficients(self):
        """n defaults to len(H) - 1."""
        assert HopfChainState(H=[0.0, 1.0, 2.0], A=[1.0, 0.0, 0.0]).n == 2

    def test_length_mismatch(self):
        """H and A must have n + 1 entries each."""
        with pytest.raises(ValidationError):
            HopfChainState(H=[0.0, 1.0], A=[1.0])
        with pytest.raises(ValidationError):
            HopfChainState(H=[0.0], A=[1.0], n=2)

    def test_non_finite_rejected(self):
        """Chain states are finite."""
        with pytest.raises(ValidationError):
            HopfChainState(H=[float("nan")], A=[1.0])

    def test_vector_round_trip(self):
        """as_vector and from_vector are inverse."""
        state = HopfChainState(phi=0.3, H=[0.2, 0.5], A=[1.0, -0.3])
        assert HopfChainState.from_vector(state.as_vector(), 1) == state


class TestVortexModels:
    """Tests for vortex chain models."""

    def test_positive_geopotential(self):
        """rho0 must be positive."""
        with pytest.raises(ValidationError):
            VortexChainState(rho0=0.0)

    def test_flat_document(self):
        """A flat JSON document splits into state, params and shape."""
        initial = VortexInitialConditions.model_validate(
            {"rho0": 1.0, "q": 0.1, "omega": 0.5, "b1": 1.0, "b2": 2.0, "Theta0": 0.3}
        )
        assert initial.state.q == 0.1
        assert initial.params.omega == 0.5
        assert initial.shape is not None and initial.shape.b2 == 2.0

    def test_flat_document_without_shape(self):
        """The shape is optional."""
        initial = VortexInitialConditions.model_validate({"rho0": 1.0})
        assert initial.shape is None
        assert initial.params.omega == 0.0

    def test_negative_omega_rejected(self):
        """The Coriolis parameter is non-negative."""
        with pytest.raises(ValidationError):
            VortexInitialConditions.model_validate({"rho0": 1.0, "omega": -1.0})

    def test_series_columns_checked(self):
        """A series table has one column per chain field."""
        with pytest.raises(ValidationError):
            VortexSeries(t=[0.0], y=np.zeros((1, 3)))

    def test_series_is_read_only(self):
        """Result arrays cannot be modified in place."""
        series = VortexSeries(t=[0.0, 1.0], y=np.ones((2, 16)))
        with pytest.raises(ValueError):
            series.t[0] = 5.0


class TestTrajectoryParams:
    """Tests for the exact-family constants."""

    def test_zero_c_rejected(self):
        """c must be nonzero."""
        with pytest.raises(ValidationError):
            TrajectoryParams(pot=HillPotential(omega0=0.7), c=0.0, mu=0.5, omega=1.0)

    def test_mu_range(self):
        """mu lies in (0, 1]."""
        with pytest.raises(ValidationError):
            TrajectoryParams(pot=HillPotential(omega0=0.7), c=1.0, mu=1.5, omega=1.0)

    def test_nested_document(self):
        """The potential is read from a nested object."""
        par = TrajectoryParams.model_validate(
            {"pot": {"omega0": 0.7, "beta1": [0.1, 0.0]}, "c": 1.0, "mu": 0.5, "omega": 1.0, "V0": [0.1, 0.2]}
        )
        assert par.pot.beta1 == 0.1 + 0j
        assert par.V0 == 0.1 + 0.2j


class TestFloquetSolution:
    """Tests for the Floquet table model."""

    def test_positive_amplitude(self):
        """g must be strictly positive."""
        phi = np.linspace(0.0, 2.0 * np.pi, 9)
        with pytest.raises(ValidationError):
            FloquetSolution(
                stability=StabilityClass.STRONGLY_STABLE,
                quasi_momentum=0.5,
                trace=0.0,
                phi=phi,
                g=np.zeros(9),
                theta=0.5 * phi,
                y=np.ones(9),
                dy=np.ones(9),
            )


class TestObservedTrack:
    """Tests for observed tracks."""

    def test_from_samples_sorts(self):
        """Rows may come in any order."""
        track = ObservedTrack.from_samples([[2.0, 1.0, 0.0], [0.0, 3.0, 1.0], [1.0, 2.0, 2.0]])
        np.testing.assert_array_equal(track.t, [0.0, 1.0, 2.0])
        np.testing.assert_array_equal(track.x1, [3.0, 2.0, 1.0])
        assert track.window == (0.0, 2.0)

    def test_duplicate_times_rejected(self):
        """Two rows with one timestamp are ambiguous."""
        with pytest.raises(ValueError):
            ObservedTrack.from_samples([[1.0, 0.0, 0.0], [1.0, 1.0, 1.0]])

    def test_unordered_times_rejected(self):
        """Direct construction needs strictly increasing times."""
        with pytest.raises(ValidationError):
            ObservedTrack(t=[1.0, 0.0], x1=[0.0, 0.0], x2=[0.0, 0.0])

    def test_split(self):
        """split keeps t <= t_split in the head."""
        track = ObservedTrack(t=[0.0, 1.0, 2.0, 3.0], x1=np.zeros(4), x2=np.zeros(4))
        head, tail = track.split(1.0)
        assert len(head) == 2 and len(tail) == 2
        assert tail.t[0] == 2.0


class TestFitBounds:
    """Tests for the fit search box."""

    def test_defaults(self):
        """Two Omega0 branches avoid the resonance at 1/2."""
        bounds = FitBounds()
        assert all(not lo <= 0.5 <= hi for lo, hi in bounds.omega0_branches)

    @pytest.mark.parametrize(
        "data",
        [{"mu": (0.5, 1.5)}, {"c": (0.0, 1.0)}, {"omega0_branches": []}, {"beta": (0.3, -0.3)}],
    )
    def test_invalid_boxes(self, data):
        """Empty or out-of-range intervals are rejected."""
        with pytest.raises(ValidationError):
            FitBounds(**data)


class TestRunConfig:
    """Tests for the per-invocation configuration."""

    def test_missing_input(self, tmp_path):
        """Input files must exist."""
        with pytest.raises(ValidationError):
            RunConfig(subcommand="fit", inputs=[str(tmp_path / "absent.csv")], rtol=1e-9, atol=1e-12)

    def test_unwritable_output_directory(self, tmp_path):
        """The output directory must exist."""
        with pytest.raises(ValidationError):
            RunConfig(subcommand="hill", out=str(tmp_path / "missing" / "hill.json"), rtol=1e-9, atol=1e-12)

    def test_positive_tolerance(self):
        """Tolerances are positive."""
        with pytest.raises(ValidationError):
            RunConfig(subcommand="hill", rtol=0.0, atol=1e-12)
