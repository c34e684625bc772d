"""Tests for track fitting and prediction."""

import logging

import numpy as np
import pytest

from singularity_chains.errors import FitFailureError, InvalidParameterError, TrackError
from singularity_chains.models import (
    ApproxTrajectoryParams,
    FitFamily,
    FitResult,
    HopfChainState,
    ObservedTrack,
    PhiClosedForm,
    RestartRecord,
)
from singularity_chains.tools import fitting
from singularity_chains.tools.fitting import evaluate_fit, fit_track, predict, track_mse
from singularity_chains.tools.hopf_chain import chain_front_closed_form, phi_closed_form
from singularity_chains.tools.trajectory import first_approx_complex

TRUTH = ApproxTrajectoryParams(A0=1.0, A1=0.5 + 0.2j, omega0=0.45, mu=0.9, t0=0.3, omega=1.0)


def approx_track(t: np.ndarray) -> ObservedTrack:
    X = first_approx_complex(t, TRUTH)
    return ObservedTrack(t=t, x1=X.real, x2=X.imag)


def truth_result(converged: bool = True) -> FitResult:
    params = {"omega0": 0.45, "mu": 0.9, "t0": 0.3}
    for name in ("A0", "A1", "A2", "A3", "A4"):
        value = complex(getattr(TRUTH, name))
        params.update({f"{name}_re": value.real, f"{name}_im": value.imag})
    return FitResult(
        family=FitFamily.APPROX,
        omega=1.0,
        params=params,
        mse=0.0,
        n_restarts_used=1,
        converged=converged,
        seed=0,
        budget=1,
        fit_window=(0.0, 10.0),
    )


@pytest.fixture(scope="module")
def track():
    """Noise-free first-approximation track over three Coriolis periods."""
    return approx_track(np.linspace(0.0, 6.0 * np.pi, 120))


class TestTrackMse:
    """Tests for the mean squared error."""

    def test_zero_for_generating_model(self, track):
        """The generating family reproduces the track exactly."""
        assert track_mse(track, truth_result()) == pytest.approx(0.0, abs=1e-24)

    def test_unit_offset(self):
        """A constant (1, 0) offset gives MSE 1."""
        flat = ObservedTrack(t=[0.0, 1.0, 2.0], x1=[1.0, 1.0, 1.0], x2=[0.0, 0.0, 0.0])
        assert track_mse(flat, lambda t: np.zeros(t.size, dtype=complex)) == pytest.approx(1.0)

    def test_single_sample_rejected(self):
        """A one-sample track has no MSE."""
        with pytest.raises(TrackError):
            track_mse(ObservedTrack(t=[0.0], x1=[0.0], x2=[0.0]), lambda t: np.zeros(t.size, dtype=complex))

    def test_independent_of_row_order(self):
        """Shuffled input rows give the same track and MSE."""
        rows = [[2.0, 1.0, 0.5], [0.0, 0.2, -0.1], [1.0, 0.3, 0.3]]
        shuffled = ObservedTrack.from_samples(rows)
        ordered = ObservedTrack.from_samples(sorted(rows))
        model = lambda t: t + 0.5j * t  # noqa: E731
        assert track_mse(shuffled, model) == track_mse(ordered, model)

    def test_period_shift_of_t0(self):
        """t0 and t0 + 2 pi / omega describe the same track."""
        t = np.linspace(0.0, 6.0 * np.pi, 120)
        noisy = approx_track(t)
        noisy = ObservedTrack(t=t, x1=noisy.x1 + 0.05 * np.sin(3.0 * t), x2=noisy.x2 - 0.02 * np.cos(t))
        base = truth_result()
        shifted = base.model_copy(update={"params": {**base.params, "t0": 0.3 + 2.0 * np.pi}})
        assert track_mse(noisy, base) > 1e-4
        assert track_mse(noisy, shifted) == pytest.approx(track_mse(noisy, base), rel=1e-9)


class TestFitTrack:
    """Tests for multi-restart fitting."""

    def test_recovers_approx_family(self, track):
        """A noise-free approx track is recovered."""
        result = fit_track(track, "approx", omega=1.0, restarts=16, budget=1500, seed=0)
        assert result.mse < 1e-4
        assert result.params["omega0"] == pytest.approx(0.45, abs=1e-2)
        assert len(result.restarts) == 16

    def test_deterministic(self, track):
        """The same seed gives the same result, with any number of workers."""
        first = fit_track(track, "approx", omega=1.0, restarts=4, budget=200, seed=7, workers=1)
        second = fit_track(track, "approx", omega=1.0, restarts=4, budget=200, seed=7, workers=2)
        assert first.params == second.params
        assert first.mse == second.mse

    def test_more_restarts_never_worse(self, track):
        """Restart i is the same in every run, so the best MSE can only improve."""
        few = fit_track(track, "approx", omega=1.0, restarts=2, budget=200, seed=3)
        many = fit_track(track, "approx", omega=1.0, restarts=6, budget=200, seed=3)
        assert many.mse <= few.mse

    def test_hopf_phi_family(self):
        """The hopf-phi family recovers a closed-form front."""
        c = PhiClosedForm(c1=1.0, c2=2.0, c3=1.0, c4=0.3, c5=0.1)
        t = np.linspace(0.0, 2.0, 50)
        phi = phi_closed_form(c, t)
        front = ObservedTrack(t=t, x1=phi, x2=np.zeros_like(t))
        result = fit_track(front, FitFamily.HOPF_PHI, restarts=8, budget=1000, seed=0)
        assert result.omega is None
        assert result.mse < 1e-8
        np.testing.assert_allclose(evaluate_fit(result, t).x1, phi, atol=1e-3)
        np.testing.assert_allclose(evaluate_fit(result, t).x2, 0.0)

    def test_hopf_phi_on_chain_front(self):
        """The hopf-phi family follows the front of a first-order chain."""
        state = HopfChainState(H=[0.0, 1.0], A=[1.0, -0.5])
        t = np.linspace(0.0, 2.0, 50)
        phi = chain_front_closed_form(state, t)
        front = ObservedTrack(t=t, x1=phi, x2=np.zeros_like(t))
        result = fit_track(front, FitFamily.HOPF_PHI, restarts=8, budget=1000, seed=0)
        line = np.polyval(np.polyfit(t, phi, 1), t)
        assert result.mse < 0.01 * np.mean((phi - line) ** 2)
        assert np.max(np.abs(evaluate_fit(result, t).x1 - phi)) < 0.01 * (phi[-1] - phi[0])

    def test_vortex_family_needs_omega(self, track):
        """approx and exact need a positive Coriolis parameter."""
        with pytest.raises(InvalidParameterError):
            fit_track(track, "approx")

    def test_budget_must_be_positive(self, track):
        """A zero budget is rejected."""
        with pytest.raises(InvalidParameterError):
            fit_track(track, "approx", omega=1.0, budget=0)

    def test_short_track_rejected(self):
        """A single sample cannot be fitted."""
        with pytest.raises(TrackError):
            fit_track(ObservedTrack(t=[0.0], x1=[0.0], x2=[0.0]), "approx", omega=1.0)

    def test_all_restarts_failing(self, track, monkeypatch):
        """If every evaluation fails the fit reports failure."""

        def failing(x, t, omega):
            raise ValueError("no design")

        monkeypatch.setitem(fitting.DESIGNS, FitFamily.APPROX, failing)
        with pytest.raises(FitFailureError):
            fit_track(track, "approx", omega=1.0, restarts=2, budget=20)

    def test_result_round_trips_through_json(self):
        """Failed restarts are stored as null and read back as inf."""
        record = RestartRecord(index=0, start=[0.4, 0.9, 0.1], mse=float("inf"), nfev=3, converged=False)
        result = truth_result().model_copy(update={"restarts": [record]})
        restored = FitResult.model_validate_json(result.model_dump_json())
        assert restored.restarts[0].mse == float("inf")
        assert restored.params == result.params


class TestPredict:
    """Tests for forward prediction."""

    def test_matches_model_after_window(self):
        """Predictions are the model evaluated after the window."""
        predicted = predict(truth_result(), (10.0, 14.0), samples=5)
        np.testing.assert_allclose(predicted.t, [10.0, 11.0, 12.0, 13.0, 14.0])
        np.testing.assert_allclose(predicted.positions(), first_approx_complex(predicted.t, TRUTH), atol=1e-12)

    def test_single_time(self):
        """A degenerate range gives one sample."""
        assert len(predict(truth_result(), (12.0, 12.0))) == 1

    def test_range_inside_window_rejected(self):
        """Prediction may not start before the window ends."""
        with pytest.raises(InvalidParameterError):
            predict(truth_result(), (5.0, 12.0))

    def test_unconverged_fit_rejected(self):
        """An unconverged fit is not extrapolated by default."""
        with pytest.raises(FitFailureError, match="did not converge"):
            predict(truth_result(converged=False), (10.0, 11.0), samples=3)

    def test_unconverged_fit_allowed(self, caplog):
        """allow_unconverged extrapolates with a warning."""
        with caplog.at_level(logging.WARNING, logger="singularity_chains.tools.fitting"):
            predicted = predict(truth_result(converged=False), (10.0, 11.0), samples=3, allow_unconverged=True)
        assert len(predicted) == 3
        assert "did not converge" in caplog.text
