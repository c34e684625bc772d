"""Tests for environment settings and CLI error handling."""

import logging
from unittest.mock import patch

import click
import pytest
from pydantic import ValidationError

from singularity_chains.configs.defaults import CHAIN_ATOL, CHAIN_RTOL
from singularity_chains.errors import (
    ConfigurationError,
    FitFailureError,
    StabilityError,
    TrackError,
    UnknownSuiteError,
)
from singularity_chains.models import VortexChainState
from singularity_chains.utils.decorators import exit_code_for, handle_cli_errors
from singularity_chains.utils.env import (
    get_atol,
    get_log_level_name,
    get_rtol,
    get_workers,
    load_environment,
)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Start every test without SINGCHAIN_* variables."""
    for name in ("SINGCHAIN_LOG", "SINGCHAIN_RTOL", "SINGCHAIN_ATOL", "SINGCHAIN_WORKERS"):
        monkeypatch.delenv(name, raising=False)


class TestEnvironment:
    """Tests for SINGCHAIN_* variables."""

    def test_defaults(self):
        """Unset variables fall back to the package defaults."""
        assert get_log_level_name() == "info"
        assert get_rtol() == CHAIN_RTOL
        assert get_atol() == CHAIN_ATOL
        assert get_workers() == 1

    def test_overrides(self, monkeypatch):
        """Set variables take effect."""
        monkeypatch.setenv("SINGCHAIN_LOG", "DEBUG")
        monkeypatch.setenv("SINGCHAIN_RTOL", "1e-6")
        monkeypatch.setenv("SINGCHAIN_WORKERS", "4")
        assert get_log_level_name() == "debug"
        assert get_rtol() == 1e-6
        assert get_workers() == 4

    @pytest.mark.parametrize("raw", ["abc", "-1e-6", "0"])
    def test_invalid_tolerance_ignored(self, monkeypatch, caplog, raw):
        """Invalid tolerances are ignored with a warning."""
        monkeypatch.setenv("SINGCHAIN_ATOL", raw)
        with caplog.at_level(logging.WARNING):
            assert get_atol() == CHAIN_ATOL
        assert "SINGCHAIN_ATOL" in caplog.text

    def test_invalid_values_fall_back(self, monkeypatch):
        """Unknown log levels and worker counts fall back to defaults."""
        monkeypatch.setenv("SINGCHAIN_LOG", "verbose")
        monkeypatch.setenv("SINGCHAIN_WORKERS", "0")
        assert get_log_level_name() == "info"
        assert get_workers() == 1

    def test_dotenv_does_not_override(self):
        """Variables already in the environment win over .env."""
        with patch("singularity_chains.utils.env.load_dotenv", return_value=False) as mock_load:
            load_environment()
        assert mock_load.call_args.kwargs["override"] is False


class TestExitCodes:
    """Tests for the error to exit code mapping."""

    @pytest.mark.parametrize(
        "error",
        [ConfigurationError("x"), TrackError("x"), UnknownSuiteError("x"), FileNotFoundError("x"), KeyError("x")],
    )
    def test_configuration_errors(self, error):
        """Input problems exit with 2."""
        assert exit_code_for(error) == 2

    def test_validation_error(self):
        """pydantic validation failures are configuration errors."""
        with pytest.raises(ValidationError) as info:
            VortexChainState(rho0=-1.0)
        assert exit_code_for(info.value) == 2

    @pytest.mark.parametrize("error", [StabilityError("x"), FitFailureError("x"), ZeroDivisionError()])
    def test_numerical_errors(self, error):
        """Numerical failures exit with 3."""
        assert exit_code_for(error) == 3

    def test_unexpected_errors(self):
        """Anything else exits with 1."""
        assert exit_code_for(RuntimeError("x")) == 1


class TestHandleCliErrors:
    """Tests for the command decorator."""

    def test_passes_result_through(self):
        """Successful commands return their own code."""
        assert handle_cli_errors(lambda: 0)() == 0

    def test_reports_error(self, capsys):
        """Failures print one line to stderr and return the mapped code."""

        @handle_cli_errors
        def command() -> int:
            raise StabilityError("|trace M| > 2\nsecond line")

        assert command() == 3
        assert capsys.readouterr().err == "error: StabilityError: |trace M| > 2; second line\n"

    def test_click_exit_propagates(self):
        """click's own exit requests are not swallowed."""

        @handle_cli_errors
        def command() -> int:
            raise click.exceptions.Exit(0)

        with pytest.raises(click.exceptions.Exit):
            command()
