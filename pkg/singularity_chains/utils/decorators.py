"""Decorators and utility functions for singularity-chains"""

import logging
import sys
from functools import wraps
from typing import Any, Callable

import click

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIGURATION = 2
EXIT_NUMERICAL = 3


def exit_code_for(error: BaseException) -> int:
    """Map an exception to a CLI exit code.

    Configuration and parse problems (including pydantic ValidationError,
    JSON and CSV parse errors and missing files) give 2, numerical failures
    give 3 and anything else gives 1.
    """
    if isinstance(error, ArithmeticError):
        return EXIT_NUMERICAL
    if isinstance(error, (ValueError, KeyError, OSError, click.ClickException)):
        return EXIT_CONFIGURATION
    return EXIT_UNEXPECTED


def handle_cli_errors(func: Callable[..., int]) -> Callable[..., int]:
    """Decorator to turn command failures into exit codes consistently."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> int:
        try:
            return func(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except Exception as e:
            code = exit_code_for(e)
            logger.debug(f"[{func.__name__}] failed", exc_info=True)
            message = "; ".join(line.strip() for line in str(e).splitlines() if line.strip())
            click.echo(f"error: {type(e).__name__}: {message or 'no details'}", file=sys.stderr)
            return code

    return wrapper
