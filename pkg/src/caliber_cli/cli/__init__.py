"""
CLI commands for caliber-cli.

This package contains the Typer-based CLI application and its commands for
single-field queries, range scans and verification suites.
"""

import logging
from contextlib import contextmanager
from typing import Iterator

import typer
from rich.console import Console
from rich.logging import RichHandler

from caliber_cli.config import ConfigManager, SettingError
from caliber_cli.engine.arith import DomainError
from caliber_cli.engine.forms import InvariantViolation

EXIT_VERIFY_FAILED = 1
EXIT_DOMAIN = 3
EXIT_INVARIANT = 4

# Initialize the CLI application
app = typer.Typer(
    help="caliber-cli - calibers of real quadratic fields",
    add_completion=False,
    no_args_is_help=True,
)

# stdout carries data, stderr carries diagnostics
console = Console()
err_console = Console(stderr=True)
config = ConfigManager()


def setup_logging(verbose: bool) -> None:
    """Route the package loggers to a RichHandler on stderr."""
    logger = logging.getLogger("caliber_cli")
    logger.handlers.clear()
    logger.addHandler(RichHandler(console=err_console, show_path=False, markup=False))
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


@app.callback()
def main(
        verbose: bool = typer.Option(
            False,
            "--verbose",
            "-v",
            help="Log progress and debugging details to stderr",
        ),
):
    """
    caliber-cli - calibers of real quadratic fields.

    Enumerate reduced forms, decompose them into cycles and check caliber
    bounds over ranges of square-free d.
    """
    setup_logging(verbose)


def fail(message: str, code: int) -> typer.Exit:
    """Print an error to stderr and build the Exit to raise."""
    err_console.print(f"[bold red]Error:[/bold red] {message}", highlight=False)
    return typer.Exit(code=code)


@contextmanager
def handle_errors() -> Iterator[None]:
    """
    Map engine exceptions to exit codes.

    DomainError exits 3, InvariantViolation exits 4 and SettingError is a
    usage error.
    """
    try:
        yield
    except DomainError as e:
        raise fail(str(e), EXIT_DOMAIN) from None
    except InvariantViolation as e:
        raise fail(f"internal invariant violated: {e}", EXIT_INVARIANT) from None
    except SettingError as e:
        raise typer.BadParameter(str(e)) from None


# Import and register command modules
from caliber_cli.cli import fields, scan, settings  # noqa: E402

# Single-field commands
app.command()(fields.caliber)
app.command()(fields.forms)
app.command()(fields.cf)
app.command()(fields.rho)
app.command()(fields.bounds)
app.command()(fields.classify)

# Range commands
app.command()(scan.scan)
app.command()(scan.verify)

# Other commands
app.add_typer(settings.app, name="settings")

__all__ = ["app", "console", "err_console", "config", "fail", "handle_errors"]
