"""
Settings commands for caliber-cli.

This module provides commands for showing, changing and resetting the
persistent defaults used by the range commands.
"""

import typer
from rich import print as rprint
from rich.table import Table

from caliber_cli.cli import config, console, handle_errors
from caliber_cli.config import JOBS_ENV

app = typer.Typer(help="Show or change persistent settings.", no_args_is_help=True)

SETTING_HELP = {
    "jobs": f"Default worker processes (overridden by {JOBS_ENV} and --jobs)",
    "block_size": "Width of the d-blocks handed to scan workers",
    "format": "Default scan output format: jsonl or csv",
    "split_prime_cutoff": "Split primes are searched below this bound",
}


@app.command("show")
def show():
    """
    Show the current settings.
    """
    current = config.get_settings()

    table = Table(title="Current Settings", expand=False)
    table.add_column("Setting", style="cyan")
    table.add_column("Value", style="white")
    table.add_column("Description", style="dim")
    for key, description in SETTING_HELP.items():
        table.add_row(key, str(current.get(key)), description)

    console.print(table)
    console.print(f"[dim]Stored in {config.config_file}[/dim]", highlight=False)


@app.command("set")
def set_value(
        key: str = typer.Argument(..., help="Setting name"),
        value: str = typer.Argument(..., help="New value"),
):
    """
    Change one setting.
    """
    with handle_errors():
        config.set_setting(key, value)
    rprint(f"[green]{key} set to {config.get_setting(key)}.[/green]")


@app.command("reset")
def reset():
    """
    Reset all settings to defaults.
    """
    config.reset_settings()
    rprint("[green]Settings reset to defaults.[/green]")
