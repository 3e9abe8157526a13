"""
Range commands: record scans and verification suites.
"""

from pathlib import Path
from typing import Optional

import typer
from rich.markup import escape
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from caliber_cli.cli import EXIT_VERIFY_FAILED, config, console, err_console, handle_errors
from caliber_cli.config import resolve_jobs, validate_setting
from caliber_cli.engine.ideals import MAX_NORM_A
from caliber_cli.engine.scan import SUITES, ScanFilters, SuiteOptions, scan_range, verify_suite
from caliber_cli.utils import encode_records, parse_family, parse_mod8, to_json_line, write_atomic


def _progress(quiet: bool) -> Progress:
    """A stderr progress bar, disabled when quiet or not attached to a terminal."""
    return Progress(
        TextColumn("[bold blue]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=err_console,
        transient=True,
        disable=quiet or not err_console.is_terminal,
    )


def scan(
        lo: int = typer.Option(..., "--from", help="First d"),
        hi: int = typer.Option(..., "--to", help="Last d"),
        kappa: Optional[int] = typer.Option(None, "--kappa", help="Keep κ(d) = K"),
        h: Optional[int] = typer.Option(None, "--h", help="Keep h(d) = H"),
        mod8: Optional[str] = typer.Option(None, "--mod8", help="Keep d ≡ M mod 8, or notM to drop it"),
        family: Optional[str] = typer.Option(None, "--family", help="Keep N2P1, N2P4, N2P2 or N2M2"),
        jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Worker processes (default: CALIBER_JOBS, then config)"),
        fmt: Optional[str] = typer.Option(None, "--format", help="jsonl or csv (default from config)"),
        out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write atomically to this file instead of stdout"),
        quiet: bool = typer.Option(False, "--quiet", "-q", help="No progress bar"),
):
    """
    Scan the square-free d in a range and emit one record per field.
    """
    try:
        keep_mod8, drop_mod8 = parse_mod8(mod8)
        filters = ScanFilters(kappa=kappa, h=h, mod8=keep_mod8, not_mod8=drop_mod8, family=parse_family(family))
    except ValueError as e:
        raise typer.BadParameter(str(e)) from None

    with handle_errors():
        workers = resolve_jobs(jobs, config)
        fmt = validate_setting("format", fmt or config.get_setting("format"))
        block_size = validate_setting("block_size", config.get_setting("block_size"))
        cutoff = validate_setting("split_prime_cutoff", config.get_setting("split_prime_cutoff"))

        with _progress(quiet) as progress:
            task = progress.add_task("scanning", total=hi - lo + 1 if hi >= lo else 0)
            records = scan_range(
                lo, hi, filters,
                jobs=workers,
                block_size=block_size,
                cutoff=cutoff,
                on_block=lambda width: progress.advance(task, width),
            )
            lines = encode_records(records, fmt)
            if out is None:
                for line in lines:
                    typer.echo(line, nl=False)
            else:
                count = write_atomic(out, lines)

    if out is not None:
        err_console.print(f"[green]Wrote {count} line(s) to {out}[/green]")


def verify(
        suite: str = typer.Option(..., "--suite", "-s", help=f"One of: {', '.join(SUITES)}"),
        lo: int = typer.Option(2, "--from", help="First d"),
        hi: int = typer.Option(10_000, "--to", help="Last d"),
        jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Worker processes"),
        fmt: str = typer.Option("text", "--format", help="text or json"),
        samples: int = typer.Option(50, "--samples", min=1, help="Discriminants sampled by the ρ suites"),
        limit: int = typer.Option(10_000, "--limit", min=1, max=MAX_NORM_A, help="Largest A or N checked by the ρ suites"),
        seed: int = typer.Option(0, "--seed", help="Sampler seed"),
        quiet: bool = typer.Option(False, "--quiet", "-q", help="No progress bar"),
):
    """
    Run a verification suite over a range; exits 1 if any case fails.
    """
    if suite not in SUITES:
        raise typer.BadParameter(f"unknown suite '{suite}'; choose from {', '.join(SUITES)}", param_hint="'--suite'")
    if fmt not in ("text", "json"):
        raise typer.BadParameter(f"--format must be text or json, got '{fmt}'")

    with handle_errors():
        workers = resolve_jobs(jobs, config)
        cutoff = validate_setting("split_prime_cutoff", config.get_setting("split_prime_cutoff"))
        options = SuiteOptions(samples=samples, limit=limit, seed=seed, cutoff=cutoff)
        with _progress(quiet or fmt == "json") as progress:
            task = progress.add_task(suite, total=None)
            report = verify_suite(
                suite, lo, hi,
                jobs=workers,
                options=options,
                on_case=lambda n: progress.advance(task, n),
            )

    if fmt == "json":
        typer.echo(to_json_line(report.as_dict()))
    else:
        table = Table(title=f"Suite {report.name} over [{report.lo}, {report.hi}]", expand=False)
        table.add_column("Checked", justify="right")
        table.add_column("Passed", justify="right", style="green")
        table.add_column("Vacuous", justify="right", style="dim")
        table.add_column("Anomalies", justify="right", style="yellow")
        table.add_column("Failures", justify="right", style="bold red")
        table.add_row(str(report.checked), str(report.passed), str(report.vacuous),
                      str(len(report.anomalies)), str(len(report.failures)))
        console.print(table)
        for case in report.anomalies:
            console.print(f"[yellow]anomaly[/yellow] d = {case.d}: {escape(case.detail)}", highlight=False)
        for record in report.failure_records:
            console.print(f"[bold red]fail[/bold red] {escape(to_json_line(record.as_dict()))}", highlight=False)

    if not report.ok:
        raise typer.Exit(code=EXIT_VERIFY_FAILED)
