"""
Single-field commands: caliber, reduced forms, continued fractions, ρ_D,
bounds and classification of one Q(√d).
"""

from typing import Optional

import typer
from rich.panel import Panel
from rich.table import Table

from caliber_cli.cli import config, console, handle_errors
from caliber_cli.engine import classify as classification
from caliber_cli.engine.arith import field_spec
from caliber_cli.engine.contfrac import expand, make_qi, omega
from caliber_cli.engine.forms import caliber as caliber_number
from caliber_cli.engine.forms import cycle_decomposition
from caliber_cli.engine.ideals import ideal_class_index, primitive_ideals_with_norm, rho_by_formula, solve_sd
from caliber_cli.engine.theorems import bound_report
from caliber_cli.utils import styled_verdict, to_json_line


def caliber(d: int = typer.Argument(..., help="Square-free d >= 2")):
    """
    Print the caliber number κ(d).
    """
    with handle_errors():
        value = caliber_number(d)
    typer.echo(str(value))


def forms(
        d: int = typer.Argument(..., help="Square-free d >= 2"),
        json_output: bool = typer.Option(False, "--json", help="Emit one JSON object"),
):
    """
    Show the reduced forms of Q(√d) grouped into reduction cycles.
    """
    with handle_errors():
        spec = field_spec(d)
        decomposition = cycle_decomposition(spec.D)

    if json_output:
        typer.echo(to_json_line({
            "d": d,
            "D": spec.D,
            "kappa": decomposition.caliber,
            "h": decomposition.class_number,
            "cycle_sizes": list(decomposition.cycle_sizes),
            "cycles": [[f.as_list() for f in cycle] for cycle in decomposition.cycles],
        }))
        return

    console.print(Panel(
        f"[bold]Q(√{d})[/bold]  D = {spec.D}   κ = {decomposition.caliber}   h = {decomposition.class_number}",
        expand=False,
    ))
    table = Table(title="Reduction cycles", expand=False)
    table.add_column("#", justify="right", style="dim")
    table.add_column("Size", justify="right")
    table.add_column("Forms", style="cyan")
    for index, cycle in enumerate(decomposition.cycles):
        label = f"{index} (principal)" if index == 0 else str(index)
        table.add_row(label, str(len(cycle)), " → ".join(str(f) for f in cycle))
    console.print(table)


def cf(
        d: Optional[int] = typer.Argument(None, help="Expand ω_D of Q(√d)"),
        p: Optional[int] = typer.Option(None, "--p", help="Numerator P of (P+√D)/Q"),
        q: Optional[int] = typer.Option(None, "--q", help="Denominator Q of (P+√D)/Q"),
        disc: Optional[int] = typer.Option(None, "--disc", help="Radicand D of (P+√D)/Q"),
):
    """
    Print the continued-fraction preperiod and period of ω_D or (P+√D)/Q.
    """
    explicit = (p, q, disc)
    if d is None and None in explicit:
        raise typer.BadParameter("give either d or all of --p, --q and --disc")
    if d is not None and any(v is not None for v in explicit):
        raise typer.BadParameter("d and --p/--q/--disc are mutually exclusive")

    with handle_errors():
        x = omega(field_spec(d)) if d is not None else make_qi(p, q, disc)
        expansion = expand(x)

    typer.echo(f"x: {x}")
    typer.echo(f"preperiod: {list(expansion.preperiod)}")
    typer.echo(f"period: {list(expansion.period)}")
    typer.echo(f"caliber: {len(expansion.period)}")


def rho(
        d: int = typer.Argument(..., help="Square-free d >= 2"),
        a: int = typer.Argument(..., help="Norm A >= 1"),
):
    """
    Print ρ_D(A), its residues and the primitive ideals of norm A.
    """
    with handle_errors():
        spec = field_spec(d)
        solutions = solve_sd(a, spec.D)
        ideals = primitive_ideals_with_norm(a, spec.D)
        decomposition = cycle_decomposition(spec.D) if ideals else None
        classes = [ideal_class_index(ideal, decomposition) for ideal in ideals]

    typer.echo(f"rho: {solutions.rho}")
    typer.echo(f"residues: {list(solutions.residues)}")
    if not ideals:
        return
    table = Table(title=f"Primitive ideals of norm {a}", expand=False)
    table.add_column("Ideal", style="cyan")
    table.add_column("Cycle", justify="right")
    table.add_column("Principal")
    for ideal, index in zip(ideals, classes):
        table.add_row(str(ideal), str(index), "[green]yes[/green]" if index == 0 else "no")
    console.print(table)


def bounds(
        d: int = typer.Argument(..., help="Square-free d >= 2"),
        cutoff: Optional[int] = typer.Option(None, "--cutoff", help="Split primes below this bound"),
):
    """
    Show the ρ sums bracketing κ(d) and the splitting-prime lower bounds.
    """
    if cutoff is None:
        cutoff = config.get_setting("split_prime_cutoff")
    with handle_errors():
        report = bound_report(d, cutoff=cutoff, rho_fn=rho_by_formula)

    summary = Table(title=f"Bounds for Q(√{d}), D = {report.D}", expand=False)
    summary.add_column("Σ ρ over 4A² < D", justify="right")
    summary.add_column("κ(d)", justify="right", style="bold")
    summary.add_column("Σ ρ over A² < D", justify="right")
    summary.add_column("Verdict")
    summary.add_row(str(report.lower_sum), str(report.kappa), str(report.upper_sum), styled_verdict(report.verdict))
    console.print(summary)

    if not report.split_bounds:
        console.print(f"[dim]No split primes below {cutoff}.[/dim]")
        return
    table = Table(title="Splitting-prime bounds", expand=False)
    table.add_column("p", justify="right", style="cyan")
    table.add_column("e", justify="right")
    table.add_column("2e", justify="right")
    table.add_column("κ > 2e")
    for entry in report.split_bounds:
        table.add_row(str(entry.p), str(entry.exponent), str(entry.bound), styled_verdict(entry.verdict))
    console.print(table)


def classify(d: int = typer.Argument(..., help="Square-free d >= 2")):
    """
    Show Richaud-Degert representations, special families and the
    class-number-one checks for Q(√d).
    """
    with handle_errors():
        spec = field_spec(d)
        decomposition = cycle_decomposition(spec.D)
        reps = classification.rd_representations(d)
        verdicts = {
            "prop31": classification.check_prop31_necessary(d, decomposition),
            "fixtures": classification.check_fixture_lists(d, decomposition),
            "families": classification.check_families(d, decomposition),
            "rd-class-one": classification.check_rd_class_one(d, decomposition),
            "two-ideal": classification.check_two_ideal_nonprincipal(d, decomposition),
        }
        if d % 8 != 5:
            verdicts["prop36"] = classification.check_prop36_necessary(d, decomposition)

    console.print(Panel(
        f"[bold]Q(√{d})[/bold]  κ = {decomposition.caliber}   h = {decomposition.class_number}"
        f"   family = {classification.family_tag(d)}",
        expand=False,
    ))
    if reps:
        table = Table(title="Richaud-Degert representations", expand=False)
        table.add_column("n", justify="right", style="cyan")
        table.add_column("r", justify="right")
        table.add_column("r | 2n")
        table.add_column("-n < r <= n")
        for rep in reps:
            table.add_row(str(rep.n), str(rep.r), "yes" if rep.divides_2n else "no",
                          "yes" if rep.in_standard_range else "no")
        console.print(table)
    else:
        console.print("[dim]Not of Richaud-Degert type.[/dim]")

    checks = Table(title="Checks", expand=False)
    checks.add_column("Check", style="cyan")
    checks.add_column("Verdict")
    for name, verdict in verdicts.items():
        checks.add_row(name, styled_verdict(verdict))
    console.print(checks)


__all__ = ["caliber", "forms", "cf", "rho", "bounds", "classify"]
