# jlrectifier/cli.py
import sys
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from typing_extensions import Annotated

from . import config
from . import report as reports
from . import sweep as sweeps
from .errors import ConfigError, JLRectifierError
from .logging_setup import configure_logging
from .models import RunConfig, RunReport, parse_config, parse_sweep_spec

app = typer.Typer(
    name="jlrectifier",
    help="""🧮 **jlrectifier: the essentially tame Jacquet-Langlands rectifier, exactly.** 🧮

    Computes double cosets, finite symplectic modules, t-factors, the rectifier
    and zeta-data for an inner form GL_m(D) of GL_n(F), and checks that the
    zeta product restricts to the rectifier. Every value is exact.

    Exit codes: 0 all verdicts true, 1 some verdict false, 2 bad input.
    """,
    no_args_is_help=True,
    rich_markup_mode="markdown",
)

ConfigOption = Annotated[
    Path,
    typer.Option("--config", "-c", exists=True, dir_okay=False, readable=True, help="JSON run configuration."),
]
FormatOption = Annotated[str, typer.Option("--format", "-f", help="Output format: 'json' or 'table'.")]
OutputOption = Annotated[Optional[Path], typer.Option("--output", "-o", help="Write JSON here instead of standard output.")]


def _fail(message: str, code: int = 2) -> None:
    typer.secho(f"❌ {message}", fg=typer.colors.RED, err=True)
    raise typer.Exit(code=code)


def _check_format(output_format: str) -> str:
    output_format = output_format.lower()
    if output_format not in ("json", "table"):
        _fail(f"Unknown format '{output_format}'; use 'json' or 'table'.")
    return output_format


def _load_config(path: Path) -> RunConfig:
    try:
        return parse_config(path.read_text(encoding="utf-8"))
    except ConfigError as exc:
        typer.secho(f"❌ Invalid configuration {path}:", fg=typer.colors.RED, err=True)
        for reason in exc.reasons:
            typer.secho(f"   - {reason}", fg=typer.colors.RED, err=True)
        raise typer.Exit(code=2)
    except UnicodeDecodeError as exc:
        _fail(f"{path} is not UTF-8: {exc}")


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        typer.echo(text)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text + "\n", encoding="utf-8")
    typer.secho(f"📝 Report written to {output}", fg=typer.colors.BLUE, err=True)


def _build(run_config: RunConfig, mutate_zeta: bool = False) -> RunReport:
    try:
        return reports.build_run_report(run_config, mutate_zeta=mutate_zeta)
    except JLRectifierError as exc:
        _fail(f"{type(exc).__name__}: {exc}")


@app.callback()
def main(
    log_level: Annotated[str, typer.Option("--log-level", help="DEBUG, INFO, WARNING or ERROR.")] = config.LOG_LEVEL,
):
    configure_logging(log_level)


@app.command(name="run", help="Run every enabled check on one configuration and print the full report.")
def run_command(
    config_path: ConfigOption,
    output_format: FormatOption = config.DEFAULT_OUTPUT_FORMAT,
    output: OutputOption = None,
    mutate_zeta: Annotated[bool, typer.Option("--mutate-zeta", help="Negative control: flip one zeta value.")] = False,
):
    output_format = _check_format(output_format)
    report = _build(_load_config(config_path), mutate_zeta=mutate_zeta)
    if output_format == "json":
        _emit(reports.report_json(report), output)
    else:
        reports.print_report(report, Console())
    if not report.ok:
        typer.secho(f"❌ Failed verdicts: {', '.join(report.verdicts.failed())}", fg=typer.colors.RED, err=True)
        raise typer.Exit(code=1)
    if output_format == "table":
        typer.secho("✅ All verdicts hold.", fg=typer.colors.GREEN)


def _view(view: str, config_path: Path, output_format: str, output: Optional[Path]) -> None:
    output_format = _check_format(output_format)
    report = _build(_load_config(config_path))
    if output_format == "json":
        _emit(reports.view_json(report, view), output)
    else:
        reports.print_view(report, view, Console())
    if not reports.view_ok(report, view):
        raise typer.Exit(code=1)


@app.command(name="cosets", help="Double cosets Gamma_E \\ Gamma_F / Gamma_E with the parity report.")
def cosets_command(config_path: ConfigOption, output_format: FormatOption = config.DEFAULT_OUTPUT_FORMAT, output: OutputOption = None):
    _view("cosets", config_path, output_format, output)


@app.command(name="modules", help="A-side and M-side finite symplectic modules, with case and level per component.")
def modules_command(config_path: ConfigOption, output_format: FormatOption = config.DEFAULT_OUTPUT_FORMAT, output: OutputOption = None):
    _view("modules", config_path, output_format, output)


@app.command(name="rectifier", help="t-factors and the rectifier character against the zeta product.")
def rectifier_command(config_path: ConfigOption, output_format: FormatOption = config.DEFAULT_OUTPUT_FORMAT, output: OutputOption = None):
    _view("rectifier", config_path, output_format, output)


@app.command(name="zeta", help="The assigned zeta-data and their conditions.")
def zeta_command(config_path: ConfigOption, output_format: FormatOption = config.DEFAULT_OUTPUT_FORMAT, output: OutputOption = None):
    _view("zeta", config_path, output_format, output)


@app.command(name="functorial", help="Base change to every tower level, F and the maximal unramified subextension.")
def functorial_command(config_path: ConfigOption, output_format: FormatOption = config.DEFAULT_OUTPUT_FORMAT, output: OutputOption = None):
    _view("functorial", config_path, output_format, output)


@app.command(name="sweep", help="Enumerate and check every configuration of a sweep spec.")
def sweep_command(
    spec_path: Annotated[Path, typer.Option("--spec", "-s", exists=True, dir_okay=False, readable=True, help="JSON sweep spec.")],
    jobs: Annotated[Optional[int], typer.Option("--jobs", "-j", help="Worker processes (default: spec, then JLRECT_JOBS).")] = None,
    output: OutputOption = None,
    mutate_zeta: Annotated[bool, typer.Option("--mutate-zeta", help="Negative control: flip one zeta value per configuration.")] = False,
):
    try:
        spec = parse_sweep_spec(spec_path.read_text(encoding="utf-8"))
        if jobs is not None:
            spec.jobs = jobs
        if mutate_zeta:
            spec.mutate_zeta = True
    except ConfigError as exc:
        _fail(f"Invalid sweep spec {spec_path}: {exc}")
    except ValidationError as exc:
        _fail(f"Invalid option: {exc.errors()[0]['msg']}")

    configs, sampled = sweeps.enumerate_configs(spec)
    typer.secho(f"🚀 Sweep enumerates {len(configs)} configurations ({spec.jobs} worker(s)).", err=True)
    if sampled:
        typer.secho(f"🎲 z_E/F sampled with seed {spec.seed} for q,f in {', '.join(sampled)}", fg=typer.colors.YELLOW, err=True)

    outcomes = []
    with typer.progressbar(
        sweeps.iter_outcomes(configs, mutate_zeta=spec.mutate_zeta, jobs=spec.jobs),
        length=len(configs),
        label="Checking configurations...",
        file=sys.stderr,
    ) as progress:
        for outcome in progress:
            outcomes.append(outcome)
    summary = sweeps.summarize(spec, configs, outcomes, sampled)
    _emit(summary.model_dump_json(indent=2), output)

    typer.echo("\n--- Sweep Summary ---", err=True)
    typer.secho(f"Total configurations: {summary.total}", fg=typer.colors.BLUE, err=True)
    typer.secho(f"Passed: {summary.passed}", fg=typer.colors.GREEN, err=True)
    if summary.inner_class_hits:
        typer.secho(f"Inner classes hit in the with-inner case: {summary.inner_class_hits}", fg=typer.colors.YELLOW, err=True)
    if summary.failed:
        typer.secho(f"Failed: {summary.failed}", fg=typer.colors.RED, err=True)
        for name, count in summary.verdict_counts.items():
            typer.secho(f"  {name}: {count}", fg=typer.colors.RED, err=True)
        raise typer.Exit(code=1)
    typer.secho("✅ Every verdict holds.", fg=typer.colors.GREEN, err=True)


@app.command(name="certify-signature", help="Closed-form multiplication signature against cycle enumeration on every F_{p^k}, p^k <= bound.")
def certify_signature_command(
    bound: Annotated[int, typer.Option(help="Largest field size p^k.")] = config.SIGNATURE_BOUND,
    exhaustive_limit: Annotated[int, typer.Option(help="Check every element up to this field size, one per order above.")] = config.SIGNATURE_EXHAUSTIVE_LIMIT,
    jobs: Annotated[int, typer.Option("--jobs", "-j", help="Worker processes.")] = config.DEFAULT_JOBS,
    output: OutputOption = None,
):
    if bound < 2 or jobs < 1:
        _fail("bound must be at least 2 and jobs at least 1.")
    typer.echo(f"🔍 Certifying multiplication signatures on fields of size <= {bound} ...")
    certificate = sweeps.certify_signatures(bound, exhaustive_limit, jobs=jobs)
    if output is not None:
        _emit(certificate.model_dump_json(indent=2), output)
    failing = [c for c in certificate.fields if c.failures]
    typer.secho(f"Fields checked: {len(certificate.fields)}", fg=typer.colors.BLUE)
    if failing:
        for c in failing:
            typer.secho(f"❌ F_{c.p}^{c.k}: {len(c.failures)} disagreements", fg=typer.colors.RED)
        raise typer.Exit(code=1)
    typer.secho("✅ Closed form agrees with cycle enumeration everywhere.", fg=typer.colors.GREEN)


if __name__ == "__main__":
    app()
