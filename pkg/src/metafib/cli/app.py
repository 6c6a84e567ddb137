"""Typer CLI for evaluating meta-Fibonacci recursions and checking their generations."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Annotated

import typer
from pydantic import ValidationError
from rich.console import Console

from metafib.config.settings import AppSettings, load_settings
from metafib.generations.genseq import GenerationPartition, generation_partition
from metafib.models.types import (
    CheckReport,
    OutputFormat,
    ReportFormat,
    SeriesKind,
    TableFormat,
    TransitionParams,
    VerifySuite,
)
from metafib.qseq.analysis import (
    build_comparison,
    check_early_doubling,
    comparison_text,
)
from metafib.recursion.engine import SequenceTable, evaluate
from metafib.recursion.spec import RecursionSpec, SpecError, parse_spec, spot_count
from metafib.storage.export import export_comparison, export_series, render_comparison
from metafib.storage.table_cache import TableCache
from metafib.utils.digest import sha256_file_hex
from metafib.utils.logging import configure_logging
from metafib.verify.mu import check_mu
from metafib.verify.reports import render_json, render_text
from metafib.verify.slow import (
    check_conolly,
    check_conway_octaves,
    check_grytczuk,
    check_newman_conway,
)
from metafib.verify.theorems import run_theorem_suite

logger = logging.getLogger(__name__)

app = typer.Typer(
    no_args_is_help=True,
    add_completion=False,
    help="Evaluate meta-Fibonacci recursions, partition them into generations, "
    "and check the slow-sequence results numerically.",
)

_console = Console(stderr=True)

SpecArg = Annotated[
    str,
    typer.Argument(
        metavar="SPEC",
        help="Preset (conolly, conway, q, v, mu, newman:R, grytczuk:K), "
        "explicit form (homog:a1,b1,...;ic=..., conway:K;ic=...) or JSON object.",
    ),
]
NMaxOpt = Annotated[int, typer.Option("-n", "--n-max", min=1, help="Number of terms.")]
EnvFileOpt = Annotated[
    Path | None,
    typer.Option(
        "--env-file",
        exists=True,
        dir_okay=False,
        help="Optional path to a .env file (in addition to environment variables).",
    ),
]
CacheDirOpt = Annotated[
    Path | None,
    typer.Option(
        "--cache-dir",
        file_okay=False,
        help="Table cache directory (overrides METAFIB_CACHE__DIR; implies --seed-cache).",
    ),
]
SeedCacheOpt = Annotated[
    bool,
    typer.Option("--seed-cache", help="Reuse and refresh cached tables."),
]
ReportFormatOpt = Annotated[
    ReportFormat,
    typer.Option("--format", case_sensitive=False, help="Report rendering."),
]


def load_app_settings(*, env_file: Path | None) -> AppSettings:
    """Load settings and configure logging, mapping invalid configuration to exit 2.

    Args:
        env_file: Optional path to a .env file to load in addition to environment variables.

    Returns:
        Validated application settings.
    """
    try:
        settings = load_settings(env_file=env_file)
    except ValidationError as exc:
        typer.echo(f"Invalid configuration:\n{exc}", err=True)
        raise typer.Exit(code=2) from None
    configure_logging(settings=settings.logging)
    return settings


def _parse(spec_text: str) -> RecursionSpec:
    try:
        return parse_spec(spec_text)
    except SpecError as exc:
        raise typer.BadParameter(str(exc), param_hint="SPEC") from None


def _load_table(
    spec: RecursionSpec,
    n_max: int,
    *,
    settings: AppSettings,
    seed_cache: bool,
    cache_dir: Path | None,
) -> SequenceTable:
    """Evaluate a spec, through the table cache when requested."""
    if n_max < spec.r:
        raise typer.BadParameter(
            f"{n_max} is smaller than the {spec.r} initial conditions",
            param_hint="'-n'",
        )
    with _console.status(f"[bold green]Evaluating {spec} to n={n_max}...[/bold green]"):
        if seed_cache or cache_dir is not None:
            cache = TableCache(cache_dir=cache_dir or settings.cache.dir)
            return cache.get_or_evaluate(spec, n_max)
        return evaluate(spec, n_max)


def _check_spot(spec: RecursionSpec, spot: int) -> None:
    count = spot_count(spec)
    if spot > count:
        raise typer.BadParameter(f"{spot} outside [1, {count}] for {spec}", param_hint="'--spot'")


def _emit_reports(reports: Sequence[CheckReport], fmt: ReportFormat) -> None:
    typer.echo(render_json(reports) if fmt is ReportFormat.json else render_text(reports))
    if not all(rep.passed for rep in reports):
        raise typer.Exit(code=1)


def _partition_text(spec: RecursionSpec, table: SequenceTable, part: GenerationPartition) -> str:
    lines = [
        f"# spec={spec} n={table.computed_len} spot={part.p} "
        f"interval_structure={'yes' if part.interval_structure else 'no'}",
        f"{'g':>4} {'alpha':>10} {'beta':>10} {'size':>10}  flags",
    ]
    for rec in part.records:
        flags: list[str] = []
        if rec.fragmented:
            flags.append("fragmented")
        if not rec.complete:
            flags.append("incomplete")
        row = f"{rec.g:>4} {rec.alpha:>10} {rec.beta:>10} {rec.size:>10}  {','.join(flags)}"
        lines.append(row.rstrip())
    if table.terminated_at is not None:
        lines.append(f"# terminated at n={table.terminated_at}")
    return "\n".join(lines)


@app.command("eval")
def eval_cmd(
    spec_text: SpecArg,
    n_max: NMaxOpt,
    *,
    export: Annotated[
        Path | None,
        typer.Option("--export", dir_okay=False, help="Write the series to this file."),
    ] = None,
    fmt: Annotated[
        OutputFormat,
        typer.Option("--format", case_sensitive=False, help="Export file format."),
    ] = OutputFormat.csv,
    kind: Annotated[
        SeriesKind,
        typer.Option("--kind", case_sensitive=False, help="Series to export."),
    ] = SeriesKind.values,
    show: Annotated[int, typer.Option("--show", min=0, help="Print the first N values.")] = 20,
    env_file: EnvFileOpt = None,
    cache_dir: CacheDirOpt = None,
    seed_cache: SeedCacheOpt = False,
) -> None:
    """Evaluate a recursion and print a summary (optionally exporting a series)."""
    settings = load_app_settings(env_file=env_file)
    spec = _parse(spec_text)
    table = _load_table(spec, n_max, settings=settings, seed_cache=seed_cache, cache_dir=cache_dir)

    typer.echo(f"spec: {spec}")
    typer.echo(f"computed: {table.computed_len}")
    terminated = "-" if table.terminated_at is None else str(table.terminated_at)
    typer.echo(f"terminated_at: {terminated}")
    if show:
        typer.echo("values: " + " ".join(str(v) for v in table.terms[:show].tolist()))

    if export is not None:
        export_series(table, kind, export, fmt)
        typer.echo(f"Wrote {export}", err=True)


@app.command("gens")
def gens_cmd(
    spec_text: SpecArg,
    n_max: NMaxOpt,
    *,
    spot: Annotated[int, typer.Option("--spot", min=1, help="Spot index p.")] = 1,
    env_file: EnvFileOpt = None,
    cache_dir: CacheDirOpt = None,
    seed_cache: SeedCacheOpt = False,
) -> None:
    """Print the generation partition based on one spot, flagging fragmented generations."""
    settings = load_app_settings(env_file=env_file)
    spec = _parse(spec_text)
    _check_spot(spec, spot)
    table = _load_table(spec, n_max, settings=settings, seed_cache=seed_cache, cache_dir=cache_dir)
    if table.computed_len <= spec.r:
        raise typer.BadParameter(
            f"need more than {spec.r} computed terms, got {table.computed_len}",
            param_hint="'-n'",
        )
    part = generation_partition(table, spot)
    typer.echo(_partition_text(spec, table, part))


@app.command("verify")
def verify_cmd(
    suite: Annotated[VerifySuite, typer.Argument(case_sensitive=False, help="Suite to run.")],
    *,
    n_max: Annotated[
        int | None,
        typer.Option("-n", "--n-max", min=1, help="Horizon for the mu and theorems suites."),
    ] = None,
    gen_max: Annotated[
        int | None,
        typer.Option(
            "--gmax",
            min=1,
            help="Last generation (conolly, newman, grytczuk) or octave (conway).",
        ),
    ] = None,
    param: Annotated[
        int,
        typer.Option("--param", min=2, help="r for newman, k for grytczuk."),
    ] = 2,
    e_limit: Annotated[
        int | None,
        typer.Option("--e-limit", min=10, help="Largest E_n bound (newman, grytczuk)."),
    ] = None,
    fmt: ReportFormatOpt = ReportFormat.text,
    env_file: EnvFileOpt = None,
    cache_dir: CacheDirOpt = None,
    seed_cache: SeedCacheOpt = False,
) -> None:
    """Run a verification suite; exit 1 if any check fails."""
    settings = load_app_settings(env_file=env_file)
    horizons = settings.horizons
    if n_max is not None and suite not in (VerifySuite.mu, VerifySuite.theorems):
        raise typer.BadParameter(f"not used by the {suite.value} suite", param_hint="'-n'")

    try:
        with _console.status(f"[bold green]Running {suite.value} checks...[/bold green]"):
            match suite:
                case VerifySuite.conolly:
                    g = gen_max or horizons.conolly_exponent
                    table = _load_table(
                        parse_spec("conolly"),
                        1 << g,
                        settings=settings,
                        seed_cache=seed_cache,
                        cache_dir=cache_dir,
                    )
                    reports = [check_conolly(table, g)]
                case VerifySuite.conway:
                    m = gen_max or horizons.conway_exponent - 1
                    table = _load_table(
                        parse_spec("conway"),
                        1 << (m + 1),
                        settings=settings,
                        seed_cache=seed_cache,
                        cache_dir=cache_dir,
                    )
                    reports = [check_conway_octaves(table, m)]
                case VerifySuite.newman:
                    reports = [
                        check_newman_conway(param, gen_max, e_limit=e_limit or horizons.e_limit),
                    ]
                case VerifySuite.grytczuk:
                    reports = [check_grytczuk(param, gen_max, e_limit=e_limit or horizons.e_limit)]
                case VerifySuite.mu:
                    reports = [check_mu(n_max or horizons.mu)]
                case VerifySuite.theorems:
                    reports = run_theorem_suite(n_max or horizons.theorems)
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from None

    _emit_reports(reports, fmt)


@app.command("qreport")
def qreport_cmd(
    n_max: NMaxOpt,
    *,
    g_max: Annotated[int, typer.Option("--gmax", min=1, help="Last generation reported.")],
    window: Annotated[
        int | None,
        typer.Option("--window", min=2, help="Quiet-run length of the transition detector."),
    ] = None,
    quiet: Annotated[
        float | None,
        typer.Option("--quiet", min=0.0, help="Quiet threshold on |2Q(n) - n| / n."),
    ] = None,
    spike: Annotated[
        float | None,
        typer.Option("--spike", min=0.0, help="Spike threshold on |2Q(n) - n| / n."),
    ] = None,
    fmt: Annotated[
        TableFormat,
        typer.Option("--format", case_sensitive=False, help="Table rendering."),
    ] = TableFormat.text,
    export: Annotated[
        Path | None,
        typer.Option("--export", dir_okay=False, help="Also write the table as CSV or JSON."),
    ] = None,
    doubling: Annotated[
        bool,
        typer.Option("--doubling", help="Also check the early doubling of the start points."),
    ] = False,
    env_file: EnvFileOpt = None,
    cache_dir: CacheDirOpt = None,
    seed_cache: SeedCacheOpt = False,
) -> None:
    """Compare maternal and Pinn generation start points of the Q-sequence."""
    settings = load_app_settings(env_file=env_file)
    overrides = {
        key: value
        for key, value in (("window", window), ("quiet_threshold", quiet), ("spike_factor", spike))
        if value is not None
    }
    try:
        params = TransitionParams.model_validate(
            settings.transitions.model_dump() | overrides,
        )
    except ValidationError as exc:
        raise typer.BadParameter(str(exc)) from None

    spec = parse_spec("q")
    table = _load_table(spec, n_max, settings=settings, seed_cache=seed_cache, cache_dir=cache_dir)
    if table.terminated_at is not None:
        typer.echo(f"Q terminated at n={table.terminated_at}", err=True)
        raise typer.Exit(code=1)
    try:
        with _console.status("[bold green]Building comparison table...[/bold green]"):
            comparison = build_comparison(table, g_max, params)
            report = check_early_doubling(table) if doubling else None
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from None

    if fmt is TableFormat.text:
        typer.echo(comparison_text(comparison))
    else:
        out = OutputFormat.csv if fmt is TableFormat.csv else OutputFormat.json
        typer.echo(render_comparison(comparison, out), nl=False)
    if export is not None:
        out = OutputFormat.json if export.suffix.lower() == ".json" else OutputFormat.csv
        export_comparison(comparison, export, out)
        typer.echo(f"Wrote {export}", err=True)
    if report is not None:
        typer.echo(render_text([report]), err=fmt is not TableFormat.text)
        if not report.passed:
            raise typer.Exit(code=1)


@app.command("export")
def export_cmd(
    spec_text: SpecArg,
    n_max: NMaxOpt,
    *,
    output: Annotated[
        Path,
        typer.Option("--output", "-o", dir_okay=False, help="Output file."),
    ],
    kind: Annotated[
        SeriesKind,
        typer.Option("--kind", case_sensitive=False, help="Series to export."),
    ] = SeriesKind.values,
    fmt: Annotated[
        OutputFormat,
        typer.Option("--format", case_sensitive=False, help="Output file format."),
    ] = OutputFormat.csv,
    spot: Annotated[int, typer.Option("--spot", min=1, help="Spot for generation marks.")] = 1,
    start: Annotated[int, typer.Option("--start", min=1, help="First n (or g) exported.")] = 1,
    stop: Annotated[
        int | None,
        typer.Option("--stop", min=1, help="Last n (or g) exported."),
    ] = None,
    env_file: EnvFileOpt = None,
    cache_dir: CacheDirOpt = None,
    seed_cache: SeedCacheOpt = False,
) -> None:
    """Export a series (values, trend deviation, or generation marks) as CSV or JSON."""
    settings = load_app_settings(env_file=env_file)
    spec = _parse(spec_text)
    if kind is SeriesKind.generation_marks:
        _check_spot(spec, spot)
    table = _load_table(spec, n_max, settings=settings, seed_cache=seed_cache, cache_dir=cache_dir)
    try:
        export_series(table, kind, output, fmt, spot=spot, start=start, stop=stop)
    except ValueError as exc:
        raise typer.BadParameter(str(exc)) from None
    typer.echo(f"Wrote {output} sha256={sha256_file_hex(output)}", err=True)


def run(argv: Sequence[str]) -> int:
    """Run the CLI on an argument list and return the process exit code.

    Usage errors exit 2, failed checks 1, success 0.

    Args:
        argv: Arguments without the program name.

    Returns:
        Exit code.
    """
    try:
        app(args=list(argv), prog_name="metafib")
    except SystemExit as exc:
        code = exc.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 1
    return 0
