"""Command line driver: simulate traces, attack them, reproduce the tables.

Exit codes: 0 success, 1 usage error, 2 data or parse error.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click
from pydantic import ValidationError

from attacks.distribution import MAX_BITS, distribution_attack
from attacks.efficiency import measure_sessions_to_success
from attacks.fig2 import fig2_attack
from attacks.scoring import ScoringError, id_residues, score_guess
from attacks.table1 import table1_rows
from generators.session_generator import Precondition, SessionGenerator
from generators.trace_writer import write_trace
from parsers.trace_format import TraceFormatError, TraceHeader
from parsers.trace_parser import read_trace
from protocol.nonce import MASK64
from protocol.word96 import RotationVariant
from utils.config import RunManifest, Settings
from utils.log import configure_logging
from utils.reports import read_json, write_csv, write_json

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_DATA = 2

VARIANTS = click.Choice([v.value for v in RotationVariant])
SEED = click.IntRange(0, MASK64)
OUT_FILE = click.Path(dir_okay=False, path_type=Path)
RANKING_DEPTH = 5


class DataError(click.ClickException):
    exit_code = EXIT_DATA


def _settings() -> Settings:
    return click.get_current_context().find_object(Settings)


def _variant(value: Optional[str], settings: Settings) -> RotationVariant:
    return RotationVariant(value) if value else settings.variant


@click.group()
@click.option("--log-level", default=None, help="Logging level (default INFO)")
@click.option(
    "--env-file",
    type=OUT_FILE,
    default=None,
    help="Load settings from this .env file instead of ./.env",
)
@click.pass_context
def main(ctx: click.Context, log_level: Optional[str], env_file: Optional[Path]):
    """Passive attacks on SASI with modular rotations."""
    try:
        settings = Settings.from_env(env_file)
    except ValidationError as exc:
        raise click.UsageError(f"invalid SASI_* setting: {exc}") from None
    configure_logging(log_level or settings.log_level)
    ctx.obj = settings


@main.command()
@click.option("--seed", type=SEED, default=None, help="Simulation seed")
@click.option("--variant", type=VARIANTS, default=None, help="Rotation variant")
@click.option("--sessions", type=click.IntRange(min=0), required=True)
@click.option("--out", "out_path", type=OUT_FILE, required=True)
@click.option(
    "--secrets",
    "secrets_path",
    type=OUT_FILE,
    default=None,
    help="Where to keep the true ID residues (default: <out>.secrets.json)",
)
@click.option("--note", default=None, help="One-line comment written after the header")
def simulate(
    seed: Optional[int],
    variant: Optional[str],
    sessions: int,
    out_path: Path,
    secrets_path: Optional[Path],
    note: Optional[str],
):
    """Record a trace of consecutive sessions for a fresh random tag."""
    settings = _settings()
    seed = settings.seed if seed is None else seed
    rotation = _variant(variant, settings)
    secrets_path = secrets_path or out_path.with_name(out_path.name + ".secrets.json")

    generator = SessionGenerator.random(seed, rotation)
    try:
        header = TraceHeader(variant=rotation, seed_note=note)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--note") from None
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, 'w', encoding='utf-8', newline='\n') as sink:
        write_trace(
            header, generator.records(sessions), lambda: generator.current_ids, sink
        )
    logger.info(f"Wrote {sessions} sessions to {out_path}")

    manifest = RunManifest.create(
        "simulate",
        settings,
        seed=seed,
        variant=rotation,
        budget=sessions,
        outputs={'trace': str(out_path), 'secrets': str(secrets_path)},
    )
    write_json(secrets_path, {'id_residues': id_residues(generator.tag.id)}, manifest)
    click.echo(f"trace: {out_path}")
    click.echo(f"secrets: {secrets_path}")


@main.command()
@click.argument("trace_path", type=OUT_FILE)
@click.option("--modulus", type=click.IntRange(min=2), default=None)
@click.option(
    "--mode",
    type=click.Choice(["fig2", "distribution"]),
    default="fig2",
    show_default=True,
)
@click.option("--budget", type=click.IntRange(min=1), default=None)
@click.option("--variant", type=VARIANTS, default=None, help="Expected trace variant")
@click.option("--seed", type=SEED, default=None, help="Recorded in the manifest only")
@click.option("--out", "out_path", type=OUT_FILE, required=True)
def attack(
    trace_path: Path,
    modulus: Optional[int],
    mode: str,
    budget: Optional[int],
    variant: Optional[str],
    seed: Optional[int],
    out_path: Path,
):
    """Run an attack over a recorded trace; writes JSON and a histogram CSV."""
    settings = _settings()
    cfg = settings.attack_config(modulus=modulus, session_budget=budget, seed=seed)
    n = cfg.modulus
    if mode == "distribution" and (n & (n - 1) or n > 1 << MAX_BITS):
        raise click.BadParameter(
            f"distribution mode needs a power of two up to {1 << MAX_BITS}",
            param_hint="--modulus",
        )
    if not trace_path.exists():
        raise DataError(f"Trace not found: {trace_path}")

    try:
        with read_trace(trace_path) as trace:
            rotation = trace.header.variant
            if variant and RotationVariant(variant) is not rotation:
                raise click.BadParameter(
                    f"trace was recorded with {rotation.value} rotation",
                    param_hint="--variant",
                )
            cfg = cfg.model_copy(update={'variant': rotation})
            if mode == "fig2":
                report = fig2_attack(trace.transcripts(), cfg)
            else:
                report = distribution_attack(
                    trace.transcripts(),
                    n.bit_length() - 1,
                    cfg.session_budget,
                    rotation,
                )
    except TraceFormatError as exc:
        raise DataError(f"{trace_path}: {exc}") from None

    csv_path = out_path.with_suffix(".csv")
    manifest = RunManifest.create(
        "attack",
        settings,
        seed=cfg.seed,
        variant=rotation,
        modulus=n,
        budget=cfg.session_budget,
        outputs={'report': str(out_path), 'histogram': str(csv_path)},
        parameters={'mode': mode, 'trace': str(trace_path)},
    )
    chi2, p_value = report.histogram.chi_square()
    payload = dict(
        report.summary(),
        mode=mode,
        useful_rate=report.useful_rate,
        chi_square=chi2,
        chi_square_p=p_value,
        margin=report.histogram.margin(),
        ranking=report.histogram.ranked()[:RANKING_DEPTH],
    )
    write_json(out_path, payload, manifest)
    write_csv(csv_path, report.histogram.to_rows(), manifest)
    click.echo(json.dumps(report.summary(), sort_keys=True))


def _moduli(ctx, param, value: str) -> list[int]:
    try:
        moduli = [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter("expected comma separated integers") from None
    if not moduli or any(n < 2 for n in moduli):
        raise click.BadParameter("every modulus must be at least 2")
    return moduli


@main.command()
@click.option("--moduli", callback=_moduli, default="128,96,106,101", show_default=True)
@click.option(
    "--trials", type=click.IntRange(min=1), default=100_000, show_default=True
)
@click.option("--seed", type=SEED, default=None)
@click.option(
    "--precondition",
    type=click.Choice([p.value for p in Precondition]),
    default=Precondition.DEGENERATE.value,
    show_default=True,
)
@click.option("--workers", type=click.IntRange(min=1), default=None)
@click.option("--out", "out_path", type=OUT_FILE, required=True)
def table1(
    moduli: list[int],
    trials: int,
    seed: Optional[int],
    precondition: str,
    workers: Optional[int],
    out_path: Path,
):
    """Estimate the joint probability of the residue relations per modulus."""
    settings = _settings()
    seed = settings.seed if seed is None else seed
    rows = table1_rows(
        moduli, trials, seed, Precondition(precondition), workers or settings.workers
    )
    manifest = RunManifest.create(
        "table1",
        settings,
        seed=seed,
        variant=RotationVariant.MODULAR,
        outputs={'table': str(out_path)},
        parameters={
            'moduli': sorted(set(moduli)),
            'trials': trials,
            'precondition': precondition,
        },
    )
    table = [row.to_dict() for row in rows]
    write_csv(out_path, table, manifest)
    for entry in table:
        click.echo(
            f"N={entry['modulus']:<5} {entry['class']:<16} "
            f"table={entry['theoretical']!s:<10} measured={entry['empirical']:.4f}"
        )


@main.command()
@click.argument("report_path", type=OUT_FILE)
@click.option("--secrets", "secrets_path", type=OUT_FILE, required=True)
@click.option("--out", "out_path", type=OUT_FILE, default=None)
def score(report_path: Path, secrets_path: Path, out_path: Optional[Path]):
    """Compare an attack report with the secrets file of its trace."""
    settings = _settings()
    for path in (report_path, secrets_path):
        if not path.exists():
            raise DataError(f"File not found: {path}")
    try:
        report = read_json(report_path)
        secrets = read_json(secrets_path)
        result = score_guess(report, secrets['id_residues'])
    except (KeyError, json.JSONDecodeError, ScoringError) as exc:
        raise DataError(f"Cannot score {report_path}: {exc}") from None

    if out_path is not None:
        manifest = RunManifest.create(
            "score",
            settings,
            modulus=result['modulus'],
            outputs={'score': str(out_path)},
            parameters={'report': str(report_path), 'secrets': str(secrets_path)},
        )
        write_json(out_path, result, manifest)
    click.echo(json.dumps(result, sort_keys=True))


@main.command()
@click.option("--seed", type=SEED, default=None, help="First seed of the runs")
@click.option("--runs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--variant", type=VARIANTS, default=None)
@click.option("--modulus", type=click.IntRange(min=2), default=None)
@click.option("--budget", type=click.IntRange(min=1), default=None)
@click.option(
    "--first-checkpoint", type=click.IntRange(min=1), default=2**10, show_default=True
)
@click.option("--out", "out_path", type=OUT_FILE, required=True)
def efficiency(
    seed: Optional[int],
    runs: int,
    variant: Optional[str],
    modulus: Optional[int],
    budget: Optional[int],
    first_checkpoint: int,
    out_path: Path,
):
    """Measure how many sessions the residue vote needs to settle on ID mod N."""
    settings = _settings()
    cfg = settings.attack_config(
        modulus=modulus, session_budget=budget, seed=seed, variant=variant
    )
    if cfg.seed + runs - 1 > MASK64:
        raise click.BadParameter("seed range exceeds 64 bits", param_hint="--runs")

    rows = []
    for offset in range(runs):
        result = measure_sessions_to_success(
            cfg.model_copy(update={'seed': cfg.seed + offset}), first_checkpoint
        )
        rows.extend(result.to_rows())
        click.echo(
            f"seed {result.seed}: sessions to success {result.sessions_to_success}"
        )

    manifest = RunManifest.create(
        "efficiency",
        settings,
        seed=cfg.seed,
        variant=cfg.variant,
        modulus=cfg.modulus,
        budget=cfg.session_budget,
        outputs={'checkpoints': str(out_path)},
        parameters={'runs': runs, 'first_checkpoint': first_checkpoint},
    )
    write_csv(out_path, rows, manifest)


def run(argv: Optional[list[str]] = None):
    """Console entry point with the documented exit codes"""
    try:
        main.main(args=argv, prog_name="sasi-lab", standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(EXIT_USAGE)
    except click.UsageError as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except OSError as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(EXIT_DATA)


if __name__ == "__main__":
    run()
