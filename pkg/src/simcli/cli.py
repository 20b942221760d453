"""Experiment CLI commands."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import click
from loguru import logger

from ..common.errors import DivlatError
from ..common.models import RunConfig, RuntimeSettings
from ..common.utils import atomic_write_text, parse_rho_grid
from ..ldpc.alist import write_alist
from ..ldpc.generate import count_four_cycles, gen_regular
from .runner import default_output, load_config, run, validate

U64 = click.IntRange(0, 2**64 - 1)


def config_option(f):
    return click.option(
        "--config",
        "config_path",
        required=True,
        type=click.Path(exists=True, dir_okay=False, path_type=Path),
        help="JSON run configuration",
    )(f)


def seed_option(f):
    return click.option(
        "--seed",
        type=U64,
        help="Master seed; required unless the config sets seed, and wins over it",
    )(f)


def workers_option(f):
    return click.option(
        "--workers",
        type=click.IntRange(min=1),
        help="Worker processes (or set DIVLAT_WORKERS env var)",
    )(f)


def out_option(f):
    return click.option(
        "--out",
        type=click.Path(dir_okay=False, path_type=Path),
        help="CSV output path (default: results/<kind>-<field>-<hash>.csv)",
    )(f)


def rho_option(f):
    return click.option(
        "--rho-db",
        metavar="A:B:STEP",
        help="SNR grid in dB, inclusive; overrides channel.rho_db",
    )(f)


def _prepare(
    kind: str,
    config_path: Path,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    rho_db: Optional[str] = None,
    out: Optional[Path] = None,
) -> RunConfig:
    """Merge flags into the config file and validate; problems exit with status 2."""
    try:
        overrides = {
            "kind": kind,
            "seed": seed,
            "workers": workers,
            "rho_db": parse_rho_grid(rho_db) if rho_db is not None else None,
            "output": str(out) if out is not None else None,
        }
        raw = load_config(config_path, overrides)
        if raw.get("workers") is None:
            raw["workers"] = RuntimeSettings().workers
    except (DivlatError, ValueError) as e:
        raise click.UsageError(str(e))

    diagnostics = validate(raw, base_dir=config_path.parent)
    if diagnostics:
        for line in diagnostics:
            logger.error(line)
        raise click.UsageError("invalid configuration:\n  " + "\n  ".join(diagnostics))
    return RunConfig.model_validate(raw)


def _execute(config: RunConfig, base_dir: Path) -> None:
    """Run and write the CSV; runtime failures exit with status 1."""
    try:
        result = run(config, click.echo, base_dir=base_dir)
        if result.csv_text is None:
            return
        path = Path(config.output) if config.output else default_output(config)
        atomic_write_text(path, result.csv_text)
    except (DivlatError, OSError) as e:
        logger.error(f"{config.kind} run failed: {e}")
        raise click.ClickException(str(e))
    click.echo(f"Wrote {path}")


@click.command("build-check")
@config_option
def build_check(config_path: Path):
    """Build the lattice of a config and verify its invariants."""
    config = _prepare("build-check", config_path)
    _execute(config, config_path.parent)


@click.command()
@config_option
@seed_option
@workers_option
@rho_option
@out_option
def fer(config_path, seed, workers, rho_db, out):
    """Simulate the frame-error rate of the two-stage decoder."""
    config = _prepare("fer", config_path, seed, workers, rho_db, out)
    _execute(config, config_path.parent)


@click.command()
@config_option
@seed_option
@workers_option
@rho_option
@out_option
def outage(config_path, seed, workers, rho_db, out):
    """Estimate the Poltyrev outage limit of the lattice."""
    config = _prepare("outage", config_path, seed, workers, rho_db, out)
    _execute(config, config_path.parent)


@click.command()
@config_option
@seed_option
@workers_option
@rho_option
@out_option
def slb(config_path, seed, workers, rho_db, out):
    """Estimate the sphere lower bound of the lattice."""
    config = _prepare("slb", config_path, seed, workers, rho_db, out)
    _execute(config, config_path.parent)


@click.command("gen-code")
@click.option("-N", "--length", "N", required=True, type=click.IntRange(min=2), help="Code length")
@click.option("--wc", required=True, type=click.IntRange(min=2), help="Column weight")
@click.option("--wr", required=True, type=click.IntRange(min=2), help="Row weight")
@click.option("--seed", default=1, show_default=True, type=U64, help="Construction seed")
@out_option
def gen_code(N, wc, wr, seed, out):
    """Generate a random (wc, wr)-regular parity-check matrix in alist format."""
    try:
        H = gen_regular(N, wc, wr, seed)
    except DivlatError as e:
        raise click.UsageError(str(e))

    logger.info(
        f"Generated {H.n_rows}x{H.n_cols} code with {count_four_cycles(H)} four-cycles"
    )
    text = write_alist(H)
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        atomic_write_text(out, text)
    except OSError as e:
        raise click.ClickException(str(e))
    click.echo(f"Wrote {out}")
