"""Config loading, validation and dispatch of CLI experiments."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from loguru import logger
from pydantic import ValidationError

from .. import __version__
from ..analysis.csvio import render_csv
from ..analysis.models import FerCurve, FerPoint
from ..analysis.simulation import SimulationPlan, fer_sim, outage_curve, slb_curve
from ..common.errors import ArithmeticOverflow, ConstructionError, DivlatError, InvalidInput
from ..common.models import RunConfig, RuntimeSettings
from ..common.utils import (
    RNG_ALGORITHM,
    canonical_json,
    db_to_linear,
    safe_slugify,
    utc_timestamp,
)
from ..latcore.lattice import LatticeSpec, build_spec, det_scaled, disc_gamma, membership
from ..ldpc.codes import load_parity_matrix
from ..ldpc.systematic import systematize
from ..numfield.field import build_field
from ..numfield.primes import default_root_bit, factor_mod2_linear, prime_above_2

SIMULATION_KINDS = ("fer", "outage", "slb")
RESULTS_DIR = Path("results")

Report = Callable[[str], None]


def _format_validation_error(error: ValidationError) -> List[str]:
    diagnostics = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "config"
        diagnostics.append(f"{location}: {item['msg']}")
    return diagnostics


def _check_code(code: Any, base_dir: Optional[Path]) -> List[str]:
    diagnostics = []
    if code.regular is not None:
        params = code.regular
        if (params.N * params.wc) % params.wr:
            diagnostics.append(
                f"code.regular: N*wc = {params.N * params.wc} is not divisible by wr = {params.wr}"
            )
        if params.wr > params.N:
            diagnostics.append(f"code.regular: wr = {params.wr} exceeds N = {params.N}")
    if code.alist is not None:
        path = Path(code.alist)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        if not path.is_file():
            diagnostics.append(f"code.alist: file not found: {path}")
    return diagnostics


def validate(config: RunConfig | Dict[str, Any], base_dir: Optional[Path] = None) -> List[str]:
    """All problems found in config; an empty list means it can run."""
    if not isinstance(config, RunConfig):
        try:
            config = RunConfig.model_validate(config)
        except ValidationError as e:
            return _format_validation_error(e)

    diagnostics: List[str] = []
    try:
        field = build_field(config.field)
    except DivlatError as e:
        diagnostics.append(f"field: {e}")
    else:
        factorization = factor_mod2_linear(field.minpoly)
        if not factorization.linear:
            diagnostics.append(f"field: {field.minpoly} has no linear factor mod 2")
        elif config.prime_root is not None and not factorization.multiplicity(config.prime_root):
            diagnostics.append(
                f"prime_root: x + {config.prime_root} does not divide {field.minpoly} mod 2"
            )

    diagnostics.extend(_check_code(config.code, base_dir))

    if config.kind == "fer" and config.decoder.deep_fade_box < config.z_box:
        diagnostics.append(
            f"decoder.deep_fade_box: {config.decoder.deep_fade_box} is smaller than "
            f"z_box = {config.z_box}, deep-faded frames would be searched in too small a box"
        )

    if config.kind in SIMULATION_KINDS:
        if not config.channel.rho_db:
            diagnostics.append(f"channel.rho_db: a {config.kind} run needs at least one SNR point")
        if config.seed is None:
            diagnostics.append(f"seed: a {config.kind} run needs an explicit seed")
    return diagnostics


def load_config(
    path: Path, overrides: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    """Raw config from a JSON file with command-line overrides applied.

    Overrides whose value is None are ignored; "rho_db" goes into the channel
    section.
    """
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path} is not valid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise InvalidInput(f"{path} must hold a JSON object")

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "rho_db":
            channel = raw.setdefault("channel", {})
            if not isinstance(channel, dict):
                raise InvalidInput("channel must be a JSON object")
            channel["rho_db"] = value
        else:
            raw[key] = value
    return raw


def build_lattice(config: RunConfig, base_dir: Optional[Path] = None) -> LatticeSpec:
    field = build_field(config.field)
    root = config.prime_root if config.prime_root is not None else default_root_bit(field)
    prime = prime_above_2(field, root)
    code = systematize(load_parity_matrix(config.code, base_dir))
    return build_spec(field, prime, code, descriptor=config.spec_descriptor())


def build_check(spec: LatticeSpec, report: Report) -> None:
    """Print the lattice invariants and verify that every generator row
    passes the parity checks."""
    report(f"field: {spec.field.minpoly}  d_K = {spec.field.disc_dK:,}")
    report(f"prime: D = {[list(row) for row in spec.prime.D]}")
    report(f"lattice: n = {spec.n}, N = {spec.N}, k = {spec.k}, dim = {spec.dim}")
    try:
        report(f"disc = {disc_gamma(spec):,}")
    except ArithmeticOverflow:
        log2 = spec.N * math.log2(abs(spec.field.disc_dK)) + 2 * (spec.N - spec.k)
        report(f"disc = 2^{log2:.3f}")
    report(f"det(2 Lambda) = {det_scaled(spec):.6e}")

    for index, row in enumerate(spec.M_C):
        if not membership(spec, row):
            raise ConstructionError(f"Generator row {index} fails the parity checks")
    report("parity identity OK")


def default_output(config: RunConfig) -> Path:
    label = " ".join(str(value) for value in config.field.model_dump().values())
    slug = safe_slugify(f"{config.kind} {label} {config.spec_hash()[:8]}")
    return RESULTS_DIR / f"{slug}.csv"


def csv_header(config: RunConfig, curve: FerCurve) -> Dict[str, Any]:
    return {
        "spec_hash": curve.meta.spec_hash,
        "seed": curve.meta.seed,
        "workers": curve.meta.workers,
        "rng": RNG_ALGORITHM,
        "config": canonical_json(config.model_dump(mode="json", exclude={"output"})),
        "generated": utc_timestamp(),
    }


def summary_line(point: FerPoint) -> str:
    return (
        f"rho = {point.rho_db:7.2f} dB  trials = {point.trials:>8}  "
        f"errors = {point.frame_errors:>6}  bp = {point.bp_failures:>6}  "
        f"p = {point.fer:.4e} +- {point.stderr:.1e}"
    )


@dataclass
class RunResult:
    curve: Optional[FerCurve] = None
    csv_text: Optional[str] = None


def run(
    config: RunConfig,
    report: Report,
    base_dir: Optional[Path] = None,
) -> RunResult:
    """Build the lattice and run the experiment config.kind describes.

    Simulation kinds return the rendered CSV; writing it is up to the caller.
    """
    spec = build_lattice(config, base_dir)
    logger.info(f"Built {spec!r}")

    if config.kind == "build-check":
        build_check(spec, report)
        return RunResult()

    if config.seed is None:
        raise InvalidInput(f"A {config.kind} run needs an explicit seed")
    workers = config.workers or RuntimeSettings().workers
    rho_list = [db_to_linear(value) for value in config.channel.rho_db]

    def progress(point: FerPoint) -> None:
        report(summary_line(point))

    if config.kind == "fer":
        plan = SimulationPlan(
            max_frames=config.trials,
            target_errors=config.target_errors,
            batch_size=config.batch_size,
            z_box=config.z_box,
            nakagami_m=config.channel.nakagami_m,
            workers=workers,
        )
        curve = fer_sim(spec, rho_list, config.seed, plan, config.decoder, progress)
    elif config.kind == "outage":
        curve = outage_curve(
            spec, rho_list, config.trials, config.seed, config.channel.nakagami_m, progress
        )
    else:
        curve = slb_curve(
            spec, rho_list, config.trials, config.seed, config.channel.nakagami_m, progress
        )

    text = render_csv(curve, csv_header(config, curve), title=f"divlat {__version__}")
    logger.success(f"{config.kind} run finished: {len(curve.points)} points")
    return RunResult(curve=curve, csv_text=text)
