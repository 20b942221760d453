"""Monte-Carlo frame-error simulation and bound curves.

Work is split into rounds. In every round each worker decodes a fixed batch
drawn from its own stream (seed, point, round, worker); counters are summed
after the round and the stopping rule is checked only between rounds. Curves
therefore depend on (seed, workers, batch size) and nothing else.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from loguru import logger

from ..channel.fading import sample_fading, transmit
from ..common.errors import AllBlocksFaded, InvalidInput
from ..common.models import DecoderConfig
from ..common.utils import make_rng, spec_hash
from ..decoder.pipeline import full_decode
from ..latcore.lattice import LatticeSpec, encode, log_det_scaled
from .bounds import poltyrev_outage, slb
from .models import CurveMeta, FerCurve, FerPoint

DEFAULT_TARGET_ERRORS = 100
DEFAULT_MAX_FRAMES = 1_000_000


@dataclass(frozen=True)
class SimulationPlan:
    """Knobs of a frame-error run"""

    max_frames: int = DEFAULT_MAX_FRAMES
    target_errors: int = DEFAULT_TARGET_ERRORS
    batch_size: int = 256
    z_box: int = 2
    nakagami_m: float = 1.0
    workers: int = 1

    def __post_init__(self) -> None:
        if self.max_frames < 1 or self.target_errors < 1 or self.batch_size < 1:
            raise InvalidInput("Frame budget, target errors and batch size must be positive")
        if self.workers < 1:
            raise InvalidInput(f"workers must be at least 1, got {self.workers}")
        if self.z_box < 0 or self.nakagami_m <= 0:
            raise InvalidInput("z_box must be >= 0 and nakagami_m > 0")


@dataclass
class Counters:
    trials: int = 0
    frame_errors: int = 0
    stage1_errors: int = 0
    stage2_errors: int = 0
    bp_failures: int = 0

    def add(self, other: "Counters") -> None:
        self.trials += other.trials
        self.frame_errors += other.frame_errors
        self.stage1_errors += other.stage1_errors
        self.stage2_errors += other.stage2_errors
        self.bp_failures += other.bp_failures


def simulate_batch(
    spec: LatticeSpec,
    decoder: DecoderConfig,
    rho: float,
    frames: int,
    plan: SimulationPlan,
    rng: np.random.Generator,
) -> Counters:
    """Encode, transmit and decode frames random lattice points at SNR rho."""
    sigma2 = 1.0 / rho
    counters = Counters()
    for _ in range(frames):
        msg = rng.integers(0, 2, size=spec.k)
        z = rng.integers(-plan.z_box, plan.z_box + 1, size=spec.dim)
        point = encode(spec, msg, z)
        frame = sample_fading(spec.n, plan.nakagami_m, rng)
        y = transmit(point.x, frame, sigma2, rng)

        counters.trials += 1
        try:
            result = full_decode(spec, y, frame, sigma2, decoder, truth=point)
        except AllBlocksFaded:
            counters.frame_errors += 1
            counters.stage1_errors += 1
            counters.stage2_errors += 1
            counters.bp_failures += 1
            continue
        counters.frame_errors += not result.frame_ok
        counters.stage1_errors += not result.stage1_ok
        counters.stage2_errors += not result.stage2_ok
        counters.bp_failures += not result.bp_converged
    return counters


# Per-process state installed by the pool initializer
_WORKER_CONTEXT: dict = {}


def _init_worker(spec: LatticeSpec, decoder: DecoderConfig, plan: SimulationPlan) -> None:
    logger.disable("src")
    _WORKER_CONTEXT.update(spec=spec, decoder=decoder, plan=plan)


def _run_task(task: tuple) -> Counters:
    seed, point_index, round_index, worker, rho, frames = task
    rng = make_rng(seed, point_index, round_index, worker)
    return simulate_batch(
        _WORKER_CONTEXT["spec"],
        _WORKER_CONTEXT["decoder"],
        rho,
        frames,
        _WORKER_CONTEXT["plan"],
        rng,
    )


def _round_sizes(remaining: int, workers: int, batch_size: int) -> List[int]:
    """Frames per worker for the next round, never exceeding the remaining budget."""
    sizes = []
    for _ in range(workers):
        size = min(batch_size, remaining)
        sizes.append(size)
        remaining -= size
    return sizes


def fer_sim(
    spec: LatticeSpec,
    rho_list: Sequence[float],
    seed: int,
    plan: SimulationPlan = SimulationPlan(),
    decoder: DecoderConfig = DecoderConfig(),
    progress: Optional[Callable[[FerPoint], None]] = None,
) -> FerCurve:
    """Frame-error curve over rho_list (linear SNR).

    Each point stops at plan.target_errors frame errors or plan.max_frames
    frames, whichever comes first.
    """
    if not rho_list:
        raise InvalidInput("rho_list must not be empty")
    if any(rho <= 0 for rho in rho_list):
        raise InvalidInput("rho values must be positive")

    executor: Optional[ProcessPoolExecutor] = None
    if plan.workers > 1:
        executor = ProcessPoolExecutor(
            max_workers=plan.workers,
            initializer=_init_worker,
            initargs=(spec, decoder, plan),
        )
    else:
        _WORKER_CONTEXT.update(spec=spec, decoder=decoder, plan=plan)

    points: List[FerPoint] = []
    try:
        for point_index, rho in enumerate(rho_list):
            total = Counters()
            round_index = 0
            while total.frame_errors < plan.target_errors and total.trials < plan.max_frames:
                sizes = _round_sizes(plan.max_frames - total.trials, plan.workers, plan.batch_size)
                tasks = [
                    (seed, point_index, round_index, worker, rho, size)
                    for worker, size in enumerate(sizes)
                    if size > 0
                ]
                if executor is None:
                    results = [_run_task(task) for task in tasks]
                else:
                    results = list(executor.map(_run_task, tasks))
                for counters in results:
                    total.add(counters)
                round_index += 1
                logger.debug(
                    f"rho={rho:.6g} round {round_index}: "
                    f"{total.frame_errors}/{total.trials} frame errors"
                )

            point = FerPoint(
                rho=rho,
                trials=total.trials,
                frame_errors=total.frame_errors,
                stage1_errors=total.stage1_errors,
                stage2_errors=total.stage2_errors,
                bp_failures=total.bp_failures,
            )
            points.append(point)
            if progress is not None:
                progress(point)
    finally:
        if executor is not None:
            executor.shutdown()
        _WORKER_CONTEXT.clear()

    return FerCurve(
        points=points,
        meta=CurveMeta(
            kind="fer",
            spec_hash=spec_hash(spec.descriptor),
            seed=seed,
            workers=plan.workers,
        ),
    )


def outage_curve(
    spec: LatticeSpec,
    rho_list: Sequence[float],
    trials: int,
    seed: int,
    nakagami_m: float = 1.0,
    progress: Optional[Callable[[FerPoint], None]] = None,
) -> FerCurve:
    """Poltyrev outage estimates, one independent stream per point."""
    points = []
    for point_index, rho in enumerate(rho_list):
        estimate = poltyrev_outage(spec, rho, trials, nakagami_m, make_rng(seed, point_index))
        point = FerPoint.from_estimate(rho, estimate)
        points.append(point)
        if progress is not None:
            progress(point)
    return FerCurve(
        points=points,
        meta=CurveMeta(kind="outage", spec_hash=spec_hash(spec.descriptor), seed=seed),
    )


def slb_curve(
    spec: LatticeSpec,
    rho_list: Sequence[float],
    trials: int,
    seed: int,
    nakagami_m: float = 1.0,
    progress: Optional[Callable[[FerPoint], None]] = None,
) -> FerCurve:
    """Sphere lower bound with per-block volume det_scaled^{1/N}."""
    detM = math.exp(log_det_scaled(spec) / spec.N)
    points = []
    for point_index, rho in enumerate(rho_list):
        estimate = slb(spec.n, spec.N, detM, rho, trials, nakagami_m, make_rng(seed, point_index))
        point = FerPoint(
            rho=rho, trials=trials, value=estimate.value, value_stderr=estimate.stderr
        )
        points.append(point)
        if progress is not None:
            progress(point)
    return FerCurve(
        points=points,
        meta=CurveMeta(kind="slb", spec_hash=spec_hash(spec.descriptor), seed=seed),
    )
