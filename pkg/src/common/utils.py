"""
Common utility functions shared across divlat modules
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, List

import arrow
import numpy as np
from loguru import logger
from slugify import slugify

from .errors import InvalidInput

RNG_ALGORITHM = "Philox4x64"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def canonical_json(payload: Any) -> str:
    """Serialize payload with sorted keys and no insignificant whitespace."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def fnv1a64(data: bytes) -> str:
    """FNV-1a 64-bit hash as a 16 character hex string"""
    value = _FNV_OFFSET
    for byte in data:
        value ^= byte
        value = (value * _FNV_PRIME) & _MASK64
    return f"{value:016x}"


def spec_hash(payload: Any) -> str:
    """Provenance hash of a descriptor: FNV-1a over its canonical JSON."""
    return fnv1a64(canonical_json(payload).encode("utf-8"))


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for the stream identified by (seed, *stream).

    Streams with different keys are statistically independent and the same key
    always reproduces the same sequence, whatever process draws it.
    """
    if seed < 0:
        raise InvalidInput(f"seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence(seed, spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(sequence))


def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    return 10.0 * math.log10(value)


def parse_rho_grid(text: str) -> List[float]:
    """Parse an SNR grid in dB given as "a:b:step" (inclusive) or a single value."""
    parts = [p.strip() for p in text.strip().split(":")]
    try:
        numbers = [float(p) for p in parts if p]
    except ValueError as e:
        raise InvalidInput(f"Invalid rho grid '{text}': {e}") from e

    if len(numbers) == 1 and len(parts) == 1:
        return numbers
    if len(numbers) != 3 or len(parts) != 3:
        raise InvalidInput(f"Invalid rho grid '{text}': expected 'a:b:step'")

    start, stop, step = numbers
    if step <= 0:
        raise InvalidInput(f"Invalid rho grid '{text}': step must be positive")
    if stop < start:
        return []
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


def safe_slugify(text: str, max_length: int = 60, fallback: str = "run") -> str:
    """Safely slugify text with fallback for empty results"""
    if not text or not isinstance(text, str):
        return fallback

    result = slugify(text, max_length=max_length)
    return result if result else fallback


def utc_timestamp() -> str:
    """Current UTC time in ISO 8601, second resolution."""
    return arrow.utcnow().format("YYYY-MM-DDTHH:mm:ss") + "Z"


def atomic_write_text(path: Path, text: str) -> None:
    """Write text so that path holds either the old content or all of text.

    Writes to a sibling temp file, then renames it over the target. On failure
    the temp file is removed and the error re-raised.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = path.with_suffix(path.suffix + ".tmp")
    try:
        with temp_file.open("w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        temp_file.replace(path)
    except Exception:
        logger.warning(f"Failed to write {path}, discarding partial output")
        if temp_file.exists():
            try:
                temp_file.unlink()
            except OSError:
                pass
        raise
