"""CSV rendering of error-rate curves."""

from __future__ import annotations

import csv
import io
from typing import List, Mapping, Optional

from .models import FerCurve

COLUMNS = (
    "rho_db",
    "rho_linear",
    "trials",
    "frame_errors",
    "fer",
    "stage1_errors",
    "stage2_errors",
    "bp_failures",
    "stderr",
)


def render_csv(
    curve: FerCurve, header: Mapping[str, object], title: Optional[str] = None
) -> str:
    """Optional "# title" line, header comment lines ("# key=value"), then one
    row per point.

    Numbers use fixed formats so equal curves render to identical bodies.
    """
    buffer = io.StringIO()
    if title:
        buffer.write(f"# {title}\n")
    for key, value in header.items():
        buffer.write(f"# {key}={value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(COLUMNS)
    for point in curve.points:
        writer.writerow(
            [
                f"{point.rho_db:.6f}",
                f"{point.rho:.12g}",
                point.trials,
                point.frame_errors,
                f"{point.fer:.12g}",
                point.stage1_errors,
                point.stage2_errors,
                point.bp_failures,
                f"{point.stderr:.12g}",
            ]
        )
    return buffer.getvalue()


def csv_body(text: str) -> str:
    """The CSV text without its comment header."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


def read_rows(text: str) -> List[dict]:
    """Parse rendered CSV back into dicts of strings."""
    return list(csv.DictReader(io.StringIO(csv_body(text))))


def header_lines(text: str) -> List[str]:
    return [line[2:].rstrip("\n") for line in text.splitlines(keepends=True) if line.startswith("# ")]
