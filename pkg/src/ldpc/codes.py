"""Resolve code descriptors to parity-check matrices."""

from __future__ import annotations

from pathlib import Path
from typing import Any

from ..common.errors import InvalidInput
from .alist import load_alist
from .generate import gen_regular
from .matrix import SparseBinaryMatrix, example_3x4


def load_parity_matrix(descriptor: Any, base_dir: Path | None = None) -> SparseBinaryMatrix:
    """Parity-check matrix for {"alist": path} | {"regular": {...}} |
    {"rows": [[...]]} | {"builtin": "example-3x4"}.

    Relative alist paths resolve against base_dir when given.
    """
    if hasattr(descriptor, "model_dump"):
        descriptor = descriptor.model_dump(exclude_none=True)

    if descriptor.get("alist") is not None:
        path = Path(descriptor["alist"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return load_alist(path)
    if descriptor.get("regular") is not None:
        params = descriptor["regular"]
        return gen_regular(
            int(params["N"]), int(params["wc"]), int(params["wr"]), int(params.get("seed", 1))
        )
    if descriptor.get("rows") is not None:
        return SparseBinaryMatrix.from_dense(descriptor["rows"])
    if descriptor.get("builtin") == "example-3x4":
        return example_3x4()
    raise InvalidInput(f"Unrecognized code descriptor: {descriptor!r}")
