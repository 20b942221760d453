"""Pydantic models for run configuration shared across divlat modules."""

from __future__ import annotations

from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .utils import spec_hash


class QuadraticField(BaseModel):
    """Real quadratic field Q(sqrt(m))"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["quadratic"] = "quadratic"
    m: int = Field(..., gt=1, le=10**6, description="Square-free radicand")


class CubicExampleField(BaseModel):
    """The cubic field defined by x^3 - x^2 - 3x + 1"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["cubic-example"] = "cubic-example"


class PolyField(BaseModel):
    """Monogenic field given by its monic defining polynomial"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["poly"] = "poly"
    coeffs: List[int] = Field(
        ..., min_length=2, description="Coefficients, lowest degree first"
    )

    @field_validator("coeffs")
    @classmethod
    def validate_monic(cls, v: List[int]) -> List[int]:
        if v[-1] != 1:
            raise ValueError("Polynomial must be monic (last coefficient 1)")
        return v


class CatalogField(BaseModel):
    """Hard-coded validated field looked up by name"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["catalog"] = "catalog"
    name: str = Field(..., min_length=1)


FieldDescriptor = Annotated[
    Union[QuadraticField, CubicExampleField, PolyField, CatalogField],
    Field(discriminator="kind"),
]


class RegularCodeParams(BaseModel):
    """Parameters of a random (wc, wr)-regular code"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    N: int = Field(..., gt=0, le=100_000, description="Code length")
    wc: int = Field(..., ge=2, description="Column weight")
    wr: int = Field(..., ge=2, description="Row weight")
    seed: int = Field(default=1, ge=0)


class CodeDescriptor(BaseModel):
    """Binary code reference: exactly one of alist, regular, rows or builtin"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    alist: Optional[str] = Field(default=None, description="Path to an alist file")
    regular: Optional[RegularCodeParams] = None
    rows: Optional[List[List[int]]] = Field(
        default=None, description="Dense parity-check rows of 0/1 entries"
    )
    builtin: Optional[Literal["example-3x4"]] = None

    @field_validator("rows")
    @classmethod
    def validate_rows(cls, v: Optional[List[List[int]]]) -> Optional[List[List[int]]]:
        if v is None:
            return v
        if not v or not v[0]:
            raise ValueError("rows must describe a non-empty matrix")
        width = len(v[0])
        for row in v:
            if len(row) != width:
                raise ValueError("all rows must have the same length")
            if any(bit not in (0, 1) for bit in row):
                raise ValueError("rows may only contain 0 and 1")
        return v

    @model_validator(mode="after")
    def exactly_one_source(self) -> "CodeDescriptor":
        given = [
            name
            for name in ("alist", "regular", "rows", "builtin")
            if getattr(self, name) is not None
        ]
        if len(given) != 1:
            raise ValueError(
                "code descriptor needs exactly one of alist, regular, rows, builtin"
            )
        return self


class ChannelConfig(BaseModel):
    """Block-fading channel parameters"""

    model_config = ConfigDict(extra="forbid")

    nakagami_m: float = Field(default=1.0, gt=0, description="Nakagami shape")
    rho_db: List[float] = Field(
        default_factory=list, description="SNR grid in dB, strictly increasing"
    )

    @field_validator("rho_db")
    @classmethod
    def validate_increasing(cls, v: List[float]) -> List[float]:
        for a, b in zip(v, v[1:]):
            if b <= a:
                raise ValueError("rho grid must be strictly increasing")
        return v


class DecoderConfig(BaseModel):
    """Two-stage decoder options"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    prime_search: Literal["faded", "equalized"] = Field(
        default="faded",
        description="Stage-one search: exact ML on the faded lattice, or gain equalization with R",
    )
    noise_reduction: bool = Field(
        default=True, description="Apply R in the equalized search (False uses the identity)"
    )
    selection: Literal["max", "first"] = Field(
        default="max", description="Residual selection rule for the LLR input"
    )
    max_iter: int = Field(default=50, ge=1, le=10_000)
    deep_fade_box: int = Field(default=2, ge=0, le=8)


class RunConfig(BaseModel):
    """A complete, re-runnable experiment description"""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["fer", "outage", "slb", "build-check"] = "build-check"
    field: FieldDescriptor
    code: CodeDescriptor
    prime_root: Optional[int] = Field(default=None, ge=0, le=1)
    channel: ChannelConfig = Field(default_factory=ChannelConfig)
    decoder: DecoderConfig = Field(default_factory=DecoderConfig)
    trials: int = Field(
        default=1_000_000,
        gt=0,
        description="Frame cap for fer, trial count for outage and slb",
    )
    target_errors: int = Field(default=100, gt=0)
    batch_size: int = Field(default=256, gt=0, description="Frames per worker per round")
    z_box: int = Field(default=2, ge=0, description="Transmitted z entries in [-z_box, z_box]")
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    workers: Optional[int] = Field(default=None, ge=1)
    output: Optional[str] = None

    def spec_descriptor(self) -> Dict[str, Any]:
        """The lattice part of the config, as recorded for provenance."""
        return {
            "field": self.field.model_dump(),
            "prime_root": self.prime_root,
            "code": self.code.model_dump(exclude_none=True),
        }

    def spec_hash(self) -> str:
        return spec_hash(self.spec_descriptor())


class RuntimeSettings(BaseSettings):
    """Process defaults read from DIVLAT_* environment variables"""

    model_config = SettingsConfigDict(env_prefix="DIVLAT_")

    workers: int = Field(default=1, ge=1, description="Worker processes")
