"""
Run configuration for the command-line front end.

Flags are the only configuration source. The YAML presets under
``core/presets`` supply default grids, and are loaded the same way as any
other YAML manifest.
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.models import DetectorModel, PowerBudget, ProbeSpec, TruncationConfig

CORE_DIR = Path(__file__).resolve().parent.parent / "core"
PRESET_DIR = CORE_DIR / "presets"
SCHEMA_DIR = CORE_DIR / "schemas"

COMMANDS = (
    "kappa",
    "bound",
    "phimin",
    "sweep-ratio",
    "sweep-n",
    "optimize",
    "verify",
    "receiver",
    "roc",
    "beamsplitter",
)


@lru_cache(maxsize=None)
def load_preset(name: str) -> Dict[str, Any]:
    path = PRESET_DIR / f"{name}.yaml"
    with open(path, "r") as f:
        return yaml.safe_load(f) or {}


# ---------------------------------------------------------------------------
# Verification grid
# ---------------------------------------------------------------------------

class ProbePoint(BaseModel):
    alpha: float = Field(ge=0.0)
    r: float = Field(0.0, ge=0.0)


class ExtendedProbes(BaseModel):
    min_dim: int = Field(ge=4)
    probes: List[ProbePoint] = []


class VerifyGrid(BaseModel):
    model_config = ConfigDict(frozen=True)

    tolerance: float = Field(gt=0.0)
    phi: List[float]
    coherent: Dict[str, List[float]]
    squeezed: Dict[str, List[float]]
    extended: Optional[ExtendedProbes] = None

    @classmethod
    def from_yaml(cls, path: Optional[Path] = None) -> "VerifyGrid":
        if path is None:
            return cls.model_validate(load_preset("verify"))
        with open(path, "r") as f:
            return cls.model_validate(yaml.safe_load(f) or {})

    def coherent_probes(self) -> List[ProbeSpec]:
        return [ProbeSpec(alpha=a, r=0.0) for a in self.coherent.get("alpha", [])]

    def squeezed_probes(self, dim: int) -> List[ProbeSpec]:
        """The alpha x r product; extended probes only once ``dim`` reaches their ``min_dim``."""
        probes = [
            ProbeSpec(alpha=a, r=r)
            for a in self.squeezed.get("alpha", [])
            for r in self.squeezed.get("r", [])
        ]
        if self.extended is None:
            return probes
        gated = [ProbeSpec(alpha=p.alpha, r=p.r) for p in self.extended.probes]
        probes = [p for p in probes if p not in gated]
        if dim >= self.extended.min_dim:
            probes.extend(gated)
        return probes


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------

class RunConfig(BaseModel):
    """Validated flags of one invocation."""

    model_config = ConfigDict(frozen=True, extra="ignore")

    command: Literal[COMMANDS]  # type: ignore[valid-type]

    # probe, either (alpha, r) or (n_total, ratio)
    alpha: Optional[float] = Field(None, ge=0.0)
    r: Optional[float] = Field(None, ge=0.0)
    n_total: Optional[float] = Field(None, gt=0.0)
    ratio: Optional[float] = Field(None, ge=0.0, le=1.0)

    # detector
    eta: float = Field(1.0, ge=0.0, le=1.0)
    dark_rate: float = Field(0.0, ge=0.0)
    gate: Optional[float] = Field(None, gt=0.0)

    # numerics
    dim: int = Field(64, ge=4)
    tol: Optional[float] = Field(None, gt=0.0)

    # output
    output: Optional[Path] = None
    format: Literal["csv", "json"] = "csv"

    @model_validator(mode="after")
    def _one_parameterisation(self) -> "RunConfig":
        direct = self.alpha is not None or self.r is not None
        budget = self.n_total is not None or self.ratio is not None
        if self.command == "phimin" and direct and budget:
            raise ValueError("give either --alpha/--r or --n-total/--ratio, not both")
        if self.command == "phimin" and not (direct or budget):
            raise ValueError("phimin needs --alpha/--r or --n-total/--ratio")
        if budget and self.command == "phimin" and (self.n_total is None or self.ratio is None):
            raise ValueError("--n-total and --ratio must be given together")
        if self.dark_rate > 0.0 and self.gate is None:
            raise ValueError("--dark-rate needs --gate")
        return self

    def probe(self) -> ProbeSpec:
        if self.n_total is not None and self.ratio is not None:
            return PowerBudget(n_total=self.n_total, ratio=self.ratio).probe()
        return ProbeSpec(alpha=self.alpha or 0.0, r=self.r or 0.0)

    def budget(self) -> Tuple[float, float]:
        """(n_total, ratio) of the probe, however it was given."""
        if self.n_total is not None and self.ratio is not None:
            return self.n_total, self.ratio
        probe = self.probe()
        total = probe.n_total
        return total, (probe.n_squeezing / total if total > 0 else 0.0)

    def truncation(self) -> TruncationConfig:
        return TruncationConfig(dim=self.dim)

    def detector(self, p_dark: float) -> DetectorModel:
        return DetectorModel(eta=self.eta, p_dark=p_dark)
