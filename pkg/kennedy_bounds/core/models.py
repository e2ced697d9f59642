"""
Domain records shared across the core modules.

Parameter records validate their ranges on construction (pydantic raises
``ValidationError``); result records are frozen so they can be handed between
threads and cached freely.
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Any, Callable, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


# ---------------------------------------------------------------------------
# Enumerations
# ---------------------------------------------------------------------------

class KappaMode(str, Enum):
    """Which overlap expression a minimum-phase solve uses."""

    EXACT = "exact"    # full overlap of the displaced squeezed probe
    APPROX = "approx"  # second-order small-phase expansion


class PhiMethod(str, Enum):
    """How a minimum detectable phase was obtained."""

    CLOSED_FORM_COHERENT = "closed_form_coherent"
    CLOSED_FORM_SQUEEZED = "closed_form_squeezed"
    CLOSED_FORM_SQUEEZED_VACUUM = "closed_form_squeezed_vacuum"
    CLOSED_FORM_BRIGHT = "closed_form_bright"
    NUMERIC_ROOT_EXACT = "numeric_root_exact"
    NUMERIC_ROOT_APPROX = "numeric_root_approx"

    @classmethod
    def numeric(cls, mode: KappaMode) -> "PhiMethod":
        return cls.NUMERIC_ROOT_EXACT if mode is KappaMode.EXACT else cls.NUMERIC_ROOT_APPROX


# ---------------------------------------------------------------------------
# Fock-space numerics
# ---------------------------------------------------------------------------

class TruncationConfig(_Frozen):
    """Cutoff of the number basis and the tolerances checked against it.

    ``margin`` rows/columns at the top of the basis are excluded from the
    block-unitarity check; it defaults to ``dim // 4``.
    """

    dim: int = Field(64, ge=4)
    unitarity_tol: float = Field(1e-8, gt=0)
    norm_tol: float = Field(1e-8, gt=0)
    margin: int = Field(0, ge=0)

    @model_validator(mode="before")
    @classmethod
    def _default_margin(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("margin") is None:
            data = dict(data)
            data["margin"] = int(data.get("dim", 64)) // 4
        return data

    @model_validator(mode="after")
    def _check_margin(self) -> "TruncationConfig":
        if self.margin >= self.dim:
            raise ValueError(f"margin ({self.margin}) must be smaller than dim ({self.dim})")
        return self

    def with_dim(self, dim: int) -> "TruncationConfig":
        """Same tolerances, different cutoff (margin rescaled to ``dim // 4``)."""
        return TruncationConfig(
            dim=dim, unitarity_tol=self.unitarity_tol, norm_tol=self.norm_tol
        )


# ---------------------------------------------------------------------------
# Probes and power budgets
# ---------------------------------------------------------------------------

class ProbeSpec(_Frozen):
    """Displaced squeezed probe D(alpha) S(-r)|0>; ``r = 0`` is a coherent probe."""

    alpha: float = Field(ge=0.0)
    r: float = Field(0.0, ge=0.0)

    @property
    def n_coherent(self) -> float:
        return self.alpha ** 2

    @property
    def n_squeezing(self) -> float:
        return math.sinh(self.r) ** 2

    @property
    def n_total(self) -> float:
        return self.n_coherent + self.n_squeezing

    @property
    def is_coherent(self) -> bool:
        return self.r == 0.0


class PowerBudget(_Frozen):
    """Total mean photon number split between coherent amplitude and squeezing."""

    n_total: float = Field(gt=0.0)
    ratio: float = Field(ge=0.0, le=1.0)

    @property
    def n_coherent(self) -> float:
        return (1.0 - self.ratio) * self.n_total

    @property
    def n_squeezing(self) -> float:
        return self.ratio * self.n_total

    @property
    def alpha(self) -> float:
        return math.sqrt(self.n_coherent)

    @property
    def r(self) -> float:
        return math.asinh(math.sqrt(self.n_squeezing))

    def probe(self) -> ProbeSpec:
        return ProbeSpec(alpha=self.alpha, r=self.r)


class SigmaPair(_Frozen):
    sigma1: float = Field(gt=0.0)
    sigma2: float = Field(gt=0.0)

    @property
    def product(self) -> float:
        return self.sigma1 * self.sigma2


class PhiMinResult(_Frozen):
    """A minimum detectable phase together with how it was found and for which probe."""

    phi_m: float = Field(gt=0.0)
    method: PhiMethod
    probe: ProbeSpec

    @model_validator(mode="after")
    def _finite(self) -> "PhiMinResult":
        if not math.isfinite(self.phi_m):
            raise ValueError("phi_m must be finite")
        return self

    @property
    def n_coherent(self) -> float:
        return self.probe.n_coherent

    @property
    def n_squeezing(self) -> float:
        return self.probe.n_squeezing


# ---------------------------------------------------------------------------
# Detection
# ---------------------------------------------------------------------------

class DetectorModel(_Frozen):
    """On/off photodetector: quantum efficiency and per-gate dark-count probability."""

    eta: float = Field(1.0, ge=0.0, le=1.0)
    p_dark: float = Field(0.0, ge=0.0, lt=1.0)

    @classmethod
    def ideal(cls) -> "DetectorModel":
        return cls()


class NPResult(_Frozen):
    """False-alarm and detection probabilities, with the overlap that produced them."""

    p01: float = Field(ge=0.0, le=1.0)
    p11: float = Field(ge=0.0, le=1.0)
    kappa: float = Field(ge=0.0, le=1.0)


class PerturbationSpec(BaseModel):
    """Overlap as a function of the perturbation parameter g, searched on (0, g_max]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kappa_fn: Callable[[float], float]
    g_max: float = Field(gt=0.0)


# ---------------------------------------------------------------------------
# Sweeps and optimisation
# ---------------------------------------------------------------------------

class SweepPoint(_Frozen):
    """One sweep sample; ``phi_m is None`` marks a point where no threshold crossing exists."""

    x: float
    phi_m: Optional[float] = Field(None, gt=0.0)
    tag: Optional[str] = None

    @property
    def present(self) -> bool:
        return self.phi_m is not None


class SweepCurve(_Frozen):
    points: Tuple[SweepPoint, ...]
    label: Optional[str] = None

    @model_validator(mode="after")
    def _increasing(self) -> "SweepCurve":
        xs = [p.x for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("sweep x values must be strictly increasing")
        return self


class OptimumResult(_Frozen):
    """Best split of a budget. ``phi_sv`` is absent when pure squeezing never reaches the threshold."""

    n_total: float = Field(gt=0.0)
    ratio_opt: float = Field(ge=0.0, le=1.0)
    phi_opt: float = Field(gt=0.0)
    phi_sv: Optional[float] = Field(None, gt=0.0)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def relative(self) -> Optional[float]:
        if self.phi_sv is None:
            return None
        return self.phi_opt / self.phi_sv

