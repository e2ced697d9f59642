"""
Neyman-Pearson detection of a small perturbation.

The optimal detection probability at fixed false alarm for two pure states,
the Kennedy (nulling) receiver that attains its zero-false-alarm point, an
on/off detector with finite efficiency and dark counts, and the threshold
search for the smallest perturbation with P11 >= 1/2.
"""

from __future__ import annotations

import functools
import logging
import math
from typing import List, Optional

import numpy as np
from scipy.optimize import brentq

from . import fock
from .closed_forms import kappa_squeezed_approx, kappa_squeezed_exact
from .errors import DegenerateThresholdError, DomainError, NoCrossingError
from .models import (
    DetectorModel,
    KappaMode,
    NPResult,
    PerturbationSpec,
    PhiMethod,
    PhiMinResult,
    ProbeSpec,
    TruncationConfig,
)

logger = logging.getLogger(__name__)

THRESHOLD = 0.5
BRACKET_POINTS = 64
BRACKET_FLOOR = 1e-9
DEFAULT_ROOT_TOL = 1e-10


def _unit_interval(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


# ---------------------------------------------------------------------------
# Neyman-Pearson bound
# ---------------------------------------------------------------------------

def np_detection_probability(p01: float, kappa: float) -> float:
    """Largest P11 at false-alarm probability ``p01`` for states with overlap ``kappa``."""
    p01 = _unit_interval("p01", p01)
    kappa = _unit_interval("kappa", kappa)
    if p01 >= kappa:
        return 1.0
    p11 = (math.sqrt(p01 * kappa) + math.sqrt((1.0 - p01) * (1.0 - kappa))) ** 2
    return min(1.0, p11)


def np_roc(kappa: float, points: int = 101) -> List[NPResult]:
    """The bound traced over a uniform false-alarm grid on [0, 1]."""
    if points < 2:
        raise DomainError(f"roc needs at least 2 points, got {points}")
    return [
        NPResult(p01=float(p01), p11=np_detection_probability(float(p01), kappa), kappa=kappa)
        for p01 in np.linspace(0.0, 1.0, points)
    ]


# ---------------------------------------------------------------------------
# Kennedy receiver
# ---------------------------------------------------------------------------

def kennedy_ideal(kappa: float) -> NPResult:
    kappa = _unit_interval("kappa", kappa)
    return NPResult(p01=0.0, p11=1.0 - kappa, kappa=kappa)


def dark_probability_from_rate(dark_rate: float, gate: float) -> float:
    """Probability of at least one dark count in a gate of ``gate`` seconds."""
    if dark_rate < 0.0:
        raise DomainError(f"dark rate must be non-negative, got {dark_rate}")
    if not gate > 0.0:
        raise DomainError(f"gate time must be positive, got {gate}")
    p_dark = -math.expm1(-dark_rate * gate)
    if p_dark >= 1.0:
        raise DomainError(
            f"a {gate:g} s gate at {dark_rate:g} counts/s saturates the dark count (p_dark = 1)"
        )
    return p_dark


def _no_click(vec: fock.FockVector, det: DetectorModel) -> float:
    weights = (1.0 - det.p_dark) * (1.0 - det.eta) ** np.arange(vec.dim)
    return float(np.dot(weights, fock.photon_distribution(vec)))


def kennedy_receiver(
    probe: ProbeSpec,
    phi: float,
    det: Optional[DetectorModel] = None,
    cfg: Optional[TruncationConfig] = None,
) -> NPResult:
    """False-alarm and detection probabilities of the nulling receiver.

    Both hypotheses are undone by S(-r)^dagger D(alpha)^dagger and sent to an
    on/off detector whose no-click element is (1 - p_dark) sum_n (1 - eta)^n |n><n|.
    Evolution runs on twice the configured basis; the configured dimension
    bounds the allowed tail of the probe.
    """
    det = det or DetectorModel.ideal()
    cfg = cfg or fock.DEFAULT_CONFIG
    work = cfg.with_dim(2 * cfg.dim)

    psi0 = fock.squeezed_state(probe.alpha, probe.r, work)
    fock.check_truncation(psi0, cfg, f"receiver probe alpha={probe.alpha:g} r={probe.r:g}")
    psi1 = fock.apply(fock.phase_shift_operator(phi, work), psi0)

    undo = fock.squeeze_operator(probe.r, work) @ fock.displacement_operator(-probe.alpha, work)
    residual0 = fock.apply(undo, psi0)
    residual1 = fock.apply(undo, psi1)

    kappa = min(1.0, abs(fock.overlap(psi0, psi1)) ** 2)
    p01 = min(1.0, max(0.0, 1.0 - _no_click(residual0, det)))
    p11 = min(1.0, max(0.0, 1.0 - _no_click(residual1, det)))
    logger.debug("receiver phi=%g eta=%g p_dark=%g -> p01=%.6g p11=%.6g", phi, det.eta, det.p_dark, p01, p11)
    return NPResult(p01=p01, p11=p11, kappa=kappa)


# ---------------------------------------------------------------------------
# Threshold search
# ---------------------------------------------------------------------------

def np_minimum_perturbation(
    spec: PerturbationSpec, p01: float = 0.0, tol: float = DEFAULT_ROOT_TOL
) -> float:
    """Smallest g in (0, g_max] where the Neyman-Pearson P11 reaches 1/2.

    The first sign change on a geometric grid is bracketed and refined with
    Brent's method, so a non-monotone overlap still yields its smallest crossing.
    """
    p01 = _unit_interval("p01", p01)

    def excess(g: float) -> float:
        kappa = min(1.0, max(0.0, spec.kappa_fn(g)))
        return np_detection_probability(p01, kappa) - THRESHOLD

    grid = np.geomspace(spec.g_max * BRACKET_FLOOR, spec.g_max, BRACKET_POINTS)
    values = [excess(float(g)) for g in grid]
    if values[0] >= 0.0:
        raise DegenerateThresholdError(
            f"P11 >= 1/2 already at g = {grid[0]:.3e} with p01 = {p01}; the threshold is degenerate"
        )
    hit = next((i for i, v in enumerate(values) if v >= 0.0), None)
    if hit is None:
        raise NoCrossingError(
            f"P11 stays below 1/2 on (0, {spec.g_max:g}]; the perturbation is undetectable at this power"
        )
    lo, hi = float(grid[hit - 1]), float(grid[hit])
    logger.debug("threshold bracketed in [%.6g, %.6g]", lo, hi)
    if values[hit] == 0.0:
        return hi
    return float(brentq(excess, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps))


def phi_perturbation(probe: ProbeSpec, mode: KappaMode = KappaMode.EXACT) -> PerturbationSpec:
    """Overlap of the probe with its phase-shifted copy, searched over (0, pi]."""
    kappa = kappa_squeezed_exact if mode is KappaMode.EXACT else kappa_squeezed_approx
    return PerturbationSpec(kappa_fn=functools.partial(kappa, probe), g_max=math.pi)


def phi_min_numeric(
    probe: ProbeSpec,
    mode: KappaMode = KappaMode.EXACT,
    p01: float = 0.0,
    tol: float = DEFAULT_ROOT_TOL,
) -> PhiMinResult:
    phi = np_minimum_perturbation(phi_perturbation(probe, mode), p01=p01, tol=tol)
    return PhiMinResult(phi_m=phi, method=PhiMethod.numeric(mode), probe=probe)
