"""
Power-constrained optimisation of the probe.

A fixed total photon number is split between coherent amplitude and
squeezing; these helpers sweep the split, sweep the budget, and search for the
split with the smallest detectable phase.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .detection import DEFAULT_ROOT_TOL, THRESHOLD, phi_min_numeric
from .errors import DegenerateThresholdError, DomainError, NoCrossingError
from .models import KappaMode, OptimumResult, PowerBudget, SweepCurve, SweepPoint

logger = logging.getLogger(__name__)

SCAN_POINTS = 33
DEFAULT_RATIO_TOL = 1e-6

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQUARE = (3.0 - math.sqrt(5.0)) / 2.0

_ABSENT = (NoCrossingError, DegenerateThresholdError)


# ---------------------------------------------------------------------------
# Single budget
# ---------------------------------------------------------------------------

def _coherent_threshold(n_coherent: float, mode: KappaMode) -> float:
    # P11 = 1 - kappa = 1/2 inverted directly for the coherent overlap
    if mode is KappaMode.APPROX:
        return math.sqrt(math.log(2.0) / n_coherent)
    cos_phi = 1.0 - math.log(2.0) / (2.0 * n_coherent)
    if cos_phi < -1.0:
        raise NoCrossingError(
            f"coherent probe with {n_coherent:g} photons never reaches P11 = {THRESHOLD}"
        )
    return math.acos(cos_phi)


def phi_min_at(
    budget: PowerBudget,
    mode: KappaMode = KappaMode.EXACT,
    tol: float = DEFAULT_ROOT_TOL,
) -> float:
    """Minimum detectable phase for one power split, zero false alarm."""
    if budget.ratio == 0.0:
        return _coherent_threshold(budget.n_coherent, mode)
    return phi_min_numeric(budget.probe(), mode=mode, tol=tol).phi_m


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def _sample(x: float, budget: PowerBudget, mode: KappaMode, tol: float, tag: Optional[str]) -> SweepPoint:
    try:
        return SweepPoint(x=x, phi_m=phi_min_at(budget, mode, tol), tag=tag)
    except _ABSENT as exc:
        logger.debug("no threshold at n=%g ratio=%g: %s", budget.n_total, budget.ratio, exc)
        return SweepPoint(x=x, phi_m=None, tag=tag)


def sweep_ratio(
    n_total: float,
    grid_size: int = SCAN_POINTS,
    mode: KappaMode = KappaMode.EXACT,
    tol: float = DEFAULT_ROOT_TOL,
) -> SweepCurve:
    """phi_M over a uniform ratio grid on [0, 1], endpoints included."""
    if grid_size < 3:
        raise DomainError(f"grid_size must be at least 3, got {grid_size}")
    points = [
        _sample(float(ratio), PowerBudget(n_total=n_total, ratio=float(ratio)), mode, tol, mode.value)
        for ratio in np.linspace(0.0, 1.0, grid_size)
    ]
    return SweepCurve(points=tuple(points), label=f"n_total={n_total:g}")


def sweep_total(
    n_values: Sequence[float],
    ratios: Sequence[float],
    mode: KappaMode = KappaMode.EXACT,
    tol: float = DEFAULT_ROOT_TOL,
) -> List[SweepCurve]:
    """One curve of phi_M against total photon number per fixed ratio."""
    curves = []
    for ratio in ratios:
        points = [
            _sample(float(n), PowerBudget(n_total=float(n), ratio=float(ratio)), mode, tol, f"{ratio:g}")
            for n in n_values
        ]
        curves.append(SweepCurve(points=tuple(points), label=f"ratio={ratio:g}"))
    return curves


# ---------------------------------------------------------------------------
# Optimisation
# ---------------------------------------------------------------------------

def golden_section(f: Callable[[float], float], a: float, b: float, tol: float) -> Tuple[float, float]:
    """Shrink [a, b] around a minimum of ``f`` until it is narrower than ``tol``."""
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, b

    steps = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)

    for _ in range(steps - 1):
        h *= INV_PHI
        if yc < yd:
            b, d, yd = d, c, yc
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            d = a + INV_PHI * h
            yd = f(d)

    return (a, d) if yc < yd else (c, b)


def optimize_ratio(
    n_total: float,
    tol: float = DEFAULT_RATIO_TOL,
    mode: KappaMode = KappaMode.EXACT,
    bounds: Tuple[float, float] = (0.0, 1.0),
    root_tol: float = DEFAULT_ROOT_TOL,
) -> OptimumResult:
    """Best squeezing share of ``n_total``.

    A 33-point scan locates the global grid minimum; golden-section search then
    refines between its neighbours. The refined point only replaces the grid
    minimum when it is better. When pure squeezing never crosses the threshold
    the result carries no ``phi_sv`` and no ``relative``.
    """
    lo, hi = bounds
    if not 0.0 <= lo <= hi <= 1.0:
        raise DomainError(f"ratio bounds must satisfy 0 <= lo <= hi <= 1, got {bounds}")
    try:
        phi_sv: Optional[float] = phi_min_at(PowerBudget(n_total=n_total, ratio=1.0), mode, root_tol)
    except _ABSENT as exc:
        logger.debug("no squeezed-vacuum reference at n=%g: %s", n_total, exc)
        phi_sv = None

    def phi(ratio: float) -> float:
        try:
            return phi_min_at(PowerBudget(n_total=n_total, ratio=ratio), mode, root_tol)
        except _ABSENT:
            return math.inf

    if lo == hi:
        best_ratio, best_phi = lo, phi(lo)
    else:
        grid = np.linspace(lo, hi, SCAN_POINTS)
        values = [phi(float(x)) for x in grid]
        i = int(np.argmin(values))
        best_ratio, best_phi = float(grid[i]), values[i]
        if math.isfinite(best_phi):
            a, b = golden_section(phi, float(grid[max(i - 1, 0)]), float(grid[min(i + 1, SCAN_POINTS - 1)]), tol)
            refined = 0.5 * (a + b)
            refined_phi = phi(refined)
            logger.debug("n=%g grid best %.6g at %.6g, refined %.6g at %.9g", n_total, best_phi, best_ratio, refined_phi, refined)
            if refined_phi < best_phi:
                best_ratio, best_phi = refined, refined_phi

    if not math.isfinite(best_phi):
        raise NoCrossingError(f"no power split of {n_total:g} photons reaches the detection threshold")
    return OptimumResult(n_total=n_total, ratio_opt=best_ratio, phi_opt=best_phi, phi_sv=phi_sv)


def optimize_sweep(
    n_values: Sequence[float],
    tol: float = DEFAULT_RATIO_TOL,
    mode: KappaMode = KappaMode.EXACT,
) -> List[OptimumResult]:
    return [optimize_ratio(float(n), tol=tol, mode=mode) for n in n_values]
