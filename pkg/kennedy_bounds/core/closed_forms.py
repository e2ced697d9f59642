"""
Analytic overlaps and minimum detectable phases.

Coherent probe |alpha>, displaced squeezed probe D(alpha) S(-r)|0>, and the
phase perturbation exp(i n phi). All functions are pure and take real
amplitudes; angles are in radians.
"""

from __future__ import annotations

import logging
import math

from scipy.optimize import fixed_point, newton
from scipy.special import lambertw

from .errors import DomainError
from .models import PhiMethod, PhiMinResult, PowerBudget, ProbeSpec, SigmaPair

logger = logging.getLogger(__name__)

LN2 = math.log(2.0)

# Above this, exp(y) overflows a double.
_EXP_SAFE = 700.0

# Below this value of e^{2r} alpha^2 / sinh^2 2r the squeezed closed form is
# evaluated as its squeezed-vacuum limit.
_VACUUM_LIMIT = 1e-12

# Above this value of a = 2 e^{2r} alpha^2 / sinh^2 2r the product log is
# replaced by the offset W = a - delta.
_BRIGHT_LIMIT = 1e3


# ---------------------------------------------------------------------------
# Overlaps
# ---------------------------------------------------------------------------

def kappa_coherent(alpha: float, phi: float) -> float:
    """exp[-2 alpha^2 (1 - cos phi)] for the coherent probe."""
    one_minus_cos = 2.0 * math.sin(0.5 * phi) ** 2
    return math.exp(-2.0 * alpha * alpha * one_minus_cos)


def sigma_pair(r: float, phi: float) -> SigmaPair:
    c = math.cos(phi)
    up, down = math.exp(2.0 * r), math.exp(-2.0 * r)
    return SigmaPair(
        sigma1=0.5 * (up * (1.0 - c) + down * (1.0 + c)),
        sigma2=0.5 * (up * (1.0 + c) + down * (1.0 - c)),
    )


def kappa_squeezed_exact(probe: ProbeSpec, phi: float) -> float:
    """Overlap of the displaced squeezed probe with its phase-shifted copy.

    The exponent 2 e^{-2r} alpha^2 (1 - cos phi / s + sinh(4r) sin^2 phi / (2 s)),
    s = sigma1 sigma2, is rewritten without the 1 - cos cancellation as
    alpha^2 [4 e^{-2r} sin^2(phi/2) + 2 sinh(2r) sin^2 phi] / s.
    """
    alpha, r = probe.alpha, probe.r
    product = sigma_pair(r, phi).product
    numerator = 4.0 * math.exp(-2.0 * r) * math.sin(0.5 * phi) ** 2 + 2.0 * math.sinh(2.0 * r) * math.sin(phi) ** 2
    return min(1.0, math.exp(-alpha * alpha * numerator / product) / math.sqrt(product))


def kappa_squeezed_approx(probe: ProbeSpec, phi: float) -> float:
    """Second-order small-phase form of :func:`kappa_squeezed_exact`."""
    alpha, r = probe.alpha, probe.r
    spread = 1.0 + math.sinh(2.0 * r) ** 2 * phi * phi
    return math.exp(-math.exp(2.0 * r) * alpha * alpha * phi * phi / spread) / math.sqrt(spread)


# ---------------------------------------------------------------------------
# Product log
# ---------------------------------------------------------------------------

def lambert_w0(x: float) -> float:
    """Principal branch of w e^w = x."""
    if x < -1.0 / math.e:
        raise DomainError(f"product log undefined on the real principal branch for x = {x} < -1/e")
    return float(lambertw(x, 0).real)


def lambert_w0_of_exp(y: float) -> float:
    """W(e^y), solving w + ln w = y directly once e^y would overflow."""
    if y <= _EXP_SAFE:
        return lambert_w0(math.exp(y))
    start = y - math.log(y)
    w = newton(
        lambda w: w + math.log(w) - y,
        start,
        fprime=lambda w: 1.0 + 1.0 / w,
        tol=1e-15 * y,
        maxiter=100,
    )
    logger.debug("log-space product log at y=%.6g -> %.15g", y, w)
    return float(w)


# ---------------------------------------------------------------------------
# Minimum detectable phases
# ---------------------------------------------------------------------------

def _require_positive(name: str, value: float) -> None:
    if not value > 0.0:
        raise DomainError(f"{name} must be positive, got {value}")


def phi_min_coherent(n_mean: float) -> PhiMinResult:
    """sqrt(ln 2 / n) for a coherent probe of mean photon number n."""
    _require_positive("n_mean", n_mean)
    return PhiMinResult(
        phi_m=math.sqrt(LN2 / n_mean),
        method=PhiMethod.CLOSED_FORM_COHERENT,
        probe=ProbeSpec(alpha=math.sqrt(n_mean), r=0.0),
    )


def phi_min_squeezed_closed(probe: ProbeSpec) -> PhiMinResult:
    """Product-log solution of the small-phase threshold for a displaced squeezed probe.

    With A = e^{2r} alpha^2, s = sinh^2 2r and a = 2A/s the threshold reads
    phi^2 = (a / W(z) - 1) / s, ln z = ln(A / 2s) + a. Since W e^W = (a/4) e^a,
    a / W = 4 exp(W - a) stays finite for every representable input, and
    phi^2 is taken as expm1(ln a - ln W) / s to keep digits when a / W is close to 1.

    For large a, W = a - delta with delta = ln 4 + log1p(-delta / a), and
    phi^2 = delta / (2 A (1 - delta / a)), which tends to ln 2 / A.
    """
    if probe.r == 0.0:
        raise DomainError("squeezed closed form is singular at r = 0; use phi_min_coherent")
    s = math.sinh(2.0 * probe.r) ** 2
    big_a = math.exp(2.0 * probe.r) * probe.alpha ** 2
    if probe.alpha == 0.0 or big_a < _VACUUM_LIMIT * s:
        # sqrt(3 / s) without squaring, so s may underflow
        phi = math.sqrt(3.0) / math.sinh(2.0 * probe.r)
    else:
        a = 2.0 * big_a / s if s > 0.0 else math.inf
        if a > _BRIGHT_LIMIT:
            delta = _bright_offset(a)
            phi = math.sqrt(delta / (2.0 * big_a * (1.0 - delta / a)))
        else:
            log_z = math.log(big_a / (2.0 * s)) + a
            w = lambert_w0_of_exp(log_z)
            phi = math.sqrt(math.expm1(math.log(a) - math.log(w)) / s)
    return PhiMinResult(phi_m=phi, method=PhiMethod.CLOSED_FORM_SQUEEZED, probe=probe)


def _bright_offset(a: float) -> float:
    """delta = a - W((a/4) e^a), a contraction with factor about 1/a."""
    ln4 = 2.0 * LN2
    if math.isinf(a):
        return ln4
    return float(fixed_point(lambda d: ln4 + math.log1p(-d / a), ln4, xtol=1e-15, method="iteration"))


def phi_min_squeezed_vacuum(n_mean: float) -> PhiMinResult:
    """All power in squeezing: sqrt(3 / (4 n (n + 1))) = sqrt(3) / sinh 2r."""
    _require_positive("n_mean", n_mean)
    return PhiMinResult(
        phi_m=math.sqrt(3.0 / (4.0 * n_mean * (n_mean + 1.0))),
        method=PhiMethod.CLOSED_FORM_SQUEEZED_VACUUM,
        probe=ProbeSpec(alpha=0.0, r=math.asinh(math.sqrt(n_mean))),
    )


def phi_min_bright(probe: ProbeSpec) -> PhiMinResult:
    """e^{-r} sqrt(ln 2) / alpha, valid when coherent photons dominate squeezing photons."""
    _require_positive("alpha", probe.alpha)
    return PhiMinResult(
        phi_m=math.exp(-probe.r) * math.sqrt(LN2) / probe.alpha,
        method=PhiMethod.CLOSED_FORM_BRIGHT,
        probe=probe,
    )


def phi_min_closed(probe: ProbeSpec) -> PhiMinResult:
    """Pick the closed form that matches the probe's regime."""
    if probe.is_coherent:
        return phi_min_coherent(probe.n_coherent).model_copy(update={"probe": probe})
    if probe.alpha == 0.0:
        return phi_min_squeezed_vacuum(probe.n_squeezing).model_copy(update={"probe": probe})
    return phi_min_squeezed_closed(probe)


def probe_from_budget(n_total: float, ratio: float) -> ProbeSpec:
    return PowerBudget(n_total=n_total, ratio=ratio).probe()
