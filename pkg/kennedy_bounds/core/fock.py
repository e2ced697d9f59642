"""
Truncated Fock-space engine.

Dense states and operators over the number basis {|0>, ..., |N-1>}. This is the
brute-force oracle the closed-form overlaps and the Kennedy receiver model are
checked against.

Operators are matrix exponentials of the truncated generators, so they are
exactly unitary on the truncated space; what truncation spoils is *accuracy*
near the top of the basis. Every factory therefore measures how much probability
the exact state would place beyond the cutoff and raises ``TruncationError``
when that exceeds ``TruncationConfig.norm_tol``.

Two-mode conventions (beamsplitter of power transmission T, cos(theta) = sqrt(T)):

    a -> sqrt(T) a + sqrt(1-T) b
    b -> sqrt(T) b - sqrt(1-T) a

so a local oscillator |beta> in mode b displaces mode a by +sqrt(1-T) beta.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import DimensionMismatchError, DomainError, TruncationError
from .models import TruncationConfig

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = TruncationConfig()

# Above this single-mode cutoff the N^2 x N^2 beamsplitter exponential gets slow.
BEAMSPLITTER_DIM_HINT = 32


# ---------------------------------------------------------------------------
# Containers
# ---------------------------------------------------------------------------

def _frozen_array(values: np.ndarray, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if ndim == 2 and arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("dimension must be at least 1")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FockVector:
    """Complex amplitudes indexed by photon number."""

    amps: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "amps", _frozen_array(self.amps, 1))

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm_squared(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


@dataclass(frozen=True)
class FockOperator:
    """Dense N x N matrix over the truncated number basis."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen_array(self.matrix, 2))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "FockOperator":
        return FockOperator(self.matrix.conj().T)

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            _require_same_dim(self.dim, other.dim)
            return FockOperator(self.matrix @ other.matrix)
        if isinstance(other, FockVector):
            return apply(self, other)
        return NotImplemented


@dataclass(frozen=True)
class DensityMatrix:
    """Single-mode density matrix over the truncated number basis."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen_array(self.matrix, 2))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


@dataclass(frozen=True)
class ConvergenceSample:
    transmission: float
    fidelity: float
    purity: float


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def _require_same_dim(left: int, right: int) -> None:
    if left != right:
        raise DimensionMismatchError(f"dimension mismatch: {left} != {right}")


def _check_deficit(deficit: float, cfg: TruncationConfig, what: str) -> None:
    logger.debug("%s: norm deficit %.3e at dim %d", what, deficit, cfg.dim)
    if deficit > cfg.norm_tol:
        raise TruncationError(
            f"{what}: norm deficit {deficit:.3e} exceeds {cfg.norm_tol:.1e} at dim {cfg.dim}; "
            "increase --dim",
            deficit=deficit,
        )


def check_truncation(vec: FockVector, cfg: TruncationConfig, what: str = "state") -> None:
    """Raise ``TruncationError`` if ``vec`` keeps more than ``norm_tol`` of its norm above ``cfg.dim``."""
    kept = float(np.vdot(vec.amps[: cfg.dim], vec.amps[: cfg.dim]).real)
    _check_deficit(max(0.0, vec.norm_squared() - kept), cfg, what)


def unitarity_error(op: FockOperator, margin: int) -> float:
    """max |U^dagger U - I| over the lower (N - margin) block."""
    block = op.dim - margin
    gram = op.matrix.conj().T @ op.matrix
    return float(np.max(np.abs(gram[:block, :block] - np.eye(block))))


def _check_unitary(op: FockOperator, cfg: TruncationConfig, what: str) -> FockOperator:
    err = unitarity_error(op, cfg.margin)
    if err >= cfg.unitarity_tol:
        raise TruncationError(
            f"{what}: block unitarity error {err:.3e} exceeds {cfg.unitarity_tol:.1e}"
        )
    return op


def _coherent_tail(alpha: complex, dim: int) -> float:
    # Poisson(|alpha|^2) mass at n >= dim
    return float(poisson.sf(dim - 1, abs(alpha) ** 2))


def _squeezed_vacuum_tail(zeta: float, dim: int) -> float:
    if zeta == 0.0:
        return 0.0
    k = np.arange((dim + 1) // 2)
    log_p = (
        2 * k * math.log(math.tanh(abs(zeta)))
        - math.log(math.cosh(zeta))
        + gammaln(2 * k + 1)
        - 2 * gammaln(k + 1)
        - k * math.log(4.0)
    )
    return max(0.0, 1.0 - float(np.sum(np.exp(log_p))))


# ---------------------------------------------------------------------------
# Basic operators and states
# ---------------------------------------------------------------------------

def annihilation_operator(cfg: TruncationConfig = DEFAULT_CONFIG) -> FockOperator:
    return FockOperator(np.diag(np.sqrt(np.arange(1, cfg.dim)), k=1))


def number_operator(cfg: TruncationConfig = DEFAULT_CONFIG) -> FockOperator:
    return FockOperator(np.diag(np.arange(cfg.dim, dtype=float)))


def number_state(n: int, cfg: TruncationConfig = DEFAULT_CONFIG) -> FockVector:
    if not 0 <= n < cfg.dim:
        raise DomainError(f"number state |{n}> is outside the truncated basis of dim {cfg.dim}")
    amps = np.zeros(cfg.dim, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps)


def vacuum(cfg: TruncationConfig = DEFAULT_CONFIG) -> FockVector:
    return number_state(0, cfg)


def coherent_state(alpha: complex, cfg: TruncationConfig = DEFAULT_CONFIG) -> FockVector:
    """|alpha> from its number-basis amplitudes exp(-|a|^2/2) a^n / sqrt(n!).

    Amplitudes are not renormalised; the missing Poisson tail is the norm deficit.
    """
    alpha = complex(alpha)
    if alpha == 0:
        return vacuum(cfg)
    n = np.arange(cfg.dim)
    log_mag = -0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    amps = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    vec = FockVector(amps)
    _check_deficit(1.0 - vec.norm_squared(), cfg, f"coherent state alpha={alpha:g}")
    return vec


def displacement_operator(alpha: complex, cfg: TruncationConfig = DEFAULT_CONFIG) -> FockOperator:
    """D(alpha) = exp(alpha a^dagger - alpha^* a) on the truncated basis."""
    alpha = complex(alpha)
    _check_deficit(_coherent_tail(alpha, cfg.dim), cfg, f"displacement alpha={alpha:g}")
    a = annihilation_operator(cfg).matrix
    op = FockOperator(expm(alpha * a.conj().T - alpha.conjugate() * a))
    return _check_unitary(op, cfg, "displacement")


def squeeze_operator(zeta: float, cfg: TruncationConfig = DEFAULT_CONFIG) -> FockOperator:
    """S(zeta) = exp(-zeta/2 (a^dagger^2 - a^2)); S(-r) with r > 0 squeezes the phase quadrature."""
    zeta = float(zeta)
    _check_deficit(_squeezed_vacuum_tail(zeta, cfg.dim), cfg, f"squeeze zeta={zeta:g}")
    a = annihilation_operator(cfg).matrix
    ad = a.conj().T
    op = FockOperator(expm(-0.5 * zeta * (ad @ ad - a @ a)))
    return _check_unitary(op, cfg, "squeeze")


def phase_shift_operator(phi: float, cfg: TruncationConfig = DEFAULT_CONFIG) -> FockOperator:
    """exp(i n phi), diagonal in the number basis."""
    return FockOperator(np.diag(np.exp(1j * float(phi) * np.arange(cfg.dim))))


def apply(op: FockOperator, vec: FockVector) -> FockVector:
    _require_same_dim(op.dim, vec.dim)
    return FockVector(op.matrix @ vec.amps)


def overlap(a: FockVector, b: FockVector) -> complex:
    """<a|b> (conjugate-linear in the first argument)."""
    _require_same_dim(a.dim, b.dim)
    return complex(np.vdot(a.amps, b.amps))


def photon_distribution(vec: FockVector) -> np.ndarray:
    return np.abs(vec.amps) ** 2


def mean_photon_number(vec: FockVector) -> float:
    return float(np.dot(np.arange(vec.dim), photon_distribution(vec)))


def squeezed_state(
    alpha: float, r: float, cfg: TruncationConfig = DEFAULT_CONFIG
) -> FockVector:
    """The probe D(alpha) S(-r)|0>.

    Built on a doubled basis and cropped, so the norm of the cropped vector
    reports the real tail beyond ``cfg.dim``.
    """
    if r == 0.0:
        return coherent_state(alpha, cfg)
    work = cfg.with_dim(2 * cfg.dim)
    full = apply(displacement_operator(alpha, work), apply(squeeze_operator(-r, work), vacuum(work)))
    vec = FockVector(full.amps[: cfg.dim])
    _check_deficit(1.0 - vec.norm_squared(), cfg, f"squeezed state alpha={alpha:g} r={r:g}")
    return vec


# ---------------------------------------------------------------------------
# Mixed-state helpers
# ---------------------------------------------------------------------------

def fidelity(psi: FockVector, rho: DensityMatrix) -> float:
    """<psi|rho|psi>."""
    _require_same_dim(psi.dim, rho.dim)
    return float(np.vdot(psi.amps, rho.matrix @ psi.amps).real)


def purity(rho: DensityMatrix) -> float:
    return float(np.trace(rho.matrix @ rho.matrix).real)


# ---------------------------------------------------------------------------
# Beamsplitter
# ---------------------------------------------------------------------------

def _check_transmission(transmission: float) -> None:
    if not 0.0 < transmission < 1.0:
        raise DomainError(f"transmission must lie in (0, 1), got {transmission}")


def beamsplitter_unitary(transmission: float, cfg: TruncationConfig = DEFAULT_CONFIG) -> FockOperator:
    """Two-mode beamsplitter on the N^2 product basis (index = n_a * N + n_b)."""
    _check_transmission(transmission)
    if cfg.dim > BEAMSPLITTER_DIM_HINT:
        logger.warning(
            "beamsplitter at dim %d exponentiates a %d x %d matrix",
            cfg.dim, cfg.dim ** 2, cfg.dim ** 2,
        )
    theta = math.acos(math.sqrt(transmission))
    a1 = annihilation_operator(cfg).matrix
    eye = np.eye(cfg.dim)
    a = np.kron(a1, eye)
    b = np.kron(eye, a1)
    generator = theta * (a.conj().T @ b - a @ b.conj().T)
    op = FockOperator(expm(generator))
    err = unitarity_error(op, 0)
    if err >= cfg.unitarity_tol:
        raise TruncationError(f"beamsplitter: unitarity error {err:.3e}")
    return op


def beamsplitter_displacement(
    transmission: float,
    beta: complex,
    psi: FockVector,
    cfg: Optional[TruncationConfig] = None,
) -> DensityMatrix:
    """Reduced state of the transmitted mode after mixing psi with |beta> on a beamsplitter.

    The local oscillator is carried through the beamsplitter as a displacement,
    U D_b(beta) U^dagger = D_a(sqrt(1-T) beta) D_b(sqrt(T) beta); the mode-b
    factor is local to the traced-out mode. What remains is psi mixed with
    vacuum, which the truncated product basis holds exactly since the
    beamsplitter conserves total photon number, followed by D(sqrt(1-T) beta).
    """
    cfg = cfg or DEFAULT_CONFIG.with_dim(psi.dim)
    _require_same_dim(cfg.dim, psi.dim)
    n = psi.dim

    joint = np.kron(psi.amps, vacuum(cfg).amps)
    out = beamsplitter_unitary(transmission, cfg).matrix @ joint
    deficit = psi.norm_squared() - float(np.vdot(out, out).real)
    _check_deficit(max(0.0, deficit), cfg, "beamsplitter joint state")

    modes = out.reshape(n, n)
    reduced = modes @ modes.conj().T

    gamma = math.sqrt(1.0 - transmission) * complex(beta)
    d = displacement_operator(gamma, cfg).matrix
    return DensityMatrix(d @ reduced @ d.conj().T)


def beamsplitter_convergence(
    psi: FockVector,
    gamma: complex,
    transmissions: Sequence[float],
    cfg: Optional[TruncationConfig] = None,
) -> List[ConvergenceSample]:
    """Fidelity of the beamsplitter output to D(gamma) psi, holding sqrt(1-T) beta = gamma fixed."""
    cfg = cfg or DEFAULT_CONFIG.with_dim(psi.dim)
    target = apply(displacement_operator(gamma, cfg), psi)
    samples: List[ConvergenceSample] = []
    for t in transmissions:
        _check_transmission(t)
        beta = complex(gamma) / math.sqrt(1.0 - t)
        rho = beamsplitter_displacement(t, beta, psi, cfg)
        samples.append(ConvergenceSample(float(t), fidelity(target, rho), purity(rho)))
        logger.debug("beamsplitter T=%.4f fidelity=%.9f", t, samples[-1].fidelity)
    return samples
