"""
Oracle verification: closed-form overlaps and the Kennedy-receiver bound
against brute-force truncated Fock-space evaluations.
"""

from __future__ import annotations

import logging
from typing import Dict, List

from rich.console import Console
from rich.table import Table

from ..core import fock
from ..core.closed_forms import kappa_coherent, kappa_squeezed_exact
from ..core.detection import kennedy_receiver, np_detection_probability
from ..core.models import DetectorModel, ProbeSpec, TruncationConfig
from .config import VerifyGrid

logger = logging.getLogger(__name__)

Row = Dict[str, object]


def _row(test: str, probe: ProbeSpec, phi: float, analytic: float, oracle: float, tol: float) -> Row:
    err = abs(analytic - oracle)
    return {
        "test": test,
        "alpha": probe.alpha,
        "r": probe.r,
        "phi": phi,
        "analytic": analytic,
        "oracle": oracle,
        "abs_err": err,
        "pass": bool(err < tol),
    }


def fock_kappa(probe: ProbeSpec, phi: float, cfg: TruncationConfig) -> float:
    """|<psi|exp(i n phi)|psi>|^2 for the probe built in the truncated basis."""
    psi = fock.squeezed_state(probe.alpha, probe.r, cfg)
    shifted = fock.apply(fock.phase_shift_operator(phi, cfg), psi)
    return abs(fock.overlap(psi, shifted)) ** 2


def run_verify(grid: VerifyGrid, cfg: TruncationConfig, tol: float) -> List[Row]:
    """All comparison rows, in grid order: coherent overlaps, squeezed overlaps, receiver."""
    rows: List[Row] = []
    coherent = grid.coherent_probes()
    squeezed = grid.squeezed_probes(cfg.dim)

    for probe in coherent:
        for phi in grid.phi:
            rows.append(_row("kappa_coherent", probe, phi,
                             kappa_coherent(probe.alpha, phi), fock_kappa(probe, phi, cfg), tol))

    for probe in squeezed:
        for phi in grid.phi:
            rows.append(_row("kappa_squeezed", probe, phi,
                             kappa_squeezed_exact(probe, phi), fock_kappa(probe, phi, cfg), tol))

    ideal = DetectorModel.ideal()
    for probe in coherent + squeezed:
        for phi in grid.phi:
            bound = np_detection_probability(0.0, kappa_squeezed_exact(probe, phi))
            result = kennedy_receiver(probe, phi, ideal, cfg)
            rows.append(_row("kennedy_optimality", probe, phi, bound, result.p11, tol))

    failed = sum(1 for row in rows if not row["pass"])
    logger.info("verify: %d comparisons, %d failed at tolerance %.1e", len(rows), failed, tol)
    return rows


def summary_table(rows: List[Row], tol: float) -> Table:
    table = Table(title=f"Oracle verification (tolerance {tol:.1e})")
    table.add_column("test", style="cyan")
    table.add_column("rows", justify="right")
    table.add_column("max |err|", justify="right")
    table.add_column("status")

    for test in dict.fromkeys(row["test"] for row in rows):
        subset = [row for row in rows if row["test"] == test]
        worst = max(float(row["abs_err"]) for row in subset)
        ok = all(row["pass"] for row in subset)
        table.add_row(
            str(test),
            str(len(subset)),
            f"{worst:.3e}",
            "[green]✓ pass[/]" if ok else "[red]✗ fail[/]",
        )
    return table


def print_summary(rows: List[Row], tol: float, console: Console) -> None:
    console.print(summary_table(rows, tol))
