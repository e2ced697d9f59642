#!/usr/bin/env python3
"""
kennedy-bounds command-line interface.

Subcommands
-----------
  kappa         --alpha A --r R --phi P [--mode exact|approx|fock] [--dim N]
  bound         --kappa K --p01 Q
  phimin        (--alpha A --r R | --n-total N --ratio X) [--mode closed|approx|exact] [--p01 Q]
  sweep-ratio   --n-total N --grid G [--mode exact|approx]
  sweep-n       --n-min A --n-max B --points P --ratios R1,R2,...
  optimize      --n-min A --n-max B --points P [--tol T]
  verify        [--dim N] [--tol T] [--grid PATH]
  receiver      --alpha A --r R --phi P [--eta E] [--dark-rate D --gate G] [--dim N]
  roc           --kappa K [--points P]
  beamsplitter  --alpha A --gamma G --t-values T1,T2,... [--dim N]

Rows go to stdout (or --output PATH) as CSV or JSON (--format). Diagnostics
and the verification summary go to stderr.

Exit codes
----------
  0   success
  1   verify: at least one oracle comparison failed
  2   invalid flags
  3   numeric failure (no threshold crossing, truncation too small)
  4   internal error: an output row does not match its schema

Examples
--------
    kennedy-bounds kappa --alpha 1 --r 0 --phi 0.1
    kennedy-bounds phimin --n-total 10 --ratio 1
    kennedy-bounds sweep-ratio --n-total 10 --grid 33 --output ratio.csv
    kennedy-bounds optimize --n-min 1 --n-max 1000 --points 20
    kennedy-bounds verify --dim 64
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from ..core import fock
from ..core.closed_forms import kappa_squeezed_approx, kappa_squeezed_exact, phi_min_closed
from ..core.detection import (
    DEFAULT_ROOT_TOL,
    dark_probability_from_rate,
    kennedy_receiver,
    np_detection_probability,
    np_roc,
    phi_min_numeric,
)
from ..core.errors import NumericFailure, RowSchemaError
from ..core.models import KappaMode
from ..core.optimizer import DEFAULT_RATIO_TOL, optimize_sweep, sweep_ratio, sweep_total
from . import output
from .config import RunConfig, VerifyGrid, load_preset
from .verify import fock_kappa, print_summary, run_verify

logger = logging.getLogger("kennedy_bounds")

err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_SCHEMA = 4

Row = Dict[str, object]


def _float_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _setup_logging(verbose: bool) -> None:
    handler = RichHandler(console=err_console, show_path=False, show_time=False)
    logging.basicConfig(level=logging.WARNING, format="%(message)s", handlers=[handler], force=True)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_kappa(cfg: RunConfig, args: argparse.Namespace) -> List[Row]:
    probe = cfg.probe()
    if args.mode == "fock":
        kappa = fock_kappa(probe, args.phi, cfg.truncation())
    elif args.mode == "approx":
        kappa = kappa_squeezed_approx(probe, args.phi)
    else:
        kappa = kappa_squeezed_exact(probe, args.phi)
    return [{"alpha": probe.alpha, "r": probe.r, "phi": args.phi, "mode": args.mode, "kappa": kappa}]


def cmd_bound(cfg: RunConfig, args: argparse.Namespace) -> List[Row]:
    p11 = np_detection_probability(args.p01, args.kappa)
    return [{"p01": args.p01, "kappa": args.kappa, "p11": p11}]


def cmd_roc(cfg: RunConfig, args: argparse.Namespace) -> List[Row]:
    return [result.model_dump() for result in np_roc(args.kappa, args.points)]


def cmd_phimin(cfg: RunConfig, args: argparse.Namespace) -> List[Row]:
    probe = cfg.probe()
    n_total, ratio = cfg.budget()
    if args.mode == "closed" and args.p01 == 0.0:
        result = phi_min_closed(probe)
    else:
        mode = KappaMode.APPROX if args.mode == "approx" else KappaMode.EXACT
        result = phi_min_numeric(probe, mode=mode, p01=args.p01, tol=cfg.tol or DEFAULT_ROOT_TOL)
    return [{
        "alpha": probe.alpha,
        "r": probe.r,
        "n_total": n_total,
        "ratio": ratio,
        "method": result.method.value,
        "phi_m": result.phi_m,
    }]


def cmd_sweep_ratio(cfg: RunConfig, args: argparse.Namespace) -> List[Row]:
    curve = sweep_ratio(cfg.n_total, args.grid, KappaMode(args.mode), cfg.tol or DEFAULT_ROOT_TOL)
    return [{"ratio": p.x, "phi_m": p.phi_m} for p in curve.points]


def cmd_sweep_n(cfg: RunConfig, args: argparse.Namespace) -> List[Row]:
    n_values = np.geomspace(args.n_min, args.n_max, args.points)
    curves = sweep_total(n_values, args.ratios, KappaMode(args.mode), cfg.tol or DEFAULT_ROOT_TOL)
    return [
        {"n_total": p.x, "ratio": ratio, "phi_m": p.phi_m}
        for ratio, curve in zip(args.ratios, curves)
        for p in curve.points
    ]


def cmd_optimize(cfg: RunConfig, args: argparse.Namespace) -> List[Row]:
    n_values = np.geomspace(args.n_min, args.n_max, args.points)
    results = optimize_sweep(n_values, tol=cfg.tol or DEFAULT_RATIO_TOL, mode=KappaMode(args.mode))
    return [result.model_dump() for result in results]


def cmd_receiver(cfg: RunConfig, args: argparse.Namespace) -> List[Row]:
    probe = cfg.probe()
    p_dark = dark_probability_from_rate(cfg.dark_rate, cfg.gate) if cfg.gate is not None else 0.0
    det = cfg.detector(p_dark)
    result = kennedy_receiver(probe, args.phi, det, cfg.truncation())
    return [{
        "alpha": probe.alpha,
        "r": probe.r,
        "phi": args.phi,
        "eta": det.eta,
        "p_dark": det.p_dark,
        **result.model_dump(),
    }]


def cmd_beamsplitter(cfg: RunConfig, args: argparse.Namespace) -> List[Row]:
    trunc = cfg.truncation()
    psi = fock.coherent_state(cfg.alpha or 0.0, trunc)
    samples = fock.beamsplitter_convergence(psi, args.gamma, sorted(args.t_values), trunc)
    return [
        {"transmission": s.transmission, "fidelity": s.fidelity, "purity": s.purity}
        for s in samples
    ]


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> List[Row]:
    grid = VerifyGrid.from_yaml(Path(args.grid) if args.grid else None)
    tol = cfg.tol or grid.tolerance
    rows = run_verify(grid, cfg.truncation(), tol)
    print_summary(rows, tol, err_console)
    return rows


COMMAND_HANDLERS: Dict[str, Callable[[RunConfig, argparse.Namespace], List[Row]]] = {
    "kappa": cmd_kappa,
    "bound": cmd_bound,
    "phimin": cmd_phimin,
    "sweep-ratio": cmd_sweep_ratio,
    "sweep-n": cmd_sweep_n,
    "optimize": cmd_optimize,
    "verify": cmd_verify,
    "receiver": cmd_receiver,
    "roc": cmd_roc,
    "beamsplitter": cmd_beamsplitter,
}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    sweeps = load_preset("sweeps")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", metavar="PATH", default=None,
                        help="Write rows to PATH instead of stdout.")
    common.add_argument("--format", choices=["csv", "json"], default="csv",
                        help="Row format (default: csv).")
    common.add_argument("-v", "--verbose", action="store_true",
                        help="Log numerical diagnostics to stderr.")

    top = argparse.ArgumentParser(
        prog="kennedy-bounds",
        description="Neyman-Pearson phase-detection bounds for coherent and squeezed probes.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    subs = top.add_subparsers(dest="command", required=True)

    def probe_flags(p: argparse.ArgumentParser, required: bool) -> None:
        p.add_argument("--alpha", type=float, required=required, help="Coherent amplitude (real, >= 0).")
        p.add_argument("--r", type=float, default=None, help="Squeezing parameter (>= 0, default 0).")

    def dim_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--dim", type=int, default=64, help="Fock truncation dimension (default: 64).")

    def mode_flag(p: argparse.ArgumentParser) -> None:
        p.add_argument("--mode", choices=["exact", "approx"], default="exact",
                       help="Overlap used for the threshold solve (default: exact).")

    # ------------------------------------------------------------------
    # kappa
    # ------------------------------------------------------------------
    p_kappa = subs.add_parser("kappa", parents=[common], help="Overlap of a probe with its phase-shifted copy.")
    probe_flags(p_kappa, required=True)
    p_kappa.add_argument("--phi", type=float, required=True, help="Phase shift in radians.")
    p_kappa.add_argument("--mode", choices=["exact", "approx", "fock"], default="exact",
                         help="Closed form, small-phase form, or truncated Fock-space evaluation.")
    dim_flag(p_kappa)

    # ------------------------------------------------------------------
    # bound / roc
    # ------------------------------------------------------------------
    p_bound = subs.add_parser("bound", parents=[common], help="Neyman-Pearson detection probability.")
    p_bound.add_argument("--kappa", type=float, required=True, help="State overlap in [0, 1].")
    p_bound.add_argument("--p01", type=float, required=True, help="False-alarm probability in [0, 1].")

    p_roc = subs.add_parser("roc", parents=[common], help="Neyman-Pearson curve over a false-alarm grid.")
    p_roc.add_argument("--kappa", type=float, required=True, help="State overlap in [0, 1].")
    p_roc.add_argument("--points", type=int, default=101, help="Grid points on [0, 1] (default: 101).")

    # ------------------------------------------------------------------
    # phimin
    # ------------------------------------------------------------------
    p_phimin = subs.add_parser("phimin", parents=[common], help="Minimum detectable phase for one probe.")
    probe_flags(p_phimin, required=False)
    p_phimin.add_argument("--n-total", type=float, default=None, help="Total mean photon number.")
    p_phimin.add_argument("--ratio", type=float, default=None, help="Squeezing share of the photon number.")
    p_phimin.add_argument("--mode", choices=["closed", "approx", "exact"], default="closed",
                          help="Closed form, or threshold solve on the approximate/exact overlap.")
    p_phimin.add_argument("--p01", type=float, default=0.0,
                          help="False-alarm probability; non-zero values use the exact threshold solve.")
    p_phimin.add_argument("--tol", type=float, default=None, help="Root tolerance in radians.")

    # ------------------------------------------------------------------
    # sweeps
    # ------------------------------------------------------------------
    p_sr = subs.add_parser("sweep-ratio", parents=[common], help="phi_M against the squeezing share.")
    p_sr.add_argument("--n-total", type=float, default=sweeps["sweep_ratio"]["n_total"],
                      help="Total mean photon number.")
    p_sr.add_argument("--grid", type=int, default=sweeps["sweep_ratio"]["grid"],
                      help="Ratio grid points including both endpoints.")
    p_sr.add_argument("--tol", type=float, default=None, help="Root tolerance in radians.")
    mode_flag(p_sr)

    p_sn = subs.add_parser("sweep-n", parents=[common], help="phi_M against total photon number.")
    p_sn.add_argument("--n-min", type=float, default=sweeps["sweep_n"]["n_min"])
    p_sn.add_argument("--n-max", type=float, default=sweeps["sweep_n"]["n_max"])
    p_sn.add_argument("--points", type=int, default=sweeps["sweep_n"]["points"],
                      help="Log-spaced photon numbers.")
    p_sn.add_argument("--ratios", type=_float_list, default=sweeps["sweep_n"]["ratios"],
                      help="Comma-separated squeezing shares, one curve each.")
    p_sn.add_argument("--tol", type=float, default=None, help="Root tolerance in radians.")
    mode_flag(p_sn)

    p_opt = subs.add_parser("optimize", parents=[common], help="Best squeezing share per photon budget.")
    p_opt.add_argument("--n-min", type=float, default=sweeps["optimize"]["n_min"])
    p_opt.add_argument("--n-max", type=float, default=sweeps["optimize"]["n_max"])
    p_opt.add_argument("--points", type=int, default=sweeps["optimize"]["points"],
                       help="Log-spaced photon numbers.")
    p_opt.add_argument("--tol", type=float, default=None, help="Ratio tolerance of the refinement.")
    mode_flag(p_opt)

    # ------------------------------------------------------------------
    # verify
    # ------------------------------------------------------------------
    p_verify = subs.add_parser("verify", parents=[common], help="Compare closed forms against the Fock oracle.")
    dim_flag(p_verify)
    p_verify.add_argument("--tol", type=float, default=None, help="Comparison tolerance (default: from the grid).")
    p_verify.add_argument("--grid", metavar="PATH", default=None, help="YAML grid replacing the built-in one.")

    # ------------------------------------------------------------------
    # receiver / beamsplitter
    # ------------------------------------------------------------------
    p_rx = subs.add_parser("receiver", parents=[common], help="Kennedy receiver with a non-ideal detector.")
    probe_flags(p_rx, required=True)
    p_rx.add_argument("--phi", type=float, required=True, help="Phase shift in radians.")
    p_rx.add_argument("--eta", type=float, default=1.0, help="Quantum efficiency (default: 1).")
    p_rx.add_argument("--dark-rate", type=float, default=0.0, help="Dark counts per second.")
    p_rx.add_argument("--gate", type=float, default=None, help="Detection gate in seconds.")
    dim_flag(p_rx)

    p_bs = subs.add_parser("beamsplitter", parents=[common],
                           help="Beamsplitter displacement against the ideal displacement.")
    p_bs.add_argument("--alpha", type=float, required=True, help="Amplitude of the coherent input.")
    p_bs.add_argument("--gamma", type=float, required=True,
                      help="Target displacement sqrt(1-T) beta, held fixed across T.")
    p_bs.add_argument("--t-values", type=_float_list, required=True,
                      help="Comma-separated power transmissions in (0, 1).")
    p_bs.add_argument("--dim", type=int, default=24, help="Fock truncation dimension (default: 24).")

    return top


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK

    _setup_logging(args.verbose)

    try:
        cfg = RunConfig.model_validate({k: v for k, v in vars(args).items() if v is not None})
    except ValidationError as exc:
        parser.print_usage(sys.stderr)
        for error in exc.errors():
            where = ".".join(str(part) for part in error["loc"]) or "flags"
            err_console.print(f"[red]error:[/] {where}: {escape(error['msg'])}")
        return EXIT_USAGE

    try:
        rows = COMMAND_HANDLERS[cfg.command](cfg, args)
        output.emit(cfg.command, rows, cfg.format, cfg.output)
    except NumericFailure as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_NUMERIC
    except (ValidationError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        err_console.print(f"[red]error:[/] {escape(str(exc))}")
        return EXIT_USAGE
    except RowSchemaError as exc:
        logger.error("internal error: %s", exc)
        return EXIT_SCHEMA

    if cfg.command == "verify" and not all(row["pass"] for row in rows):
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
