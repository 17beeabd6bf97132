"""Command-line front end.

    anls <experiment> [--config file.json] [--flag value ...]

Values resolve as defaults, then the JSON config file, then flags (flags
win).  Exit codes: 0 success; 2 unknown experiment or invalid configuration;
3 invalid grid; 4 unwritable output directory; 1 any other runtime failure.
Failures print a single machine-readable JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import DomainError
from .experiments import EXPERIMENTS, load_config, run

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    """argparse that fails with machine-readable JSON on stderr."""

    def error(self, message: str) -> None:  # noqa: A003 - argparse API
        _fail(2, "ArgumentError", message)


def _fail(code: int, kind: str, message: str) -> None:
    sys.stderr.write(json.dumps(
        {"error": kind, "message": message, "exit_code": code},
        sort_keys=True) + "\n")
    raise SystemExit(code)


_FLAGS: tuple[tuple[str, str, type | None, str], ...] = (
    # (flag, config field, type, help)
    ("--p", "p", float, "nonlinearity exponent p > 2"),
    ("--omega", "omega", float, "standing-wave frequency"),
    ("--nx", "nx", int, "grid points along x (power of two)"),
    ("--ny", "ny", int, "grid points along y (power of two)"),
    ("--lx", "Lx", float, "box length along x"),
    ("--ly", "Ly", float, "box length along y"),
    ("--dt", "dt", float, "initial time step"),
    ("--t-max", "t_max", float, "integration horizon"),
    ("--splitting-order", "splitting_order", str, "'lie' or 'strang'"),
    ("--diag-stride", "diag_stride", int, "steps between diagnostics"),
    ("--blowup-h12-factor", "blowup_h12_factor", float,
     "norm growth factor declared as blowup"),
    ("--dt-floor", "dt_floor", float, "smallest admissible step"),
    ("--tol", "tol", float, "solver residual tolerance"),
    ("--max-iter", "max_iter", int, "solver iteration budget"),
    ("--restarts", "restarts", int, "solver restarts / ascent seeds"),
    ("--amplitude", "amplitude", float, "Gaussian initial amplitude"),
    ("--initial", "initial", str, "path to a field snapshot used as initial data"),
    ("--tau", "tau", float, "mass-preserving rescale factor for probes"),
    ("--delta", "delta", float, "perturbation size for the stability probe"),
    ("--epsilon", "epsilon", float, "escape tube radius for probes"),
    ("--support-tol", "support_tol", float,
     "relative tail level treated as negligible when probes rescale"),
    ("--quad-tol", "quad_tol", float, "kernel quadrature tolerance"),
    ("--ray", "ray", str, "kernel ray: 'x', 'y', or 'diag'"),
    ("--r-min", "r_min", float, "first ray radius"),
    ("--r-max", "r_max", float, "last ray radius"),
    ("--num", "num", int, "number of ray samples"),
    ("--window-x", "window_x", str, "x fit window, 'lo,hi'"),
    ("--window-y", "window_y", str, "y fit window, 'lo,hi'"),
    ("--p-list", "p_list", str, "comma-separated p values for the scan"),
    ("--amplitude-list", "amplitude_list", str,
     "comma-separated amplitudes for the scan"),
    ("--workers", "workers", int, "worker threads for the scan"),
    ("--output-dir", "output_dir", str,
     "output root (default: $ANLS_OUTPUT_DIR or ./anls-out)"),
    ("--rng-seed", "rng_seed", int, "seed for all randomness"),
)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="anls",
        description="Spectral toolkit for the anisotropic fourth-order "
                    "Schroedinger model: ground states, sharp constants, "
                    "time evolution, blowup scans, kernel decay.")
    sub = parser.add_subparsers(dest="experiment", metavar="experiment")
    for name in EXPERIMENTS:
        sp = sub.add_parser(name, description=f"run the '{name}' experiment")
        sp.add_argument("--config", type=str, default=None,
                        help="JSON config file; flags override its values")
        for flag, dest, typ, help_text in _FLAGS:
            sp.add_argument(flag, dest=dest, type=typ, default=None,
                            help=help_text)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.experiment is None:
        _fail(2, "ArgumentError",
              f"an experiment is required; choose one of {', '.join(EXPERIMENTS)}")
    overrides = {dest: getattr(args, dest) for _, dest, _, _ in _FLAGS}
    try:
        cfg = load_config(args.experiment, args.config, overrides)
    except DomainError as exc:
        _fail(2, "ConfigError", str(exc))
    try:
        cfg.grid()
    except DomainError as exc:
        _fail(3, "GridError", str(exc))
    try:
        result = run(cfg)
    except PermissionError as exc:
        _fail(4, "OutputDirError", str(exc))
    except Exception as exc:
        _fail(1, type(exc).__name__, str(exc))
    for line in result["summary"]:
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
