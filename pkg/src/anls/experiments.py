"""Named experiments: configuration, artifact layout, and orchestration.

Each experiment is a pure function of a :class:`RunConfig`.  Artifacts land
in ``<output_root>/<experiment>/``: a ``manifest.json`` embedding the full
resolved configuration, CSV tables with fixed documented columns, JSON
sidecars of scalars, and binary field snapshots.  Identical configurations
produce byte-identical artifacts; all randomness flows from ``rng_seed``.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DomainError,
    NotConvergedError,
    SolverDivergedError,
)
from .evolution import (
    EvolveConfig,
    classify_initial_datum,
    evolve,
    orbital_stability_probe,
    sign_invariance_probe,
    virial_check,
)
from .fields import gaussian
from .functionals import (
    functional_values,
    j_omega,
    k_functional,
    mass,
    q_functional,
    scale_lambda,
)
from .grid import Field, Grid2D, ModelParams
from .ground_state import (
    gn_quotient_maximize,
    mass_critical_threshold,
    minimal_action,
    petviashvili_multistart,
    symmetry_report,
)
from .kernel import decay_fit, h2_asymptotics, kernel_eval
from .snapshots import read_snapshot, write_csv, write_snapshot

__all__ = ["RunConfig", "EXPERIMENTS", "resolve_output_root", "run"]

EXPERIMENTS = (
    "ground-state",
    "evolve",
    "gn-constant",
    "virial-check",
    "decay-fit",
    "stability-probe",
    "instability-probe",
    "blowup-scan",
    "symmetry-report",
    "kernel-eval",
)

CONFIG_FORMAT_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    """Flat experiment configuration mirroring the CLI flags one to one."""

    experiment: str
    # model
    p: float = 4.0
    omega: float = 1.0
    # grid
    nx: int = 256
    ny: int = 256
    Lx: float = 40.0
    Ly: float = 40.0
    # evolution
    dt: float = 1e-3
    t_max: float = 1.0
    splitting_order: str = "strang"
    diag_stride: int = 10
    blowup_h12_factor: float = 1e4
    dt_floor: float = 1e-12
    # solvers
    tol: float = 1e-8
    max_iter: int = 2000
    restarts: int = 3
    # initial data and probes
    amplitude: float = 1.0
    initial: str | None = None
    tau: float = 1.05
    delta: float = 1e-3
    epsilon: float = 0.1
    # relative tail level treated as negligible when a probe rescales its
    # datum; looser than the library default because profile tails at the
    # default box edge sit well above 1e-12 of the peak
    support_tol: float = 1e-6
    # kernel and fits
    quad_tol: float = 1e-8
    ray: str = "y"
    r_min: float = 0.5
    r_max: float = 8.0
    num: int = 31
    window_x: tuple[float, float] = (3.0, 8.0)
    window_y: tuple[float, float] = (3.0, 8.0)
    # scans
    p_list: tuple[float, ...] = (3.0, 14.0 / 3.0, 6.0)
    amplitude_list: tuple[float, ...] = (0.5, 1.0, 1.6, 2.6)
    workers: int = 4
    # plumbing
    output_dir: str | None = None
    rng_seed: int = 0

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise DomainError(
                f"field 'experiment': unknown experiment {self.experiment!r}; "
                f"choose one of {', '.join(EXPERIMENTS)}")
        if not (self.p > 2 and math.isfinite(self.p)):
            raise DomainError(f"field 'p': must be a finite real > 2, got {self.p}")
        if not math.isfinite(self.omega):
            raise DomainError(f"field 'omega': must be finite, got {self.omega}")
        if self.rng_seed < 0:
            raise DomainError(f"field 'rng_seed': must be nonnegative, got {self.rng_seed}")
        if self.workers < 1:
            raise DomainError(f"field 'workers': must be >= 1, got {self.workers}")
        if self.num < 2:
            raise DomainError(f"field 'num': need at least 2 ray samples, got {self.num}")
        if not (0 < self.r_min < self.r_max):
            raise DomainError(
                f"fields 'r_min'/'r_max': need 0 < r_min < r_max, got "
                f"{self.r_min}, {self.r_max}")
        if self.ray not in ("x", "y", "diag"):
            raise DomainError(f"field 'ray': must be 'x', 'y', or 'diag', got {self.ray!r}")
        if not self.p_list:
            raise DomainError("field 'p_list': must be nonempty")
        if not self.amplitude_list:
            raise DomainError("field 'amplitude_list': must be nonempty")
        for name in ("tol", "quad_tol", "support_tol"):
            v = getattr(self, name)
            if not (0 < v < 1):
                raise DomainError(f"field {name!r}: must lie in (0, 1), got {v}")
        for name in ("max_iter", "restarts", "diag_stride"):
            v = getattr(self, name)
            if v < 1:
                raise DomainError(f"field {name!r}: must be >= 1, got {v}")
        for name, v in (("window_x", self.window_x), ("window_y", self.window_y)):
            if len(v) != 2 or not (0 < v[0] < v[1]):
                raise DomainError(
                    f"field {name!r}: must be an increasing positive pair, got {v}")

    def grid(self) -> Grid2D:
        return Grid2D(self.nx, self.ny, self.Lx, self.Ly)

    def model(self) -> ModelParams:
        return ModelParams(p=self.p, omega=self.omega)

    def evolve_config(self, diag_stride: int | None = None) -> EvolveConfig:
        return EvolveConfig(
            dt=self.dt, t_max=self.t_max, splitting_order=self.splitting_order,
            diag_stride=self.diag_stride if diag_stride is None else diag_stride,
            blowup_h12_factor=self.blowup_h12_factor, dt_floor=self.dt_floor)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.rng_seed)


_FIELD_TYPES = {f.name: f for f in dataclasses.fields(RunConfig)}
_TUPLE_FIELDS = {"window_x", "window_y", "p_list", "amplitude_list"}
_INT_FIELDS = {"nx", "ny", "diag_stride", "max_iter", "restarts", "num",
               "workers", "rng_seed"}
_STR_FIELDS = {"experiment", "splitting_order", "initial", "ray", "output_dir"}


def _coerce(name: str, value):
    """Coerce a JSON/flag value to the declared field type, with a field-named
    error on mismatch."""
    if name not in _FIELD_TYPES:
        raise DomainError(f"field {name!r}: unknown configuration key")
    if value is None:
        return None
    if name in _TUPLE_FIELDS:
        if isinstance(value, str):
            parts = [s for s in value.split(",") if s.strip()]
        elif isinstance(value, (list, tuple)):
            parts = list(value)
        else:
            raise DomainError(f"field {name!r}: expected a list, got {value!r}")
        try:
            return tuple(float(s) for s in parts)
        except (TypeError, ValueError):
            raise DomainError(f"field {name!r}: non-numeric entry in {value!r}") from None
    if name in _STR_FIELDS:
        if not isinstance(value, str):
            raise DomainError(f"field {name!r}: expected a string, got {value!r}")
        return value
    if name in _INT_FIELDS:
        if isinstance(value, bool) or (not isinstance(value, int)
                                       and not (isinstance(value, str) and value.strip())):
            raise DomainError(f"field {name!r}: expected an integer, got {value!r}")
        try:
            return int(value)
        except (TypeError, ValueError):
            raise DomainError(f"field {name!r}: expected an integer, got {value!r}") from None
    try:
        return float(value)
    except (TypeError, ValueError):
        raise DomainError(f"field {name!r}: expected a number, got {value!r}") from None


def load_config(experiment: str, config_path: str | None,
                overrides: dict) -> RunConfig:
    """Defaults, then JSON file values, then flag overrides (flags win)."""
    values: dict = {"experiment": experiment}
    if config_path is not None:
        try:
            raw = json.loads(Path(config_path).read_text())
        except OSError as exc:
            raise DomainError(f"cannot read config file {config_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise DomainError(
                f"config file {config_path} is not valid JSON: line "
                f"{exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        if not isinstance(raw, dict):
            raise DomainError(f"config file {config_path} must hold a JSON object")
        for key, val in raw.items():
            if key == "experiment":
                continue
            values[key] = _coerce(key, val)
    for key, val in overrides.items():
        if val is not None:
            values[key] = _coerce(key, val)
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def resolve_output_root(cfg: RunConfig) -> Path:
    if cfg.output_dir:
        return Path(cfg.output_dir)
    env = os.environ.get("ANLS_OUTPUT_DIR")
    if env:
        return Path(env)
    return Path.cwd() / "anls-out"


def _config_dict(cfg: RunConfig) -> dict:
    d = dataclasses.asdict(cfg)
    for key in _TUPLE_FIELDS:
        d[key] = list(d[key])
    return d


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2,
                               allow_nan=True) + "\n")


def _manifest(outdir: Path, cfg: RunConfig, artifacts: list[str]) -> None:
    _write_json(outdir / "manifest.json", {
        "format_version": CONFIG_FORMAT_VERSION,
        "experiment": cfg.experiment,
        "config": _config_dict(cfg),
        "rng": {"kind": "numpy-default", "seed": cfg.rng_seed},
        "artifacts": sorted(artifacts),
    })


def _ground_state_payload(result, report) -> dict:
    return {
        "p": result.p,
        "omega": result.omega,
        "residual_l2": result.residual_l2,
        "m_omega": result.m_omega,
        "mass": mass(result.profile),
        "c_opt_estimate": result.c_opt_estimate,
        "iterations": result.iterations,
        "converged": result.converged,
        "pohozaev": {"r1": result.pohozaev.r1, "r2": result.pohozaev.r2,
                     "r3": result.pohozaev.r3},
        "restarts": report,
    }


def _solve_ground_state(cfg: RunConfig, omega: float | None = None):
    params = ModelParams(p=cfg.p, omega=cfg.omega if omega is None else omega)
    grid = cfg.grid()
    return petviashvili_multistart(params, grid, tol=cfg.tol,
                                   max_iter=cfg.max_iter, restarts=cfg.restarts,
                                   rng=cfg.rng())


def _run_ground_state(cfg: RunConfig, outdir: Path) -> dict:
    result, report = _solve_ground_state(cfg)
    write_snapshot(outdir / "ground_state.field", result.profile)
    payload = _ground_state_payload(result, report)
    _write_json(outdir / "ground_state.json", payload)
    _manifest(outdir, cfg, ["ground_state.field", "ground_state.json"])
    return {
        "summary": [
            f"ground state: p = {cfg.p:g}, omega = {cfg.omega:g}",
            f"  residual_l2     {result.residual_l2:.3e}",
            f"  iterations      {result.iterations}",
            f"  m_omega         {result.m_omega:.12g}",
            f"  mass            {payload['mass']:.12g}",
            f"  pohozaev max    {result.pohozaev.max_abs():.3e}",
            f"  c_opt_estimate  {result.c_opt_estimate:.12g}",
        ],
    }


def _initial_field(cfg: RunConfig, grid: Grid2D) -> Field:
    if cfg.initial:
        f = read_snapshot(cfg.initial)
        if f.grid != grid:
            raise DomainError(
                f"snapshot grid {f.grid.shape} box ({f.grid.Lx:g}, {f.grid.Ly:g}) "
                f"does not match configured grid")
        return f
    return gaussian(grid, amplitude=cfg.amplitude)


def _records_csv(path: Path, records) -> None:
    cols = ("t", "mass", "energy", "q", "k", "virial", "h12_norm",
            "boundary_mass_fraction")
    write_csv(path, cols, [r.row() for r in records])


def _run_evolve(cfg: RunConfig, outdir: Path) -> dict:
    grid = cfg.grid()
    psi0 = _initial_field(cfg, grid)
    params = cfg.model()
    out = evolve(psi0, params, cfg.evolve_config())
    _records_csv(outdir / "trajectory.csv", out.records)
    write_snapshot(outdir / "final.field", out.final_state)
    first, last = out.records[0], out.records[-1]
    drift = {
        "mass_drift_rel": (abs(last.mass - first.mass) / first.mass
                           if first.mass else 0.0),
        "energy_drift_rel": (abs(last.energy - first.energy)
                             / max(abs(first.energy), 1e-300)
                             if math.isfinite(last.energy) else math.inf),
    }
    _write_json(outdir / "evolve.json", {
        "status": out.status, "t_final": out.t_final, "steps": out.steps,
        "dt_final": out.dt_final, **drift,
    })
    _manifest(outdir, cfg, ["trajectory.csv", "final.field", "evolve.json"])
    return {
        "summary": [
            f"evolve: p = {cfg.p:g}, t_max = {cfg.t_max:g}, dt = {cfg.dt:g}",
            f"  status        {out.status}",
            f"  t_final       {out.t_final:.6g}",
            f"  steps         {out.steps}",
            f"  mass drift    {drift['mass_drift_rel']:.3e}",
            f"  energy drift  {drift['energy_drift_rel']:.3e}",
        ],
    }


def _run_gn_constant(cfg: RunConfig, outdir: Path) -> dict:
    result, report = _solve_ground_state(cfg, omega=1.0)
    c_opt = result.c_opt_estimate
    c_star = mass_critical_threshold(c_opt)
    quotient = gn_quotient_maximize(cfg.p, cfg.grid(), restarts=cfg.restarts,
                                    rng=cfg.rng(),
                                    extra_seeds=(result.profile,))
    payload = {
        "p": cfg.p,
        "c_opt": c_opt,
        "c_star": c_star,
        "quotient_maximized": quotient,
        "agreement_rel": abs(quotient - c_opt) / c_opt,
        "ground_state": _ground_state_payload(result, report),
    }
    write_snapshot(outdir / "ground_state.field", result.profile)
    _write_json(outdir / "gn_constant.json", payload)
    _manifest(outdir, cfg, ["ground_state.field", "gn_constant.json"])
    return {
        "summary": [
            f"sharp interpolation constant: p = {cfg.p:g}",
            f"  C_opt            {c_opt:.12g}",
            f"  c_star           {c_star:.12g}",
            f"  ascent quotient  {quotient:.12g}",
            f"  rel agreement    {payload['agreement_rel']:.3e}",
        ],
    }


def _run_virial_check(cfg: RunConfig, outdir: Path) -> dict:
    grid = cfg.grid()
    psi0 = _initial_field(cfg, grid)
    params = cfg.model()
    out = evolve(psi0, params, cfg.evolve_config(diag_stride=1))
    report = virial_check(out.records, params)
    _records_csv(outdir / "trajectory.csv", out.records)
    rows = list(zip(report["times"], report["d2_virial"], report["rhs"]))
    write_csv(outdir / "virial.csv", ("t", "d2_virial", "rhs"), rows)
    _write_json(outdir / "virial.json", {
        "status": out.status,
        "max_rel_discrepancy": report["max_rel_discrepancy"],
        "scale": report["scale"],
        "spacing": report["spacing"],
    })
    _manifest(outdir, cfg, ["trajectory.csv", "virial.csv", "virial.json"])
    return {
        "summary": [
            f"virial identity check: p = {cfg.p:g}, dt = {cfg.dt:g}, "
            f"t_max = {cfg.t_max:g}",
            f"  status               {out.status}",
            f"  max rel discrepancy  {report['max_rel_discrepancy']:.3e}",
        ],
    }


def _run_decay_fit(cfg: RunConfig, outdir: Path) -> dict:
    result, report = _solve_ground_state(cfg, omega=1.0)
    fit = decay_fit(result.profile, window_x=cfg.window_x, window_y=cfg.window_y)
    g = result.profile.grid
    a = np.abs(result.profile.data)
    rows = []
    for coord, val in zip(g.x, a[:, g.ny // 2]):
        rows.append(("x", coord, val))
    for coord, val in zip(g.y, a[g.nx // 2, :]):
        rows.append(("y", coord, val))
    write_csv(outdir / "decay_lines.csv", ("axis", "coord", "abs_u"), rows)
    payload = {
        "sigma_x": fit.sigma_x,
        "sigma_y": fit.sigma_y,
        "prefactor_exponent": fit.prefactor_exponent,
        "fit_window": {"x": list(fit.fit_window[0]), "y": list(fit.fit_window[1])},
        "r_squared": {"x": fit.r_squared[0], "y": fit.r_squared[1]},
        "n_samples": {"x": fit.n_samples[0], "y": fit.n_samples[1]},
        "ground_state": _ground_state_payload(result, report),
    }
    write_snapshot(outdir / "ground_state.field", result.profile)
    _write_json(outdir / "decay_fit.json", payload)
    _manifest(outdir, cfg, ["decay_lines.csv", "decay_fit.json",
                            "ground_state.field"])
    return {
        "summary": [
            f"anisotropic decay fit: p = {cfg.p:g}",
            f"  sigma_x  {fit.sigma_x:.6g}  (r^2 = {fit.r_squared[0]:.6f})",
            f"  sigma_y  {fit.sigma_y:.6g}  (r^2 = {fit.r_squared[1]:.6f})",
            f"  prefactor exponent  {fit.prefactor_exponent:.4f}",
        ],
    }


def _probe_artifacts(outdir: Path, cfg: RunConfig, probe: dict, name: str,
                     extra: dict) -> None:
    rows = list(zip(probe["times"], probe["distances"]))
    write_csv(outdir / "distances.csv", ("t", "orbit_distance"), rows)
    _write_json(outdir / f"{name}.json", {
        "status": probe["status"],
        "t_final": probe["t_final"],
        "initial_distance": probe["initial_distance"],
        "sup_distance": probe["sup_distance"],
        "epsilon": probe["epsilon"],
        "escaped": probe["escaped"],
        "anomalous_blowup": probe["anomalous_blowup"],
        **extra,
    })
    _manifest(outdir, cfg, ["distances.csv", f"{name}.json"])


def _run_stability_probe(cfg: RunConfig, outdir: Path) -> dict:
    result, _ = _solve_ground_state(cfg)
    probe = orbital_stability_probe(result.profile, result.params(),
                                    cfg.evolve_config(), delta=cfg.delta,
                                    epsilon=cfg.epsilon, rng=cfg.rng())
    _probe_artifacts(outdir, cfg, probe, "stability", {"delta": cfg.delta})
    return {
        "summary": [
            f"orbital stability probe: p = {cfg.p:g}, delta = {cfg.delta:g}",
            f"  status        {probe['status']}",
            f"  sup distance  {probe['sup_distance']:.6g}",
            f"  escaped       {probe['escaped']}",
        ],
    }


def _run_instability_probe(cfg: RunConfig, outdir: Path) -> dict:
    result, _ = _solve_ground_state(cfg)
    psi0 = scale_lambda(result.profile, cfg.tau, support_tol=cfg.support_tol)
    probe = orbital_stability_probe(result.profile, result.params(),
                                    cfg.evolve_config(), epsilon=cfg.epsilon,
                                    initial=psi0)
    _probe_artifacts(outdir, cfg, probe, "instability", {"tau": cfg.tau})
    return {
        "summary": [
            f"instability probe: p = {cfg.p:g}, tau = {cfg.tau:g}",
            f"  status        {probe['status']}",
            f"  sup distance  {probe['sup_distance']:.6g}",
            f"  escaped       {probe['escaped']}",
        ],
    }


def _scan_cell(cfg: RunConfig, grid: Grid2D, p: float, amp: float,
               m_om: float | None) -> dict:
    cell: dict = {"p": p, "amplitude": amp}
    try:
        params = ModelParams(p=p, omega=cfg.omega)
        psi0 = gaussian(grid, amplitude=amp)
        vals = functional_values(psi0, params)
        cell.update(mass=vals.mass, energy=vals.energy, j_omega=vals.j_omega,
                    q=vals.q, k=vals.k)
        if m_om is not None:
            cell["classification"] = classify_initial_datum(psi0, params, m_om)
        else:
            cell["classification"] = "unavailable"
        out = evolve(psi0, params, cfg.evolve_config())
        cell.update(status=out.status, t_final=out.t_final, error="")
    except Exception as exc:  # per-cell failures stay inline
        cell.setdefault("mass", math.nan)
        cell.setdefault("energy", math.nan)
        cell.setdefault("j_omega", math.nan)
        cell.setdefault("q", math.nan)
        cell.setdefault("k", math.nan)
        cell.setdefault("classification", "unavailable")
        cell.update(status="error", t_final=math.nan,
                    error=f"{type(exc).__name__}: {exc}")
    return cell


def _run_blowup_scan(cfg: RunConfig, outdir: Path) -> dict:
    grid = cfg.grid()
    thresholds: dict[float, float | None] = {}
    for p in cfg.p_list:
        try:
            params = ModelParams(p=p, omega=cfg.omega)
            result, _ = petviashvili_multistart(
                params, grid, tol=cfg.tol, max_iter=cfg.max_iter,
                restarts=1, rng=cfg.rng())
            thresholds[p] = minimal_action(p, cfg.omega, mass(result.profile))
        except (DomainError, NotConvergedError, SolverDivergedError):
            thresholds[p] = None

    cells_idx = [(i, j, p, a) for i, p in enumerate(cfg.p_list)
                 for j, a in enumerate(cfg.amplitude_list)]
    results: dict[tuple[int, int], dict] = {}
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        futures = {
            pool.submit(_scan_cell, cfg, grid, p, a, thresholds[p]): (i, j)
            for i, j, p, a in cells_idx
        }
        for fut, key in futures.items():
            results[key] = fut.result()

    cols = ("p", "amplitude", "mass", "energy", "j_omega", "q", "k",
            "classification", "status", "t_final", "error")
    rows = []
    artifacts = ["scan.csv"]
    for i, j, p, a in cells_idx:
        cell = results[(i, j)]
        rows.append(tuple(cell[c] for c in cols))
        name = f"cell_{i:02d}_{j:02d}.json"
        _write_json(outdir / name, cell)
        artifacts.append(name)
    write_csv(outdir / "scan.csv", cols, rows)
    _manifest(outdir, cfg, artifacts)
    n_blow = sum(1 for c in results.values() if c["status"] == "blowup_detected")
    n_done = sum(1 for c in results.values() if c["status"] == "completed")
    return {
        "summary": [
            f"blowup scan: {len(cfg.p_list)} x {len(cfg.amplitude_list)} cells, "
            f"t_max = {cfg.t_max:g}",
            f"  completed        {n_done}",
            f"  blowup_detected  {n_blow}",
            f"  other            {len(cells_idx) - n_done - n_blow}",
        ],
    }


def _run_symmetry_report(cfg: RunConfig, outdir: Path) -> dict:
    result, report = _solve_ground_state(cfg)
    rep = symmetry_report(result)
    payload = {
        "x_asymmetry": rep.x_asymmetry,
        "y_asymmetry": rep.y_asymmetry,
        "shift_x": rep.shift_x,
        "shift_y": rep.shift_y,
        "ground_state": _ground_state_payload(result, report),
    }
    _write_json(outdir / "symmetry.json", payload)
    write_snapshot(outdir / "ground_state.field", result.profile)
    _manifest(outdir, cfg, ["symmetry.json", "ground_state.field"])
    return {
        "summary": [
            f"symmetry report: p = {cfg.p:g}, omega = {cfg.omega:g}",
            f"  x asymmetry  {rep.x_asymmetry:.3e}",
            f"  y asymmetry  {rep.y_asymmetry:.3e}",
        ],
    }


def _run_kernel_eval(cfg: RunConfig, outdir: Path) -> dict:
    radii = np.linspace(cfg.r_min, cfg.r_max, cfg.num)
    rows = []
    for r in radii:
        if cfg.ray == "x":
            x, y = float(r), 0.0
        elif cfg.ray == "y":
            x, y = 0.0, float(r)
        else:
            x, y = float(r), float(r)
        rows.append((r, x, y, kernel_eval(x, y, quad_tol=cfg.quad_tol)))
    write_csv(outdir / "kernel.csv", ("r", "x", "y", "K"), rows)
    asym = h2_asymptotics()
    _write_json(outdir / "kernel.json", {
        "ray": cfg.ray, "quad_tol": cfg.quad_tol,
        "h2_asymptotics": {"c0": asym.c0, "c1": asym.c1, "c2": asym.c2,
                           "r_squared": asym.r_squared,
                           "n_peaks": asym.n_peaks},
    })
    _manifest(outdir, cfg, ["kernel.csv", "kernel.json"])
    kvals = [row[3] for row in rows]
    return {
        "summary": [
            f"kernel ray '{cfg.ray}': {cfg.num} samples in "
            f"[{cfg.r_min:g}, {cfg.r_max:g}]",
            f"  K range  [{min(kvals):.6e}, {max(kvals):.6e}]",
            f"  h2 tail  c1 = {asym.c1:.6f}, c2 = {asym.c2:.6f}",
        ],
    }


_RUNNERS = {
    "ground-state": _run_ground_state,
    "evolve": _run_evolve,
    "gn-constant": _run_gn_constant,
    "virial-check": _run_virial_check,
    "decay-fit": _run_decay_fit,
    "stability-probe": _run_stability_probe,
    "instability-probe": _run_instability_probe,
    "blowup-scan": _run_blowup_scan,
    "symmetry-report": _run_symmetry_report,
    "kernel-eval": _run_kernel_eval,
}


def run(cfg: RunConfig) -> dict:
    """Execute one experiment; returns the printable summary."""
    cfg.validate()
    root = resolve_output_root(cfg)
    outdir = root / cfg.experiment
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        probe = outdir / ".write-probe"
        probe.write_bytes(b"")
        probe.unlink()
    except OSError as exc:
        raise PermissionError(f"output directory {outdir} is not writable: {exc}") from exc
    return _RUNNERS[cfg.experiment](cfg, outdir)
