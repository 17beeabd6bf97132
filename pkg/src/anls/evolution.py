"""Time integration, diagnostics, and dynamical probes.

The splitting integrators advance i psi_t = -psi_xx + psi_yyyy - |psi|^(p-2) psi
by alternating the exact free flow (a Fourier multiplier) with the exact
nonlinear flow (a pointwise phase rotation, since |psi| is constant along it).
`evolve` wraps the second-order step with amplitude-based step control, blowup
and boundary-contamination detection, and a fixed-schema diagnostics record
stream suitable for CSV export and for the virial consistency check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BoundaryMassWarning, DomainError, InsufficientDataError
from .fields import band_limited_noise
from .functionals import (
    FunctionalValues,
    boundary_mass_fraction,
    functional_values,
    h12_norm,
    j_omega,
    k_functional,
    q_functional,
)
from .grid import Field, Grid2D, ModelParams
from .spectral import fft2, ifft2

__all__ = [
    "EvolveConfig",
    "DiagnosticsRecord",
    "TrajectoryOutcome",
    "step_lie",
    "step_strang",
    "evolve",
    "virial_check",
    "classify_initial_datum",
    "sign_invariance_probe",
    "orbit_distance",
    "orbital_stability_probe",
]

STATUS_COMPLETED = "completed"
STATUS_BLOWUP = "blowup_detected"
STATUS_BOUNDARY = "boundary_contaminated"
STATUS_STEP_FLOOR = "step_floor_reached"

# Relative change of the sup norm across one step above which the step is
# rejected and retried at half size.
AMPLITUDE_JUMP = 0.1
BOUNDARY_LIMIT = 1e-6


@dataclass(frozen=True)
class EvolveConfig:
    """Step size, horizon, splitting order, and detection thresholds."""

    dt: float
    t_max: float
    splitting_order: str = "strang"
    diag_stride: int = 10
    blowup_h12_factor: float = 1e4
    dt_floor: float = 1e-12

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise DomainError(f"dt must be positive and finite, got {self.dt}")
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise DomainError(f"t_max must be positive and finite, got {self.t_max}")
        if not self.dt < self.t_max:
            raise DomainError(f"dt must be below t_max, got dt={self.dt}, "
                              f"t_max={self.t_max}")
        if self.splitting_order not in ("lie", "strang"):
            raise DomainError(
                f"splitting_order must be 'lie' or 'strang', got "
                f"{self.splitting_order!r}")
        if self.diag_stride < 1:
            raise DomainError(f"diag_stride must be >= 1, got {self.diag_stride}")
        if not (self.blowup_h12_factor > 1):
            raise DomainError(
                f"blowup_h12_factor must exceed 1, got {self.blowup_h12_factor}")
        if not (0 < self.dt_floor < self.dt):
            raise DomainError(
                f"dt_floor must lie in (0, dt), got {self.dt_floor}")


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One diagnostics row; the field order is the CSV column order."""

    t: float
    mass: float
    energy: float
    q: float
    k: float
    virial: float
    h12_norm: float
    boundary_mass_fraction: float

    COLUMNS = ("t", "mass", "energy", "q", "k", "virial", "h12_norm",
               "boundary_mass_fraction")

    def row(self) -> tuple[float, ...]:
        return (self.t, self.mass, self.energy, self.q, self.k, self.virial,
                self.h12_norm, self.boundary_mass_fraction)


@dataclass(frozen=True)
class TrajectoryOutcome:
    """Terminal status plus everything recorded along the way."""

    status: str
    final_state: Field
    records: tuple[DiagnosticsRecord, ...]
    t_final: float
    steps: int
    dt_final: float


def _nonlinear_phase(data: np.ndarray, p: float, dt: float) -> np.ndarray:
    """Exact flow of i psi_t = -|psi|^(p-2) psi over dt: a phase rotation."""
    with np.errstate(over="ignore", invalid="ignore"):
        amp = np.abs(data) ** (p - 2.0)
        return data * np.exp(1j * dt * amp)


def _free_flow(grid: Grid2D, data: np.ndarray, t: float) -> np.ndarray:
    if t == 0.0:
        return data
    return ifft2(np.exp(-1j * t * grid.symbol) * fft2(data))


def step_lie(f: Field, dt: float, params: ModelParams,
             nonlinear_scale: float = 1.0) -> Field:
    """First-order splitting: full free flow, then full nonlinear phase."""
    data = _free_flow(f.grid, f.data, dt)
    data = _nonlinear_phase(data, params.p, dt * nonlinear_scale)
    finite = bool(np.all(np.isfinite(data.view(np.float64))))
    return Field(f.grid, data, post_blowup=not finite)


def step_strang(f: Field, dt: float, params: ModelParams,
                nonlinear_scale: float = 1.0) -> Field:
    """Second-order splitting: half free flow, nonlinear phase, half free flow."""
    g = f.grid
    data = _free_flow(g, f.data, 0.5 * dt)
    data = _nonlinear_phase(data, params.p, dt * nonlinear_scale)
    data = _free_flow(g, data, 0.5 * dt)
    finite = bool(np.all(np.isfinite(data.view(np.float64))))
    return Field(g, data, post_blowup=not finite)


def _record(t: float, vals: FunctionalValues, bmf: float) -> DiagnosticsRecord:
    return DiagnosticsRecord(
        t=t, mass=vals.mass, energy=vals.energy, q=vals.q, k=vals.k,
        virial=vals.virial, h12_norm=vals.h12_norm, boundary_mass_fraction=bmf)


def evolve(psi0: Field, params: ModelParams, config: EvolveConfig,
           observer: Callable[[float, Field], None] | None = None,
           nonlinear_scale: float = 1.0) -> TrajectoryOutcome:
    """Integrate to t_max with Strang splitting and amplitude step control.

    The monitored amplitude is mass-weighted, mu = ||psi||_4^2 / ||psi||_2
    (the root mean square of |psi| under the mass measure): it tracks
    focusing while staying insensitive to the high-wavenumber beating that
    makes the raw sup norm flicker.  A step that changes mu by more than 10%
    relative is redone at half size; smooth stretches grow the step back
    geometrically toward the configured dt.  Halting reasons: a non-finite iterate, growth of the
    anisotropic Sobolev norm past ``blowup_h12_factor`` times its initial
    value, or a halving cascade that bottoms out at ``dt_floor`` while the
    step is still rough, all declare `blowup_detected` (the dt collapse and
    the norm growth are the two signals of the blow-up alternative); a
    configured step at or below ``dt_floor`` stops as `step_floor_reached`.
    Mass fraction above 1e-6 in the outermost frame does not halt the run:
    integration continues to t_max, a warning is issued at the first
    crossing, and a run that would otherwise complete is declared
    `boundary_contaminated` instead, marking every later diagnostic as a
    periodic-wrap artifact rather than a statement about the whole plane.

    Diagnostics are recorded at t = 0, every ``diag_stride`` accepted steps,
    and at termination.  The observer, when given, is called at exactly the
    recorded times with the current field.
    """
    psi = psi0.copy()
    bmf0 = boundary_mass_fraction(psi)
    if bmf0 >= 1e-8:
        raise DomainError(
            f"initial datum already carries mass fraction {bmf0:.3e} in the "
            "boundary frame; enlarge the box")
    t = 0.0
    dt = config.dt
    h12_0 = h12_norm(psi)
    stepper = step_lie if config.splitting_order == "lie" else step_strang

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryMassWarning)
        vals = functional_values(psi, params)
    records = [_record(0.0, vals, boundary_mass_fraction(psi))]
    if observer is not None:
        observer(0.0, psi)

    status = STATUS_COMPLETED
    steps = 0
    since_record = 0
    contaminated = False

    def take_record(tt: float, ff: Field) -> None:
        nonlocal since_record
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BoundaryMassWarning)
            v = functional_values(ff, params)
        records.append(_record(tt, v, boundary_mass_fraction(ff)))
        since_record = 0
        if observer is not None:
            observer(tt, ff)

    def weighted_amp(f: Field) -> float:
        dens = np.abs(f.data) ** 2
        m2 = float(dens.sum())
        if m2 == 0.0:
            return 0.0
        return math.sqrt(float((dens * dens).sum()) / m2)

    def rough(prev_amp: float, cand: Field) -> bool:
        if cand.post_blowup:
            return True
        amp = weighted_amp(cand)
        if not math.isfinite(amp):
            return True
        return prev_amp > 0.0 and abs(amp - prev_amp) > AMPLITUDE_JUMP * prev_amp

    while config.t_max - t > 1e-12 * config.t_max:
        dt_step = min(dt, config.t_max - t)
        amp_before = weighted_amp(psi)
        trial = stepper(psi, dt_step, params, nonlinear_scale)
        halved = False
        while rough(amp_before, trial) and dt_step * 0.5 > config.dt_floor:
            dt = dt_step = 0.5 * dt_step
            halved = True
            trial = stepper(psi, dt_step, params, nonlinear_scale)

        if trial.post_blowup or rough(amp_before, trial):
            # Still rough at the floor: the dt collapse is the blowup signal.
            psi, t, status = trial, t + dt_step, STATUS_BLOWUP
            steps += 1
            break
        psi = trial
        t += dt_step
        steps += 1
        since_record += 1
        if not halved:
            dt = min(dt * 1.25, config.dt)

        h12_now = h12_norm(psi)
        if not math.isfinite(h12_now) or h12_now > config.blowup_h12_factor * h12_0:
            status = STATUS_BLOWUP
            break
        if not contaminated:
            bmf = boundary_mass_fraction(psi)
            if bmf > BOUNDARY_LIMIT:
                contaminated = True
                warnings.warn(
                    f"boundary frame holds mass fraction {bmf:.3e} at "
                    f"t = {t:.6g}; the periodic box no longer approximates "
                    "the whole plane", BoundaryMassWarning, stacklevel=2)
        if dt <= config.dt_floor:
            status = STATUS_STEP_FLOOR
            break
        if since_record >= config.diag_stride:
            take_record(t, psi)

    if status == STATUS_COMPLETED and contaminated:
        status = STATUS_BOUNDARY

    if psi.post_blowup:
        records.append(DiagnosticsRecord(
            t=t, mass=math.nan, energy=math.nan, q=math.nan, k=math.nan,
            virial=math.nan, h12_norm=math.inf, boundary_mass_fraction=math.nan))
        if observer is not None:
            observer(t, psi)
    elif records[-1].t != t:
        take_record(t, psi)

    return TrajectoryOutcome(status=status, final_state=psi,
                             records=tuple(records), t_final=t, steps=steps,
                             dt_final=dt)


def virial_check(records: Sequence[DiagnosticsRecord], params: ModelParams,
                 dt_tol: float = 1e-9) -> dict:
    """Compare the second time derivative of the variance against its identity.

    For solutions, d^2/dt^2 int x^2 |psi|^2 = 8 X - (4(p-2)/p) P.  Both X and
    P are reconstructed from the recorded (energy, q, k) triple:

        P = (E - q/2) * 8p / (3p - 14),
        X = q - 2k + ((p-2)/(2p)) P,

    which is singular at the mass-critical power, so p = 14/3 is rejected.
    Records must be uniformly spaced in time within ``dt_tol`` relative.
    Returns interior times, the centered second difference, the reconstructed
    right-hand side, and their maximum discrepancy relative to the identity's
    own scale.
    """
    if len(records) < 3:
        raise InsufficientDataError(
            f"need at least 3 records for a second difference, got {len(records)}")
    p = params.p
    if abs(3.0 * p - 14.0) < 1e-6:
        raise DomainError(
            "scalar reconstruction is singular at the mass-critical power p = 14/3")
    t = np.asarray([r.t for r in records], dtype=np.float64)
    dt_all = np.diff(t)
    if np.any(dt_all <= 0):
        raise DomainError("record times must be strictly increasing")
    h = float(dt_all[0])
    if np.max(np.abs(dt_all - h)) > dt_tol * max(h, 1.0):
        raise DomainError(
            "records are not uniformly spaced in time; re-run with a diag "
            "stride that lands on a fixed step")
    v = np.asarray([r.virial for r in records])
    e = np.asarray([r.energy for r in records])
    q = np.asarray([r.q for r in records])
    k = np.asarray([r.k for r in records])
    if not (np.all(np.isfinite(v)) and np.all(np.isfinite(e))):
        raise DomainError("records contain non-finite diagnostics")

    pp = (e - 0.5 * q) * 8.0 * p / (3.0 * p - 14.0)
    x = q - 2.0 * k + ((p - 2.0) / (2.0 * p)) * pp
    rhs = 8.0 * x - (4.0 * (p - 2.0) / p) * pp

    d2v = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h ** 2
    rhs_mid = rhs[1:-1]
    scale = float(np.max(8.0 * np.abs(x[1:-1]) + (4.0 * (p - 2.0) / p) * np.abs(pp[1:-1])))
    if scale == 0.0:
        scale = 1.0
    disc = np.abs(d2v - rhs_mid) / scale
    return {
        "times": t[1:-1],
        "d2_virial": d2v,
        "rhs": rhs_mid,
        "scale": scale,
        "max_rel_discrepancy": float(np.max(disc)),
        "spacing": h,
    }


def classify_initial_datum(f: Field, params: ModelParams, m_omega: float) -> str:
    """Place a datum relative to the action threshold: 'in_G', 'in_B', 'neither'.

    Below the minimal action: Q > 0 is the global region, Q < 0 with K > 0
    the blowup region.  At or above the threshold, or on the Q = 0 or K <= 0
    boundaries, nothing is asserted.
    """
    if not (m_omega > 0 and math.isfinite(m_omega)):
        raise DomainError(f"threshold action must be positive, got {m_omega}")
    if j_omega(f, params) >= m_omega:
        return "neither"
    q = q_functional(f, params)
    if q > 0:
        return "in_G"
    if q < 0 and k_functional(f, params) > 0:
        return "in_B"
    return "neither"


def sign_invariance_probe(psi0: Field, params: ModelParams, m_omega: float,
                          config: EvolveConfig) -> dict:
    """Evolve a sub-threshold datum and track the sign of Q along the flow.

    The datum must satisfy J_omega < m_omega with Q != 0; inside that set the
    sign of Q cannot change for true solutions, so a recorded flip is a
    numerical inconsistency.  Boundary contamination or a step floor makes
    the verdict inconclusive past that time.
    """
    j0 = j_omega(psi0, params)
    q0 = q_functional(psi0, params)
    if not (j0 < m_omega):
        raise DomainError(
            f"datum is not below the action threshold: J = {j0:.6g} >= "
            f"m_omega = {m_omega:.6g}")
    if q0 == 0.0:
        raise DomainError("datum has Q = 0; the sign is undefined")
    out = evolve(psi0, params, config)
    sign0 = 1.0 if q0 > 0 else -1.0
    # Certify only while the box still approximates the plane: records from
    # the first contaminated one onward carry wrap artifacts, not dynamics.
    horizon = len(out.records)
    for i, r in enumerate(out.records):
        if not math.isfinite(r.boundary_mass_fraction) \
                or r.boundary_mass_fraction > BOUNDARY_LIMIT:
            horizon = i
            break
    flips = [i for i in range(horizon)
             if math.isfinite(out.records[i].q)
             and out.records[i].q * sign0 <= 0.0]
    inconclusive = (horizon < len(out.records)
                    or out.status == STATUS_STEP_FLOOR)
    return {
        "initial_sign": int(sign0),
        "initial_q": q0,
        "initial_j": j0,
        "sign_preserved": not flips,
        "first_flip_index": flips[0] if flips else None,
        "certified_until": (out.records[horizon - 1].t if horizon else 0.0),
        "status": out.status,
        "inconclusive": inconclusive,
        "records": out.records,
        "t_final": out.t_final,
    }


def orbit_distance(psi: Field, ref: Field) -> tuple[float, tuple[int, int], float]:
    """Distance from psi to the symmetry orbit of ref (translations + phase).

    The translation is resolved to the nearest grid shift by FFT
    cross-correlation, the phase by the anisotropic Sobolev inner product
    against the shifted reference.  Returns (distance, (ix, iy) shift, phase).
    """
    g = psi.grid
    if ref.grid != g:
        raise DomainError("fields live on different grids")
    fh = fft2(psi.data)
    rh = fft2(ref.data)
    corr = ifft2(fh * np.conj(rh))
    ix, iy = np.unravel_index(np.argmax(np.abs(corr)), corr.shape)
    shifted = np.roll(ref.data, (ix, iy), axis=(0, 1))
    sh = fft2(shifted)
    wts = (g.kx_d ** 2)[:, None] + (g.ky2 ** 2)[None, :] + 1.0
    inner = complex(np.sum(wts * fh * np.conj(sh)))
    theta = math.atan2(inner.imag, inner.real) if inner != 0 else 0.0
    diff = Field(g, psi.data - np.exp(1j * theta) * shifted)
    return h12_norm(diff), (int(ix), int(iy)), theta


def orbital_stability_probe(ground: Field, params: ModelParams,
                            config: EvolveConfig, delta: float = 1e-3,
                            epsilon: float | None = None,
                            rng: np.random.Generator | None = None,
                            initial: Field | None = None) -> dict:
    """Evolve a perturbed standing-wave profile and track the orbit distance.

    By default the initial datum is ground * (1 + delta * noise) with smooth
    complex noise of unit sup norm.  Pass ``initial`` to probe a specific
    datum (e.g. a rescaled profile on the unstable side).  The escape flag
    compares the largest recorded distance against ``epsilon``, which
    defaults to 10 * the initial distance plus an absolute floor.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    g = ground.grid
    if initial is None:
        if not (0 <= delta < 1):
            raise DomainError(f"delta must lie in [0, 1), got {delta}")
        noise = band_limited_noise(g, rng, modes=8)
        psi0 = Field(g, ground.data * (1.0 + delta * noise))
    else:
        psi0 = initial

    times: list[float] = []
    dists: list[float] = []

    def watch(t: float, f: Field) -> None:
        if f.post_blowup:
            times.append(t)
            dists.append(math.inf)
            return
        d, _, _ = orbit_distance(f, ground)
        times.append(t)
        dists.append(d)

    out = evolve(psi0, params, config, observer=watch)
    d0 = dists[0] if dists else 0.0
    eps = epsilon if epsilon is not None else 10.0 * d0 + 1e-6 * h12_norm(ground)
    sup_d = max(dists) if dists else math.nan
    contaminated_from = next(
        (r.t for r in out.records
         if not math.isfinite(r.boundary_mass_fraction)
         or r.boundary_mass_fraction > BOUNDARY_LIMIT), None)
    # Blowup at a mass-subcritical power contradicts global existence there.
    anomalous = (out.status == STATUS_BLOWUP) and (2.0 < params.p < 14.0 / 3.0)
    return {
        "times": np.asarray(times),
        "distances": np.asarray(dists),
        "initial_distance": d0,
        "sup_distance": sup_d,
        "epsilon": eps,
        "escaped": bool(sup_d > eps),
        "anomalous_blowup": anomalous,
        "contaminated_from": contaminated_from,
        "status": out.status,
        "records": out.records,
        "t_final": out.t_final,
    }
