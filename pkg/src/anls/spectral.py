"""Spectral derivative operators, the free propagator, and series resampling.

Transforms use the unnormalized forward / 1/(nx*ny) inverse convention, so
Parseval reads sum|f|^2 = sum|fhat|^2/(nx*ny).  The free group of the linear
equation acts in Fourier space as multiplication by exp(-i*t*(kx^2 + ky^4)).
"""

from __future__ import annotations

import numpy as np
from scipy import fft as sfft

from .errors import DomainError, SupportOverflowError
from .grid import Field, Grid2D

__all__ = [
    "fft2",
    "ifft2",
    "dx",
    "dyy",
    "dispersion_symbol",
    "linear_propagate",
    "nonlinear_term",
    "sample_scaled",
    "resample_to_grid",
]


def fft2(a: np.ndarray) -> np.ndarray:
    return sfft.fft2(a)


def ifft2(a: np.ndarray) -> np.ndarray:
    return sfft.ifft2(a)


def _require_finite(f: Field, op: str):
    if f.post_blowup or not np.all(np.isfinite(f.data.view(np.float64))):
        raise DomainError(f"{op}: input field has non-finite entries")


def dx(f: Field) -> Field:
    """First x-derivative.  The unpaired Nyquist mode is zeroed so real fields
    keep real derivatives."""
    _require_finite(f, "dx")
    fh = fft2(f.data)
    fh *= (1j * f.grid.kx_d)[:, None]
    return Field(f.grid, ifft2(fh))


def dyy(f: Field) -> Field:
    """Second y-derivative via the multiplier -ky^2 (sign-insensitive, Nyquist kept)."""
    _require_finite(f, "dyy")
    fh = fft2(f.data)
    fh *= (-f.grid.ky2)[None, :]
    return Field(f.grid, ifft2(fh))


def dispersion_symbol(grid: Grid2D) -> np.ndarray:
    """kx^2 + ky^4 on the full spectral grid; entry (0, 0) is exactly 0."""
    return grid.symbol.copy()


def linear_propagate(f: Field, t: float) -> Field:
    """Apply the free propagator exp(-i*t*(kx^2 + ky^4)) for time t.

    t = 0 returns a copy without touching the spectrum, so spectra are
    bitwise identical.  The map is unitary for every t.
    """
    _require_finite(f, "linear_propagate")
    if not np.isfinite(t):
        raise DomainError(f"linear_propagate: time must be finite, got {t}")
    if t == 0.0:
        return Field(f.grid, f.data.copy())
    fh = fft2(f.data)
    fh *= np.exp((-1j * t) * f.grid.symbol)
    return Field(f.grid, ifft2(fh))


def nonlinear_term(data: np.ndarray, p: float, grid: Grid2D, dealias: bool) -> np.ndarray:
    """|u|^{p-2} u evaluated pointwise, optionally 2/3-rule truncated.

    Truncation is only meaningful (and only applied) for integer p in
    {3, 4, 5, 6}, where the product is polynomial in u and conj(u); fractional
    powers are not band-limited so the mask would discard real content.
    """
    w = np.abs(data) ** (p - 2.0) * data
    if dealias and float(p).is_integer() and 3 <= int(p) <= 6:
        w = ifft2(fft2(w) * grid.dealias_mask)
    return w


def _wrapped_envelope_check(env: np.ndarray, coords: np.ndarray, targets: np.ndarray,
                            L: float, h: float, tol: float, axis_name: str):
    """Targets outside [-L/2, L/2) sample the periodic extension; demand the
    field is below tol (relative to its max) wherever that wrap lands."""
    out = np.abs(targets) > 0.5 * L
    if not np.any(out):
        return
    wrapped = (targets[out] + 0.5 * L) % L - 0.5 * L
    idx = np.clip(np.rint((wrapped + 0.5 * L) / h).astype(int), 0, env.size - 1)
    if np.any(env[idx] > tol):
        raise SupportOverflowError(
            f"rescaled sampling leaves the box along {axis_name} where the field "
            f"is not negligible (envelope {env[idx].max():.3e} > {tol:.1e} of max)"
        )


def _eval_matrix(k: np.ndarray, targets: np.ndarray, origin: float) -> np.ndarray:
    # trig-series evaluation matrix; Nyquist column is zeroed by the caller
    return np.exp(1j * np.outer(targets - origin, k))


def _series_eval(f: Field, xq: np.ndarray, yq: np.ndarray, support_tol: float) -> np.ndarray:
    g = f.grid
    amax = float(np.abs(f.data).max())
    if amax == 0.0:
        return np.zeros((xq.size, yq.size), dtype=np.complex128)
    env_x = np.abs(f.data).max(axis=1) / amax
    env_y = np.abs(f.data).max(axis=0) / amax
    _wrapped_envelope_check(env_x, g.x, xq, g.Lx, g.hx, support_tol, "x")
    _wrapped_envelope_check(env_y, g.y, yq, g.Ly, g.hy, support_tol, "y")

    fh = fft2(f.data)
    # zero the unpaired Nyquist modes: off-grid evaluation cannot split them
    fh[g.nx // 2, :] = 0.0
    fh[:, g.ny // 2] = 0.0
    Ax = _eval_matrix(g.kx, xq, g.x[0])
    Ay = _eval_matrix(g.ky, yq, g.y[0])
    vals = Ax @ fh @ Ay.T
    vals /= g.nx * g.ny
    return vals


def sample_scaled(f: Field, sx: float, sy: float, support_tol: float = 1e-12) -> np.ndarray:
    """Evaluate the band-limited interpolant of f at (sx*x_j, sy*y_m).

    Raises SupportOverflowError if scaled sampling would wrap around the box
    through a region where |f| exceeds support_tol * max|f|.
    """
    _require_finite(f, "sample_scaled")
    if not (np.isfinite(sx) and np.isfinite(sy) and sx > 0 and sy > 0):
        raise DomainError(f"scaling factors must be positive and finite, got {sx}, {sy}")
    g = f.grid
    vals = _series_eval(f, sx * g.x, sy * g.y, support_tol)
    if np.max(np.abs(f.data.imag)) == 0.0:
        vals = vals.real.astype(np.complex128)
    return vals


def resample_to_grid(f: Field, new_grid: Grid2D, support_tol: float = 1e-12) -> Field:
    """Evaluate f's interpolant on the nodes of another grid (e.g. a larger box)."""
    _require_finite(f, "resample_to_grid")
    vals = _series_eval(f, np.asarray(new_grid.x), np.asarray(new_grid.y), support_tol)
    if np.max(np.abs(f.data.imag)) == 0.0:
        vals = vals.real.astype(np.complex128)
    return Field(new_grid, vals)
