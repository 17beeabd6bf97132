"""Ready-made field constructors: Gaussian seeds, band-limited noise, random samples."""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .grid import Field, Grid2D

__all__ = ["gaussian", "band_limited_noise", "random_smooth_field"]


def gaussian(grid: Grid2D, amplitude: float = 1.0, ax: float = 1.0, ay: float = 1.0,
             x0: float = 0.0, y0: float = 0.0) -> Field:
    """amplitude * exp(-ax*(x-x0)^2 - ay*(y-y0)^2), the default solver seed."""
    if ax <= 0 or ay <= 0:
        raise DomainError(f"gaussian widths must be positive, got ax={ax}, ay={ay}")
    data = amplitude * np.exp(-ax * (grid.X - x0) ** 2 - ay * (grid.Y - y0) ** 2)
    return Field(grid, data.astype(np.complex128))


def band_limited_noise(grid: Grid2D, rng: np.random.Generator, modes: int = 8) -> np.ndarray:
    """Complex noise supported on the lowest `modes` x `modes` Fourier block.

    Normalized to unit sup norm.  Deterministic given the generator state.
    """
    m = int(modes)
    if m < 1 or m > min(grid.nx, grid.ny):
        raise DomainError(f"modes must lie in [1, {min(grid.nx, grid.ny)}], got {modes}")
    spec = np.zeros(grid.shape, dtype=np.complex128)
    idx = np.arange(-(m // 2), m - m // 2)
    re = rng.standard_normal((m, m))
    im = rng.standard_normal((m, m))
    spec[np.ix_(idx % grid.nx, idx % grid.ny)] = re + 1j * im
    noise = np.fft.ifft2(spec) * (grid.nx * grid.ny) ** 0.5
    peak = np.abs(noise).max()
    if peak == 0.0:
        noise[...] = 1.0
        peak = 1.0
    return noise / peak


def random_smooth_field(grid: Grid2D, rng: np.random.Generator, modes: int = 10,
                        real: bool = False) -> Field:
    """Localized random smooth field: band-limited noise under a random Gaussian
    envelope.  Suitable for inequality sampling; never identically zero, decays
    well inside the box."""
    wx = rng.uniform(0.15, 0.9)
    wy = rng.uniform(0.15, 0.9)
    x0 = rng.uniform(-0.05, 0.05) * grid.Lx
    y0 = rng.uniform(-0.05, 0.05) * grid.Ly
    env = np.exp(-wx * (grid.X - x0) ** 2 - wy * (grid.Y - y0) ** 2)
    noise = band_limited_noise(grid, rng, modes)
    if real:
        noise = noise.real
    data = env * (0.3 + noise)
    if np.max(np.abs(data)) == 0.0:
        data = env
    return Field(grid, data)
