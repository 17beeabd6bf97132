"""Periodic grid, field container, and model parameters.

The model is posed on a periodic box [-Lx/2, Lx/2) x [-Ly/2, Ly/2).  The x axis
carries a second-order derivative and the y axis a fourth-order one, so the two
directions are never interchangeable; arrays are indexed [x, y] with x slow.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = ["Grid2D", "Field", "ModelParams", "zeros"]


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2D:
    """Uniform periodic grid with precomputed spectral multipliers.

    Parameters
    ----------
    nx, ny : int
        Number of samples along x and y.  Powers of two are required.
    Lx, Ly : float
        Box edge lengths.  Sample j along x sits at ``-Lx/2 + j*Lx/nx``.

    Wavenumbers follow the signed convention ``kx[j] = 2*pi*wrap(j, nx)/Lx``
    with ``wrap`` mapping j into [-n/2, n/2).  The first-derivative multiplier
    zeroes the Nyquist mode so derivatives of real fields stay real; even
    powers (ky^2, kx^2, ky^4) keep it since squaring removes the sign
    ambiguity.  All derived arrays are computed once here and never mutated,
    so a ``Grid2D`` may be shared freely between threads.
    """

    nx: int
    ny: int
    Lx: float = 40.0
    Ly: float = 40.0

    def __post_init__(self):
        if not (_is_power_of_two(self.nx) and _is_power_of_two(self.ny)):
            raise DomainError(f"grid sizes must be powers of two, got {self.nx} x {self.ny}")
        if not (np.isfinite(self.Lx) and np.isfinite(self.Ly) and self.Lx > 0 and self.Ly > 0):
            raise DomainError(f"box lengths must be positive and finite, got {self.Lx}, {self.Ly}")

        hx = self.Lx / self.nx
        hy = self.Ly / self.ny
        x = -0.5 * self.Lx + hx * np.arange(self.nx)
        y = -0.5 * self.Ly + hy * np.arange(self.ny)
        # signed integer frequencies, Nyquist at -n/2
        kx = 2.0 * np.pi * np.fft.fftfreq(self.nx, d=hx)
        ky = 2.0 * np.pi * np.fft.fftfreq(self.ny, d=hy)
        kx_d = kx.copy()
        kx_d[self.nx // 2] = 0.0  # odd-order multiplier drops the unpaired mode
        ky_d = ky.copy()
        ky_d[self.ny // 2] = 0.0
        ky2 = ky ** 2
        symbol = (kx ** 2)[:, None] + (ky2 ** 2)[None, :]

        # 2/3-rule mask for products of up to three fields
        kx_int = np.rint(np.fft.fftfreq(self.nx) * self.nx).astype(int)
        ky_int = np.rint(np.fft.fftfreq(self.ny) * self.ny).astype(int)
        keep_x = np.abs(kx_int) <= self.nx // 3
        keep_y = np.abs(ky_int) <= self.ny // 3
        dealias = keep_x[:, None] & keep_y[None, :]

        X, Y = np.meshgrid(x, y, indexing="ij")
        for name, val in [
            ("hx", hx), ("hy", hy), ("cell_area", hx * hy),
            ("x", x), ("y", y), ("kx", kx), ("ky", ky),
            ("kx_d", kx_d), ("ky_d", ky_d), ("ky2", ky2),
            ("symbol", symbol), ("dealias_mask", dealias),
            ("X", X), ("Y", Y),
        ]:
            object.__setattr__(self, name, val)
        for arr in (x, y, kx, ky, kx_d, ky_d, ky2, symbol, dealias, X, Y):
            arr.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)


@dataclass(frozen=True, eq=False)
class Field:
    """Complex scalar field sampled on a :class:`Grid2D`.

    ``data`` has shape ``(nx, ny)`` with x along axis 0.  Entries must be
    finite unless ``post_blowup`` marks the field as the output of a step that
    overflowed, in which case it only exists to be inspected.
    """

    grid: Grid2D
    data: np.ndarray = field(repr=False)
    post_blowup: bool = False

    def __post_init__(self):
        data = np.ascontiguousarray(np.asarray(self.data, dtype=np.complex128))
        if data.shape != self.grid.shape:
            raise DomainError(f"field shape {data.shape} does not match grid {self.grid.shape}")
        if not self.post_blowup and not np.all(np.isfinite(data.view(np.float64))):
            raise DomainError("field contains non-finite entries")
        object.__setattr__(self, "data", data)

    def copy(self) -> "Field":
        return Field(self.grid, self.data.copy(), self.post_blowup)


@dataclass(frozen=True)
class ModelParams:
    """Nonlinearity exponent p and frequency omega of the standing wave ansatz.

    The focusing power nonlinearity is |u|^{p-2} u, so p > 2 is required.
    omega only enters variational quantities (the action, the Nehari
    functional, standing-wave classification); time stepping ignores it.
    """

    p: float
    omega: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.p) or self.p <= 2.0:
            raise DomainError(f"nonlinearity exponent must satisfy p > 2, got {self.p}")
        if not np.isfinite(self.omega):
            raise DomainError(f"omega must be finite, got {self.omega}")

    def require_positive_omega(self):
        if self.omega <= 0.0:
            raise DomainError(f"this operation needs omega > 0, got {self.omega}")


def zeros(grid: Grid2D) -> Field:
    return Field(grid, np.zeros(grid.shape, dtype=np.complex128))
