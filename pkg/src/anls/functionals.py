"""Conserved quantities, variational functionals, and scaling transforms.

All integrals use rectangle-rule quadrature, which is spectrally accurate for
smooth periodic integrands: integral ~ sum * hx * hy.  Norms of derivatives
are evaluated through the same spectral multipliers as the derivative
operators, so identities between functionals hold to rounding and not merely
to discretization.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryMassWarning, DomainError
from .grid import Field, ModelParams
from .spectral import dx, fft2, sample_scaled

__all__ = [
    "mass",
    "lp_norm_p",
    "energy",
    "j_omega",
    "i_omega",
    "q_functional",
    "k_functional",
    "transverse_virial",
    "virial_flux",
    "h12_norm",
    "boundary_mass_fraction",
    "FunctionalValues",
    "functional_values",
    "PohozaevRatios",
    "pohozaev_ratios",
    "gn_quotient",
    "scale_lambda",
    "scale_aniso",
    "scale_ylambda",
    "rescale_omega",
]


def _check(f: Field, op: str):
    if f.post_blowup or not np.all(np.isfinite(f.data.view(np.float64))):
        raise DomainError(f"{op}: field has non-finite entries")


def _kinetic_parts(f: Field) -> tuple[float, float]:
    """(||d_x f||_2^2, ||d_yy f||_2^2) in one transform, consistent with dx/dyy."""
    g = f.grid
    spec = np.abs(fft2(f.data)) ** 2
    w = g.cell_area / (g.nx * g.ny)
    X = float(np.sum((g.kx_d ** 2)[:, None] * spec) * w)
    Y = float(np.sum((g.ky2 ** 2)[None, :] * spec) * w)
    return X, Y


def mass(f: Field) -> float:
    """Squared L2 norm, integral of |f|^2."""
    _check(f, "mass")
    return float(np.sum(np.abs(f.data) ** 2) * f.grid.cell_area)


def lp_norm_p(f: Field, p: float) -> float:
    """Integral of |f|^p (the moduli go through hypot, safe against overflow)."""
    _check(f, "lp_norm_p")
    return float(np.sum(np.abs(f.data) ** p) * f.grid.cell_area)


def energy(f: Field, params: ModelParams) -> float:
    """E = 1/2 ||d_x f||^2 + 1/2 ||d_yy f||^2 - (1/p) ||f||_p^p (conserved)."""
    _check(f, "energy")
    X, Y = _kinetic_parts(f)
    return 0.5 * X + 0.5 * Y - lp_norm_p(f, params.p) / params.p


def j_omega(f: Field, params: ModelParams) -> float:
    """Action J = E + (omega/2) * mass; standing waves are its critical points."""
    return energy(f, params) + 0.5 * params.omega * mass(f)


def i_omega(f: Field, params: ModelParams) -> float:
    """Nehari functional I = ||d_x f||^2 + ||d_yy f||^2 + omega*||f||^2 - ||f||_p^p."""
    _check(f, "i_omega")
    X, Y = _kinetic_parts(f)
    return X + Y + params.omega * mass(f) - lp_norm_p(f, params.p)


def q_functional(f: Field, params: ModelParams) -> float:
    """Q = ||d_x f||^2 + ||d_yy f||^2 - (3(p-2)/4p) ||f||_p^p.

    Q(f) is the derivative at lambda = 1 of 2*E along the mass-preserving
    scaling family, and controls global existence versus blow-up.
    """
    _check(f, "q_functional")
    X, Y = _kinetic_parts(f)
    p = params.p
    return X + Y - (3.0 * (p - 2.0) / (4.0 * p)) * lp_norm_p(f, p)


def k_functional(f: Field, params: ModelParams) -> float:
    """K = 1/2 ||d_yy f||^2 - ((p-2)/8p) ||f||_p^p; vanishes on ground states."""
    _check(f, "k_functional")
    _, Y = _kinetic_parts(f)
    p = params.p
    return 0.5 * Y - ((p - 2.0) / (8.0 * p)) * lp_norm_p(f, p)


def boundary_mass_fraction(f: Field, width: int = 1, axis: int | None = None) -> float:
    """Fraction of the total mass in the outermost cells.

    axis=0 restricts to the two x-edge slabs, axis=1 to the y edges, None uses
    the full one-cell frame.  Returns 0 for the zero field.
    """
    _check(f, "boundary_mass_fraction")
    dens = np.abs(f.data) ** 2
    total = float(dens.sum())
    if total == 0.0:
        return 0.0
    w = int(width)
    sel = np.zeros(f.grid.shape, dtype=bool)
    if axis in (None, 0):
        sel[:w, :] = True
        sel[-w:, :] = True
    if axis in (None, 1):
        sel[:, :w] = True
        sel[:, -w:] = True
    return float(dens[sel].sum() / total)


def transverse_virial(f: Field, check_boundary: bool = True) -> float:
    """V = integral of x^2 |f|^2, x measured from the box center.

    The weight is large precisely where the periodic box truncates the field,
    so a boundary mass fraction above 1e-8 along x triggers a
    BoundaryMassWarning (the value is still returned).
    """
    _check(f, "transverse_virial")
    if check_boundary and boundary_mass_fraction(f, axis=0) > 1e-8:
        warnings.warn(
            "transverse_virial: boundary mass fraction along x exceeds 1e-8; "
            "the quadratic weight makes this value untrustworthy",
            BoundaryMassWarning,
            stacklevel=2,
        )
    return float(np.sum((f.grid.X ** 2) * np.abs(f.data) ** 2) * f.grid.cell_area)


def virial_flux(f: Field) -> float:
    """dV/dt along the flow: 4 * Im integral of x * (d_x f) * conj(f)."""
    _check(f, "virial_flux")
    dxf = dx(f).data
    return float(4.0 * np.sum((f.grid.X * dxf * np.conj(f.data)).imag) * f.grid.cell_area)


def h12_norm(f: Field, form: str = "sum") -> float:
    """Anisotropic Sobolev norm ||d_x f|| + ||d_yy f|| + ||f||.

    form="sum" is the triangle-inequality form used throughout the tests;
    form="rss" gives the equivalent Hilbertian root-sum-of-squares.
    """
    _check(f, "h12_norm")
    X, Y = _kinetic_parts(f)
    M = mass(f)
    if form == "sum":
        return float(np.sqrt(X) + np.sqrt(Y) + np.sqrt(M))
    if form == "rss":
        return float(np.sqrt(X + Y + M))
    raise DomainError(f"unknown h12_norm form {form!r}")


@dataclass(frozen=True)
class FunctionalValues:
    mass: float
    energy: float
    j_omega: float
    i_omega: float
    q: float
    k: float
    virial: float
    h12_norm: float


def functional_values(f: Field, params: ModelParams, check_boundary: bool = False) -> FunctionalValues:
    """All scalar diagnostics of a state in one pass (zero field maps to all zeros)."""
    _check(f, "functional_values")
    X, Y = _kinetic_parts(f)
    M = mass(f)
    P = lp_norm_p(f, params.p)
    p = params.p
    E = 0.5 * X + 0.5 * Y - P / p
    return FunctionalValues(
        mass=M,
        energy=E,
        j_omega=E + 0.5 * params.omega * M,
        i_omega=X + Y + params.omega * M - P,
        q=X + Y - (3.0 * (p - 2.0) / (4.0 * p)) * P,
        k=0.5 * Y - ((p - 2.0) / (8.0 * p)) * P,
        virial=transverse_virial(f, check_boundary=check_boundary),
        h12_norm=float(np.sqrt(X) + np.sqrt(Y) + np.sqrt(M)),
    )


@dataclass(frozen=True)
class PohozaevRatios:
    """Normalized residuals of the three ground-state balance identities.

    r1: ||d_x u||^2 + ||d_yy u||^2 = (3(p-2)/4p) ||u||_p^p
    r2: omega ||u||_2^2            = ((p+6)/4p)  ||u||_p^p
    r3: ||d_x u||^2                = 2 ||d_yy u||^2
    each divided by ||u||_p^p.  All vanish on exact solutions.
    """

    r1: float
    r2: float
    r3: float

    def max_abs(self) -> float:
        return max(abs(self.r1), abs(self.r2), abs(self.r3))


def pohozaev_ratios(f: Field, params: ModelParams) -> PohozaevRatios:
    _check(f, "pohozaev_ratios")
    X, Y = _kinetic_parts(f)
    P = lp_norm_p(f, params.p)
    if P == 0.0:
        raise DomainError("pohozaev_ratios: zero field, ratios undefined")
    p = params.p
    r1 = (X + Y - (3.0 * (p - 2.0) / (4.0 * p)) * P) / P
    r2 = (params.omega * mass(f) - ((p + 6.0) / (4.0 * p)) * P) / P
    r3 = (X - 2.0 * Y) / P
    return PohozaevRatios(r1=r1, r2=r2, r3=r3)


def gn_quotient(f: Field, p: float) -> float:
    """Anisotropic Gagliardo-Nirenberg quotient

        ||f||_p^p / (||d_x f||^{(p-2)/2} ||d_yy f||^{(p-2)/4} ||f||_2^{(p+6)/4}),

    invariant under the three-parameter scaling mu * f(l1 x, l2 y).
    """
    if p <= 2.0:
        raise DomainError(f"gn_quotient needs p > 2, got {p}")
    _check(f, "gn_quotient")
    X, Y = _kinetic_parts(f)
    M = mass(f)
    if X == 0.0 or Y == 0.0 or M == 0.0:
        raise DomainError("gn_quotient undefined: a norm in the denominator vanishes")
    P = lp_norm_p(f, p)
    return float(P / (X ** ((p - 2.0) / 4.0) * Y ** ((p - 2.0) / 8.0) * M ** ((p + 6.0) / 8.0)))


def _positive_finite(name: str, *vals: float):
    for v in vals:
        if not np.isfinite(v) or v <= 0.0:
            raise DomainError(f"{name}: scale factors must be positive and finite, got {v}")


def scale_lambda(f: Field, lam: float, support_tol: float = 1e-12) -> Field:
    """Mass-preserving anisotropic scaling lam^{3/8} f(lam^{1/2} x, lam^{1/4} y).

    Both kinetic terms scale by lam and ||.||_p^p by lam^{3(p-2)/8}.  The
    result is resampled onto f's own grid through the band-limited
    interpolant; scalings that would wrap non-negligible mass around the box
    raise SupportOverflowError.
    """
    _positive_finite("scale_lambda", lam)
    if lam == 1.0:
        return f.copy()
    vals = sample_scaled(f, lam ** 0.5, lam ** 0.25, support_tol)
    return Field(f.grid, (lam ** 0.375) * vals)


def scale_aniso(f: Field, mu: float, lam1: float, lam2: float,
                support_tol: float = 1e-12) -> Field:
    """General scaling mu * f(lam1 x, lam2 y).

    Norm laws: ||d_x .|| scales by mu lam1^{1/2} lam2^{-1/2}, ||d_yy .|| by
    mu lam1^{-1/2} lam2^{3/2}, ||.||_2 by mu lam1^{-1/2} lam2^{-1/2}, and
    ||.||_p by mu lam1^{-1/p} lam2^{-1/p}.
    """
    _positive_finite("scale_aniso", mu, lam1, lam2)
    if lam1 == 1.0 and lam2 == 1.0:
        return Field(f.grid, mu * f.data)
    return Field(f.grid, mu * sample_scaled(f, lam1, lam2, support_tol))


def scale_ylambda(f: Field, lam: float, support_tol: float = 1e-12) -> Field:
    """Transverse-only scaling lam^{1/2} f(x, lam y), mass preserving."""
    _positive_finite("scale_ylambda", lam)
    if lam == 1.0:
        return f.copy()
    return Field(f.grid, (lam ** 0.5) * sample_scaled(f, 1.0, lam, support_tol))


def rescale_omega(f: Field, params: ModelParams, new_omega: float,
                  support_tol: float = 1e-12) -> tuple[Field, ModelParams]:
    """Map a standing-wave profile at params.omega to one at new_omega.

    If u solves the profile equation with omega, then
    r^{1/(p-2)} u(r^{1/2} x, r^{1/4} y) with r = new_omega/omega solves it with
    new_omega.  Mass transforms as r^{(14-3p)/(4(p-2))}.
    """
    params.require_positive_omega()
    if not np.isfinite(new_omega) or new_omega <= 0.0:
        raise DomainError(f"rescale_omega: target omega must be positive, got {new_omega}")
    r = new_omega / params.omega
    out = scale_aniso(f, r ** (1.0 / (params.p - 2.0)), r ** 0.5, r ** 0.25, support_tol)
    return out, ModelParams(p=params.p, omega=new_omega)
