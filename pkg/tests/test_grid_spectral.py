"""Grid layout, transforms, and band-limited resampling."""

import numpy as np
import pytest

from anls import Field, Grid2D
from anls.errors import DomainError, SupportOverflowError
from anls.fields import gaussian
from anls.spectral import (
    dispersion_symbol,
    dx,
    dyy,
    linear_propagate,
    sample_scaled,
)


def test_grid_geometry():
    g = Grid2D(128, 256, 40.0, 80.0)
    assert g.shape == (128, 256)
    assert g.hx == 40.0 / 128
    assert g.hy == 80.0 / 256
    assert g.cell_area == pytest.approx(g.hx * g.hy)
    # half-open box [-L/2, L/2)
    assert g.x[0] == -20.0
    assert g.x[-1] == pytest.approx(20.0 - g.hx)
    assert g.y[0] == -40.0


def test_grid_rejects_non_power_of_two():
    with pytest.raises(DomainError):
        Grid2D(100, 128, 40.0, 40.0)
    with pytest.raises(DomainError):
        Grid2D(128, 96, 40.0, 40.0)


def test_grid_rejects_bad_box():
    with pytest.raises(DomainError):
        Grid2D(128, 128, -1.0, 40.0)


def test_dispersion_symbol_layout():
    g = Grid2D(64, 64, 20.0, 20.0)
    sym = dispersion_symbol(g)
    assert sym[0, 0] == 0.0
    kx1 = 2.0 * np.pi / 20.0
    assert sym[1, 0] == pytest.approx(kx1 ** 2, rel=1e-14)
    assert sym[0, 1] == pytest.approx(kx1 ** 4, rel=1e-14)
    assert np.all(sym >= 0.0)


def test_derivatives_on_plane_wave():
    g = Grid2D(64, 64, 20.0, 20.0)
    kx = 2.0 * np.pi / 20.0 * 3
    ky = 2.0 * np.pi / 20.0 * 2
    f = Field(g, np.exp(1j * (kx * g.X + ky * g.Y)))
    np.testing.assert_allclose(dx(f).data, 1j * kx * f.data, atol=1e-12)
    np.testing.assert_allclose(dyy(f).data, -(ky ** 2) * f.data, atol=1e-11)


def test_dx_kills_nyquist():
    # the unpaired Nyquist column has no well-defined odd derivative
    g = Grid2D(32, 32, 10.0, 10.0)
    f = Field(g, np.cos(np.pi / g.hx * g.X).astype(np.complex128))
    assert np.abs(dx(f).data).max() < 1e-12


def test_linear_propagate_is_unitary():
    g = Grid2D(64, 64, 20.0, 20.0)
    rng = np.random.default_rng(3)
    f = Field(g, np.exp(-g.X ** 2 - g.Y ** 2) * (1 + 0.3j * rng.standard_normal(g.shape)))
    m0 = np.linalg.norm(f.data)
    out = linear_propagate(f, 0.37)
    assert np.linalg.norm(out.data) == pytest.approx(m0, rel=1e-13)


def test_linear_propagate_exact_on_single_mode():
    g = Grid2D(64, 64, 20.0, 20.0)
    kx = 2.0 * np.pi / 20.0 * 2
    ky = 2.0 * np.pi / 20.0 * 5
    f = Field(g, np.exp(1j * (kx * g.X + ky * g.Y)))
    t = 0.21
    out = linear_propagate(f, t)
    expect = f.data * np.exp(-1j * t * (kx ** 2 + ky ** 4))
    np.testing.assert_allclose(out.data, expect, atol=1e-12)


def test_linear_propagate_t0_copies():
    g = Grid2D(32, 32, 10.0, 10.0)
    f = gaussian(g)
    out = linear_propagate(f, 0.0)
    assert out.data is not f.data
    np.testing.assert_array_equal(out.data, f.data)


def test_linear_propagate_group_property():
    g = Grid2D(64, 64, 20.0, 20.0)
    f = gaussian(g, amplitude=0.7)
    one = linear_propagate(f, 0.5)
    two = linear_propagate(linear_propagate(f, 0.2), 0.3)
    np.testing.assert_allclose(one.data, two.data, atol=1e-13)


def test_sample_scaled_identity():
    g = Grid2D(64, 64, 20.0, 20.0)
    f = gaussian(g)
    vals = sample_scaled(f, 1.0, 1.0)
    np.testing.assert_allclose(vals, f.data, atol=1e-12)


def test_sample_scaled_matches_closed_form():
    g = Grid2D(128, 128, 30.0, 30.0)
    f = gaussian(g)  # exp(-x^2 - y^2)
    vals = sample_scaled(f, 1.3, 0.8)
    expect = np.exp(-(1.3 * g.X) ** 2 - (0.8 * g.Y) ** 2)
    np.testing.assert_allclose(vals.real, expect, atol=1e-10)
    assert np.abs(vals.imag).max() < 1e-12


def test_sample_scaled_support_overflow():
    # a field whose tail still carries 1e-3 of the peak at the box edge
    g = Grid2D(64, 64, 20.0, 20.0)
    f = Field(g, np.exp(-(g.X ** 2 + g.Y ** 2) / 60.0).astype(np.complex128))
    with pytest.raises(SupportOverflowError):
        sample_scaled(f, 1.5, 1.0)


def test_sample_scaled_rejects_bad_factors():
    g = Grid2D(32, 32, 10.0, 10.0)
    f = gaussian(g)
    with pytest.raises(DomainError):
        sample_scaled(f, -1.0, 1.0)
    with pytest.raises(DomainError):
        sample_scaled(f, np.inf, 1.0)
