"""Forward and inverse transform, band-limited projection."""

import numpy as np
import pytest
from scipy.special import gammaincc

from dunkl_besov import (DomainError, SampledFunction, Spectrum, bandlimit_project, build_grid,
                         forward_transform, inverse_transform, lp_norm, spectral_tail_norm)
from dunkl_besov.transform import multiplier, spectral_filter, spectrum_from_json

ALPHAS = (-0.25, 0.0, 0.5, 1.5)


def gauss(g):
    return SampledFunction.from_callable(g, lambda x: np.exp(-x * x / 2), "even")


@pytest.mark.parametrize("a", ALPHAS)
def test_gaussian_fixed_point(grids, a):
    F = forward_transform(gauss(grids[a]))
    lam = F.freq_grid.nodes
    np.testing.assert_allclose(F.values, np.exp(-lam ** 2 / 2), atol=1e-14)


@pytest.mark.parametrize("a", ALPHAS)
def test_odd_gaussian(grids, a):
    # F(Lambda g) = i lam F g with Lambda exp(-x^2/2) = -x exp(-x^2/2)
    g = grids[a]
    f = SampledFunction.from_callable(g, lambda x: x * np.exp(-x * x / 2), "odd")
    F = forward_transform(f)
    lam = F.freq_grid.nodes
    np.testing.assert_allclose(F.values, -1j * lam * np.exp(-lam ** 2 / 2), atol=1e-13)


@pytest.mark.parametrize("a", ALPHAS)
def test_plancherel_and_inversion(grids, a):
    g = grids[a]
    f = SampledFunction.from_callable(g, lambda x: np.exp(-(x - 1.5) ** 2) * (2 + np.sin(x)), "none")
    F = forward_transform(f)
    assert lp_norm(F.as_function, 2) == pytest.approx(lp_norm(f, 2), rel=1e-12)
    back = inverse_transform(F, real=True)
    assert np.max(np.abs(back.values - f.values)) < 1e-9


def test_real_detection(grids):
    F = forward_transform(gauss(grids[0.0]))
    assert not np.iscomplexobj(inverse_transform(F).values)
    odd = SampledFunction.from_callable(grids[0.0], lambda x: x * np.exp(-x * x / 2), "odd")
    assert np.iscomplexobj(forward_transform(odd).values)


@pytest.mark.parametrize("a", [0.0, 1.5])
@pytest.mark.parametrize("x", [0.5, 1.0, 3.3])
def test_tail_norm_closed_form(grids, a, x):
    # int_{|lam|>x} exp(-lam^2) dmu = Gamma(a+1, x^2) / (2^(a+1) Gamma(a+1))
    exact = np.sqrt(gammaincc(a + 1, x * x) / 2 ** (a + 1))
    assert spectral_tail_norm(gauss(grids[a]), x) == pytest.approx(exact, rel=1e-12)


def test_tail_beyond_radius(grids):
    assert spectral_tail_norm(gauss(grids[0.0]), 25.0) == 0.0


@pytest.mark.parametrize("a", [-0.25, 0.5])
def test_projection_value_at_zero(grids, a):
    # P_x g(0) = int_{|lam|<x} exp(-lam^2/2) dmu = 1 - Gamma(a+1, x^2/2)/Gamma(a+1)
    from scipy.special import gammainc
    g = grids[a]
    P = bandlimit_project(gauss(g), 1.0)
    y0 = P.evaluate(np.array([0.0]))[0]
    assert y0 == pytest.approx(gammainc(a + 1, 0.5), rel=1e-10)


@pytest.mark.parametrize("a", [0.0, 1.5])
def test_projection_is_band_limited(grids, a):
    g = grids[a]
    f = SampledFunction.from_callable(g, lambda x: np.exp(-(x - 1) ** 2 / 2), "none")
    P = bandlimit_project(f, 8.0)
    Fp = forward_transform(P)
    lam = Fp.freq_grid.nodes
    inside = np.abs(lam) <= 8.0
    F = forward_transform(f)
    # spectrum of the projection equals F f inside and is negligible outside
    assert np.max(np.abs(Fp.values[inside] - F.values[inside])) < 1e-10
    assert np.max(np.abs(Fp.values[~inside])) < 1e-10


def test_projection_inequality(grids):
    # on [-R, R] the projection error never exceeds the spectral tail
    f = gauss(grids[0.0])
    for x in (0.5, 1.0, 2.0):
        d = lp_norm(f - bandlimit_project(f, x), 2)
        assert d <= spectral_tail_norm(f, x) + 1e-12


def test_projection_plancherel_when_cut_is_negligible(grids):
    f = gauss(grids[0.5])
    d = lp_norm(f - bandlimit_project(f, 8.0), 2)
    assert abs(d - spectral_tail_norm(f, 8.0)) < 1e-12


def test_filter_window(grids):
    # window exp(-lam^2/2) on [-x, x] with large x: F^-1(exp(-lam^2)) = 2^-(a+1) exp(-y^2/4)
    a = 0.5
    g = grids[a]
    f = gauss(g)
    h = spectral_filter(f, 16.0, lambda u: np.exp(-(16.0 * u) ** 2 / 2))
    np.testing.assert_allclose(h.values, 2 ** -(a + 1) * np.exp(-g.nodes ** 2 / 4), atol=1e-13)


def test_multiplier_modulus():
    lam = np.linspace(-10, 10, 41)
    assert np.all(np.abs(multiplier(0.5, lam, 1.7)) <= 1.0 + 1e-15)


def test_spectrum_band_limit_validation(grids):
    F = forward_transform(gauss(grids[0.0]))
    with pytest.raises(DomainError):
        Spectrum(F.freq_grid, F.values, 1.0)
    with pytest.raises(DomainError):
        Spectrum(F.freq_grid, F.values[:10])
    ok = Spectrum(F.freq_grid, np.where(np.abs(F.freq_grid.nodes) <= 2, F.values, 0), 2.0)
    assert ok.leakage(2.0) == 0.0


def test_alpha_mismatch(grids):
    with pytest.raises(DomainError):
        forward_transform(gauss(grids[0.0]), grids[0.5])


def test_bad_band(grids):
    with pytest.raises(DomainError):
        bandlimit_project(gauss(grids[0.0]), 0.0)
    with pytest.raises(DomainError):
        spectral_tail_norm(gauss(grids[0.0]), -1.0)


def test_spectrum_json(small_grids):
    F = forward_transform(gauss(small_grids[0.0]))
    G = spectrum_from_json(F.to_json())
    np.testing.assert_array_equal(G.values, F.values)


def test_frequency_grid_choice():
    g = build_grid(0.5, 20.0, 1024)
    fg = build_grid(0.5, 12.0, 512)
    F = forward_transform(gauss(g), fg)
    assert F.freq_grid is fg
    np.testing.assert_allclose(F.values, np.exp(-fg.nodes ** 2 / 2), atol=1e-14)
