"""Bessel functions and the kernel against mpmath and closed forms."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dunkl_besov import DomainError, as_alpha, bessel_j_normalized, dunkl_kernel, gamma
from dunkl_besov.special import SERIES_SWITCH, bessel_j_large, bessel_j_series, kernel_blocks

mp.mp.dps = 30


def j_ref(a, z):
    """Gamma(a+1) (2/z)^a J_a(z) in 30-digit arithmetic."""
    if z == 0:
        return 1.0
    z = mp.mpf(z)
    return float(mp.gamma(a + 1) * (2 / z) ** a * mp.besselj(a, z))


@pytest.mark.parametrize("a", [-0.45, -0.25, 0.0, 0.5, 1.5, 3.0])
@pytest.mark.parametrize("z", [0.0, 1e-8, 0.3, 2.0, 7.9, 8.1, 15.0, 60.0, 400.0])
def test_j_normalized_matches_mpmath(a, z):
    ref = j_ref(a, z)
    # near zeros of j the relative error is meaningless; scale by the envelope
    env = max(abs(ref), (1.0 + z) ** (-a - 0.5))
    assert abs(bessel_j_normalized(a, z) - ref) <= 1e-12 * env


def test_j_even_and_vectorized():
    w = np.linspace(0.05, 30, 50)
    z = np.concatenate([-w[::-1], w])
    v = bessel_j_normalized(0.5, z)
    assert v.shape == z.shape
    np.testing.assert_array_equal(v, v[::-1])
    # j_{1/2}(z) = sin z / z
    np.testing.assert_allclose(v, np.sinc(z / np.pi), atol=1e-14)


def test_j_minus_half_is_cosine():
    z = np.linspace(0, 40, 81)
    np.testing.assert_allclose(bessel_j_normalized(-0.5, z), np.cos(z), atol=1e-13)


@pytest.mark.parametrize("a", [-0.25, 0.0, 0.5, 1.5, 2.5])
def test_regimes_agree_at_switch(a):
    for z in (SERIES_SWITCH, 0.9 * SERIES_SWITCH):
        s, l = bessel_j_series(a, z), bessel_j_large(a, z)
        assert abs(s - l) <= 1e-12 * max(abs(l), 1e-3)


def test_constants():
    a = as_alpha(0.5)
    # mu_alpha density constant and int_0^pi sin^(2a) = c_alpha
    assert a.measure_norm == pytest.approx(1 / (2 ** 1.5 * math.gamma(1.5)), rel=1e-15)
    assert a.c_alpha == pytest.approx(float(mp.quad(lambda t: mp.sin(t) ** 1, [0, mp.pi])), rel=1e-14)
    assert a.besov_taylor_constant == pytest.approx(2 ** 2.5 * math.gamma(2.5), rel=1e-15)
    assert gamma(5.0) == 24.0


@pytest.mark.parametrize("bad", [-0.5, -0.6, -3.0, float("nan"), float("inf")])
def test_alpha_domain(bad):
    with pytest.raises(DomainError):
        as_alpha(bad)


def test_gamma_domain():
    with pytest.raises(DomainError):
        gamma(0.0)


def test_kernel_closed_form_half():
    # alpha = 1/2: E(-ixy) = sin z / z - i (sin z - z cos z) / z^2 at z = xy
    z = np.array([0.3, 1.0, 4.0, 11.0])
    e = dunkl_kernel(0.5, z, 1.0)
    np.testing.assert_allclose(e.real, np.sin(z) / z, atol=1e-14)
    np.testing.assert_allclose(-e.imag, (np.sin(z) - z * np.cos(z)) / z ** 2, atol=1e-14)


def test_kernel_symmetric_in_xy():
    rng = np.random.default_rng(7)
    x, y = rng.uniform(-20, 20, (2, 500))
    for a in (-0.25, 0.0, 1.5):
        np.testing.assert_array_equal(dunkl_kernel(a, x, y), dunkl_kernel(a, y, x))


def test_kernel_at_zero_is_one():
    assert dunkl_kernel(0.3, 0.0, 5.0) == 1.0


@settings(max_examples=300, deadline=None)
@given(a=st.floats(-0.49, 4.0), x=st.floats(-50, 50), y=st.floats(-50, 50))
def test_kernel_modulus_bounded(a, x, y):
    assert abs(dunkl_kernel(a, x, y)) <= 1.0 + 1e-12


def test_kernel_blocks_match_kernel():
    lam = np.linspace(0, 10, 7)
    x = np.linspace(0, 5, 9)
    c, s = kernel_blocks(0.5, lam, x)
    e = dunkl_kernel(0.5, lam[:, None], x[None, :])
    np.testing.assert_allclose(c - 1j * s, e, atol=1e-15)


def test_kernel_eigenfunction():
    # Lambda_a E(i lam .) = i lam E(i lam .) via finite differences at one point
    a, lam, x, h = 0.7, 1.3, 0.9, 1e-5
    E = lambda t: np.conj(dunkl_kernel(a, lam, t))
    d = (E(x + h) - E(x - h)) / (2 * h)
    lhs = d + (2 * a + 1) / x * (E(x) - E(-x)) / 2
    assert abs(lhs - 1j * lam * E(x)) < 1e-8
