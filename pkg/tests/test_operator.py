"""Dunkl operator, Theta weight, Taylor identity and the K decomposition."""

import math

import mpmath as mp
import numpy as np
import pytest

from dunkl_besov import (DomainError, SampledFunction, apply_dunkl_operator, k_decomposition,
                         taylor_remainder, theta_weight, translate_angular)
from dunkl_besov import k_functional_estimate
from dunkl_besov.operator import (constant_taylor_factor, taylor_remainder_check,
                                  theta_average, theta_integral, theta_integral_exact)

ALPHAS = (-0.25, 0.0, 0.5, 1.5)


def gauss(g):
    return SampledFunction.from_callable(g, lambda x: np.exp(-x * x / 2), "even")


@pytest.mark.parametrize("a", ALPHAS)
def test_dunkl_operator_on_gaussians(grids, a):
    g = grids[a]
    x = g.nodes
    e = np.exp(-x * x / 2)
    # Lambda e = -x e and Lambda(x e) = (2a + 2 - x^2) e
    np.testing.assert_allclose(apply_dunkl_operator(gauss(g)).values, -x * e, atol=1e-9)
    odd = SampledFunction(g, x * e, "odd")
    np.testing.assert_allclose(apply_dunkl_operator(odd).values, (2 * a + 2 - x * x) * e, atol=1e-10)


def test_dunkl_operator_parity_and_constants(grids):
    g = grids[0.5]
    assert apply_dunkl_operator(gauss(g)).parity == "odd"
    one = SampledFunction(g, np.ones(g.n), "even")
    assert apply_dunkl_operator(one).sup_norm() < 1e-10


def test_dunkl_operator_no_parity(grids):
    a = 0.5
    g = grids[a]
    x = g.nodes
    e = np.exp(-(x - 1) ** 2 / 2)
    f = SampledFunction(g, e, "none")
    # f' + (2a+1)/x * (f(x) - f(-x))/2 written out
    ref = -(x - 1) * e + (2 * a + 1) / x * (e - np.exp(-(x + 1) ** 2 / 2)) / 2
    np.testing.assert_allclose(apply_dunkl_operator(f).values, ref, atol=1e-10)


@pytest.mark.parametrize("a", [-0.25, 0.0, 0.5, 1.5])
@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
def test_theta_mass(a, x):
    # mpmath quadrature of Theta(x, z) |z|^(2a+1) over [-x, x]
    with mp.workdps(30):
        mn = 1 / (2 ** (mp.mpf(a) + 1) * mp.gamma(mp.mpf(a) + 1))
        e = 2 * mp.mpf(a) + 1

        def dens(z):
            th = 1 / (2 * mp.mpf(x) ** e) + mp.sign(z) / (2 * abs(z) ** e)
            return th * abs(z) ** e

        ref = float(mn * mp.quad(dens, [-x, 0, x]))
    assert theta_integral_exact(a, x) == pytest.approx(ref, rel=1e-13)
    assert theta_integral(a, x) == pytest.approx(ref, rel=1e-12)


def test_theta_weight_domain():
    assert theta_weight(0.5, 1.0, 1.0) == pytest.approx(1.0)
    assert theta_weight(0.5, 1.0, -1.0) == pytest.approx(0.0)
    with pytest.raises(DomainError):
        theta_weight(0.5, 1.0, 0.0)
    with pytest.raises(DomainError):
        theta_weight(0.5, 1.0, 1.5)
    with pytest.raises(DomainError):
        theta_weight(0.5, -1.0, 0.5)


@pytest.mark.parametrize("a", ALPHAS)
@pytest.mark.parametrize("x", [0.25, 1.0, 2.0])
def test_taylor_identity(grids, a, x):
    g = grids[a]
    f = SampledFunction.from_callable(g, lambda t: np.exp(-(t - 0.5) ** 2 / 2), "none")
    lhs, rhs = taylor_remainder(f, x)
    scale = 1 + apply_dunkl_operator(f).sup_norm()
    assert np.max(np.abs(lhs.values - rhs.values)) <= 1e-9 * scale
    assert taylor_remainder_check(f, x) <= 1e-9 * scale


@pytest.mark.parametrize("a", [-0.25, 1.5])
def test_k_decomposition(grids, a):
    g = grids[a]
    f = SampledFunction.from_callable(g, lambda t: np.exp(-(t - 0.5) ** 2 / 2), "none")
    for x in (0.5, 1.0):
        dec = k_decomposition(f, x, 2.0)
        np.testing.assert_allclose((dec.f0 + dec.f1_scaled).values, f.values, atol=1e-15)
        lam = apply_dunkl_operator(dec.f1_scaled).values
        assert np.max(np.abs(lam - dec.lambda_f1_scaled.values)) < 1e-6
        tx = translate_angular(f, x)
        np.testing.assert_allclose(dec.lambda_f1_scaled.values,
                                   constant_taylor_factor(a) * (tx - f).values / x, atol=1e-15)
        assert dec.k_value > 0


def test_k_estimate_symmetric_under_reflection(grids):
    g = grids[0.5]
    f = SampledFunction.from_callable(g, lambda t: np.exp(-(t - 1.0) ** 2 / 2), "none")
    for p in (1.0, 2.0):
        assert k_functional_estimate(f, 0.5, p) == pytest.approx(
            k_functional_estimate(f.reflect(), 0.5, p), rel=1e-12)


def test_k_decomposition_domain(grids):
    f = gauss(grids[0.0])
    with pytest.raises(DomainError):
        k_decomposition(f, 0.0)
    with pytest.raises(DomainError):
        k_decomposition(f, 1.0, 0.5)
    with pytest.raises(DomainError):
        theta_average(f, -1.0)


def test_taylor_factor():
    assert constant_taylor_factor(0.5) == 3.0
    assert constant_taylor_factor(0.0) == 2.0
    assert math.isclose(theta_integral_exact(0.0, 1.0), 0.25)
