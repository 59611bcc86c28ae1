"""Quadrature grids and sampled functions."""

import math

import numpy as np
import pytest
from scipy.special import gamma as G

from dunkl_besov import DomainError, SampledFunction, build_grid, integrate, lp_norm
from dunkl_besov.measure import detect_parity, function_from_csv, function_from_json, segment_rule


def moment(a, k, R):
    """int_{-R}^{R} x^(2k) dmu_a = 2 mn R^(2k+2a+2) / (2k+2a+2)."""
    mn = 1 / (2 ** (a + 1) * G(a + 1))
    return 2 * mn * R ** (2 * k + 2 * a + 2) / (2 * k + 2 * a + 2)


def test_construction(grids):
    g = grids[0.5]
    assert g.n == 2048
    np.testing.assert_array_equal(g.nodes, -g.nodes[::-1])
    assert not np.any(g.nodes == 0.0)
    assert g.nodes[0] >= -20.0 and g.nodes[-1] <= 20.0
    assert np.all(g.weights > 0)


@pytest.mark.parametrize("a", [-0.25, 0.0, 0.5, 1.5])
@pytest.mark.parametrize("k", [0, 1, 3])
def test_moments(grids, a, k):
    g = grids[a]
    f = SampledFunction.from_callable(g, lambda x: x ** (2 * k), "even")
    assert integrate(f) == pytest.approx(moment(a, k, 20.0), rel=1e-12)


@pytest.mark.parametrize("a", [-0.25, 0.0, 0.5, 1.5])
def test_gaussian_mass(grids, a):
    # int exp(-x^2/2) dmu_a = 2 mn 2^a Gamma(a+1) = 1
    f = SampledFunction.from_callable(grids[a], lambda x: np.exp(-x * x / 2))
    assert integrate(f) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("a", [-0.25, 1.5])
def test_odd_integrates_to_zero(grids, a):
    f = SampledFunction.from_callable(grids[a], lambda x: x * np.exp(-x * x / 2), "odd")
    assert abs(integrate(f)) <= 1e-12


@pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
def test_lp_norm_gaussian(grids, p):
    # ||exp(-x^2/2)||_p^p = int exp(-p x^2/2) dmu = p^-(a+1)
    a = 0.5
    f = SampledFunction.from_callable(grids[a], lambda x: np.exp(-x * x / 2))
    assert lp_norm(f, p) == pytest.approx(p ** (-(a + 1) / p), rel=1e-13)


def test_lp_norm_domain(grids):
    f = SampledFunction.from_callable(grids[0.0], np.cos)
    with pytest.raises(DomainError):
        lp_norm(f, 0.5)
    with pytest.raises(DomainError):
        lp_norm(f, math.inf)


def test_lp_norm_zero(grids):
    assert lp_norm(SampledFunction(grids[0.0], np.zeros(2048), "even"), 1) == 0.0


@pytest.mark.parametrize("bad", [(20.0, 15), (20.0, 2047), (20.0, 2 * 33), (-1.0, 64), (math.inf, 64)])
def test_build_grid_rejects(bad):
    with pytest.raises(DomainError):
        build_grid(0.0, *bad)


def test_parity_detection(grids):
    g = grids[0.0]
    assert detect_parity(np.cos(g.nodes)) == "even"
    assert detect_parity(np.sin(g.nodes)) == "odd"
    assert detect_parity(np.exp(-(g.nodes - 1) ** 2)) == "none"
    with pytest.raises(DomainError):
        SampledFunction(g, np.sin(g.nodes), "even")
    with pytest.raises(DomainError):
        SampledFunction(g, np.ones(10), "even")


def test_evaluate_interpolates(grids):
    g = grids[1.5]
    f = SampledFunction.from_callable(g, lambda x: np.exp(-(x - 1) ** 2 / 2), "none")
    pts = np.array([-7.3, -0.01, 0.0, 1e-7, 0.4, 3.14159, 19.9])
    np.testing.assert_allclose(f.evaluate(pts), np.exp(-(pts - 1) ** 2 / 2), atol=1e-13)
    assert f.evaluate(np.array([25.0, -25.0])).tolist() == [0.0, 0.0]
    np.testing.assert_allclose(f.evaluate(g.nodes[900:1100]), f.values[900:1100], rtol=1e-13, atol=1e-15)


def test_constant_extends(grids):
    g = grids[0.0]
    one = SampledFunction(g, np.full(g.n, 3.0), "even")
    assert one.evaluate(np.array([30.0]))[0] == 3.0


def test_derivative(grids):
    g = grids[-0.25]
    f = SampledFunction.from_callable(g, lambda x: np.exp(-(x - 1) ** 2 / 2), "none")
    d = f.derivative()
    np.testing.assert_allclose(d.values, -(g.nodes - 1) * f.values, atol=1e-11)
    e = SampledFunction.from_callable(g, lambda x: np.exp(-x * x / 2), "even").derivative()
    assert e.parity == "odd"


def test_algebra_requires_same_grid(grids):
    f = SampledFunction.from_callable(grids[0.0], np.cos)
    h = SampledFunction.from_callable(grids[0.5], np.cos)
    with pytest.raises(DomainError):
        f + h
    assert ((f * 2.0) - f).values.tolist() == f.values.tolist()


def test_reflect_and_parts(grids):
    g = grids[0.0]
    f = SampledFunction.from_callable(g, lambda x: np.exp(-(x - 1) ** 2))
    np.testing.assert_allclose((f.even_part() + f.odd_part()).values, f.values, atol=1e-16)
    np.testing.assert_array_equal(f.reflect().values, f.values[::-1])


def test_segment_rule(grids):
    g = grids[0.5]
    for lo, hi in ((0.0, 1.0), (0.3, 7.77), (2.5, 20.0), (0.0, 20.0)):
        x, w = segment_rule(g, lo, hi)
        m = w * x ** 2 / (2 ** 1.5 * G(1.5))
        exact = (hi ** 3 - lo ** 3) / 3 / (2 ** 1.5 * G(1.5))
        assert m.sum() == pytest.approx(exact, rel=1e-13)
    assert segment_rule(g, 3.0, 3.0)[0].size == 0


def test_json_csv_round_trip(tmp_path, small_grids):
    g = small_grids[0.5]
    f = SampledFunction.from_callable(g, lambda x: np.exp(-x * x / 2) * (1 + 0.5j * x))
    f2, meta = function_from_json(f.to_json())
    np.testing.assert_array_equal(f2.values, f.values)
    assert meta["alpha"] == 0.5
    path = tmp_path / "f.csv"
    f.to_csv(path)
    f3 = function_from_csv(path, alpha=0.5, radius=20.0)
    np.testing.assert_array_equal(f3.values, f.values)
    with pytest.raises(DomainError):
        function_from_csv(path)
