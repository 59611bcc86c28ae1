"""Besov-Dunkl seminorms, the scale integrals and the equivalence report."""

import io
import json
import math

import numpy as np
import pytest

from dunkl_besov import (BesovParams, DomainError, SampledFunction, ScaleSet, besov_e_seminorm,
                         besov_k_seminorm, besov_w_seminorm, equivalence_report, smoothness_profile)
from dunkl_besov.besov import _bd_like, _ed_like, log_integral


def test_params_validation():
    with pytest.raises(DomainError):
        BesovParams(0.5, 2, 0.5, 0.0)
    with pytest.raises(DomainError):
        BesovParams(math.inf, 2, 0.5, 0.0)
    with pytest.raises(DomainError):
        BesovParams(2, 0.5, 0.5, 0.0)
    with pytest.raises(DomainError):
        BesovParams(2, 2, 0.0, 0.0)
    with pytest.raises(DomainError):
        BesovParams(2, 2, 0.5, -0.5)
    p = BesovParams(2, math.inf, 0.5, 0.5)
    assert p.as_dict() == {"p": 2.0, "q": "inf", "beta": 0.5, "alpha": 0.5}


def test_log_integral_power_law():
    xs = np.geomspace(1.0, 2.0, 801)
    assert log_integral(xs, xs ** 2) == pytest.approx(1.5, rel=1e-6)


def test_small_scale_integral_with_tails():
    # v(x) = min(x, 1)^2: int_0^inf (v / x^b)^q dx/x = 1/((2-b)q) + 1/(bq)
    xs = np.geomspace(1e-2, 1e2, 401)
    v = np.minimum(xs, 1.0) ** 2
    prm = BesovParams(2, 2, 0.5, 0.0)
    val, meta = _bd_like(xs, v, prm)
    assert val == pytest.approx(math.sqrt(1 / 3 + 1), rel=1e-3)
    assert meta["branch"] == "integral"
    assert meta["lower_tail"] > 0 and meta["upper_tail"] > 0


def test_divergent_tail_flagged():
    xs = np.geomspace(1e-2, 1.0, 50)
    _, meta = _bd_like(xs, xs ** 0.25, BesovParams(2, 2, 0.5, 0.0))
    assert meta.get("lower_tail_divergent")


def test_large_scale_integral():
    # E(x) = x^-2: int_1^inf (x^b x^-2)^q dx/x = 1/((2-b)q)
    xs = np.geomspace(1.0, 64.0, 401)
    val, meta = _ed_like(xs, xs ** -2.0, BesovParams(2, 2, 0.5, 0.0))
    assert val == pytest.approx(math.sqrt(1 / 3), rel=1e-3)


def test_sup_branch():
    xs = np.geomspace(1e-2, 1e2, 401)
    v = np.minimum(xs, 1.0) ** 2
    val, meta = _bd_like(xs, v, BesovParams(2, math.inf, 0.5, 0.0))
    assert meta["branch"] == "sup"
    assert val == pytest.approx(1.0) and meta["argmax"] == pytest.approx(1.0)
    xs = np.geomspace(1.0, 64.0, 13)
    val, meta = _ed_like(xs, xs ** -1.0, BesovParams(2, math.inf, 0.5, 0.0))
    assert val == pytest.approx(1.0) and meta["argmax"] == pytest.approx(1.0)


SCALES = ScaleSet.log_spaced(2.0 ** -5, 4.0, 9, 8)
E_SCALES = ScaleSet.log_spaced(1.0, 32.0, 6)


@pytest.fixture(scope="module")
def gauss_profile(small_grids):
    f = SampledFunction.from_callable(small_grids[0.5], lambda x: np.exp(-x * x / 2), "even")
    return f, smoothness_profile(f, (1.0, 2.0), SCALES, E_SCALES)


def test_seminorm_functions_agree_with_report(gauss_profile):
    f, prof = gauss_profile
    for p in (1.0, 2.0):
        prm = BesovParams(p, 2, 0.5, 0.5)
        rep = equivalence_report(f, prm, SCALES, E_SCALES, profile=prof)
        assert rep.bd_seminorm == besov_w_seminorm(f, prm, profile=prof)
        assert rep.kd_seminorm == besov_k_seminorm(f, prm, profile=prof)
        assert rep.ed_seminorm == besov_e_seminorm(f, prm, profile=prof)
        assert all(math.isfinite(v) and v > 0 for v in (rep.bd_seminorm, rep.kd_seminorm, rep.ed_seminorm))
        assert rep.flags["theorem1"]["pass"]
        assert rep.flags["e_exact"] == (p == 2.0)


def test_q_inf_seminorm(gauss_profile):
    f, prof = gauss_profile
    rep = equivalence_report(f, BesovParams(2, math.inf, 0.5, 0.5), SCALES, E_SCALES, profile=prof)
    assert rep.quadrature_meta["bd"]["branch"] == "sup"
    assert rep.flags["theorem3"]["applicable"] is False
    assert "q < inf" in rep.flags["theorem3"]["reason"]


def test_theorem3_requires_beta_below_one(gauss_profile):
    f, prof = gauss_profile
    rep = equivalence_report(f, BesovParams(2, 2, 1.25, 0.5), SCALES, E_SCALES, profile=prof)
    assert rep.flags["theorem3"] == {"applicable": False, "reason": "requires 0 < beta < 1"}
    rep = equivalence_report(f, BesovParams(2, 2, 0.5, 0.5), SCALES, E_SCALES, profile=prof)
    assert rep.flags["theorem3"]["applicable"] and rep.flags["theorem3"]["pass"]


def test_degenerate_constant(small_grids):
    g = small_grids[0.0]
    one = SampledFunction(g, np.ones(g.n), "even")
    rep = equivalence_report(one, BesovParams(2, 2, 0.5, 0.0), SCALES, E_SCALES)
    assert rep.flags["degenerate"]
    assert rep.bd_seminorm == rep.kd_seminorm == rep.ed_seminorm == 0.0
    assert rep.flags["theorem1"] == "degenerate"


def test_report_serialization(gauss_profile):
    f, prof = gauss_profile
    rep = equivalence_report(f, BesovParams(2, 2, 0.5, 0.5), SCALES, E_SCALES, profile=prof)
    d = json.loads(rep.to_json())
    assert set(d) == {"params", "per_scale", "seminorms", "ratios", "flags", "quadrature_meta"}
    buf = io.StringIO()
    rep.per_scale_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,w,k,e"
    assert len(lines) == 1 + len(rep.per_scale)


def test_alpha_mismatch(small_grids):
    f = SampledFunction.from_callable(small_grids[0.0], lambda x: np.exp(-x * x / 2), "even")
    with pytest.raises(DomainError):
        equivalence_report(f, BesovParams(2, 2, 0.5, 0.5))
