"""Besov-Dunkl seminorms from w, the K surrogate and best approximation.

Seminorms are reported as q-th roots of the weighted integrals, so they are
absolutely homogeneous.  The integrals over (0, inf) and (1, inf) are
truncated to the scale ranges and evaluated by the trapezoid rule in log x.
The parts outside the scale ranges are estimated by extending the end
behaviour as a power law x^gamma (gamma read off the two outermost scales)
whenever that extension is integrable; the raw truncated values and tails
are kept in ``quadrature_meta``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .measure import SampledFunction, lp_norm
from .smoothness import (ScaleSet, TranslationFamily, best_approx, k_profile,
                         modulus_profile)
from .special import AlphaParameter, as_alpha
from .transform import forward_transform

BD_RANGE = (2.0 ** -6, 2.0 ** 4, 17)
ED_RANGE = (1.0, 2.0 ** 6, 13)
DEGENERATE_RTOL = 1e-10


@dataclass(frozen=True)
class BesovParams:
    p: float
    q: float
    beta: float
    alpha: AlphaParameter

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        p, q, b = float(self.p), float(self.q), float(self.beta)
        if not (1.0 <= p < math.inf):
            raise DomainError(f"p must satisfy 1 <= p < inf, got {p}")
        if not q >= 1.0:
            raise DomainError(f"q must satisfy q >= 1, got {q}")
        if not (b > 0 and math.isfinite(b)):
            raise DomainError(f"beta must be positive, got {b}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "beta", b)

    def as_dict(self) -> dict:
        return {"p": self.p, "q": "inf" if math.isinf(self.q) else self.q,
                "beta": self.beta, "alpha": self.alpha.alpha}


def default_bd_scales(m: int = 16) -> ScaleSet:
    lo, hi, n = BD_RANGE
    return ScaleSet.log_spaced(lo, hi, n, m)


def default_ed_scales() -> ScaleSet:
    lo, hi, n = ED_RANGE
    return ScaleSet.log_spaced(lo, hi, n)


@dataclass
class SmoothnessProfile:
    """w, k and E of one function, tabulated once and reused for every (q, beta)."""

    bd_scales: np.ndarray
    ed_scales: np.ndarray
    norm: dict
    w: dict
    k: dict
    e_bd: dict
    e_ed: dict
    e_exact: dict


def smoothness_profile(f: SampledFunction, ps=(2.0,), bd_scales: ScaleSet | None = None,
                       ed_scales: ScaleSet | None = None,
                       family: TranslationFamily | None = None) -> SmoothnessProfile:
    bd = bd_scales or default_bd_scales()
    ed = ed_scales or default_ed_scales()
    fam = family or TranslationFamily(f)
    ps = tuple(float(p) for p in ps)
    spec = forward_transform(f)
    w = {p: modulus_profile(f, bd, p, fam) for p in ps}
    k = k_profile(f, bd, ps, fam)
    e_bd = {p: np.array([best_approx(f, x, p, spec) for x in bd.scales]) for p in ps}
    e_ed = {p: np.array([best_approx(f, x, p, spec) for x in ed.scales]) for p in ps}
    if f.constant_value is not None:
        # constants are band-limited to {0}
        e_bd = {p: np.zeros(len(bd)) for p in ps}
        e_ed = {p: np.zeros(len(ed)) for p in ps}
    return SmoothnessProfile(np.array(bd.scales), np.array(ed.scales),
                             {p: lp_norm(f, p) for p in ps}, w, k, e_bd, e_ed,
                             {p: p == 2.0 for p in ps})


def _slope(x0, x1, v0, v1):
    if v0 <= 0 or v1 <= 0:
        return None
    return math.log(v1 / v0) / math.log(x1 / x0)


def log_integral(xs: np.ndarray, g: np.ndarray) -> float:
    """Trapezoid rule for int g(x) dx/x on the nodes xs."""
    return float(np.trapezoid(g, np.log(xs)))


def _small_scale_integral(xs, vals, beta, q):
    """int_0^inf (v(x) / x^beta)^q dx/x with power-law tails; returns (value, meta)."""
    g = (vals / xs ** beta) ** q
    core = log_integral(xs, g)
    meta = {"range": [float(xs[0]), float(xs[-1])], "nodes": int(xs.size), "core": core,
            "integrand_ends": [float(g[0]), float(g[-1])]}
    lower = 0.0
    gam = _slope(xs[0], xs[1], vals[0], vals[1])
    if vals[0] > 0:
        if gam is not None and gam > beta:
            lower = g[0] / ((gam - beta) * q)
        else:
            meta["lower_tail_divergent"] = True
    upper = 0.0
    gam_u = _slope(xs[-2], xs[-1], vals[-2], vals[-1])
    if vals[-1] > 0:
        gam_u = max(gam_u, 0.0) if gam_u is not None else 0.0
        if gam_u < beta:
            upper = g[-1] / ((beta - gam_u) * q)
        else:
            meta["upper_tail_divergent"] = True
    meta["lower_tail"] = lower
    meta["upper_tail"] = upper
    return core + lower + upper, meta


def _large_scale_integral(xs, vals, beta, q):
    """int_1^inf (x^beta E(x))^q dx/x with a power-law upper tail."""
    g = (xs ** beta * vals) ** q
    core = log_integral(xs, g)
    meta = {"range": [float(xs[0]), float(xs[-1])], "nodes": int(xs.size), "core": core,
            "integrand_ends": [float(g[0]), float(g[-1])]}
    upper = 0.0
    if vals[-1] > 0:
        gam = _slope(xs[-2], xs[-1], vals[-2], vals[-1])
        if gam is not None and gam < -beta:
            upper = g[-1] / ((-beta - gam) * q)
        else:
            meta["upper_tail_divergent"] = True
    meta["upper_tail"] = upper
    return core + upper, meta


def _finish(total: float, q: float) -> float:
    return max(total, 0.0) ** (1.0 / q)


def _bd_like(xs, vals, params: BesovParams):
    if math.isinf(params.q):
        r = vals / xs ** params.beta
        return float(r.max()), {"branch": "sup", "argmax": float(xs[int(r.argmax())])}
    tot, meta = _small_scale_integral(xs, vals, params.beta, params.q)
    meta["branch"] = "integral"
    return _finish(tot, params.q), meta


def _ed_like(xs, vals, params: BesovParams):
    if math.isinf(params.q):
        r = xs ** params.beta * vals
        return float(r.max()), {"branch": "sup", "argmax": float(xs[int(r.argmax())])}
    tot, meta = _large_scale_integral(xs, vals, params.beta, params.q)
    meta["branch"] = "integral"
    return _finish(tot, params.q), meta


def _profile_for(f, params, profile, scales, e_scales):
    if profile is not None and params.p in profile.w:
        return profile
    return smoothness_profile(f, (params.p,), scales, e_scales)


def besov_w_seminorm(f: SampledFunction, params: BesovParams, scales: ScaleSet | None = None,
                     profile: SmoothnessProfile | None = None) -> float:
    prof = _profile_for(f, params, profile, scales, None)
    return _bd_like(prof.bd_scales, prof.w[params.p], params)[0]


def besov_k_seminorm(f: SampledFunction, params: BesovParams, scales: ScaleSet | None = None,
                     profile: SmoothnessProfile | None = None) -> float:
    prof = _profile_for(f, params, profile, scales, None)
    return _bd_like(prof.bd_scales, prof.k[params.p], params)[0]


def besov_e_seminorm(f: SampledFunction, params: BesovParams, scales: ScaleSet | None = None,
                     profile: SmoothnessProfile | None = None) -> float:
    prof = _profile_for(f, params, profile, None, scales)
    return _ed_like(prof.ed_scales, prof.e_ed[params.p], params)[0]


@dataclass
class SeminormReport:
    params: BesovParams
    per_scale: list
    bd_seminorm: float
    kd_seminorm: float
    ed_seminorm: float
    ratio_bd_kd: tuple
    ratio_bd_ed: tuple
    quadrature_meta: dict
    flags: dict = field(default_factory=dict)
    norm: float = 0.0

    def to_dict(self) -> dict:
        return {
            "params": self.params.as_dict(),
            "per_scale": self.per_scale,
            "seminorms": {"bd": self.bd_seminorm, "kd": self.kd_seminorm,
                          "ed": self.ed_seminorm, "lp_norm": self.norm},
            "ratios": {"k_over_w": list(self.ratio_bd_kd), "e_over_w": list(self.ratio_bd_ed)},
            "flags": self.flags,
            "quadrature_meta": self.quadrature_meta,
        }

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_dict(), indent=2, default=_jsonable)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def per_scale_csv(self, path) -> None:
        """Plot data (x, w, k, e); ``path`` may also be an open text stream."""
        lines = ["x,w,k,e"]
        for row in self.per_scale:
            lines.append(",".join("" if row[c] is None else repr(row[c]) for c in ("x", "w", "k", "e")))
        text = "\n".join(lines) + "\n"
        if hasattr(path, "write"):
            path.write(text)
        else:
            with open(path, "w") as fh:
                fh.write(text)


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, AlphaParameter):
        return v.alpha
    raise TypeError(type(v))


DEFAULT_CEILINGS = {"sandwich": 20.0, "thm2": 10.0, "thm3": 10.0}


def equivalence_report(f: SampledFunction, params: BesovParams, scales: ScaleSet | None = None,
                       e_scales: ScaleSet | None = None, profile: SmoothnessProfile | None = None,
                       ceilings: dict | None = None) -> SeminormReport:
    """All three seminorms, per-scale values, ratios and theorem-wise verdicts."""
    if params.alpha.alpha != f.grid.alpha.alpha:
        raise DomainError("params and function carry different alpha")
    c = dict(DEFAULT_CEILINGS)
    c.update(ceilings or {})
    prof = profile if profile is not None and params.p in profile.w else \
        smoothness_profile(f, (params.p,), scales, e_scales)
    p = params.p
    xs, ex = prof.bd_scales, prof.ed_scales
    w, k = prof.w[p], prof.k[p]
    bd, meta_bd = _bd_like(xs, w, params)
    kd, meta_kd = _bd_like(xs, k, params)
    ed, meta_ed = _ed_like(ex, prof.e_ed[p], params)
    nrm = prof.norm[p]

    rows = [{"x": float(x), "w": float(a), "k": float(b), "e": float(e)}
            for x, a, b, e in zip(xs, w, k, prof.e_bd[p])]
    rows += [{"x": float(x), "w": None, "k": None, "e": float(e)}
             for x, e in zip(ex, prof.e_ed[p]) if x > xs[-1]]

    pos = w > 0
    kw = (float(np.min(k[pos] / w[pos])), float(np.max(k[pos] / w[pos]))) if np.any(pos) else (math.nan, math.nan)
    # E(f, t) against w(f, 1/t), w interpolated in log-log between scales
    inv = 1.0 / ex
    inside = (inv >= xs[0]) & (inv <= xs[-1]) & (prof.e_ed[p] > 0)
    if np.any(inside) and np.all(w > 0):
        w_inv = np.exp(np.interp(np.log(inv[inside]), np.log(xs), np.log(w)))
        r = prof.e_ed[p][inside] / w_inv
        ew = (float(r.min()), float(r.max()))
    else:
        ew = (math.nan, math.nan)

    # degenerate: every per-scale value is quadrature noise relative to the norm
    noise = max(float(np.max(np.abs(w))), float(np.max(np.abs(k))),
                float(np.max(np.abs(prof.e_bd[p]))), float(np.max(np.abs(prof.e_ed[p]))))
    degenerate = noise <= DEGENERATE_RTOL * max(nrm, 1.0)
    flags = {"degenerate": bool(degenerate), "e_exact": bool(prof.e_exact[p])}
    if degenerate:
        flags["profile_noise"] = noise
        bd = kd = ed = 0.0

    if degenerate:
        flags["theorem1"] = flags["theorem2"] = flags["theorem3"] = "degenerate"
    else:
        s = c["sandwich"]
        flags["theorem1"] = {"applicable": True, "ceiling": s,
                             "pass": bool(1.0 / s <= kw[0] and kw[1] <= s)}
        if p <= 2.0:
            flags["theorem2"] = {"applicable": True, "ceiling": c["thm2"], "ratio": ed / bd,
                                 "pass": bool(ed <= c["thm2"] * bd)}
        else:
            flags["theorem2"] = {"applicable": False, "reason": "requires p <= 2"}
        reasons = []
        if p > 2.0:
            reasons.append("requires p <= 2")
        if math.isinf(params.q):
            reasons.append("requires q < inf")
        if not 0.0 < params.beta < 1.0:
            reasons.append("requires 0 < beta < 1")
        if reasons:
            flags["theorem3"] = {"applicable": False, "reason": "; ".join(reasons)}
        else:
            ratio = bd / (nrm + ed)
            flags["theorem3"] = {"applicable": True, "ceiling": c["thm3"], "ratio": ratio,
                                 "pass": bool(ratio <= c["thm3"])}

    meta = {"bd": meta_bd, "kd": meta_kd, "ed": meta_ed,
            "grid": f.grid.describe(), "t_samples_per_scale": (scales or default_bd_scales()).t_samples_per_scale}
    return SeminormReport(params, rows, bd, kd, ed, kw, ew, meta, flags, nrm)


__all__ = [
    "BesovParams", "SmoothnessProfile", "smoothness_profile", "besov_w_seminorm",
    "besov_k_seminorm", "besov_e_seminorm", "SeminormReport", "equivalence_report",
    "default_bd_scales", "default_ed_scales", "log_integral",
]
