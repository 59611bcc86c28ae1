"""Verification suites S1-S6 and the report they produce."""

from __future__ import annotations

import datetime as _dt
import json
import math
import time
from dataclasses import dataclass

import numpy as np

from . import catalog
from .besov import BesovParams, equivalence_report, smoothness_profile
from .measure import SampledFunction, build_grid, integrate, lp_norm
from .operator import (apply_dunkl_operator, k_decomposition, taylor_remainder_check,
                       theta_integral, theta_integral_exact)
from .profile import CHECKS, SUITES, VerifyProfile, cell_id
from .smoothness import (ScaleSet, TranslationFamily, dilate_mollifier, make_mollifier,
                         mollifier_defect, modulus_of_smoothness)
from .special import SERIES_SWITCH, as_alpha, bessel_j_large, bessel_j_series, dunkl_kernel
from .transform import (bandlimit_project, forward_transform, inverse_transform, multiplier,
                        spectral_tail_norm)
from .translation import (bessel_translate, convolve, kernel_abs_mass, kernel_W, make_angular_rule,
                          translate_angular, translate_kernel, translate_values)

EVEN_SMOOTH = ("gaussian", "gaussian_moment_2", "band_limited_7", "abs_smoothed_1")
BAND_SOURCES = ("gaussian", "gaussian_moment_1", "bump")
TAIL_EQUALITY_CUT = 8.0


@dataclass
class Check:
    id: str
    anchor: str
    observed: float
    ceiling: float
    passed: bool

    def as_dict(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "observed": _num(self.observed),
                "ceiling": _num(self.ceiling), "pass": self.passed}


def _num(v):
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


class Context:
    """Per-run caches shared by the suites; one entry per alpha and function."""

    def __init__(self, profile: VerifyProfile, calibrate: bool = False):
        self.profile = profile
        self.calibrate = calibrate
        self._grids: dict = {}
        self._funcs: dict = {}
        self._spec: dict = {}
        self._fam: dict = {}
        self._prof: dict = {}

    # -- shared objects ------------------------------------------------------
    def grid(self, a):
        g = self._grids.get(a)
        if g is None:
            g = self._grids[a] = build_grid(a, self.profile.radius, self.profile.n)
        return g

    def rule(self, a):
        return make_angular_rule(a, self.profile.theta_nodes)

    def func(self, a, name) -> SampledFunction:
        key = (a, name)
        f = self._funcs.get(key)
        if f is None:
            f = self._funcs[key] = catalog.sample(name, self.grid(a))
        return f

    def spectrum(self, a, name):
        key = (a, name)
        s = self._spec.get(key)
        if s is None:
            s = self._spec[key] = forward_transform(self.func(a, name))
        return s

    def family(self, a, name) -> TranslationFamily:
        key = (a, name)
        fam = self._fam.get(key)
        if fam is None:
            fam = self._fam[key] = TranslationFamily(self.func(a, name), self.rule(a))
        return fam

    def scales(self):
        s = self.profile.scale_set
        m = int(s.get("t_samples", 16))
        bd = ScaleSet.log_spaced(*s["bd"][:2], int(s["bd"][2]), m)
        ed = ScaleSet.log_spaced(*s["ed"][:2], int(s["ed"][2]), m)
        return bd, ed

    def smoothness(self, a, name):
        key = (a, name)
        pr = self._prof.get(key)
        if pr is None:
            bd, ed = self.scales()
            pr = self._prof[key] = smoothness_profile(self.func(a, name), tuple(self.profile.p_set),
                                                      bd, ed, self.family(a, name))
        return pr

    def rng(self, *tags) -> np.random.Generator:
        return np.random.default_rng([self.profile.seed, *tags])

    # -- check assembly ------------------------------------------------------
    def check(self, base: str, observed: float, **cell) -> Check:
        cid = cell_id(base, **cell)
        observed = float(observed)
        if self.calibrate:
            try:
                ceiling = self.profile.ceiling(cid)
            except Exception:
                ceiling = math.nan
        else:
            ceiling = self.profile.ceiling(cid)
        ok = bool(observed <= ceiling) if not math.isnan(observed) else False
        return Check(cid, CHECKS[base][1], observed, ceiling, ok)


def _alpha_tag(a: float) -> int:
    return int(round((a + 1.0) * 1000))


def _sup(v) -> float:
    return float(np.max(np.abs(v))) if np.size(v) else 0.0


# -- S1: kernel and transform -----------------------------------------------

def suite_s1(ctx: Context) -> list[Check]:
    out = []
    rng = ctx.rng(1)
    mods = []
    for a in rng.uniform(-0.49, 3.0, 100):
        x = rng.uniform(-20, 20, 100)
        y = rng.uniform(-20, 20, 100)
        mods.append(np.abs(dunkl_kernel(a, x, y)))
    out.append(ctx.check("S1.kernel_bound", np.max(mods)))

    diffs = []
    for a in ctx.profile.alpha_set:
        for order in (a, a + 1.0):
            s = bessel_j_series(order, SERIES_SWITCH)
            l = bessel_j_large(order, SERIES_SWITCH)
            diffs.append(abs(s - l) / abs(l))
    out.append(ctx.check("S1.bessel_regimes", max(diffs)))

    for a in ctx.profile.alpha_set:
        pl, sb, inv, tail, excess = [], [], [], [], []
        for name in ctx.profile.catalog:
            f = ctx.func(a, name)
            F = ctx.spectrum(a, name)
            nf = lp_norm(f, 2)
            pl.append(abs(lp_norm(F.as_function, 2) / nf - 1.0))
            sb.append(F.sup_norm() - lp_norm(f, 1))
            back = inverse_transform(F, f.grid, real=not np.iscomplexobj(f.values))
            inv.append(_sup(back.values - f.values) / f.sup_norm())
            for x in (1.0, 2.0, 4.0):
                t = spectral_tail_norm(f, x, spectrum=F)
                d = lp_norm(f - bandlimit_project(f, x, spectrum=F), 2)
                excess.append(d - t)
            # equality needs F f(+-x) ~ 0: otherwise P_x f decays like
            # |y|^(-a-3/2) and part of its energy lies outside [-R, R]
            x = TAIL_EQUALITY_CUT
            edge = _sup(F.evaluate(np.array([-x, x]))) / F.sup_norm()
            if edge < 1e-12:
                t = spectral_tail_norm(f, x, spectrum=F)
                d = lp_norm(f - bandlimit_project(f, x, spectrum=F), 2)
                tail.append(abs(t - d))
        out.append(ctx.check("S1.plancherel", max(pl), a=a))
        out.append(ctx.check("S1.sup_bound", max(sb), a=a))
        out.append(ctx.check("S1.inversion", max(inv), a=a))
        out.append(ctx.check("S1.tail_inequality", max(excess), a=a))
        if tail:
            out.append(ctx.check("S1.tail_plancherel", max(tail), a=a))

        g = ctx.grid(a)
        og = build_grid(a, 2.0 * ctx.profile.radius, 4 * ctx.profile.n)
        fo = SampledFunction.from_callable(og, catalog.gaussian, "even")
        oracle = forward_transform(fo, g)
        ours = ctx.spectrum(a, "gaussian") if "gaussian" in ctx.profile.catalog else \
            forward_transform(SampledFunction.from_callable(g, catalog.gaussian, "even"))
        out.append(ctx.check("S1.gaussian_oracle", _sup(ours.values - oracle.values), a=a))
        out.append(ctx.check("S1.gaussian_fixed_point",
                             _sup(oracle.values - np.exp(-0.5 * g.nodes ** 2)), a=a))
    return out


# -- S2: translation --------------------------------------------------------

def suite_s2(ctx: Context) -> list[Check]:
    out = []
    for ia, a in enumerate(ctx.profile.alpha_set):
        rng = ctx.rng(2, _alpha_tag(a))
        rule = ctx.rule(a)
        g = ctx.grid(a)
        out.append(ctx.check("S2.nu_mass", abs(rule.mass - 0.5), a=a))
        zero, sym, mult, cross, comm, semi, bes = [], [], [], [], [], [], []
        bound = {p: [] for p in (1.0, 2.0)}
        for name in ctx.profile.catalog:
            f = ctx.func(a, name)
            zero.append(_sup(translate_angular(f, 0.0, rule).values - f.values))
            ii = rng.integers(0, g.n, 40)
            jj = rng.integers(0, g.n, 40)
            for i, j in zip(ii, jj):
                x, y = g.nodes[i], g.nodes[j]
                if abs(x) > 10 or abs(y) > 10:
                    continue
                u = translate_values(f, x, [y], rule)[0]
                v = translate_values(f, y, [x], rule)[0]
                sym.append(abs(u - v))
            F = ctx.spectrum(a, name)
            n1 = lp_norm(f, 1)
            for x in rng.uniform(-8.0, 8.0, 3):
                tf = translate_angular(f, x, rule)
                for p in bound:
                    bound[p].append(lp_norm(tf, p) / lp_norm(f, p))
                Ft = forward_transform(tf, F.freq_grid)
                lam = F.freq_grid.nodes
                mult.append(_sup(Ft.values - multiplier(a, lam, x) * F.values) / n1)
            x = float(rng.uniform(-6.0, 6.0))
            cross.append(_sup(translate_kernel(f, x).values - translate_angular(f, x, rule).values))
            x = float(rng.uniform(-4.0, 4.0))
            lhs = apply_dunkl_operator(translate_angular(f, x, rule))
            rhs = translate_angular(apply_dunkl_operator(f), x, rule)
            comm.append(lp_norm(lhs - rhs, 2))
            x, y = rng.uniform(-4.0, 4.0, 2)
            xy = translate_angular(translate_angular(f, y, rule), x, rule)
            yx = translate_angular(translate_angular(f, x, rule), y, rule)
            semi.append(_sup(xy.values - yx.values))
            if name in EVEN_SMOOTH:
                y = float(rng.uniform(0.0, 4.0))
                t = translate_angular(f, y, rule).even_part()
                bes.append(_sup(t.values - bessel_translate(f, y, rule.n).values))
        out.append(ctx.check("S2.tau_zero", max(zero), a=a))
        out.append(ctx.check("S2.symmetry", max(sym), a=a))
        for p, v in bound.items():
            out.append(ctx.check("S2.boundedness", max(v), a=a, p=p))
        out.append(ctx.check("S2.multiplier", max(mult), a=a))
        out.append(ctx.check("S2.kernel_crosscheck", max(cross), a=a))
        out.append(ctx.check("S2.commutation", max(comm), a=a))
        out.append(ctx.check("S2.semigroup", max(semi), a=a))
        if bes:
            out.append(ctx.check("S2.bessel_oracle", max(bes), a=a))

        masses, scal, symw = [], [], []
        for _ in range(100):
            x, y = rng.uniform(-5.0, 5.0, 2)
            masses.append(kernel_abs_mass(a, x, y))
        for _ in range(100):
            y, z = rng.uniform(0.2, 4.0, 2) * rng.choice([-1.0, 1.0], 2)
            lo, hi = abs(abs(y) - abs(z)), abs(y) + abs(z)
            t = rng.uniform(lo, hi) * rng.choice([-1.0, 1.0])
            s = rng.uniform(0.25, 4.0)
            ref = kernel_W(a, y, z, t)
            scal.append(abs(kernel_W(a, s * y, s * z, s * t) * s ** (2 * a + 2) - ref) / abs(ref))
            symw.append(abs(kernel_W(a, y, z, t) - kernel_W(a, z, y, t)) / abs(ref))
        out.append(ctx.check("S2.kernel_abs_mass", max(masses), a=a))
        out.append(ctx.check("S2.kernel_scaling", max(scal), a=a))
        out.append(ctx.check("S2.kernel_symmetry", max(symw), a=a))

        one = SampledFunction(g, np.ones(g.n), "even")
        ones = []
        for x in rng.uniform(-10.0, 10.0, 3):
            ones.append(_sup(translate_angular(one, x, rule).values - 1.0))
            ones.append(_sup(translate_kernel(one, x).values - 1.0))
        out.append(ctx.check("S2.translate_one", max(ones), a=a))
    return out


# -- S3: convolution --------------------------------------------------------

YOUNG = ((1.0, 1.0, 1.0), (1.0, 2.0, 2.0), (2.0, 1.0, 2.0))


def suite_s3(ctx: Context) -> list[Check]:
    out = []
    pairs = ctx.profile.extra.get("convolution_pairs", [["gaussian", "gaussian_moment_1"]])
    for a in ctx.profile.alpha_set:
        rng = ctx.rng(3, _alpha_tag(a))
        rule = ctx.rule(a)
        com, prod, exch = [], [], []
        young = {pqr: [] for pqr in YOUNG}
        for fn, gn in pairs:
            f, g = ctx.func(a, fn), ctx.func(a, gn)
            fg = convolve(f, g, rule)
            gf = convolve(g, f, rule)
            com.append(_sup(fg.values - gf.values))
            for pqr in YOUNG:
                p, q, r = pqr
                young[pqr].append(lp_norm(fg, r) / (lp_norm(f, p) * lp_norm(g, q)))
            Ffg = forward_transform(fg)
            prod.append(_sup(Ffg.values - ctx.spectrum(a, fn).values * ctx.spectrum(a, gn).values))
            t = float(rng.uniform(-3.0, 3.0))
            lhs = translate_angular(fg, t, rule)
            mid = convolve(translate_angular(f, t, rule), g, rule)
            rhs = convolve(f, translate_angular(g, t, rule), rule)
            exch.append(max(_sup(lhs.values - mid.values), _sup(lhs.values - rhs.values)))
        out.append(ctx.check("S3.commutativity", max(com), a=a))
        for (p, q, r), v in young.items():
            out.append(ctx.check("S3.young", max(v), a=a, pqr=f"{p:g}{q:g}{r:g}"))
        out.append(ctx.check("S3.transform_product", max(prod), a=a))
        out.append(ctx.check("S3.exchange", max(exch), a=a))
    return out


# -- S4: Taylor formula, Theta and the K decomposition ----------------------

TAYLOR_SCALES = (0.25, 0.5, 1.0, 2.0)


def _sandwich_range(ctx):
    return float(ctx.profile.scale_set.get("sandwich_max", 4.0))


def suite_s4(ctx: Context) -> list[Check]:
    out = []
    for a in ctx.profile.alpha_set:
        rel = [abs(theta_integral(a, x) - theta_integral_exact(a, x)) / theta_integral_exact(a, x)
               for x in (0.5, 1.0, 2.0)]
        out.append(ctx.check("S4.theta_mass", max(rel), a=a))
        g = ctx.grid(a)
        tay, rec, closed, par = [], [], [], []
        for name in ctx.profile.catalog:
            f = ctx.func(a, name)
            lf = apply_dunkl_operator(f)
            scale = 1.0 + lf.sup_norm()
            for x in TAYLOR_SCALES:
                tay.append(taylor_remainder_check(f, x) / scale)
            for x in (0.5, 1.0):
                dec = k_decomposition(f, x, 2.0)
                rec.append(_sup((dec.f0 + dec.f1_scaled).values - f.values))
                closed.append(_sup(apply_dunkl_operator(dec.f1_scaled).values
                                   - dec.lambda_f1_scaled.values))
            if f.parity in ("even", "odd"):
                v = lf.values
                sign = 1.0 if f.parity == "odd" else -1.0
                par.append(_sup(v - sign * v[::-1]) / max(_sup(v), 1e-300))
        out.append(ctx.check("S4.taylor", max(tay), a=a))
        out.append(ctx.check("S4.reconstruction", max(rec), a=a))
        out.append(ctx.check("S4.closed_form", max(closed), a=a))
        if par:
            out.append(ctx.check("S4.parity_flip", max(par), a=a))
        one = SampledFunction(g, np.ones(g.n), "even")
        out.append(ctx.check("S4.annihilates_constants", apply_dunkl_operator(one).sup_norm(), a=a))

        top = _sandwich_range(ctx)
        for p in ctx.profile.p_set:
            up, lo = [], []
            for name in ctx.profile.catalog:
                pr = ctx.smoothness(a, name)
                keep = (pr.bd_scales <= top * (1 + 1e-12)) & (pr.w[p] > 0)
                r = pr.k[p][keep] / pr.w[p][keep]
                up.append(r.max())
                lo.append((1.0 / r).max())
            out.append(ctx.check("S4.sandwich_upper", max(up), a=a, p=p))
            out.append(ctx.check("S4.sandwich_lower", max(lo), a=a, p=p))
    return out


# -- S5: Bernstein-type bounds ----------------------------------------------

def _pair_ratios(tr, y1, y2, p, denom):
    d = lp_norm(tr(y1) - tr(y2), p)
    return d / (abs(y1 - y2) * denom)


def suite_s5(ctx: Context) -> list[Check]:
    out = []
    npairs = int(ctx.profile.extra.get("bernstein_pairs", 50))
    for a in ctx.profile.alpha_set:
        rule = ctx.rule(a)
        ps = ctx.profile.p_set
        l1 = {p: [] for p in ps}
        l1h = {p: [] for p in ps}
        l2 = {p: [] for p in ps}
        l2h = {p: [] for p in ps}
        for name in EVEN_SMOOTH:
            if name not in ctx.profile.catalog:
                continue
            rng = ctx.rng(5, _alpha_tag(a), 1, EVEN_SMOOTH.index(name))
            h = ctx.func(a, name)
            fam = ctx.family(a, name)
            dh = {p: lp_norm(h.derivative(), p) for p in ps}
            ys = rng.uniform(0.0, 4.0, (npairs, 2))
            for y1, y2 in ys:
                ym = y1 + 0.5 * (y2 - y1)
                for p in ps:
                    l1[p].append(_pair_ratios(fam.translate, y1, y2, p, dh[p]))
                    l1h[p].append(_pair_ratios(fam.translate, y1, ym, p, dh[p]))
        for name in BAND_SOURCES:
            if name not in ctx.profile.catalog:
                continue
            for x in (1.0, 2.0, 4.0, 8.0):
                rng = ctx.rng(5, _alpha_tag(a), 2, BAND_SOURCES.index(name), int(x))
                gx = bandlimit_project(ctx.func(a, name), x, spectrum=ctx.spectrum(a, name))
                cache: dict = {}

                def tr(y, gx=gx, cache=cache):
                    if y not in cache:
                        cache[y] = translate_angular(gx, y, rule)
                    return cache[y]

                gn = {p: lp_norm(gx, p) for p in ps}
                ys = rng.uniform(0.0, 4.0, (npairs, 2))
                for y1, y2 in ys:
                    ym = y1 + 0.5 * (y2 - y1)
                    for p in ps:
                        l2[p].append(_pair_ratios(tr, y1, y2, p, x * gn[p]))
                        l2h[p].append(_pair_ratios(tr, y1, ym, p, x * gn[p]))
        for p in ps:
            if l1[p]:
                out.append(ctx.check("S5.lemma1", max(l1[p]), a=a, p=p))
                out.append(ctx.check("S5.lemma1_halving", max(l1h[p]) / max(l1[p]), a=a, p=p))
            if l2[p]:
                out.append(ctx.check("S5.lemma2", max(l2[p]), a=a, p=p))
                out.append(ctx.check("S5.lemma2_halving", max(l2h[p]) / max(l2[p]), a=a, p=p))
    return out


# -- S6: Besov seminorms ----------------------------------------------------

MOLLIFIER_T = (1.0, 2.0, 4.0, 8.0, 16.0)
SCALING_LAMBDAS = (0.25, 0.5, 2.0, 4.0)


def suite_s6(ctx: Context) -> list[Check]:
    out = []
    ps = ctx.profile.p_set
    m = int(ctx.profile.scale_set.get("t_samples", 16))
    top = _sandwich_range(ctx)
    dyadic = [2.0 ** k for k in range(-6, int(round(math.log2(top))) + 1)]
    for a in ctx.profile.alpha_set:
        names = ctx.profile.catalog
        for p in ps:
            scal, moll = [], []
            for name in names:
                f = ctx.func(a, name)
                fam = ctx.family(a, name)
                for x in dyadic:
                    wx = modulus_of_smoothness(f, x, p, m, fam)
                    for lam in SCALING_LAMBDAS:
                        scal.append(modulus_of_smoothness(f, lam * x, p, m, fam) / (max(1.0, lam) * wx))
                spec = ctx.spectrum(a, name)
                for t in MOLLIFIER_T:
                    moll.append(mollifier_defect(f, t, p, spec)
                                / modulus_of_smoothness(f, 1.0 / t, p, m, fam))
            out.append(ctx.check("S6.w_scaling", max(scal), a=a, p=p))
            out.append(ctx.check("S6.mollifier_bound", max(moll), a=a, p=p))

            for q in ctx.profile.q_set:
                for b in ctx.profile.beta_set:
                    params = BesovParams(p, q, b, a)
                    t1, t2, t3 = [], [], []
                    for name in names:
                        r = equivalence_report(ctx.func(a, name), params,
                                               profile=ctx.smoothness(a, name))
                        t1.append(max(r.kd_seminorm / r.bd_seminorm, r.bd_seminorm / r.kd_seminorm))
                        t2.append(r.ed_seminorm / r.bd_seminorm)
                        if p == 2.0 and math.isfinite(q) and 0.0 < b < 1.0:
                            t3.append(r.bd_seminorm / (r.norm + r.ed_seminorm))
                    cell = dict(a=a, p=p, q=q, b=b)
                    out.append(ctx.check("S6.thm1", max(t1), **cell))
                    if p <= 2.0:
                        out.append(ctx.check("S6.thm2", max(t2), **cell))
                    if t3:
                        out.append(ctx.check("S6.thm3", max(t3), a=a, q=q, b=b))
        if 2.0 in ps:
            inc = []
            for name in names:
                pr = ctx.smoothness(a, name)
                xs = np.concatenate([pr.bd_scales, pr.ed_scales])
                es = np.concatenate([pr.e_bd[2.0], pr.e_ed[2.0]])
                order = np.argsort(xs, kind="stable")
                e = es[order] / pr.norm[2.0]
                inc.append(max(float(np.max(np.diff(e))), 0.0))
            out.append(ctx.check("S6.e_monotone", max(inc), a=a))

    a0 = ctx.profile.extra.get("mollifier_alpha", 0.5)
    a0 = as_alpha(a0).alpha
    out.extend(_s6_single_alpha(ctx, a0))
    return out


def _s6_single_alpha(ctx: Context, a: float) -> list[Check]:
    out = []
    ps = ctx.profile.p_set
    g = ctx.grid(a)
    m = int(ctx.profile.scale_set.get("t_samples", 16))
    bd, ed = ctx.scales()

    # refine the t-lattice once
    ch = []
    for name in ("gaussian", "bump", "abs_smoothed_1"):
        if name not in ctx.profile.catalog:
            continue
        f = ctx.func(a, name)
        fam = ctx.family(a, name)
        for p in ps:
            for x in bd.scales:
                w1 = modulus_of_smoothness(f, x, p, m, fam)
                w2 = modulus_of_smoothness(f, x, p, 2 * m, fam)
                ch.append(abs(w2 - w1) / w2)
    if ch:
        out.append(ctx.check("S6.sample_doubling", max(ch), a=a))

    # the BD-from-ED bound outside its hypotheses must be marked, not evaluated
    name = ctx.profile.catalog[0]
    r = equivalence_report(ctx.func(a, name), BesovParams(2.0 if 2.0 in ps else ps[0], 2.0, 1.5, a),
                           profile=ctx.smoothness(a, name))
    t3 = r.flags.get("theorem3")
    marked = isinstance(t3, dict) and t3.get("applicable") is False
    out.append(ctx.check("S6.not_applicable", 0.0 if marked else 1.0, a=a))

    # constants
    one = SampledFunction(g, np.full(g.n, 3.0), "even")
    few = ScaleSet((0.125, 0.5, 2.0), 8)
    fe = ScaleSet((1.0, 4.0), 8)
    pr = smoothness_profile(one, tuple(ps), few, fe, TranslationFamily(one, ctx.rule(a)))
    worst = 0.0
    for p in ps:
        r = equivalence_report(one, BesovParams(p, 2.0, 0.5, a), few, fe, profile=pr)
        if r.flags["degenerate"] and r.bd_seminorm == r.kd_seminorm == r.ed_seminorm == 0.0:
            worst = max(worst, r.flags["profile_noise"] / max(r.norm, 1.0))
        else:
            worst = max(worst, 1.0)
    out.append(ctx.check("S6.degenerate", worst, a=a))

    # reflection
    if "bump" in ctx.profile.catalog:
        f = ctx.func(a, "bump")
        fr = f.reflect()
        prr = smoothness_profile(fr, tuple(ps), bd, ed, TranslationFamily(fr, ctx.rule(a)))
        pr0 = ctx.smoothness(a, "bump")
        dev = 0.0
        for p in ps:
            for q in ctx.profile.q_set:
                for b in ctx.profile.beta_set:
                    par = BesovParams(p, q, b, a)
                    r0 = equivalence_report(f, par, profile=pr0)
                    r1 = equivalence_report(fr, par, profile=prr)
                    for u, v in ((r0.bd_seminorm, r1.bd_seminorm), (r0.kd_seminorm, r1.kd_seminorm),
                                 (r0.ed_seminorm, r1.ed_seminorm)):
                        dev = max(dev, abs(u - v) / max(abs(u), 1e-300))
        out.append(ctx.check("S6.reflection", dev, a=a))

    # the mollifier
    mol = make_mollifier(a)
    out.append(ctx.check("S6.mollifier_mass", abs(mol.total_mass - 1.0), a=a))
    out.append(ctx.check("S6.mollifier_leakage", mol.leakage, a=a))
    t = 2.0
    phi_t = dilate_mollifier(mol, t)
    out.append(ctx.check("S6.dilation_mass", abs(float(integrate(phi_t).real) - 1.0), a=a))
    # frequencies up to 2t: the mollifier grid does not resolve much beyond that
    fg = build_grid(a, 2.0 * t, 512)
    tail = spectral_tail_norm(phi_t, 1.01 * t, freq_grid=fg)
    out.append(ctx.check("S6.dilation_band", tail, a=a))
    return out


SUITE_FUNCS = {"S1": suite_s1, "S2": suite_s2, "S3": suite_s3, "S4": suite_s4,
               "S5": suite_s5, "S6": suite_s6}


def run_suites(profile: VerifyProfile, suites=None, calibrate: bool = False,
               ctx: Context | None = None, log=None) -> dict:
    """Run the requested suites; returns the report dictionary."""
    ctx = ctx or Context(profile, calibrate)
    chosen = list(suites or profile.suites)
    digest = profile.digest()
    reports = []
    timings = {}
    for s in SUITES:
        if s not in chosen:
            continue
        t0 = time.perf_counter()
        checks = SUITE_FUNCS[s](ctx)
        timings[s] = time.perf_counter() - t0
        if log:
            bad = sum(not c.passed for c in checks)
            log(f"{s}: {len(checks)} checks, {bad} failed, {timings[s]:.1f}s")
        reports.append({"suite": s, "checks": [c.as_dict() for c in checks],
                        "profile_hash": digest})
    failed = [c["id"] for r in reports for c in r["checks"] if not c["pass"]]
    return {"profile_hash": digest, "suites": reports, "failed": failed,
            "pass": not failed, "timestamp": None, "_timings": timings}


def finalize(report: dict) -> dict:
    """Attach the timestamp and drop timing data (kept out of the stable part)."""
    out = {k: v for k, v in report.items() if not k.startswith("_")}
    out["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False)


__all__ = ["Check", "Context", "run_suites", "finalize", "dumps", "SUITE_FUNCS"]
