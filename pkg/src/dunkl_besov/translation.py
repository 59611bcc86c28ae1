"""Dunkl translation, its kernel, convolution and the Bessel translation.

Two independent routes to tau_x f are provided.

``translate_angular`` integrates over the angle with u = cos(theta):

    tau_x f(y) = int [A(rho) + (x + y) B(rho)] dnu(u),
    rho^2 = x^2 + y^2 - 2xyu,  A(r) = f(r) + f(-r),  B(r) = (f(r) - f(-r)) / r,
    dnu = nu_norm (1 - u)^(a+1/2) (1 + u)^(a-1/2) du,

by Gauss-Jacobi quadrature, with f read from fine interpolation tables of A
and B.

``translate_kernel`` integrates f against W(x, y, z) dmu(z).  With
s = z^2 = x^2 + y^2 - 2|xy| v the endpoint factor of W becomes the
Gegenbauer weight (1 - v^2)^(a-1/2), so Gauss-Gegenbauer nodes absorb the
endpoint singularity and f is evaluated by panel interpolation.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special as _sp

from . import _kernels
from .errors import DomainError, RangeError
from .measure import SampledFunction
from .special import AlphaParameter, as_alpha, gamma

THETA_NODES = 128
KERNEL_NODES = 160
TABLE_STEPS = 8192
SUPPORT_RTOL = 1e-17


@dataclass(frozen=True, eq=False)
class AngularRule:
    """Quadrature for dnu_alpha in the variable u = cos(theta).

    ``theta_weights`` already include nu_norm, so sum(theta_weights) is the
    total mass of nu_alpha, which is 1/2.
    """

    alpha: AlphaParameter
    theta_nodes: np.ndarray
    theta_weights: np.ndarray
    u: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.theta_nodes.size

    @property
    def mass(self) -> float:
        return float(self.theta_weights.sum())


@lru_cache(maxsize=32)
def _angular_rule(alpha: float, n: int) -> AngularRule:
    a = as_alpha(alpha)
    u, w = _sp.roots_jacobi(n, a.alpha + 0.5, a.alpha - 0.5)
    w = w * a.nu_norm
    theta = np.arccos(u)
    for arr in (u, w, theta):
        arr.setflags(write=False)
    return AngularRule(a, theta, w, u)


def make_angular_rule(alpha, n: int = THETA_NODES) -> AngularRule:
    if n < 2:
        raise DomainError("an angular rule needs at least 2 nodes")
    return _angular_rule(as_alpha(alpha).alpha, int(n))


@lru_cache(maxsize=32)
def _gegenbauer(alpha: float, n: int):
    v, w = _sp.roots_jacobi(n, alpha - 0.5, alpha - 0.5)
    v.setflags(write=False)
    w.setflags(write=False)
    return v, w


# -- interpolation tables -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class _Tables:
    parts: tuple  # (A, B) row tables for the real and, if present, imaginary part
    inv_h: float
    support: float


_table_cache: "weakref.WeakKeyDictionary[SampledFunction, _Tables]" = weakref.WeakKeyDictionary()


def _support_radius(f: SampledFunction) -> float:
    a = np.abs(f.values)
    big = a > SUPPORT_RTOL * a.max() if a.max() > 0 else np.zeros(a.shape, bool)
    if not np.any(big):
        return 0.0
    g = f.grid
    width = g.radius / (len(g.edges) - 1)
    return min(g.radius, float(np.abs(g.nodes[big]).max()) + width)


def _build_part(vals_pos: np.ndarray, vals_neg: np.ndarray, r: np.ndarray, total: int):
    tab = np.zeros((total + 1, 2))
    a = tab[:, 0]
    b = tab[:, 1]
    k = r.size
    a[1:k + 1] = vals_pos + vals_neg
    b[2:k + 1] = (vals_pos[1:] - vals_neg[1:]) / r[1:]
    # B is even in r: extrapolate to r = 0 in the variable r^2
    b[1] = 1.5 * b[2] - 0.6 * b[3] + 0.1 * b[4]
    a[0] = a[2]
    b[0] = b[2]
    return tab


def tables(f: SampledFunction, steps: int = TABLE_STEPS) -> _Tables:
    """Interpolation tables of A and B on [0, 2R] (cached per function)."""
    hit = _table_cache.get(f)
    if hit is not None and steps == TABLE_STEPS:
        return hit
    R = f.grid.radius
    h = R / steps
    total = 2 * steps + 4
    c = f.constant_value
    if c is not None:
        # constants extend by their value, not by zero
        r = np.arange(total) * h
        vp = np.full(r.size, c)
        vn = vp
    else:
        r = np.arange(steps + 1) * h
        vp = f.evaluate(r)
        vn = f.evaluate(-r)
    parts = [_build_part(vp.real.copy(), vn.real.copy(), r, total)]
    if np.iscomplexobj(vp):
        parts.append(_build_part(vp.imag.copy(), vn.imag.copy(), r, total))
    support = 2.0 * R if c is not None else _support_radius(f)
    tab = _Tables(tuple(parts), 1.0 / h, support)
    if steps == TABLE_STEPS:
        _table_cache[f] = tab
    return tab


def _check_range(f: SampledFunction, x: float) -> None:
    R = f.grid.radius
    if abs(x) > R:
        y = -math.copysign(f.grid.nodes[-1], x)
        raise RangeError(
            f"tau_x needs f at rho = |x| + |y| = {abs(x) + abs(y):.6g} beyond the table range 2R = {2 * R:.6g};"
            f" offending (x, y, theta) = ({x:.6g}, {y:.6g}, {math.pi:.6g})")


def translate_values(f: SampledFunction, x: float, ys, rule: AngularRule | None = None) -> np.ndarray:
    """tau_x f at arbitrary points ``ys`` (angular formula)."""
    x = float(x)
    ys = np.ascontiguousarray(np.asarray(ys, dtype=float).ravel())
    _check_range(f, x)
    if np.any(np.abs(ys) > f.grid.radius):
        raise RangeError("evaluation points must lie in [-R, R]")
    rule = rule or make_angular_rule(f.grid.alpha)
    tab = tables(f)
    out = []
    for part in tab.parts:
        o = np.empty(ys.size)
        _kernels.translate_points(part, tab.inv_h, rule.u, rule.theta_weights, x, ys,
                                  tab.support, o)
        out.append(o)
    return out[0] if len(out) == 1 else out[0] + 1j * out[1]


def translate_angular(f: SampledFunction, x: float, rule: AngularRule | None = None) -> SampledFunction:
    """tau_x f on the grid of ``f`` by the angular formula."""
    x = float(x)
    if x == 0.0:
        return f
    rule = rule or make_angular_rule(f.grid.alpha)
    if rule.alpha.alpha != f.grid.alpha.alpha:
        raise DomainError("angular rule and function carry different alpha")
    return SampledFunction.auto(f.grid, translate_values(f, x, f.grid.nodes, rule))


# -- explicit kernel ----------------------------------------------------------

def _kernel_const(a: float) -> float:
    return gamma(a + 1.0) ** 2 / (2.0 ** (a - 1.0) * math.sqrt(math.pi) * gamma(a + 0.5))


def kernel_W(alpha, x, y, z):
    """W_alpha(x, y, z); zero outside ||x|-|y|| < |z| < |x|+|y| and when xyz = 0.

    The Dirac branches of the translation measure (x = 0 or y = 0) are not
    densities and are handled by the translation routines.
    """
    a = as_alpha(alpha).alpha
    x, y, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, z)))
    out = np.zeros(x.shape)
    ax, ay, az = np.abs(x), np.abs(y), np.abs(z)
    ok = (ax * ay * az > 0) & (az > np.abs(ax - ay)) & (az < ax + ay)
    if np.any(ok):
        xo, yo, zo = x[ok], y[ok], z[ok]
        q = _q_factor(xo, yo, zo)
        # ((|x|+|y|)^2 - z^2)(z^2 - (|x|-|y|)^2) in factored form
        sp, dm = ax[ok] + ay[ok], np.abs(ax[ok] - ay[ok])
        gap = ((sp - az[ok]) * (sp + az[ok])) * ((az[ok] - dm) * (az[ok] + dm))
        # gap^(a-1/2) / |xyz|^(2a) as (gap/m^2)^a / sqrt(gap), dividing by m twice
        # so nothing underflows when one argument is tiny; gap underflows to 0
        # only on the boundary of the support, a null set
        m = np.abs(xo * yo * zo)
        with np.errstate(divide="ignore", invalid="ignore"):
            delta = np.where(gap > 0, (gap / m / m) ** a / np.sqrt(gap), 0.0)
        out[ok] = _kernel_const(a) * q * delta
    return float(out) if out.ndim == 0 else out


def _q_factor(x, y, z):
    """1 - b(x,y,z) + b(z,x,y) + b(z,y,x) with b(x,y,z) = (x^2+y^2-z^2)/(2xy).

    Factored as (x+y+z)(z-d)(z+d)/(2xyz), d = x - y, which avoids cancellation
    for small z; swapping x and y only reorders exact products.
    """
    d = x - y
    return ((x + y) + z) * ((z - d) * (z + d)) / ((2.0 * (x * y)) * z)


def _kernel_nodes(alpha: float, x: float, y: np.ndarray, n: int):
    """Nodes z_k(y) > 0 and the common prefactor for the Gegenbauer route."""
    v, w = _gegenbauer(alpha, n)
    m = x * x + y * y
    h = 2.0 * np.abs(x * y)
    z = np.sqrt(np.maximum(m[:, None] - h[:, None] * v[None, :], 0.0))
    a = as_alpha(alpha)
    pref = a.measure_norm * _kernel_const(alpha) * 2.0 ** (2.0 * alpha - 1.0)
    return z, w, pref


def translate_kernel(f: SampledFunction, x: float, n_nodes: int = KERNEL_NODES) -> SampledFunction:
    """tau_x f on the grid of ``f`` by integrating f against W(x, y, .) dmu."""
    x = float(x)
    if x == 0.0:
        return f
    _check_range(f, x)
    a = f.grid.alpha.alpha
    y = f.grid.nodes
    z, w, pref = _kernel_nodes(a, x, y, n_nodes)
    fz = f.evaluate(z)
    fmz = f.evaluate(-z)
    xb = x
    yb = y[:, None]
    # q(z) + q(-z) = 2(1 - b) = (z-d)(z+d)/(xy) and z (q(z) - q(-z)) = (x+y)(z-d)(z+d)/(xy),
    # d = x - y; split to keep 1/z out of f_e
    d = xb - yb
    c = (z - d) * (z + d) / (xb * yb)
    even = 0.5 * (fz + fmz) * c
    with np.errstate(divide="ignore", invalid="ignore"):
        odd_ratio = np.where(z > 0, 0.5 * (fz - fmz) / np.where(z > 0, z, 1.0), 0.0)
    odd = odd_ratio * (xb + yb) * c
    vals = pref * ((even + odd) @ w)
    return SampledFunction.auto(f.grid, vals)


def kernel_abs_mass(alpha, x: float, y: float, n_nodes: int = 256) -> float:
    """int |W_alpha(x, y, z)| dmu_alpha(z)."""
    a = as_alpha(alpha).alpha
    if x == 0.0 or y == 0.0:
        return 1.0
    z, w, pref = _kernel_nodes(a, float(x), np.array([float(y)]), n_nodes)
    z = z[0]
    q = np.abs(_q_factor(x, y, z)) + np.abs(_q_factor(x, y, -z))
    return float(pref * np.dot(q, w))


# -- Bessel translation -------------------------------------------------------

def bessel_translate(h: SampledFunction, y: float, n_nodes: int = THETA_NODES) -> SampledFunction:
    """T_y h(x) = (1/c_alpha) int_0^pi h(sqrt(x^2 + y^2 - 2xy cos t)) sin^(2 alpha) t dt.

    ``h`` must be even; the result is returned as an even function of x.
    """
    if h.parity != "even":
        raise DomainError("bessel_translate requires an even function")
    y = float(y)
    if y < 0:
        raise DomainError("bessel_translate requires y >= 0")
    if y == 0.0:
        return h
    _check_range(h, y)
    a = h.grid.alpha
    u, w = _gegenbauer(a.alpha, n_nodes)
    x = np.abs(h.grid.nodes)
    rho = np.sqrt(np.maximum((x * x + y * y)[:, None] - (2.0 * x * y)[:, None] * u[None, :], 0.0))
    vals = (h.evaluate(rho) @ w) / a.c_alpha
    return SampledFunction(h.grid, vals, "even")


# -- convolution --------------------------------------------------------------

def _convolve_real(tab: _Tables, part: int, rule: AngularRule, xs, ys, gm) -> np.ndarray:
    out = np.empty(xs.size)
    _kernels.convolve_points(tab.parts[part], tab.inv_h, rule.u, rule.theta_weights, xs, ys, gm,
                             tab.support, out)
    return out


def convolve(f: SampledFunction, g: SampledFunction, rule: AngularRule | None = None) -> SampledFunction:
    """(f * g)(x) = int tau_x f(-y) g(y) dmu(y) on the common grid."""
    if f.grid is not g.grid:
        raise DomainError("convolve requires both functions on the same grid")
    grid = f.grid
    rule = rule or make_angular_rule(grid.alpha)
    tab = tables(f)
    gm = g.values * grid.mu_weights
    keep = np.abs(gm) > SUPPORT_RTOL * np.abs(gm).max() if np.any(gm) else np.zeros(gm.shape, bool)
    ys = np.ascontiguousarray(grid.nodes[keep])
    gm = gm[keep]
    xs = np.ascontiguousarray(grid.nodes)
    g_parts = [np.ascontiguousarray(gm.real)]
    if np.iscomplexobj(gm):
        g_parts.append(np.ascontiguousarray(gm.imag))
    res = np.zeros(xs.size, dtype=complex)
    for i in range(len(tab.parts)):
        for j, gp in enumerate(g_parts):
            val = _convolve_real(tab, i, rule, xs, ys, gp)
            if i == 1 and j == 1:
                res -= val
            elif i + j == 1:
                res += 1j * val
            else:
                res += val
    vals = res.real.copy() if len(tab.parts) == 1 and len(g_parts) == 1 else res
    return SampledFunction.auto(grid, vals)
