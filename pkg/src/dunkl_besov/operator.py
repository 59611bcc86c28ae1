"""The Dunkl operator, the weight Theta and the Taylor-type decomposition.

With the unnormalized weight |z|^(2a+1) dz, the integral remainder reads

    tau_x f - f = int_{-x}^{x} Theta(x, z) tau_z(Lambda f)(.) |z|^(2a+1) dz,

which is 2^(a+1) Gamma(a+1) times the same integral against mu_alpha.
The decomposition f = f0 + f1_scaled with

    f1_scaled = (2^(a+2) Gamma(a+2) / x) int_{-x}^{x} Theta(x, z) tau_z f dmu(z)

then satisfies Lambda f1_scaled = 2(a+1) (tau_x f - f) / x.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DomainError
from .measure import SampledFunction, lp_norm
from .special import as_alpha
from .translation import AngularRule, make_angular_rule, tables, translate_angular


def apply_dunkl_operator(f: SampledFunction) -> SampledFunction:
    """Lambda f = f' + (2a+1)/x * (f(x) - f(-x))/2.

    The grid has no node at 0, and the innermost nodes keep the ratio well
    conditioned because f(x) - f(-x) is computed from exact samples.
    """
    g = f.grid
    a = g.alpha.alpha
    d = f.derivative().values
    if f.parity != "even":
        x = g.nodes
        d = d + (2.0 * a + 1.0) * 0.5 * (f.values - f.values[::-1]) / x
    parity = {"even": "odd", "odd": "even"}.get(f.parity, "none")
    if parity == "none":
        return SampledFunction.auto(g, d)
    return SampledFunction(g, d, parity)


def theta_weight(alpha, x: float, z):
    """Theta(x, z) = 1/(2 x^(2a+1)) + sgn(z)/(2 |z|^(2a+1)) for 0 < |z| <= x."""
    a = as_alpha(alpha).alpha
    x = float(x)
    z = np.asarray(z, dtype=float)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    if np.any(z == 0) or np.any(np.abs(z) > x):
        raise DomainError("theta_weight requires 0 < |z| <= x")
    e = 2.0 * a + 1.0
    out = 0.5 / x ** e + 0.5 * np.sign(z) / np.abs(z) ** e
    return float(out) if out.ndim == 0 else out


def z_nodes(x: float) -> int:
    return int(np.clip(16 + 5 * x, 16, 96))


@lru_cache(maxsize=64)
def _z_rule(alpha: float, x: float, n: int):
    """Positive nodes z_k in (0, x) and mu_alpha-weights of Theta(x, +-z_k).

    Returns (z, wp, wm) with int_{-x}^{x} Theta(x,z) g(z) dmu(z)
    ~ sum_k wp_k g(z_k) + wm_k g(-z_k).  Uses z = x s^2, under which the
    density |z|^(2a+1) dz is a polynomial in s for the usual alpha.
    """
    s, w = np.polynomial.legendre.leggauss(n)
    s = 0.5 * (s + 1.0)
    w = 0.5 * w
    z = x * s * s
    dz = 2.0 * x * s * w
    a = as_alpha(alpha)
    e = 2.0 * alpha + 1.0
    r = (z / x) ** e
    wp = a.measure_norm * dz * 0.5 * (r + 1.0)
    wm = a.measure_norm * dz * 0.5 * (r - 1.0)
    for arr in (z, wp, wm):
        arr.setflags(write=False)
    return z, wp, wm


def theta_integral(alpha, x: float, n: int | None = None) -> float:
    """int_{-x}^{x} Theta(x, z) dmu_alpha(z) by the z-rule."""
    x = float(x)
    _, wp, wm = _z_rule(as_alpha(alpha).alpha, x, n or z_nodes(x))
    return float(wp.sum() + wm.sum())


def theta_integral_exact(alpha, x: float) -> float:
    a = as_alpha(alpha)
    return float(x) / a.besov_taylor_constant


def theta_average(f: SampledFunction, x: float, n: int | None = None,
                  rule: AngularRule | None = None) -> np.ndarray:
    """Values of int_{-x}^{x} Theta(x, z) tau_z f dmu(z) on the grid of f."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    g = f.grid
    z, wp, wm = _z_rule(g.alpha.alpha, x, n or z_nodes(x))
    rule = rule or make_angular_rule(g.alpha)
    tab = tables(f)
    ys = np.ascontiguousarray(g.nodes)
    acc = np.zeros(g.n, dtype=complex if len(tab.parts) > 1 else float)
    buf = np.empty(g.n)
    for zk, a, b in zip(z, wp, wm):
        for sign, wt in ((1.0, a), (-1.0, b)):
            for i, part in enumerate(tab.parts):
                _kernels.translate_points(part, tab.inv_h, rule.u, rule.theta_weights,
                                          sign * zk, ys, tab.support, buf)
                acc += (wt * buf) if i == 0 else (1j * wt * buf)
    return acc


def taylor_remainder(f: SampledFunction, x: float) -> tuple[SampledFunction, SampledFunction]:
    """Both sides of the Taylor identity: (tau_x f - f, remainder integral)."""
    lhs = translate_angular(f, x) - f
    lam = apply_dunkl_operator(f)
    rhs = theta_average(lam, x) / f.grid.alpha.measure_norm
    return lhs, SampledFunction.auto(f.grid, rhs)


def taylor_remainder_check(f: SampledFunction, x: float) -> float:
    """Sup-norm defect between the two sides of the Taylor identity."""
    lhs, rhs = taylor_remainder(f, x)
    return float(np.max(np.abs(lhs.values - rhs.values)))


@dataclass(frozen=True, eq=False)
class KDecomposition:
    scale_x: float
    p: float
    f0: SampledFunction
    f1_scaled: SampledFunction
    lambda_f1_scaled: SampledFunction
    k_value: float


def k_decomposition(f: SampledFunction, x: float, p: float = 2.0,
                    translate: SampledFunction | None = None) -> KDecomposition:
    """Split f = f0 + f1_scaled at scale x and bound K_p(f, x) from above."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"scale must be positive, got {x}")
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p}")
    g = f.grid
    a = g.alpha
    f1s = SampledFunction.auto(g, theta_average(f, x) * (a.besov_taylor_constant / x))
    f0 = f - f1s
    tx = translate if translate is not None else translate_angular(f, x)
    lam = (tx - f) * (2.0 * (a.alpha + 1.0) / x)
    k = lp_norm(f0, p) + x * lp_norm(lam, p)
    return KDecomposition(x, float(p), f0, f1s, lam, float(k))


def constant_taylor_factor(alpha) -> float:
    """Ratio between Lambda f1_scaled and (tau_x f - f)/x, i.e. 2(a+1)."""
    return 2.0 * (as_alpha(alpha).alpha + 1.0)


__all__ = [
    "apply_dunkl_operator", "theta_weight", "theta_integral", "theta_integral_exact",
    "theta_average", "taylor_remainder", "taylor_remainder_check", "KDecomposition",
    "k_decomposition", "constant_taylor_factor",
]
