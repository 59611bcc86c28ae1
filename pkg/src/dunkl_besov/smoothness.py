"""Modulus of smoothness, K-functional surrogate, best approximation, mollifier."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .measure import QuadGrid, SampledFunction, build_grid, integrate, lp_norm
from .operator import k_decomposition, theta_average
from .special import as_alpha, kernel_blocks
from .transform import Spectrum, forward_transform, spectral_filter, spectral_tail_norm
from .translation import AngularRule, translate_angular

T_SAMPLES = 16
MOLLIFIER_RADIUS = 800.0
MOLLIFIER_PANEL = 8.0
MOLLIFIER_FREQ_NODES = 512


@dataclass(frozen=True)
class ScaleSet:
    """Scales x at which the functionals are sampled."""

    scales: tuple
    t_samples_per_scale: int = T_SAMPLES

    def __post_init__(self):
        s = tuple(float(v) for v in self.scales)
        if not s:
            raise DomainError("a scale set needs at least one scale")
        if any(v <= 0 for v in s) or any(b <= a for a, b in zip(s, s[1:])):
            raise DomainError("scales must be positive and strictly increasing")
        if self.t_samples_per_scale < 8:
            raise DomainError("t_samples_per_scale must be at least 8")
        object.__setattr__(self, "scales", s)

    @classmethod
    def dyadic(cls, lo: int = -6, hi: int = 4, m: int = T_SAMPLES) -> "ScaleSet":
        return cls(tuple(2.0 ** k for k in range(lo, hi + 1)), m)

    @classmethod
    def log_spaced(cls, lo: float, hi: float, n: int, m: int = T_SAMPLES) -> "ScaleSet":
        return cls(tuple(np.exp(np.linspace(math.log(lo), math.log(hi), n))), m)

    def t_samples(self, x: float) -> np.ndarray:
        k = np.arange(1, self.t_samples_per_scale + 1)
        t = x * k / self.t_samples_per_scale
        return np.concatenate([-t[::-1], t])

    def __len__(self):
        return len(self.scales)


class TranslationFamily:
    """Memoized differences tau_t f - f and their norms."""

    def __init__(self, f: SampledFunction, rule: AngularRule | None = None):
        self.f = f
        self.rule = rule
        self._diff: dict[float, SampledFunction] = {}
        self._norm: dict[tuple[float, float], float] = {}

    def translate(self, t: float) -> SampledFunction:
        return self.difference(t) + self.f

    def difference(self, t: float) -> SampledFunction:
        t = float(t)
        d = self._diff.get(t)
        if d is None:
            d = translate_angular(self.f, t, self.rule) - self.f
            self._diff[t] = d
        return d

    def norm(self, t: float, p: float) -> float:
        key = (float(t), float(p))
        v = self._norm.get(key)
        if v is None:
            v = lp_norm(self.difference(t), p)
            self._norm[key] = v
        return v


def modulus_of_smoothness(f: SampledFunction, x: float, p: float = 2.0,
                          m: int = T_SAMPLES, family: TranslationFamily | None = None) -> float:
    """max over t in {+-x k/m} of ||tau_t f - f||_p."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p}")
    fam = family or TranslationFamily(f)
    ts = ScaleSet((x,), max(m, 8)).t_samples(x)
    return max(fam.norm(t, p) for t in ts)


def modulus_profile(f: SampledFunction, scales: ScaleSet, p: float = 2.0,
                    family: TranslationFamily | None = None) -> np.ndarray:
    """w(f, x) on a scale set; a running maximum keeps it nondecreasing."""
    fam = family or TranslationFamily(f)
    raw = np.array([modulus_of_smoothness(f, x, p, scales.t_samples_per_scale, fam)
                    for x in scales.scales])
    return np.maximum.accumulate(raw)


def k_functional_estimate(f: SampledFunction, x: float, p: float = 2.0) -> float:
    """Upper bound for K_p(f, x) from the explicit decomposition.

    The split at x and the split of the reflected function are both
    admissible; the smaller bound is kept, which makes the estimate
    invariant under f(x) -> f(-x).
    """
    k = k_decomposition(f, x, p).k_value
    if f.parity == "none":
        k = min(k, k_decomposition(f.reflect(), x, p).k_value)
    return k


def k_profile(f: SampledFunction, scales: ScaleSet, ps=(2.0,),
              family: TranslationFamily | None = None) -> dict[float, np.ndarray]:
    """k_functional_estimate at every scale for several p, sharing translations."""
    fam = family or TranslationFamily(f)
    g = f.grid
    a = g.alpha
    out = {float(p): np.full(len(scales), np.inf) for p in ps}
    # reflected split: tau_x(f(-.)) = (tau_{-x} f)(-.), already in the family
    sides = [(f, 1.0)] + ([(f.reflect(), -1.0)] if f.parity == "none" else [])
    for h, sign in sides:
        for i, x in enumerate(scales.scales):
            f1s = SampledFunction.auto(g, theta_average(h, x, rule=fam.rule) * (a.besov_taylor_constant / x))
            f0 = h - f1s
            lam = fam.difference(sign * x) * (2.0 * (a.alpha + 1.0) / x)
            for p in out:
                out[p][i] = min(out[p][i], lp_norm(f0, p) + x * lp_norm(lam, p))
    return out


# -- mollifier -----------------------------------------------------------------

def eta(lam):
    """exp(1 - 1/(1 - lam^2)) on (-1, 1), zero elsewhere; eta(0) = 1."""
    lam = np.asarray(lam, dtype=float)
    out = np.zeros(lam.shape)
    inside = np.abs(lam) < 1.0
    li = lam[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - li * li))
    return out


@dataclass(frozen=True, eq=False)
class Mollifier:
    """Band-limited phi with F phi = eta, sampled on a wide grid."""

    phi: SampledFunction
    freq_profile: Spectrum
    total_mass: float
    leakage: float = field(default=0.0)

    @property
    def alpha(self):
        return self.phi.grid.alpha


def _eta_rule(alpha: float, t: float, xmax: float):
    """Positive frequency nodes on [0, t] and mu-weights times eta(lam/t).

    Panels are narrow enough that j_alpha(lam x) is resolved up to |x| = xmax.
    """
    panels = max(4, int(math.ceil(t * xmax / 12.0)))
    grid = build_grid(alpha, t, 64 * panels)
    lam = grid.positive_nodes
    return lam, grid.mu_weights[grid.half:] * eta(lam / t)


def _phi_values(alpha: float, t: float, x: np.ndarray) -> np.ndarray:
    """Inverse transform of eta(lam/t), an even function, at points x."""
    pos = np.abs(np.asarray(x, dtype=float))
    lam, m = _eta_rule(alpha, t, float(pos.max(initial=1.0)))
    out = np.empty(pos.size)
    step = 1024
    for lo in range(0, pos.size, step):
        c, _ = kernel_blocks(alpha, lam, pos[lo:lo + step])
        out[lo:lo + step] = 2.0 * (m @ c)
    return out


def make_mollifier(alpha, grids: tuple[QuadGrid, QuadGrid] | None = None) -> Mollifier:
    """phi with F phi = eta, mass 1 and spectrum supported in [-1, 1].

    phi decays only like exp(-c sqrt|x|) while the weight grows like
    |x|^(2a+1), so by default it lives on a grid of radius
    800 max(1, a + 1/2); ``grids`` = (space_grid, freq_grid) overrides this.
    """
    a = as_alpha(alpha)
    if grids is None:
        radius = MOLLIFIER_RADIUS * max(1.0, a.alpha + 0.5)
        n = 64 * int(math.ceil(radius / MOLLIFIER_PANEL))
        space = build_grid(a, radius, n)
        freq = build_grid(a, 2.0, MOLLIFIER_FREQ_NODES)
    else:
        space, freq = grids
    profile = Spectrum(freq, eta(freq.nodes), 1.0)
    phi = SampledFunction(space, _phi_values(a.alpha, 1.0, space.nodes), "even")
    mass = float(integrate(phi))
    leak_spec = forward_transform(phi, freq)
    scale = np.max(np.abs(leak_spec.values))
    leak = float(np.max(np.abs(leak_spec.values[np.abs(freq.nodes) > 1.0]), initial=0.0) / scale)
    return Mollifier(phi, profile, mass, leak)


def dilate_mollifier(m: Mollifier, t: float, grid: QuadGrid | None = None) -> SampledFunction:
    """phi_{1/t}(x) = t^(2a+2) phi(t x), computed as the inverse transform of eta(lam/t)."""
    t = float(t)
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    g = m.phi.grid if grid is None else grid
    if g.alpha.alpha != m.alpha.alpha:
        raise DomainError("grid and mollifier carry different alpha")
    if t == 1.0 and g is m.phi.grid:
        return m.phi
    return SampledFunction(g, _phi_values(g.alpha.alpha, t, g.nodes), "even")


def mollify(f: SampledFunction, t: float, spectrum: Spectrum | None = None) -> SampledFunction:
    """f * phi_{1/t}, through F(f * phi_{1/t}) = F f . eta(lam / t)."""
    return spectral_filter(f, t, eta, spectrum=spectrum)


def mollifier_defect(f: SampledFunction, t: float, p: float = 2.0,
                     spectrum: Spectrum | None = None) -> float:
    """||f - f * phi_{1/t}||_p."""
    return lp_norm(f - mollify(f, t, spectrum), p)


# -- best approximation --------------------------------------------------------

@dataclass(frozen=True)
class BestApprox:
    value: float
    exact: bool
    projection: float
    mollified: float


def best_approx_detail(f: SampledFunction, x: float, p: float = 2.0,
                       spectrum: Spectrum | None = None) -> BestApprox:
    x = float(x)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    if not p >= 1:
        raise DomainError(f"p must be >= 1, got {p}")
    spec = spectrum if spectrum is not None else forward_transform(f)
    if p == 2.0:
        v = spectral_tail_norm(f, x, spectrum=spec)
        return BestApprox(v, True, v, math.nan)
    proj = lp_norm(f - spectral_filter(f, x, None, spectrum=spec), p)
    moll = lp_norm(f - spectral_filter(f, x, eta, spectrum=spec), p)
    return BestApprox(min(proj, moll), False, proj, moll)


def best_approx(f: SampledFunction, x: float, p: float = 2.0,
                spectrum: Spectrum | None = None) -> float:
    """E_p(f, x): exact for p = 2, an upper bound otherwise."""
    return best_approx_detail(f, x, p, spectrum).value


__all__ = [
    "ScaleSet", "TranslationFamily", "modulus_of_smoothness", "modulus_profile",
    "k_functional_estimate", "k_profile", "eta", "Mollifier", "make_mollifier",
    "dilate_mollifier", "mollify", "mollifier_defect", "BestApprox", "best_approx_detail",
    "best_approx",
]
