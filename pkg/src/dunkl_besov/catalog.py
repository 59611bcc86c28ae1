"""Canonical test functions used by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable
from weakref import WeakValueDictionary

import numpy as np

from .errors import DomainError
from .measure import QuadGrid, SampledFunction
from .transform import bandlimit_project

BAND_LIMIT = 7.0
ABS_EPSILON = 1.0
BUMP_CENTER = 1.0
BUMP_HALF_WIDTH = 8.0
BUMP_SHARPNESS = 6.0


def gaussian(x):
    return np.exp(-0.5 * np.asarray(x, dtype=float) ** 2)


def gaussian_moment(k: int) -> Callable:
    def fn(x):
        x = np.asarray(x, dtype=float)
        return k * x ** k * np.exp(-0.5 * x * x)
    return fn


def bump(x):
    """exp(6 (1 - 1/(1 - u^2))) with u = (x - 1)/8, an off-center compact bump.

    The factor 6 makes the transform decay fast enough for the inversion
    round trip at alpha = 1.5 on the default frequency grid.
    """
    u = (np.asarray(x, dtype=float) - BUMP_CENTER) / BUMP_HALF_WIDTH
    out = np.zeros(u.shape)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(BUMP_SHARPNESS * (1.0 - 1.0 / (1.0 - u[inside] ** 2)))
    return out


def abs_smoothed(eps: float) -> Callable:
    def fn(x):
        x = np.asarray(x, dtype=float)
        return np.sqrt(x * x + eps * eps) * np.exp(-0.5 * x * x)
    return fn


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    generator: str
    parity: str
    smoothness_class: str
    fn: Callable | None = None
    band_limit: float = float("inf")

    def sample(self, grid: QuadGrid) -> SampledFunction:
        if self.fn is not None:
            return SampledFunction.from_callable(grid, self.fn, self.parity)
        return _band_limited(grid, self.band_limit)


_BAND_CACHE: "WeakValueDictionary" = WeakValueDictionary()


def _band_limited(grid: QuadGrid, b: float) -> SampledFunction:
    key = (grid.key, b)
    hit = _BAND_CACHE.get(key)
    if hit is None:
        g = SampledFunction.from_callable(grid, gaussian, "even")
        hit = bandlimit_project(g, b)
        hit = SampledFunction(grid, hit.values.real.copy(), "even")
        _BAND_CACHE[key] = hit
    return hit


CATALOG: dict[str, CatalogEntry] = {e.name: e for e in (
    CatalogEntry("gaussian", "gaussian", "even", "analytic", gaussian),
    CatalogEntry("gaussian_moment_1", "gaussian_moment", "odd", "analytic", gaussian_moment(1)),
    CatalogEntry("gaussian_moment_2", "gaussian_moment", "even", "analytic", gaussian_moment(2)),
    CatalogEntry("bump", "bump", "none", "smooth_compact", bump),
    CatalogEntry(f"band_limited_{BAND_LIMIT:g}", "band_limited", "even", "band_limited",
                 None, BAND_LIMIT),
    CatalogEntry(f"abs_smoothed_{ABS_EPSILON:g}", "abs_smoothed", "even", "mollified_kink",
                 abs_smoothed(ABS_EPSILON)),
)}


def names() -> tuple[str, ...]:
    return tuple(CATALOG)


def entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise DomainError(f"unknown catalog function {name!r}; choose from {', '.join(CATALOG)}")


def sample(name: str, grid: QuadGrid) -> SampledFunction:
    return entry(name).sample(grid)


__all__ = ["CatalogEntry", "CATALOG", "names", "entry", "sample", "gaussian",
           "gaussian_moment", "bump", "abs_smoothed"]
