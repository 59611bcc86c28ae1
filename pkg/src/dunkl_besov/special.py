"""Gamma function, normalized Bessel functions and the Dunkl kernel.

The normalized Bessel function is

    j_a(z) = Gamma(a + 1) * sum_n (-1)^n (z/2)^(2n) / (n! Gamma(n + a + 1))
           = Gamma(a + 1) (2/z)^a J_a(z),

so that j_a(0) = 1.  Small arguments use the power series directly; larger
arguments go through the Bessel function of the first kind from
``scipy.special`` (Amos' routines), which stays accurate where the series
suffers from cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as _sp

from .errors import DomainError

#: |z| at which evaluation switches from the power series to ``jv``.
SERIES_SWITCH = 8.0
#: Series truncation: stop once the next term is below this fraction of the sum.
SERIES_RTOL = 1e-17
_SERIES_MAX_TERMS = 200


def gamma(x: float) -> float:
    """Gamma function for positive real arguments."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"gamma requires x > 0, got {x}")
    return math.gamma(x)


@dataclass(frozen=True)
class AlphaParameter:
    """The Dunkl index alpha > -1/2 together with its derived constants.

    measure_norm
        1 / (2^(alpha+1) Gamma(alpha+1)), the density constant of mu_alpha.
    c_alpha
        sqrt(pi) Gamma(alpha+1/2) / Gamma(alpha+1) = int_0^pi sin^(2 alpha).
    nu_norm
        Gamma(alpha+1) / (2 sqrt(pi) Gamma(alpha+1/2)), the density constant
        of the angular measure used by the translation formula.
    """

    alpha: float
    measure_norm: float = field(init=False, repr=False)
    c_alpha: float = field(init=False, repr=False)
    nu_norm: float = field(init=False, repr=False)

    def __post_init__(self):
        a = float(self.alpha)
        if not a > -0.5 or not math.isfinite(a):
            raise DomainError(f"alpha must satisfy alpha > -1/2, got {self.alpha}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "measure_norm", 1.0 / (2.0 ** (a + 1.0) * gamma(a + 1.0)))
        object.__setattr__(self, "c_alpha", math.sqrt(math.pi) * gamma(a + 0.5) / gamma(a + 1.0))
        object.__setattr__(self, "nu_norm", gamma(a + 1.0) / (2.0 * math.sqrt(math.pi) * gamma(a + 0.5)))

    @property
    def besov_taylor_constant(self) -> float:
        """2^(alpha+2) Gamma(alpha+2), the normalization of the averaged translate."""
        return 2.0 ** (self.alpha + 2.0) * gamma(self.alpha + 2.0)


def as_alpha(alpha) -> AlphaParameter:
    if isinstance(alpha, AlphaParameter):
        return alpha
    return AlphaParameter(alpha)


def _series(a: float, z: np.ndarray) -> np.ndarray:
    q = -0.25 * z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for n in range(1, _SERIES_MAX_TERMS):
        term = term * q / (n * (n + a))
        total = total + term
        if np.all(np.abs(term) <= SERIES_RTOL * np.abs(total)):
            break
    return total


def _large(a: float, z: np.ndarray) -> np.ndarray:
    return math.gamma(a + 1.0) * (2.0 / z) ** a * _sp.jv(a, z)


def bessel_j_normalized(alpha: float, z):
    """Normalized Bessel function j_alpha(z), even in z, j_alpha(0) = 1.

    Accepts scalars or arrays; returns the same shape.
    """
    a = float(alpha)
    if a < -0.5:
        raise DomainError(f"bessel_j_normalized requires alpha >= -1/2, got {alpha}")
    zz = np.abs(np.asarray(z, dtype=float))
    out = np.empty_like(zz)
    small = zz <= SERIES_SWITCH
    if np.any(small):
        out[small] = _series(a, zz[small])
    if not np.all(small):
        big = ~small
        out[big] = _large(a, zz[big])
    if np.ndim(z) == 0:
        return float(out)
    return out


def bessel_j_series(alpha: float, z):
    """Power-series branch only (exposed for regime-agreement checks)."""
    zz = np.abs(np.asarray(z, dtype=float))
    out = _series(float(alpha), np.atleast_1d(zz))
    return float(out[0]) if np.ndim(z) == 0 else out.reshape(zz.shape)


def bessel_j_large(alpha: float, z):
    """Large-argument branch only (exposed for regime-agreement checks)."""
    zz = np.abs(np.asarray(z, dtype=float))
    out = _large(float(alpha), np.atleast_1d(zz))
    return float(out[0]) if np.ndim(z) == 0 else out.reshape(zz.shape)


def dunkl_kernel(alpha, x, y):
    """E_alpha(-i x y) = j_alpha(xy) - i xy / (2(alpha+1)) j_{alpha+1}(xy).

    Cartesian complex output; broadcasts over ``x`` and ``y``.
    """
    a = as_alpha(alpha).alpha
    z = np.asarray(x, dtype=float) * np.asarray(y, dtype=float)
    re = bessel_j_normalized(a, z)
    im = -z / (2.0 * (a + 1.0)) * bessel_j_normalized(a + 1.0, z)
    return re + 1j * im


def kernel_blocks(alpha, lam: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Even and odd kernel blocks on nonnegative nodes.

    Returns ``(C, S)`` with C[j, k] = j_alpha(lam_j x_k) and
    S[j, k] = lam_j x_k / (2(alpha+1)) j_{alpha+1}(lam_j x_k), so that
    E_alpha(-i lam x) = C - i S.
    """
    a = as_alpha(alpha).alpha
    z = np.multiply.outer(np.asarray(lam, dtype=float), np.asarray(x, dtype=float))
    flat = z.ravel()
    c = bessel_j_normalized(a, flat).reshape(z.shape)
    s = (flat / (2.0 * (a + 1.0)) * bessel_j_normalized(a + 1.0, flat)).reshape(z.shape)
    return c, s
