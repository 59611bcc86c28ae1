"""Compiled inner loops for the angular translation formula.

A table row i holds (A(r_i), B(r_i)) with A(r) = f(r) + f(-r) and
B(r) = (f(r) - f(-r)) / r on the uniform grid r_i = (i - 1) h.  Row 0 is a
ghost entry for r = -h so that four-point Lagrange stencils work down to
r = 0.  Keeping A and B side by side halves the cache traffic.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _integrand(tab, inv_h, r, xy):
    """A(r) + xy B(r) by cubic Lagrange interpolation; 0 past the table."""
    s = r * inv_h
    i = int(s)
    if i + 3 >= tab.shape[0]:
        return 0.0
    t = s - i
    # stencil r_{i-1}..r_{i+2} sits at rows i..i+3
    tm1 = t - 1.0
    tm2 = t - 2.0
    tp1 = t + 1.0
    c0 = -t * tm1 * tm2 / 6.0
    c1 = tp1 * tm1 * tm2 / 2.0
    c2 = -tp1 * t * tm2 / 2.0
    c3 = tp1 * t * tm1 / 6.0
    a = c0 * tab[i, 0] + c1 * tab[i + 1, 0] + c2 * tab[i + 2, 0] + c3 * tab[i + 3, 0]
    b = c0 * tab[i, 1] + c1 * tab[i + 1, 1] + c2 * tab[i + 2, 1] + c3 * tab[i + 3, 1]
    return a + xy * b


@njit(cache=True)
def translate_points(tab, inv_h, u, w, x, ys, support, out):
    """out[j] = sum_k w_k [A(rho) + (x + y_j) B(rho)], rho^2 = x^2 + y_j^2 - 2 x y_j u_k.

    A and B vanish for rho > support, which prunes whole rows and terms.
    """
    s2 = support * support
    ax = abs(x)
    for j in range(ys.size):
        y = ys[j]
        if abs(ax - abs(y)) > support:
            out[j] = 0.0
            continue
        base = x * x + y * y
        cross = 2.0 * x * y
        acc = 0.0
        for k in range(u.size):
            r2 = base - cross * u[k]
            if r2 > s2:
                continue
            r = math.sqrt(r2) if r2 > 0.0 else 0.0
            acc += w[k] * _integrand(tab, inv_h, r, x + y)
        out[j] = acc


@njit(cache=True)
def convolve_points(tab, inv_h, u, w, xs, ys, gm, support, out):
    """out[i] = sum_j gm[j] tau_{xs[i]} f (-ys[j]).

    Pairs with ||x| - |y|| > support contribute nothing since every rho
    then exceeds the support radius of f.
    """
    s2 = support * support
    for i in range(xs.size):
        x = xs[i]
        ax = abs(x)
        acc = 0.0
        for j in range(ys.size):
            y = -ys[j]
            if abs(ax - abs(y)) > support:
                continue
            base = x * x + y * y
            cross = 2.0 * x * y
            s = 0.0
            for k in range(u.size):
                r2 = base - cross * u[k]
                if r2 > s2:
                    continue
                r = math.sqrt(r2) if r2 > 0.0 else 0.0
                s += w[k] * _integrand(tab, inv_h, r, x + y)
            acc += gm[j] * s
        out[i] = acc


def warmup():
    """Trigger compilation on tiny inputs."""
    tab = np.zeros((8, 2))
    u = np.zeros(2)
    out = np.zeros(1)
    one = np.ones(1)
    translate_points(tab, 1.0, u, u, 0.5, one, 1.0, out)
    convolve_points(tab, 1.0, u, u, one, one, one, 1.0, out)
