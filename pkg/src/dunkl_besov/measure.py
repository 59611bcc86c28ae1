"""Sample grids, sampled functions and mu_alpha-weighted integration.

A :class:`QuadGrid` is a composite Gauss-Legendre rule on [-R, R], symmetric
about the origin, with a panel boundary at 0.  The two panels adjacent to the
origin use the substitution x = h s^2, which turns the weight |x|^(2a+1) into
a polynomial factor in s for the half-integer and integer steps of 2a used in
practice and keeps quadrature spectrally accurate for a < 0 as well.

Stored weights are plain Lebesgue weights; the mu_alpha density is applied
when integrating.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import DomainError
from .special import AlphaParameter, as_alpha

PANEL_ORDER = 32
PARITY_RTOL = 1e-9
PARITIES = ("even", "odd", "none")
_CHUNK = 1 << 15


def _legendre(order: int):
    t, w = np.polynomial.legendre.leggauss(order)
    # barycentric weights for Gauss-Legendre nodes
    bary = np.sqrt((1.0 - t * t) * w) * (-1.0) ** np.arange(order)
    diff = t[:, None] - t[None, :]
    np.fill_diagonal(diff, 1.0)
    dmat = (bary[None, :] / bary[:, None]) / diff
    np.fill_diagonal(dmat, 0.0)
    np.fill_diagonal(dmat, -dmat.sum(axis=1))
    return t, w, bary, dmat


@dataclass(frozen=True, eq=False)
class QuadGrid:
    """Symmetric composite Gauss-Legendre grid carrying an alpha.

    ``edges`` are the panel edges on [0, R]; the first panel is mapped.
    """

    alpha: AlphaParameter
    radius: float
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    edges: np.ndarray = field(repr=False)

    def __post_init__(self):
        x = self.nodes
        if x.size < 16:
            raise DomainError("a grid needs at least 16 nodes")
        if np.any(np.diff(x) <= 0):
            raise DomainError("grid nodes must be strictly increasing")
        if not np.array_equal(x, -x[::-1]):
            raise DomainError("grid nodes must be symmetric about 0")
        if np.any(self.weights <= 0):
            raise DomainError("grid weights must be positive")
        x.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def half(self) -> int:
        return self.nodes.size // 2

    @property
    def positive_nodes(self) -> np.ndarray:
        return self.nodes[self.half:]

    @cached_property
    def mu_weights(self) -> np.ndarray:
        """Quadrature weights of mu_alpha: w_i |x_i|^(2a+1) / (2^(a+1) Gamma(a+1))."""
        a = self.alpha
        m = self.weights * np.abs(self.nodes) ** (2.0 * a.alpha + 1.0) * a.measure_norm
        m.setflags(write=False)
        return m

    @cached_property
    def key(self) -> tuple:
        return (self.alpha.alpha, self.radius, self.n, self.order)

    @cached_property
    def _ref(self):
        return _legendre(self.order)

    def describe(self) -> dict:
        return {"alpha": self.alpha.alpha, "radius": self.radius, "n": self.n,
                "panel_order": self.order, "panels_per_side": len(self.edges) - 1}

    # -- panel geometry -------------------------------------------------
    def _locate(self, r: np.ndarray):
        """Panel index and reference coordinate t in [-1, 1] for 0 <= r <= R."""
        npan = len(self.edges) - 1
        width = self.radius / npan
        p = np.minimum((r / width).astype(np.int64), npan - 1)
        a = p * width
        t = np.where(p == 0, 2.0 * np.sqrt(np.clip(r / width, 0.0, 1.0)) - 1.0,
                     2.0 * (r - a) / width - 1.0)
        return p, np.clip(t, -1.0, 1.0)

    def _jacobian(self) -> np.ndarray:
        """dx/dt at each positive node (panel-major order)."""
        t = self._ref[0]
        npan = len(self.edges) - 1
        width = self.radius / npan
        jac = np.full((npan, self.order), 0.5 * width)
        jac[0] = width * 0.5 * (t + 1.0)
        return jac.ravel()


def build_grid(alpha, radius: float = 20.0, n: int = 2048) -> QuadGrid:
    """Composite Gauss-Legendre grid on [-radius, radius] with ``n`` nodes.

    Panels hold ``min(32, n/2)`` points; ``n/2`` must be a multiple of that.
    """
    a = as_alpha(alpha)
    n = int(n)
    radius = float(radius)
    if n < 16 or n % 2:
        raise DomainError(f"node count must be even and >= 16, got {n}")
    if not radius > 0 or not math.isfinite(radius):
        raise DomainError(f"radius must be positive, got {radius}")
    half = n // 2
    order = min(PANEL_ORDER, half)
    if half % order:
        raise DomainError(f"n/2 = {half} is not a multiple of the panel order {order}")
    npan = half // order
    width = radius / npan
    t, w, _, _ = _legendre(order)
    edges = np.linspace(0.0, radius, npan + 1)
    xs, ws = [], []
    s = 0.5 * (t + 1.0)
    xs.append(width * s * s)
    ws.append(width * s * w)
    for p in range(1, npan):
        lo = edges[p]
        xs.append(lo + 0.5 * width * (t + 1.0))
        ws.append(0.5 * width * w)
    pos = np.concatenate(xs)
    wpos = np.concatenate(ws)
    nodes = np.concatenate([-pos[::-1], pos])
    weights = np.concatenate([wpos[::-1], wpos])
    return QuadGrid(a, radius, nodes, weights, order, edges)


def detect_parity(values: np.ndarray, rtol: float = PARITY_RTOL) -> str:
    scale = np.max(np.abs(values)) if values.size else 0.0
    if scale == 0.0:
        return "even"
    flipped = values[::-1]
    if np.max(np.abs(values - flipped)) <= rtol * scale:
        return "even"
    if np.max(np.abs(values + flipped)) <= rtol * scale:
        return "odd"
    return "none"


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a function at the nodes of a :class:`QuadGrid`."""

    grid: QuadGrid
    values: np.ndarray
    parity: str = "none"

    def __post_init__(self):
        v = np.asarray(self.values)
        if not np.iscomplexobj(v):
            v = v.astype(float)
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if v.shape != self.grid.nodes.shape:
            raise DomainError(f"expected {self.grid.n} values, got shape {v.shape}")
        if self.parity not in PARITIES:
            raise DomainError(f"parity must be one of {PARITIES}")
        scale = np.max(np.abs(v))
        if self.parity == "even" and np.max(np.abs(v - v[::-1])) > PARITY_RTOL * scale:
            raise DomainError("values declared even are not even")
        if self.parity == "odd" and np.max(np.abs(v + v[::-1])) > PARITY_RTOL * scale:
            raise DomainError("values declared odd are not odd")

    @classmethod
    def from_callable(cls, grid: QuadGrid, func, parity: str | None = None) -> "SampledFunction":
        vals = np.asarray(func(grid.nodes))
        if parity is None:
            parity = detect_parity(vals)
        return cls(grid, vals, parity)

    @classmethod
    def auto(cls, grid: QuadGrid, values) -> "SampledFunction":
        values = np.asarray(values)
        return cls(grid, values, detect_parity(values))

    # -- algebra --------------------------------------------------------
    def _combine(self, other, op):
        if isinstance(other, SampledFunction):
            if other.grid is not self.grid:
                raise DomainError("functions live on different grids")
            return SampledFunction.auto(self.grid, op(self.values, other.values))
        return SampledFunction.auto(self.grid, op(self.values, other))

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return SampledFunction(self.grid, -self.values, self.parity)

    def reflect(self) -> "SampledFunction":
        """x -> f(-x)."""
        return SampledFunction(self.grid, self.values[::-1], self.parity)

    def even_part(self) -> "SampledFunction":
        return SampledFunction(self.grid, 0.5 * (self.values + self.values[::-1]), "even")

    def odd_part(self) -> "SampledFunction":
        return SampledFunction(self.grid, 0.5 * (self.values - self.values[::-1]), "odd")

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def real(self) -> "SampledFunction":
        return SampledFunction.auto(self.grid, self.values.real)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    @cached_property
    def constant_value(self):
        """The common value if f is constant (to rounding), else None.

        Constants are the one class extended by their value rather than by 0
        beyond [-R, R], so that translations of constants stay exact.
        """
        v = self.values
        c = v[0]
        if np.max(np.abs(v - c)) <= 1e-14 * max(abs(c), 1e-300):
            return c
        return None

    # -- off-grid evaluation -------------------------------------------
    @cached_property
    def _panels(self) -> tuple[np.ndarray, np.ndarray]:
        """Panel-major value blocks for the positive and the negative side."""
        g = self.grid
        h = g.half
        pos = self.values[h:].reshape(-1, g.order)
        neg = self.values[:h][::-1].reshape(-1, g.order)
        # within a panel the reference nodes ascend in |x|
        return pos, neg

    def evaluate(self, points) -> np.ndarray:
        """Panel-wise barycentric interpolation; zero outside [-R, R].

        Constant functions are extended by their value instead.
        """
        pts = np.asarray(points, dtype=float)
        flat = pts.ravel()
        out = np.zeros(flat.shape, dtype=self.values.dtype)
        if self.constant_value is not None:
            out[:] = self.constant_value
            return out.reshape(pts.shape)
        r = np.abs(flat)
        inside = r <= self.grid.radius
        idx = np.flatnonzero(inside)
        for lo in range(0, idx.size, _CHUNK):
            sel = idx[lo:lo + _CHUNK]
            out[sel] = self._interp(flat[sel])
        return out.reshape(pts.shape)

    def _interp(self, x: np.ndarray) -> np.ndarray:
        g = self.grid
        t_ref, _, bary, _ = g._ref
        p, t = g._locate(np.abs(x))
        pos, neg = self._panels
        blocks = np.where((x >= 0)[:, None], pos[p], neg[p])
        diff = t[:, None] - t_ref[None, :]
        exact = diff == 0.0
        diff[exact] = 1.0
        c = bary[None, :] / diff
        val = (c * blocks).sum(axis=1) / c.sum(axis=1)
        hit = exact.any(axis=1)
        if np.any(hit):
            val[hit] = blocks[hit][exact[hit]]
        return val

    def derivative(self) -> "SampledFunction":
        """d/dx by panel-wise spectral differentiation."""
        g = self.grid
        dmat = g._ref[3]
        jac = g._jacobian()
        pos, neg = self._panels
        dpos = (pos @ dmat.T).ravel() / jac
        parity = {"even": "odd", "odd": "even"}.get(self.parity, "none")
        if parity == "odd":
            dneg = -dpos
        elif parity == "even":
            dneg = dpos
        else:
            # on the negative side the reference variable runs towards -x
            dneg = -(np.ascontiguousarray(neg) @ dmat.T).ravel() / jac
        vals = np.concatenate([dneg[::-1], dpos])
        return SampledFunction(g, vals, parity) if parity != "none" else SampledFunction.auto(g, vals)

    # -- export ---------------------------------------------------------
    def to_json(self, path=None, extra: dict | None = None, xname: str = "nodes") -> str:
        v = np.asarray(self.values, dtype=complex)
        doc = {"alpha": self.grid.alpha.alpha, "radius": self.grid.radius,
               xname: self.grid.nodes.tolist(),
               "values": [[float(z.real), float(z.imag)] for z in v]}
        if extra:
            doc.update(extra)
        text = json.dumps(doc)
        if path is not None:
            Path(path).write_text(text)
        return text

    def to_csv(self, path, xname: str = "x", extra_column: tuple[str, float] | None = None) -> None:
        v = np.asarray(self.values, dtype=complex)
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            header = [xname, "re", "im"]
            if extra_column:
                header.append(extra_column[0])
            wr.writerow(header)
            for x, z in zip(self.grid.nodes, v):
                row = [repr(float(x)), repr(float(z.real)), repr(float(z.imag))]
                if extra_column:
                    row.append(repr(float(extra_column[1])))
                wr.writerow(row)


def _values_from_pairs(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    vals = arr[:, 0] + 1j * arr[:, 1]
    if np.all(arr[:, 1] == 0.0):
        return vals.real.copy()
    return vals


def _match_grid(alpha, radius, nodes) -> QuadGrid:
    grid = build_grid(alpha, radius, len(nodes))
    if np.max(np.abs(grid.nodes - np.asarray(nodes, dtype=float))) > 1e-12 * max(radius, 1.0):
        raise DomainError("stored nodes do not match a standard grid of this radius and size")
    return grid


def function_from_json(source, xname: str = "nodes") -> tuple[SampledFunction, dict]:
    """Load a sampled function written by :meth:`SampledFunction.to_json`."""
    text = Path(source).read_text() if not str(source).lstrip().startswith("{") else str(source)
    doc = json.loads(text)
    grid = _match_grid(doc["alpha"], doc["radius"], doc[xname])
    return SampledFunction.auto(grid, _values_from_pairs(doc["values"])), doc


def function_from_csv(path, alpha=None, radius=None, grid: QuadGrid | None = None,
                      xname: str = "x") -> SampledFunction:
    """Load ``x,re,im`` rows; the grid is rebuilt from ``alpha``/``radius`` if not given."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    xs = [float(r[xname]) for r in rows]
    vals = _values_from_pairs([[float(r["re"]), float(r["im"])] for r in rows])
    if grid is None:
        if alpha is None or radius is None:
            raise DomainError("either a grid or alpha and radius are required to read CSV")
        grid = _match_grid(alpha, radius, xs)
    elif np.max(np.abs(grid.nodes - np.asarray(xs))) > 1e-12 * max(grid.radius, 1.0):
        raise DomainError("CSV nodes do not match the given grid")
    return SampledFunction.auto(grid, vals)


def integrate(f: SampledFunction):
    """Integral of ``f`` against mu_alpha over [-R, R]."""
    total = np.dot(f.values, f.grid.mu_weights)
    return complex(total) if np.iscomplexobj(total) else float(total)


def lp_norm(f: SampledFunction, p: float = 2.0) -> float:
    """(int |f|^p dmu_alpha)^(1/p) for 1 <= p < inf."""
    p = float(p)
    if not p >= 1.0:
        raise DomainError(f"lp_norm requires p >= 1, got {p}")
    if not math.isfinite(p):
        raise DomainError("p = inf is not supported")
    a = np.abs(f.values)
    scale = a.max()
    if scale == 0.0:
        return 0.0
    # rescale before powering to avoid under/overflow
    s = float(np.dot((a / scale) ** p, f.grid.mu_weights))
    return scale * s ** (1.0 / p)


def segment_rule(grid: QuadGrid, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and Lebesgue weights for [a, b] with 0 <= a < b <= R.

    Panels of ``grid`` lying inside [a, b] keep their own nodes; panels cut by
    an endpoint get a fresh Gauss-Legendre rule of the same order on the cut
    piece, in the square-root variable on the innermost panel.  Values at the
    new nodes are meant to be obtained by :meth:`SampledFunction.evaluate`.
    """
    a = max(float(a), 0.0)
    b = min(float(b), grid.radius)
    if not b > a:
        return np.empty(0), np.empty(0)
    t, w = grid._ref[:2]
    npan = len(grid.edges) - 1
    width = grid.radius / npan
    pos = grid.positive_nodes.reshape(npan, grid.order)
    wpos = grid.weights[grid.half:].reshape(npan, grid.order)
    xs, ws = [], []
    for p in range(npan):
        lo, hi = grid.edges[p], grid.edges[p + 1]
        if hi <= a or lo >= b:
            continue
        if lo >= a and hi <= b:
            xs.append(pos[p])
            ws.append(wpos[p])
            continue
        u, v = max(lo, a), min(hi, b)
        if p == 0:
            su, sv = math.sqrt(u / width), math.sqrt(v / width)
            s = su + 0.5 * (sv - su) * (t + 1.0)
            xs.append(width * s * s)
            ws.append(2.0 * width * s * 0.5 * (sv - su) * w)
        else:
            xs.append(u + 0.5 * (v - u) * (t + 1.0))
            ws.append(0.5 * (v - u) * w)
    return np.concatenate(xs), np.concatenate(ws)
