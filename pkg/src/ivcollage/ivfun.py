"""Continuous interval-valued functions on [a, b] and [a, b]^2.

A function is held as its pair of endpoint functions, either as vectorized
callables (``analytic``) or as node values with piecewise-(bi)linear
interpolation (``grid``).  The sup-metric ``H`` is approximated by a max over
an :class:`EvalGrid`; when the grid contains every node of two grid
functions the max is the exact sup.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate as _spi

from .interval import Interval, ValidityError

DEFAULT_EVAL_POINTS = 1025
QUAD_TOL = 1e-12


class DomainError(ValueError):
    """Raised when a point lies outside the domain of a function."""


def dyadic_nodes(level: int, domain=(0.0, 1.0)) -> np.ndarray:
    """Sorted dyadic nodes ``a + (b - a) j / 2**level``, ``j = 0..2**level``."""
    if level < 0:
        raise ValueError(f"level must be nonnegative, got {level}")
    a, b = domain
    m = 2**level
    return a + (b - a) * (np.arange(m + 1) / m)


def dyadic_level(nodes, domain) -> int | None:
    """Return ``k`` if ``nodes`` are the level-``k`` dyadic nodes of ``domain``."""
    q = len(nodes)
    k = int(round(math.log2(q - 1))) if q >= 2 else -1
    if k < 0 or 2**k + 1 != q:
        return None
    if np.allclose(nodes, dyadic_nodes(k, domain), rtol=0, atol=1e-13 * (domain[1] - domain[0])):
        return k
    return None


def _check_domain(domain) -> tuple[float, float]:
    a, b = float(domain[0]), float(domain[1])
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise ValueError(f"domain must satisfy a < b, got ({a}, {b})")
    return a, b


def _check_valid(lo, hi, where):
    bad = np.flatnonzero(np.asarray(lo > hi).ravel())
    if bad.size:
        i = bad[0]
        raise ValidityError(
            f"lower endpoint exceeds upper endpoint at {float(np.ravel(where)[i])!r}: "
            f"{float(np.ravel(lo)[i])!r} > {float(np.ravel(hi)[i])!r}"
        )


def pl_integral(x: np.ndarray, y: np.ndarray, t0: float, t1: float) -> float:
    """Exact integral over [t0, t1] of the piecewise-linear interpolant of (x, y)."""
    if t0 > t1:
        raise ValueError(f"integration bounds reversed: {t0} > {t1}")
    if t0 == t1:
        return 0.0
    i0 = int(np.searchsorted(x, t0, side="right"))
    i1 = int(np.searchsorted(x, t1, side="left"))
    xs = np.concatenate(([t0], x[i0:i1], [t1]))
    ys = np.interp(xs, x, y)
    return float(np.sum(0.5 * (ys[1:] + ys[:-1]) * np.diff(xs)))


@dataclass(frozen=True)
class EvalGrid:
    """Strictly increasing evaluation points covering a domain, ends included."""

    points: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        if p.ndim != 1 or p.size < 2:
            raise ValueError("an evaluation grid needs at least two points")
        if np.any(np.diff(p) <= 0):
            raise ValueError("evaluation points must be strictly increasing")
        object.__setattr__(self, "points", p)

    @classmethod
    def uniform(cls, domain, size: int = DEFAULT_EVAL_POINTS) -> EvalGrid:
        a, b = _check_domain(domain)
        if size < 2:
            raise ValueError(f"size must be at least 2, got {size}")
        return cls(a + (b - a) * (np.arange(size) / (size - 1)))

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.points[0]), float(self.points[-1])

    def __len__(self):
        return self.points.size


class IvFun1D:
    """Interval-valued function ``t -> [lower(t), upper(t)]`` on ``[a, b]``.

    Use :meth:`from_callables` or :meth:`from_grid` to build one.
    """

    def __init__(self, domain, kind, lower, upper, nodes=None):
        self.domain = _check_domain(domain)
        self.kind = kind
        self._lower = lower
        self._upper = upper
        self._nodes = nodes

    @classmethod
    def from_callables(cls, lower: Callable, upper: Callable, domain=(0.0, 1.0),
                       check_points: int = 129) -> IvFun1D:
        """Wrap vectorized endpoint callables; validity is checked on a uniform sample."""
        f = cls(domain, "analytic", lower, upper)
        if check_points:
            f.endpoints(EvalGrid.uniform(f.domain, check_points).points)
        return f

    @classmethod
    def from_grid(cls, nodes, lower, upper) -> IvFun1D:
        nodes = np.array(nodes, dtype=float)
        lower = np.array(lower, dtype=float)
        upper = np.array(upper, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2 or lower.shape != nodes.shape or upper.shape != nodes.shape:
            raise ValueError("nodes, lower and upper must be 1-D arrays of equal length >= 2")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("grid nodes must be strictly increasing")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("grid values must be finite")
        _check_valid(lower, upper, nodes)
        for arr in (nodes, lower, upper):
            arr.setflags(write=False)
        return cls((nodes[0], nodes[-1]), "grid", lower, upper, nodes)

    @classmethod
    def constant(cls, value: Interval, domain=(0.0, 1.0)) -> IvFun1D:
        a, b = _check_domain(domain)
        return cls.from_grid([a, b], [value.lo] * 2, [value.hi] * 2)

    @property
    def is_grid(self) -> bool:
        return self.kind == "grid"

    @property
    def nodes(self) -> np.ndarray:
        self._require_grid()
        return self._nodes

    @property
    def lower_values(self) -> np.ndarray:
        self._require_grid()
        return self._lower

    @property
    def upper_values(self) -> np.ndarray:
        self._require_grid()
        return self._upper

    @property
    def level(self) -> int | None:
        """Dyadic level of the grid nodes, or None if they are not dyadic."""
        self._require_grid()
        return dyadic_level(self._nodes, self.domain)

    def _require_grid(self):
        if not self.is_grid:
            raise TypeError("operation requires a grid representation")

    def _check_points(self, t):
        t = np.asarray(t, dtype=float)
        a, b = self.domain
        outside = (t < a) | (t > b)
        if np.any(outside):
            raise DomainError(f"point {float(t[outside].ravel()[0])!r} outside domain [{a}, {b}]")
        return t

    def endpoints(self, t):
        """Return ``(lower, upper)`` arrays at ``t`` after checking validity."""
        t = self._check_points(t)
        if self.is_grid:
            lo = np.interp(t, self._nodes, self._lower)
            hi = np.interp(t, self._nodes, self._upper)
        else:
            lo = np.broadcast_to(np.asarray(self._lower(t), dtype=float), t.shape)
            hi = np.broadcast_to(np.asarray(self._upper(t), dtype=float), t.shape)
            _check_valid(lo, hi, t)
        return lo, hi

    def __call__(self, t: float) -> Interval:
        lo, hi = self.endpoints(t)
        return Interval(float(lo), float(hi))

    def sample(self, nodes) -> IvFun1D:
        """Convert to a grid function with the given nodes."""
        nodes = np.asarray(nodes, dtype=float)
        lo, hi = self.endpoints(nodes)
        return IvFun1D.from_grid(nodes, lo, hi)

    def __add__(self, other: IvFun1D) -> IvFun1D:
        if not isinstance(other, IvFun1D):
            return NotImplemented
        _same_domain(self, other)
        if self.is_grid and other.is_grid and np.array_equal(self._nodes, other._nodes):
            return IvFun1D.from_grid(self._nodes, self._lower + other._lower, self._upper + other._upper)
        return IvFun1D(self.domain, "analytic",
                       lambda t: self.endpoints(t)[0] + other.endpoints(t)[0],
                       lambda t: self.endpoints(t)[1] + other.endpoints(t)[1])

    def __repr__(self):
        if self.is_grid:
            return f"IvFun1D(grid, domain={self.domain}, q={self._nodes.size})"
        return f"IvFun1D(analytic, domain={self.domain})"


def _same_domain(f, h):
    if not np.allclose(f.domain, h.domain, rtol=0, atol=1e-14):
        raise ValueError(f"domain mismatch: {f.domain} vs {h.domain}")


def evaluate(f: IvFun1D, t: float) -> Interval:
    return f(t)


def metric_h(f: IvFun1D, h: IvFun1D, grid: EvalGrid | None = None) -> float:
    """Max over ``grid`` of the pointwise Hausdorff distance between ``f`` and ``h``."""
    _same_domain(f, h)
    if grid is None:
        grid = EvalGrid.uniform(f.domain)
    fl, fu = f.endpoints(grid.points)
    hl, hu = h.endpoints(grid.points)
    return float(max(np.max(np.abs(fl - hl)), np.max(np.abs(fu - hu))))


def integrate(f: IvFun1D, t0: float | None = None, t1: float | None = None) -> Interval:
    """Endpoint-wise integral of ``f`` over ``[t0, t1]`` (defaults to the whole domain)."""
    a, b = f.domain
    t0 = a if t0 is None else float(t0)
    t1 = b if t1 is None else float(t1)
    if t0 > t1:
        raise ValueError(f"integration bounds reversed: {t0} > {t1}")
    f._check_points([t0, t1])
    if t0 == t1:
        return Interval(0.0, 0.0)
    if f.is_grid:
        lo = pl_integral(f._nodes, f._lower, t0, t1)
        hi = pl_integral(f._nodes, f._upper, t0, t1)
    else:
        lo = _spi.quad(lambda s: float(f.endpoints(s)[0]), t0, t1, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)[0]
        hi = _spi.quad(lambda s: float(f.endpoints(s)[1]), t0, t1, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)[0]
    return _quad_interval(lo, hi)


def _quad_interval(lo, hi):
    # separate quadratures of nearly equal endpoints may cross by rounding
    if hi < lo and lo - hi <= 10 * QUAD_TOL:
        hi = lo
    return Interval(lo, hi)


def gh_sub_fun(f: IvFun1D, h: IvFun1D) -> IvFun1D:
    """Pointwise gH-difference ``t -> f(t) (-)gH h(t)``.

    For two grid functions the result is again piecewise linear: the nodes are
    merged and every point where the two endpoint differences cross is added.
    """
    _same_domain(f, h)
    if not (f.is_grid and h.is_grid):
        def lower(t):
            fl, fu = f.endpoints(t)
            hl, hu = h.endpoints(t)
            return np.minimum(fl - hl, fu - hu)

        def upper(t):
            fl, fu = f.endpoints(t)
            hl, hu = h.endpoints(t)
            return np.maximum(fl - hl, fu - hu)

        return IvFun1D(f.domain, "analytic", lower, upper)

    x = np.union1d(f._nodes, h._nodes)
    fl, fu = f.endpoints(x)
    hl, hu = h.endpoints(x)
    d = (fl - hl) - (fu - hu)
    cross = np.flatnonzero(d[:-1] * d[1:] < 0)
    if cross.size:
        xc = x[cross] + (x[cross + 1] - x[cross]) * d[cross] / (d[cross] - d[cross + 1])
        x = np.union1d(x, xc)
        fl, fu = f.endpoints(x)
        hl, hu = h.endpoints(x)
    dl, du = fl - hl, fu - hu
    return IvFun1D.from_grid(x, np.minimum(dl, du), np.maximum(dl, du))


class IvFun2D:
    """Interval-valued function of ``(t, s)`` on the square ``[a, b]^2``.

    The grid form stores ``q x q`` node values indexed ``[i_t, i_s]`` and
    interpolates bilinearly.
    """

    def __init__(self, domain, kind, lower, upper, nodes=None):
        self.domain = _check_domain(domain)
        self.kind = kind
        self._lower = lower
        self._upper = upper
        self._nodes = nodes

    @classmethod
    def from_callables(cls, lower: Callable, upper: Callable, domain=(0.0, 1.0)) -> IvFun2D:
        return cls(domain, "analytic", lower, upper)

    @classmethod
    def from_grid(cls, nodes, lower, upper) -> IvFun2D:
        nodes = np.array(nodes, dtype=float)
        lower = np.array(lower, dtype=float)
        upper = np.array(upper, dtype=float)
        q = nodes.size
        if nodes.ndim != 1 or q < 2 or lower.shape != (q, q) or upper.shape != (q, q):
            raise ValueError("expected 1-D nodes of length q and (q, q) value arrays")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("grid nodes must be strictly increasing")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("grid values must be finite")
        bad = np.argwhere(lower > upper)
        if bad.size:
            i, j = bad[0]
            raise ValidityError(f"lower endpoint exceeds upper endpoint at (t, s) = ({float(nodes[i])!r}, {float(nodes[j])!r})")
        return cls((nodes[0], nodes[-1]), "grid", lower, upper, nodes)

    @property
    def is_grid(self) -> bool:
        return self.kind == "grid"

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes

    @property
    def lower_values(self) -> np.ndarray:
        return self._lower

    @property
    def upper_values(self) -> np.ndarray:
        return self._upper

    def endpoints(self, t, s):
        t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
        a, b = self.domain
        if np.any((t < a) | (t > b) | (s < a) | (s > b)):
            raise DomainError(f"point outside domain [{a}, {b}]^2")
        if self.is_grid:
            lo = bilinear(self._nodes, self._lower, t, s)
            hi = bilinear(self._nodes, self._upper, t, s)
        else:
            lo = np.broadcast_to(np.asarray(self._lower(t, s), dtype=float), t.shape)
            hi = np.broadcast_to(np.asarray(self._upper(t, s), dtype=float), t.shape)
            _check_valid(lo, hi, t)
        return lo, hi

    def __call__(self, t: float, s: float) -> Interval:
        lo, hi = self.endpoints(t, s)
        return Interval(float(lo), float(hi))

    def row(self, t: float):
        """Node values of ``s -> f(t, s)``; linear blend of the two bracketing rows."""
        self._require_grid()
        x = self._nodes
        i = int(np.clip(np.searchsorted(x, t, side="right") - 1, 0, x.size - 2))
        w = (t - x[i]) / (x[i + 1] - x[i])
        if w == 0.0:
            return self._lower[i], self._upper[i]
        if w == 1.0:
            return self._lower[i + 1], self._upper[i + 1]
        lo = (1 - w) * self._lower[i] + w * self._lower[i + 1]
        hi = (1 - w) * self._upper[i] + w * self._upper[i + 1]
        return lo, hi

    def _require_grid(self):
        if not self.is_grid:
            raise TypeError("operation requires a grid representation")


def bilinear(nodes: np.ndarray, values: np.ndarray, t, s) -> np.ndarray:
    """Bilinear interpolation of ``values[i_t, i_s]`` on the tensor grid ``nodes x nodes``."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    n = nodes.size
    i = np.clip(np.searchsorted(nodes, t, side="right") - 1, 0, n - 2)
    j = np.clip(np.searchsorted(nodes, s, side="right") - 1, 0, n - 2)
    u = (t - nodes[i]) / (nodes[i + 1] - nodes[i])
    v = (s - nodes[j]) / (nodes[j + 1] - nodes[j])
    return ((1 - u) * (1 - v) * values[i, j] + u * (1 - v) * values[i + 1, j]
            + (1 - u) * v * values[i, j + 1] + u * v * values[i + 1, j + 1])


def slice_integrate(z: IvFun2D, t: float, s0: float, s1: float) -> Interval:
    """Integral of ``s -> z(t, s)`` over ``[s0, s1]`` at fixed ``t``."""
    a, b = z.domain
    for v in (t, s0, s1):
        if v < a or v > b:
            raise DomainError(f"point {v!r} outside domain [{a}, {b}]")
    if s0 > s1:
        raise ValueError(f"integration bounds reversed: {s0} > {s1}")
    if s0 == s1:
        return Interval(0.0, 0.0)
    if z.is_grid:
        lo_row, hi_row = z.row(t)
        return Interval(pl_integral(z.nodes, lo_row, s0, s1), pl_integral(z.nodes, hi_row, s0, s1))
    lo = _spi.quad(lambda s: float(z.endpoints(t, s)[0]), s0, s1, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)[0]
    hi = _spi.quad(lambda s: float(z.endpoints(t, s)[1]), s0, s1, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)[0]
    return _quad_interval(lo, hi)


def write_csv(f: IvFun1D, path) -> None:
    """Write a grid function as ``t,lower,upper`` rows at 17 significant digits."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "lower", "upper"])
        for t, lo, hi in zip(f.nodes, f.lower_values, f.upper_values):
            w.writerow([f"{t:.17g}", f"{lo:.17g}", f"{hi:.17g}"])


def read_csv(path) -> IvFun1D:
    with open(Path(path), newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["t", "lower", "upper"]:
        raise ValueError(f"{path}: expected header 't,lower,upper'")
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: malformed numeric row ({exc})") from None
    if data.ndim != 2 or data.shape[1] != 3:
        raise ValueError(f"{path}: expected three columns per row")
    return IvFun1D.from_grid(data[:, 0], data[:, 1], data[:, 2])
