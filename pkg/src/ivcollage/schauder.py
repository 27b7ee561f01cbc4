"""Faber-Schauder bases on dyadic nodes and the interval projection built on them.

The 1-D basis on ``[a, b]`` is ordered as ``f_1 = 1``, ``f_2 = (t - a)/(b - a)``
followed by hat functions at the dyadic midpoints, level by level
(``1/2, 1/4, 3/4, 1/8, ...`` on the unit interval).  Every basis function is
nonnegative, and the projection onto the first ``q = 2**k + 1`` of them is
piecewise-linear interpolation at the level-``k`` nodes, which maps
nonnegative functions to nonnegative functions.  Projections are only
offered at these full levels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .interval import Interval, add, gh_sub
from .ivfun import IvFun1D, IvFun2D, bilinear, dyadic_nodes, pl_integral


def _sample(g, *points):
    if callable(g):
        vals = np.asarray(g(*points), dtype=float)
        vals = np.broadcast_to(vals, np.broadcast(*points).shape)
    else:
        vals = np.asarray(g, dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("projected function produced a non-finite sample")
    return vals


class DyadicBasis1D:
    """Schauder hat basis with ``q = 2**level + 1`` elements on ``domain``."""

    def __init__(self, level: int, domain=(0.0, 1.0)):
        if int(level) != level or level < 0:
            raise ValueError(f"level must be a nonnegative integer, got {level}")
        a, b = float(domain[0]), float(domain[1])
        if not a < b:
            raise ValueError(f"domain must satisfy a < b, got ({a}, {b})")
        self.level = int(level)
        self.domain = (a, b)
        self.q = 2**self.level + 1
        self.grid = dyadic_nodes(self.level, self.domain)
        order = [0, self.q - 1]
        for lev in range(1, self.level + 1):
            step = 2 ** (self.level - lev)
            order.extend(range(step, self.q - 1, 2 * step))
        self.order = np.array(order)
        # half-width of each hat, in units of grid spacing; 0 marks f_1 and f_2
        halfw = np.zeros(self.q, dtype=int)
        for lev in range(1, self.level + 1):
            step = 2 ** (self.level - lev)
            halfw[np.arange(step, self.q - 1, 2 * step)] = step
        self._halfwidth = halfw[self.order]

    def __repr__(self):
        return f"DyadicBasis1D(level={self.level}, domain={self.domain})"

    def __len__(self):
        return self.q

    @property
    def nodes(self) -> np.ndarray:
        """Nodes in basis order."""
        return self.grid[self.order]

    def basis_values(self, t) -> np.ndarray:
        """Matrix ``F[i, n] = f_n(t_i)`` with columns in basis order."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        a, b = self.domain
        h = (b - a) / (self.q - 1)
        F = np.empty((t.size, self.q))
        F[:, 0] = 1.0
        F[:, 1] = (t - a) / (b - a)
        for n in range(2, self.q):
            x = self.grid[self.order[n]]
            w = self._halfwidth[n] * h
            F[:, n] = np.maximum(0.0, 1.0 - np.abs(t - x) / w)
        return F

    def coefficients(self, g) -> np.ndarray:
        """Expansion coefficients of the interpolant of ``g``, in basis order.

        Each hat coefficient is the residual between ``g`` at the node and
        the interpolant built from all coarser levels.
        """
        v = _sample(g, self.grid)
        c = np.empty(self.q)
        c[0] = v[0]
        c[1] = v[-1] - v[0]
        for n in range(2, self.q):
            p = self.order[n]
            d = self._halfwidth[n]
            c[n] = v[p] - 0.5 * (v[p - d] + v[p + d])
        return c

    def synthesize(self, coef, t) -> np.ndarray:
        return self.basis_values(t) @ np.asarray(coef, dtype=float)

    def project(self, g) -> np.ndarray:
        """Node values (sorted grid) of the projection of ``g``."""
        return _sample(g, self.grid).copy()

    def interpolate(self, values, t) -> np.ndarray:
        return np.interp(t, self.grid, values)

    def basis_integrals(self, t0: float, t1: float) -> np.ndarray:
        """Exact integrals of every basis function over ``[t0, t1]``."""
        G = self.basis_values(self.grid)
        return np.array([pl_integral(self.grid, G[:, n], t0, t1) for n in range(self.q)])


class DyadicBasis2D:
    """Tensor-product basis on the ``q x q`` dyadic grid of ``domain**2``."""

    def __init__(self, level: int, domain=(0.0, 1.0)):
        self.factor = DyadicBasis1D(level, domain)
        self.level = self.factor.level
        self.domain = self.factor.domain
        self.q = self.factor.q
        self.grid = self.factor.grid

    def __repr__(self):
        return f"DyadicBasis2D(level={self.level}, domain={self.domain})"

    def __len__(self):
        return self.q * self.q

    def basis_values(self, t, s) -> np.ndarray:
        """``F[i, m, n] = f_m(t_i) f_n(s_i)``."""
        Ft = self.factor.basis_values(t)
        Fs = self.factor.basis_values(s)
        return Ft[:, :, None] * Fs[:, None, :]

    def project(self, g) -> np.ndarray:
        T, S = np.meshgrid(self.grid, self.grid, indexing="ij")
        return _sample(g, T, S).copy()

    def interpolate(self, values, t, s) -> np.ndarray:
        return bilinear(self.grid, np.asarray(values), t, s)


def rescale(basis, domain):
    """The same basis transported to ``domain`` by the affine map."""
    return type(basis)(basis.level, domain)


def project_scalar(basis, g) -> np.ndarray:
    """Interpolant of a real function at the basis nodes, as sorted node values.

    ``g`` may be a vectorized callable or an array already sampled on the
    basis grid.
    """
    return basis.project(g)


def project_interval(basis, f):
    """``P(f) = [Pi(lower), Pi(upper)]`` as a grid interval function."""
    if isinstance(basis, DyadicBasis2D):
        if not isinstance(f, IvFun2D):
            raise TypeError("a 2-D basis projects IvFun2D functions")
        T, S = np.meshgrid(basis.grid, basis.grid, indexing="ij")
        lo, hi = f.endpoints(T, S)
        return IvFun2D.from_grid(basis.grid, lo, hi)
    lo, hi = f.endpoints(basis.grid)
    return IvFun1D.from_grid(basis.grid, lo, hi)


@dataclass(frozen=True)
class GHDecomposition:
    """Coefficients of both endpoints and their split by sign of ``beta - alpha``.

    The projection is recovered as
    ``sum alpha_k phi_k + sum_{pos} (beta_k - alpha_k) psi_k (-)gH sum_{neg} |beta_k - alpha_k| psi_k``
    with ``phi_k = [f_k, f_k]`` and ``psi_k = [0, f_k]``.
    """

    basis: DyadicBasis1D
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def gap(self) -> np.ndarray:
        return self.beta - self.alpha

    @property
    def nonneg(self) -> np.ndarray:
        return np.flatnonzero(self.gap >= 0)

    @property
    def neg(self) -> np.ndarray:
        return np.flatnonzero(self.gap < 0)

    def endpoints(self, t):
        F = self.basis.basis_values(t)
        gap = self.gap
        centre = F @ self.alpha
        pos = F[:, self.nonneg] @ gap[self.nonneg]
        neg = F[:, self.neg] @ np.abs(gap[self.neg])
        # [0, pos] (-)gH [0, neg] = [min(0, pos - neg), max(0, pos - neg)]
        d = pos - neg
        return centre + np.minimum(0.0, d), centre + np.maximum(0.0, d)

    def __call__(self, t: float) -> Interval:
        lo, hi = self.endpoints(t)
        return Interval(float(lo[0]), float(hi[0]))


def gh_decompose(basis: DyadicBasis1D, f: IvFun1D) -> GHDecomposition:
    lo, hi = f.endpoints(basis.grid)
    return GHDecomposition(basis, basis.coefficients(lo), basis.coefficients(hi))


def integrate_projection(basis: DyadicBasis1D, f: IvFun1D, t0=None, t1=None) -> Interval:
    """Integral of ``P(f)`` assembled from coefficient sums and one gH-difference."""
    a, b = basis.domain
    t0 = a if t0 is None else float(t0)
    t1 = b if t1 is None else float(t1)
    if t0 > t1:
        raise ValueError(f"integration bounds reversed: {t0} > {t1}")
    dec = gh_decompose(basis, f)
    ints = basis.basis_integrals(t0, t1)
    gap = dec.gap
    centre = float(ints @ dec.alpha)
    pos = float(ints[dec.nonneg] @ gap[dec.nonneg])
    neg = float(ints[dec.neg] @ np.abs(gap[dec.neg]))
    return add(Interval.point(centre), gh_sub(Interval(0.0, pos), Interval(0.0, neg)))
