"""Picard iteration for Volterra interval integral equations.

Solves ``X(t) = G(t) + int_a^t K(t, s, X(s)) ds`` on the dyadic grid of a
chosen level.  Each application of the operator samples
``Z(t, s) = K(t, s, X(s))`` on the ``q x q`` grid, replaces it by its
bilinear interpolant and integrates the ``t``-slices exactly.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from sklearn.exceptions import ConvergenceWarning

from .interval import Interval, ValidityError
from .ivfun import EvalGrid, IvFun1D, IvFun2D, dyadic_nodes, metric_h


def _scale(c, lo, hi):
    pos = c >= 0
    return np.where(pos, c * lo, c * hi), np.where(pos, c * hi, c * lo)


def _affine_product(params, t, s, lo, hi):
    c1, c2 = params
    return _scale(c1 * t + c2 * s, lo, hi)


def _cos_arctan(params, t, s, lo, hi):
    c1, c2 = params
    return _scale(c1 * np.cos(t) + c2 * np.cos(s), np.arctan(lo), np.arctan(hi))


def _affine_product_lipschitz(params, domain):
    reach = max(abs(domain[0]), abs(domain[1]))
    return (abs(params[0]) + abs(params[1])) * reach


def _cos_arctan_lipschitz(params, domain):
    # |cos| <= 1 and arctan is 1-Lipschitz
    return abs(params[0]) + abs(params[1])


# name -> (vectorized map, Lipschitz constant in u given parameters and domain)
KERNELS: dict[str, tuple[Callable, Callable]] = {
    "affine-product": (_affine_product, _affine_product_lipschitz),
    "cos-arctan": (_cos_arctan, _cos_arctan_lipschitz),
}


@dataclass(frozen=True)
class Kernel:
    """A registered kernel ``K(t, s, u)`` with its Lipschitz constant in ``u``.

    ``affine-product``: ``(c1 t + c2 s) u``.
    ``cos-arctan``: ``(c1 cos t + c2 cos s) [arctan u_lo, arctan u_hi]``.
    Both are Lipschitz in ``u`` with ``L = |c1| + |c2|`` on ``[0, 1]^2``.
    """

    name: str
    params: tuple

    def __post_init__(self):
        if self.name not in KERNELS:
            raise ValueError(f"unknown kernel {self.name!r}; choose from {sorted(KERNELS)}")
        params = tuple(float(p) for p in self.params)
        if len(params) != 2 or not all(math.isfinite(p) for p in params):
            raise ValueError(f"kernel {self.name!r} takes two finite parameters, got {self.params!r}")
        object.__setattr__(self, "params", params)

    def lipschitz(self, domain=(0.0, 1.0)) -> float:
        return KERNELS[self.name][1](self.params, domain)

    def apply(self, t, s, lo, hi):
        """Vectorized evaluation on endpoint arrays; returns ``(lower, upper)``."""
        return KERNELS[self.name][0](self.params, t, s, lo, hi)

    def __call__(self, t: float, s: float, u: Interval) -> Interval:
        lo, hi = self.apply(t, s, u.lo, u.hi)
        return Interval(float(lo), float(hi))


@dataclass(frozen=True)
class VolterraProblem:
    forcing: IvFun1D
    kernel: Kernel

    @property
    def domain(self) -> tuple[float, float]:
        return self.forcing.domain

    @property
    def lipschitz(self) -> float:
        return self.kernel.lipschitz(self.domain)


def _slice_integrals(nodes: np.ndarray, z: np.ndarray) -> np.ndarray:
    """``int_a^{t_i}`` of the piecewise-linear row ``z[i, :]`` for every node ``t_i``."""
    seg = 0.5 * (z[:, :-1] + z[:, 1:]) * np.diff(nodes)
    causal = np.tri(nodes.size, nodes.size - 1, k=-1, dtype=bool)
    return np.where(causal, seg, 0.0).sum(axis=1)


def sample_kernel(problem: VolterraProblem, X: IvFun1D, level: int) -> IvFun2D:
    """``Z(t, s) = K(t, s, X(s))`` on the ``q x q`` grid, i.e. its projection ``P_n(Z)``."""
    nodes = dyadic_nodes(level, problem.domain)
    xl, xu = X.endpoints(nodes)
    T, S = np.meshgrid(nodes, nodes, indexing="ij")
    zl, zu = problem.kernel.apply(T, S, xl[None, :], xu[None, :])
    if not (np.all(np.isfinite(zl)) and np.all(np.isfinite(zu))):
        raise ValidityError("kernel produced a non-finite value")
    return IvFun2D.from_grid(nodes, zl, zu)


def apply_phi(problem: VolterraProblem, X: IvFun1D, level: int) -> IvFun1D:
    """One application of the projected operator, returned on the level-``k`` nodes."""
    z = sample_kernel(problem, X, level)
    nodes = z.nodes
    gl, gu = problem.forcing.endpoints(nodes)
    lo = gl + _slice_integrals(nodes, z.lower_values)
    hi = gu + _slice_integrals(nodes, z.upper_values)
    return IvFun1D.from_grid(nodes, lo, hi)


@dataclass
class ForwardResult:
    solution: IvFun1D
    n_iter: int
    distance: float
    converged: bool
    distances: list = field(default_factory=list)
    history: list = field(default_factory=list)


def solve_forward(problem: VolterraProblem, level: int, eps: float | None = 1e-12,
                  m: int | None = None, max_iter: int = 100, x0: IvFun1D | None = None,
                  keep_history: bool = False) -> ForwardResult:
    """Picard iteration ``X_j = Phi(X_{j-1})`` from ``x0`` (default: the forcing).

    With ``m`` set exactly ``m`` steps are taken.  Otherwise iteration stops
    once successive iterates are closer than ``eps`` in ``H``; if ``max_iter``
    is reached first a :class:`ConvergenceWarning` is emitted and the result
    carries ``converged=False`` along with the last iterate.
    """
    if m is None:
        if eps is None or not eps > 0:
            raise ValueError(f"eps must be positive, got {eps}")
        if max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {max_iter}")
    elif m < 1:
        raise ValueError(f"m must be at least 1, got {m}")

    nodes = dyadic_nodes(level, problem.domain)
    grid = EvalGrid(nodes)
    X = (problem.forcing if x0 is None else x0).sample(nodes)
    history = [X] if keep_history else []
    distances = []
    limit = m if m is not None else max_iter
    converged = False
    for _ in range(limit):
        X_new = apply_phi(problem, X, level)
        d = metric_h(X_new, X, grid)
        distances.append(d)
        X = X_new
        if keep_history:
            history.append(X)
        if m is None and d < eps:
            converged = True
            break
    if m is not None:
        converged = True
    elif not converged:
        warnings.warn(
            f"Picard iteration did not reach eps={eps:g} in {max_iter} steps "
            f"(last successive distance {distances[-1]:.3e})",
            ConvergenceWarning,
            stacklevel=2,
        )
    return ForwardResult(X, len(distances), distances[-1], converged, distances, history)


def caccioppoli_alphas(L: float, a: float, b: float, n_max: int) -> np.ndarray:
    """``alpha_n = (L (b - a))**n / n!`` for ``n = 0..n_max``."""
    if L < 0 or not math.isfinite(L):
        raise ValueError(f"L must be finite and nonnegative, got {L}")
    if not a < b:
        raise ValueError(f"need a < b, got ({a}, {b})")
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    x = L * (b - a)
    out = np.empty(n_max + 1)
    out[0] = 1.0
    for n in range(1, n_max + 1):
        out[n] = out[n - 1] * x / n
    return out


def caccioppoli_tail(L: float, a: float, b: float, n: int, rtol: float = 1e-17) -> float:
    """``sum_{k >= n} alpha_k``, summed until the terms are negligible."""
    x = L * (b - a)
    term = math.exp(n * math.log(x) - math.lgamma(n + 1)) if x > 0 else float(n == 0)
    terms = []
    k = n
    while term > 0:
        terms.append(term)
        k += 1
        term *= x / k
        if k > x and term < rtol * terms[0]:
            break
    return math.fsum(terms)


def perturbed_collage_bound(alphas, n: int, dxy: float, eps: float) -> float:
    """``sum_{k=0}^{n-1} alpha_k / (1 - alpha_n) * (dxy + eps)``, with ``alpha_0 = 1``."""
    alphas = np.asarray(alphas, dtype=float)
    if n < 1 or n >= alphas.size:
        raise ValueError(f"n must lie in [1, {alphas.size - 1}], got {n}")
    if alphas[n] >= 1:
        raise ValueError(f"the bound needs alpha_n < 1, got alpha_{n} = {alphas[n]}")
    if dxy < 0 or eps < 0:
        raise ValueError("distances must be nonnegative")
    return math.fsum(alphas[:n]) / (1.0 - alphas[n]) * (dxy + eps)


def collage_certificate(problem: VolterraProblem, X: IvFun1D, Y: IvFun1D, eps: float,
                        grid: EvalGrid | None = None) -> float:
    """Upper bound ``e^{L (b - a)} (H(X, Y) + eps)`` on the distance from ``X`` to the solution."""
    a, b = problem.domain
    return math.exp(problem.lipschitz * (b - a)) * (metric_h(X, Y, grid) + eps)
