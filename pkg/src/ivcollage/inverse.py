"""Collage-based parameter identification for Volterra interval equations.

Given a target ``X~`` and a family ``lam -> (G_lam, K_lam)`` over a box, the
parameters are chosen to minimize ``H(X~, Y_lam)`` where ``Y_lam`` is one
application of the projected operator to the target.  Because the
operator is never iterated, each evaluation costs a single kernel sweep.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate as _spi
from scipy import optimize as _spo

from .interval import ValidityError
from .ivfun import EvalGrid, IvFun1D, dyadic_nodes, metric_h
from .volterra import Kernel, VolterraProblem, apply_phi


class ManufactureError(ValidityError):
    """The requested exact solution cannot be produced by a valid forcing."""


@dataclass
class ParamFamily:
    """Box ``Lambda`` and the map from a parameter vector to a Volterra problem.

    ``forcing`` is either a fixed :class:`IvFun1D` or a callable of the
    parameter vector.  ``param_map`` turns the parameter vector into kernel
    parameters; by default the vector is used as is.
    """

    kernel: str
    box: np.ndarray
    forcing: IvFun1D | Callable
    param_map: Callable | None = None

    def __post_init__(self):
        box = np.array(self.box, dtype=float)
        if box.ndim != 2 or box.shape[1] != 2 or box.shape[0] == 0:
            raise ValueError("box must be a nonempty list of [lo, hi] pairs")
        if not np.all(np.isfinite(box)) or np.any(box[:, 0] > box[:, 1]):
            raise ValueError(f"box bounds must be finite with lo <= hi, got {box.tolist()}")
        if box.shape[0] > 4:
            raise ValueError("at most four parameters are supported")
        self.box = box
        Kernel(self.kernel, self.kernel_params(box.mean(axis=1)))

    @property
    def dim(self) -> int:
        return self.box.shape[0]

    @property
    def domain(self) -> tuple[float, float]:
        return self.forcing_at(self.box.mean(axis=1)).domain

    def check(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float)
        if lam.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} parameters, got shape {lam.shape}")
        if np.any(lam < self.box[:, 0]) or np.any(lam > self.box[:, 1]):
            raise ValueError(f"parameters {lam.tolist()} lie outside the box {self.box.tolist()}")
        return lam

    def kernel_params(self, lam) -> tuple:
        return tuple(self.param_map(lam) if self.param_map is not None else lam)

    def forcing_at(self, lam) -> IvFun1D:
        return self.forcing(lam) if callable(self.forcing) and not isinstance(self.forcing, IvFun1D) else self.forcing

    def problem(self, lam) -> VolterraProblem:
        lam = self.check(lam)
        return VolterraProblem(self.forcing_at(lam), Kernel(self.kernel, self.kernel_params(lam)))

    def lipschitz(self, lam) -> float:
        return self.problem(lam).lipschitz

    @property
    def lipschitz_max(self) -> float:
        """Sup of ``L_lam`` over the box, attained at a corner for the registered kernels."""
        return max(self.lipschitz(np.array(c)) for c in itertools.product(*self.box))


def build_y(family: ParamFamily, lam, target: IvFun1D, level: int) -> IvFun1D:
    """``Y_lam = G_lam + int P(K_lam(., s, X~(s))) ds`` on the level-``k`` nodes."""
    return apply_phi(family.problem(lam), target, level)


def objective(family: ParamFamily, lam, target: IvFun1D, level: int,
              grid: EvalGrid | None = None) -> float:
    return metric_h(target, build_y(family, lam, target, level), grid)


def stability_rho(family: ParamFamily) -> float:
    """Uniform amplification bound ``e^{L_max (b - a)}`` over the family."""
    a, b = family.domain
    return math.exp(family.lipschitz_max * (b - a))


def projection_residual(family: ParamFamily, lam, target: IvFun1D, level: int,
                        grid: EvalGrid | None = None, refine: int = 2) -> float:
    """Surrogate for ``H(Phi(X~), Y)``: distance between ``Y`` at level ``k`` and ``k + refine``."""
    coarse = build_y(family, lam, target, level)
    fine = build_y(family, lam, target, level + refine)
    return metric_h(coarse, fine, grid)


@dataclass
class InverseResult:
    lambda_star: np.ndarray
    objective: float
    level: int
    evals: int
    starts: int
    no_descent: bool
    rho_bound: float
    lipschitz: float
    eps_proj: float = float("nan")
    certificate: float = float("nan")
    trace: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return (2**self.level + 1) ** 2

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda_star"] = [float(v) for v in self.lambda_star]
        d["n"] = d["r"] = self.n
        return d


def _starts(box: np.ndarray, free: np.ndarray) -> list[np.ndarray]:
    centre = box.mean(axis=1)
    out = [centre]
    for corner in itertools.product(*[box[i] if free[i] else box[i, :1] for i in range(len(box))]):
        c = np.array(corner, dtype=float)
        if not any(np.array_equal(c, s) for s in out):
            out.append(c)
    return out


def _initial_simplex(x0: np.ndarray, lo: np.ndarray, hi: np.ndarray, frac: float = 0.1) -> np.ndarray:
    # step each coordinate towards the box centre so the simplex stays inside the box
    centre = 0.5 * (lo + hi)
    step = frac * (hi - lo) * np.where(x0 <= centre, 1.0, -1.0)
    return np.vstack([x0, x0 + np.diag(step)])


def minimize(family: ParamFamily, target: IvFun1D, level: int, grid: EvalGrid | None = None,
             fatol: float = 1e-14, xatol: float = 1e-10, max_fev: int = 5000,
             certify: bool = True) -> InverseResult:
    """Multi-start bounded Nelder-Mead over the parameter box.

    Starts are the box centre and every corner.  The best value wins; ties
    go to the lexicographically smallest parameter vector.  If no start
    improves on its own initial value the best start is returned with
    ``no_descent=True``.
    """
    box = family.box
    free = box[:, 1] > box[:, 0]
    if grid is None:
        grid = EvalGrid.uniform(family.domain)
    evals = 0

    def full(x_free, base):
        lam = base.copy()
        lam[free] = np.clip(x_free, box[free, 0], box[free, 1])
        return lam

    def f(lam):
        nonlocal evals
        evals += 1
        return objective(family, lam, target, level, grid)

    trace = []
    candidates = []
    any_descent = False
    starts = _starts(box, free)
    if not free.any():
        starts = starts[:1]
    for x0 in starts:
        f0 = f(x0)
        entry = {"start": x0.tolist(), "initial": f0}
        if free.any():
            res = _spo.minimize(
                lambda x, base=x0: f(full(x, base)),
                x0[free],
                method="Nelder-Mead",
                bounds=list(map(tuple, box[free])),
                options={
                    "initial_simplex": _initial_simplex(x0[free], box[free, 0], box[free, 1]),
                    "xatol": xatol,
                    "fatol": fatol,
                    "maxfev": max_fev,
                },
            )
            lam, val = full(res.x, x0), float(res.fun)
            entry.update(final=val, nfev=int(res.nfev), lam=lam.tolist())
        else:
            lam, val = x0, f0
        if val < f0:
            any_descent = True
            candidates.append((val, tuple(lam)))
        else:
            candidates.append((f0, tuple(x0)))
        trace.append(entry)

    best_val, best_lam = min(candidates)
    best_lam = np.array(best_lam)
    a, b = family.domain
    lip = family.lipschitz(best_lam)
    result = InverseResult(
        lambda_star=best_lam,
        objective=best_val,
        level=level,
        evals=evals,
        starts=len(starts),
        no_descent=not any_descent,
        rho_bound=stability_rho(family),
        lipschitz=lip,
        trace=trace,
    )
    if certify:
        result.eps_proj = projection_residual(family, best_lam, target, level, grid)
        result.certificate = math.exp(lip * (b - a)) * (best_val + result.eps_proj)
    return result


def manufacture_forcing(exact: IvFun1D, kernel: Kernel, level: int, oversample: int = 3) -> IvFun1D:
    """Forcing ``G`` that makes ``exact`` the solution, on the level ``k + oversample`` nodes.

    ``G = [X_lo - I_lo, X_hi - I_hi]`` with ``I(t) = int_a^t K(t, s, X(s)) ds``
    integrated adaptively after mapping ``s = a + (t - a) u``.
    """
    a, b = exact.domain
    nodes = dyadic_nodes(level + oversample, (a, b))
    span = nodes - a

    def integrand(u):
        s = a + span * u
        lo, hi = exact.endpoints(s)
        zl, zu = kernel.apply(nodes, s, lo, hi)
        return np.concatenate((span * zl, span * zu))

    vals, _ = _spi.quad_vec(integrand, 0.0, 1.0, epsabs=1e-13, epsrel=1e-13)
    il, iu = vals[: nodes.size], vals[nodes.size:]
    xl, xu = exact.endpoints(nodes)
    gl, gu = xl - il, xu - iu
    bad = np.flatnonzero(gl > gu)
    if bad.size:
        t = nodes[bad[0]]
        raise ManufactureError(
            f"solution width is smaller than the width of its integral term at t = {t!r}"
        )
    return IvFun1D.from_grid(nodes, gl, gu)
