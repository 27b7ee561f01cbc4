"""The two benchmark families and helpers to regenerate their result tables."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .inverse import ParamFamily, manufacture_forcing, minimize
from .ivfun import EvalGrid, IvFun1D
from .volterra import Kernel, solve_forward

SQRT2 = math.sqrt(2.0)

EXAMPLE1_LAMBDA0 = (SQRT2, -1.0)
EXAMPLE1_BOX = [[1.0, 3.0], [-1.5, -0.5]]
EXAMPLE2_LAMBDA0 = (2.0, 1.0)
EXAMPLE2_BOX = [[1.5, 2.5], [0.5, 1.5]]

# the manufactured example 1 forcing lives on the level 7 + 3 = 10 nodes
FORCING_LEVEL = 7

# (m, level) combinations in the benchmark tables
TABLE_GRID = {1: [(3, 1), (3, 3), (3, 4), (7, 1), (7, 3), (7, 4)], 2: [(7, 3), (7, 4)]}


def example1_solution() -> IvFun1D:
    """``X(t) = [cos t - t/2, cos t + t/2]`` on [0, 1]."""
    return IvFun1D.from_callables(lambda t: np.cos(t) - t / 2, lambda t: np.cos(t) + t / 2, (0.0, 1.0))


@lru_cache(maxsize=None)
def example1_forcing() -> IvFun1D:
    return manufacture_forcing(example1_solution(), Kernel("affine-product", EXAMPLE1_LAMBDA0), FORCING_LEVEL)


def example1_family() -> ParamFamily:
    return ParamFamily("affine-product", EXAMPLE1_BOX, example1_forcing())


def example2_forcing() -> IvFun1D:
    """``G(t) = [2t + 1/8, 2t + 3/8]``."""
    return IvFun1D.from_grid([0.0, 1.0], [0.125, 2.125], [0.375, 2.375])


def example2_family() -> ParamFamily:
    return ParamFamily("cos-arctan", EXAMPLE2_BOX, example2_forcing())


def example(number: int) -> tuple[ParamFamily, tuple]:
    if number == 1:
        return example1_family(), EXAMPLE1_LAMBDA0
    if number == 2:
        return example2_family(), EXAMPLE2_LAMBDA0
    raise ValueError(f"unknown example {number}; expected 1 or 2")


def make_target(family: ParamFamily, lam0, level: int, m: int | None = None,
                eps: float | None = None, max_iter: int = 100) -> IvFun1D:
    """``X~ = X_m`` of the Picard iteration at ``lam0``, or the ``eps``-converged iterate."""
    if (m is None) == (eps is None):
        raise ValueError("give exactly one of m or eps")
    res = solve_forward(family.problem(lam0), level, eps=eps, m=m, max_iter=max_iter)
    return res.solution


def reproduce_row(number: int, m: int, level: int, eval_points: int = 1025) -> dict:
    """One table row: generate the target, solve the inverse problem at the same level."""
    family, lam0 = example(number)
    target = make_target(family, lam0, level, m=m)
    res = minimize(family, target, level, EvalGrid.uniform(family.domain, eval_points), certify=False)
    q = 2**level + 1
    return {
        "m": m,
        "n": q * q,
        "r": q * q,
        "alpha": float(res.lambda_star[0]),
        "beta": float(res.lambda_star[1]),
        "H": float(res.objective),
    }
