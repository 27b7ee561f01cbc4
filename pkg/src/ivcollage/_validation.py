"""Small argument checks shared by the estimators and the command line."""
from __future__ import annotations

import math
from numbers import Integral, Real

from .ivfun import IvFun1D


def check_level(level, low: int = 0, high: int | None = None, name: str = "level") -> int:
    if isinstance(level, bool) or not isinstance(level, Integral):
        raise TypeError(f"{name} must be an integer, got {level!r}")
    if level < low or (high is not None and level > high):
        span = f"[{low}, {high}]" if high is not None else f">= {low}"
        raise ValueError(f"{name} must be in {span}, got {level}")
    return int(level)


def check_positive(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_stopping(m, eps) -> tuple[int | None, float | None]:
    """Exactly one of a fixed iteration count ``m`` or a tolerance ``eps``."""
    if (m is None) == (eps is None):
        raise ValueError("set exactly one stopping rule: m (fixed iterations) or eps (tolerance)")
    if m is not None:
        return check_level(m, low=1, name="m"), None
    return None, check_positive(eps, "eps")


def check_ivfun(f, name: str = "X") -> IvFun1D:
    if not isinstance(f, IvFun1D):
        raise TypeError(f"{name} must be an IvFun1D, got {type(f).__name__}")
    return f
