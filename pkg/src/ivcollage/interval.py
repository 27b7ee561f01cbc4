"""Compact real intervals and their metric structure.

Intervals are stored as a pair of double-precision endpoints with no
directed rounding. Degenerate intervals ``[c, c]`` stand for real numbers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


class IntervalError(ValueError):
    """Base class for interval-related errors."""


class ValidityError(IntervalError):
    """Raised when a lower endpoint exceeds its upper endpoint."""


class ArithmeticRangeError(IntervalError, ArithmeticError):
    """Raised when an operation produces a non-finite endpoint."""


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ArithmeticRangeError(f"non-finite endpoint in [{lo}, {hi}]")
        if lo > hi:
            raise ValidityError(f"lower endpoint {lo} exceeds upper endpoint {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, c: float) -> Interval:
        return cls(c, c)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __add__(self, other: Interval) -> Interval:
        if not isinstance(other, Interval):
            return NotImplemented
        return add(self, other)

    def __rmul__(self, t: float) -> Interval:
        return scale(t, self)

    def __neg__(self) -> Interval:
        return scale(-1.0, self)


ZERO = Interval(0.0, 0.0)


def _checked(lo: float, hi: float) -> Interval:
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ArithmeticRangeError(f"result [{lo}, {hi}] is not finite")
    return Interval(lo, hi)


def add(a: Interval, b: Interval) -> Interval:
    return _checked(a.lo + b.lo, a.hi + b.hi)


def scale(t: float, a: Interval) -> Interval:
    """Multiply an interval by a real scalar; a negative scalar swaps the endpoints."""
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"scalar must be finite, got {t}")
    if t >= 0:
        return _checked(t * a.lo, t * a.hi)
    return _checked(t * a.hi, t * a.lo)


def gh_sub(a: Interval, b: Interval) -> Interval:
    """Generalized Hukuhara difference ``a (-)gH b``.

    Always exists and equals ``[min(dl, du), max(dl, du)]`` with ``dl`` and
    ``du`` the differences of lower and upper endpoints.
    """
    dl = a.lo - b.lo
    du = a.hi - b.hi
    return _checked(min(dl, du), max(dl, du))


def dist(a: Interval, b: Interval) -> float:
    """Pompeiu-Hausdorff distance between two intervals."""
    return max(abs(a.lo - b.lo), abs(a.hi - b.hi))


def norm(a: Interval) -> float:
    return max(abs(a.lo), abs(a.hi))
