import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ivcollage.interval import (
    ArithmeticRangeError,
    Interval,
    ValidityError,
    add,
    dist,
    gh_sub,
    norm,
    scale,
)

# endpoints on a 2**-10 lattice keep every sum and difference exact
lattice = st.integers(-(2**20), 2**20).map(lambda k: k / 1024)


@st.composite
def intervals(draw):
    a, b = draw(lattice), draw(lattice)
    return Interval(min(a, b), max(a, b))


def test_construction_rejects_reversed_and_nonfinite():
    with pytest.raises(ValidityError):
        Interval(2, 1)
    with pytest.raises(ArithmeticRangeError):
        Interval(0, math.inf)
    with pytest.raises(ArithmeticRangeError):
        Interval(math.nan, 0)


@pytest.mark.parametrize("a, b, expected", [
    ((1, 2), (3, 5), (4, 7)),
    ((0, 0), (2, 3), (2, 3)),
    ((-1, 1), (-1, 1), (-2, 2)),
])
def test_add(a, b, expected):
    assert add(Interval(*a), Interval(*b)) == Interval(*expected)
    assert Interval(*a) + Interval(*b) == Interval(*expected)


def test_add_overflow():
    with pytest.raises(ArithmeticRangeError):
        add(Interval(0, 1e308), Interval(0, 1e308))


@pytest.mark.parametrize("t, expected", [(2, (2, 6)), (-2, (-6, -2)), (0, (0, 0))])
def test_scale(t, expected):
    assert scale(t, Interval(1, 3)) == Interval(*expected)


def test_scale_rejects_nonfinite():
    with pytest.raises(ValueError):
        scale(math.inf, Interval(1, 3))


@pytest.mark.parametrize("a, b, expected", [
    ((1, 3), (1, 3), (0, 0)),
    ((1, 3), (0, 1), (1, 2)),
    ((0, 1), (1, 3), (-2, -1)),
])
def test_gh_sub(a, b, expected):
    assert gh_sub(Interval(*a), Interval(*b)) == Interval(*expected)


def test_dist_and_norm_examples():
    assert dist(Interval(0, 2), Interval(1, 3)) == 1
    assert dist(Interval(0, 0), Interval(-3, 2)) == 3
    assert norm(Interval(-3, 2)) == 3
    assert norm(Interval(0, 0)) == 0
    assert norm(Interval(1, 4)) == 4


@given(intervals())
def test_gh_self_difference_is_zero(a):
    assert gh_sub(a, a) == Interval(0, 0)
    assert dist(a, a) == 0


@given(intervals(), intervals())
def test_dist_is_norm_of_gh_difference(a, b):
    assert dist(a, b) == norm(gh_sub(a, b))
    assert dist(a, Interval(0, 0)) == norm(a)


@given(intervals(), intervals())
def test_gh_defining_property(a, b):
    c = gh_sub(a, b)
    assert a == add(b, c) or b == add(a, scale(-1, c))


@given(intervals(), intervals(), intervals())
def test_metric_axioms(a, b, c):
    assert dist(a, b) == dist(b, a)
    assert (dist(a, b) == 0) == (a == b)
    assert dist(a, c) <= dist(a, b) + dist(b, c)


@given(intervals(), intervals(), intervals())
def test_translation_invariance(a, b, c):
    assert dist(add(a, c), add(b, c)) == dist(a, b)


@given(st.integers(0, 64), st.integers(0, 64), intervals())
def test_scale_composes_for_nonnegative_factors(t, s, a):
    t, s = t / 8, s / 8
    assert scale(t, scale(s, a)) == scale(t * s, a)
