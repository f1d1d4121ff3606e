import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aelin import (
    FiniteMetricSpace,
    PreconditionError,
    StructuralError,
    diam,
    supdist,
    validate_metric,
)
from tests.gen import random_space


def line3():
    return FiniteMetricSpace.from_pairs(
        ["p0", "p1", "p2"],
        [("p0", "p1", F(1)), ("p1", "p2", F(1)), ("p0", "p2", F(2))])


# ------------------------------------------------------------ validate

def test_validate_two_points_ok():
    space = FiniteMetricSpace.from_pairs(["a", "b"], [("a", "b", F(1))])
    report = validate_metric(space)
    assert report.ok and not report.violations


def test_validate_triangle_violation_with_witness():
    space = FiniteMetricSpace.from_pairs(
        ["a", "b", "c"],
        [("a", "b", F(3)), ("b", "c", F(1)), ("a", "c", F(1))])
    report = validate_metric(space)
    assert not report.ok
    kinds = {v.kind for v in report.violations}
    assert kinds == {"triangle"}
    witnesses = {frozenset(v.witness) for v in report.violations}
    assert frozenset({"a", "b", "c"}) in witnesses


def test_validate_symmetry_violation():
    space = FiniteMetricSpace.from_matrix(
        ["a", "b"], [[F(0), F(1)], [F(2), F(0)]])
    report = validate_metric(space)
    assert not report.ok
    assert any(v.kind == "symmetry" and set(v.witness) == {"a", "b"}
               for v in report.violations)


def test_validate_identity_and_positivity_violations():
    space = FiniteMetricSpace.from_matrix(
        ["a", "b"], [[F(1), F(0)], [F(0), F(0)]])
    kinds = {v.kind for v in validate_metric(space).violations}
    assert "identity" in kinds and "positivity" in kinds


def test_missing_entry_is_structural_not_axiom():
    space = FiniteMetricSpace.from_matrix(["a", "b"], [[F(0), None], [F(1), F(0)]])
    with pytest.raises(StructuralError):
        validate_metric(space)


def test_from_pairs_rejects_bad_input():
    with pytest.raises(StructuralError):
        FiniteMetricSpace.from_pairs(["a", "b"], [])  # missing pair
    with pytest.raises(StructuralError):
        FiniteMetricSpace.from_pairs(["a", "b"], [("a", "b", F(1)), ("b", "a", F(1))])
    with pytest.raises(StructuralError):
        FiniteMetricSpace.from_pairs(["a", "b"], [("a", "a", F(0)), ("a", "b", F(1))])
    with pytest.raises(StructuralError):
        FiniteMetricSpace.from_pairs(["a", "b"], [("a", "c", F(1))])
    with pytest.raises(StructuralError):
        FiniteMetricSpace.from_pairs(["a", "a"], [("a", "a", F(1))])
    with pytest.raises(StructuralError):
        FiniteMetricSpace.from_pairs(["a", "__z"], [("a", "__z", F(1))])


# ------------------------------------------------------------- supdist

def test_supdist_singleton_is_zero():
    space = FiniteMetricSpace.from_pairs(["a", "b"], [("a", "b", F(1))])
    assert supdist("a", ["a"], space) == 0


def test_supdist_pair():
    space = FiniteMetricSpace.from_pairs(["a", "b"], [("a", "b", F(1))])
    assert supdist("a", ["a", "b"], space) == 1


def test_supdist_line():
    assert supdist("p0", ["p1", "p2"], line3()) == 2


def test_supdist_empty_errors():
    space = FiniteMetricSpace.from_pairs(["a", "b"], [("a", "b", F(1))])
    with pytest.raises(PreconditionError):
        supdist("a", [], space)


# ---------------------------------------------------------------- diam

def test_diam_examples():
    space = FiniteMetricSpace.from_pairs(["a", "b"], [("a", "b", F(1))])
    assert diam(["a"], space) == 0
    assert diam([], space) == 0
    assert diam(["a", "b"], space) == 1
    assert diam(["p0", "p1", "p2"], line3()) == 2


# ----------------------------------------------------------- properties

@st.composite
def spaces(draw, min_n=2, max_n=7):
    seed = draw(st.integers(0, 10**6))
    n = draw(st.integers(min_n, max_n))
    return random_space(random.Random(seed), n)


@st.composite
def space_and_subsets(draw):
    space = draw(spaces())
    names = list(space.names())
    small = draw(st.lists(st.sampled_from(names), min_size=1, max_size=len(names)))
    extra = draw(st.lists(st.sampled_from(names), max_size=len(names)))
    return space, small, small + extra


@settings(max_examples=60, deadline=None)
@given(space_and_subsets())
def test_supdist_monotone_in_the_set(data):
    space, small, big = data
    x = space.names()[0]
    assert supdist(x, small, space) <= supdist(x, big, space)


@settings(max_examples=60, deadline=None)
@given(spaces(min_n=2, max_n=7), st.data())
def test_supdist_triangle_lift(space, data):
    names = list(space.names())
    x = data.draw(st.sampled_from(names))
    y = data.draw(st.sampled_from(names))
    subset = data.draw(st.lists(st.sampled_from(names), min_size=1, max_size=5))
    assert supdist(x, subset, space) <= space.d(x, y) + supdist(y, subset, space)


@settings(max_examples=60, deadline=None)
@given(spaces(min_n=2, max_n=7), st.data())
def test_diam_at_most_twice_supdist(space, data):
    names = list(space.names())
    x = data.draw(st.sampled_from(names))
    subset = data.draw(st.lists(st.sampled_from(names), min_size=1, max_size=5))
    assert diam(subset, space) <= 2 * supdist(x, subset, space)


@settings(max_examples=40, deadline=None)
@given(spaces(min_n=2, max_n=8))
def test_generated_spaces_are_metric(space):
    assert validate_metric(space).ok
