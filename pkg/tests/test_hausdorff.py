import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aelin import (
    FiniteMetricSpace,
    GeneratorMap,
    PreconditionError,
    SemigroupAction,
    check_group_identification,
    hausdorff_dist,
)
from tests.gen import cyclic_isometry_space, random_space


def line3():
    return FiniteMetricSpace.from_pairs(
        ["p0", "p1", "p2"],
        [("p0", "p1", F(1)), ("p1", "p2", F(1)), ("p0", "p2", F(2))])


def triangle_space():
    return FiniteMetricSpace.from_pairs(
        ["t0", "t1", "t2"],
        [("t0", "t1", F(1)), ("t1", "t2", F(1)), ("t0", "t2", F(1))])


# -------------------------------------------------------- hausdorff_dist

def test_identical_singletons():
    space = line3()
    assert hausdorff_dist(["p0"], ["p0"], space) == 0


def test_singletons_reduce_to_point_distance():
    space = line3()
    assert hausdorff_dist(["p0"], ["p1"], space) == 1
    assert hausdorff_dist(["p0"], ["p2"], space) == 2


def test_singleton_against_pair():
    assert hausdorff_dist(["p0"], ["p1", "p2"], line3()) == 2


def test_empty_subset_errors():
    with pytest.raises(PreconditionError):
        hausdorff_dist([], ["p0"], line3())


# ---------------------------------------------- group identification

def test_cyclic_rotation_on_equilateral_triangle():
    space = triangle_space()
    rot = SemigroupAction(
        (GeneratorMap("r", table={"t0": "t1", "t1": "t2", "t2": "t0"}),))
    report = check_group_identification(space, rot, 100)
    assert report.ok


def test_identity_only_group_reduces_to_singletons():
    space = line3()
    identity = SemigroupAction(
        (GeneratorMap("e", table={"p0": "p0", "p1": "p1", "p2": "p2"}),))
    report = check_group_identification(space, identity, 100)
    assert report.ok
    assert "singleton" in report.checked


def test_non_group_produces_orbit_not_fixed_finding():
    space = FiniteMetricSpace.from_pairs(["a", "b"], [("a", "b", F(1))])
    action = SemigroupAction((GeneratorMap("s", table={"a": "b", "b": "b"}),))
    report = check_group_identification(space, action, 100)
    assert not report.ok
    kinds = {v.kind for v in report.violations}
    assert "generator_not_bijective" in kinds
    assert "orbit_not_fixed" in kinds
    finding = next(v for v in report.violations if v.kind == "orbit_not_fixed")
    assert set(finding.witness) == {"s", "a", "b"}
    assert "b" in finding.note


def test_random_cyclic_isometries_identify():
    rng = random.Random(7)
    for _ in range(5):
        space, action = cyclic_isometry_space(rng, rng.randint(3, 7))
        assert check_group_identification(space, action, 1000).ok


# ----------------------------------------------------------- properties

@st.composite
def space_with_subsets(draw):
    seed = draw(st.integers(0, 10**6))
    rng = random.Random(seed)
    space = random_space(rng, rng.randint(2, 7))
    names = list(space.names())
    a = draw(st.lists(st.sampled_from(names), min_size=1, max_size=len(names)))
    b = draw(st.lists(st.sampled_from(names), min_size=1, max_size=len(names)))
    c = draw(st.lists(st.sampled_from(names), min_size=1, max_size=len(names)))
    return space, a, b, c


@settings(max_examples=60, deadline=None)
@given(space_with_subsets())
def test_hausdorff_is_a_pseudometric(data):
    space, a, b, c = data
    assert hausdorff_dist(a, a, space) == 0
    assert hausdorff_dist(a, b, space) == hausdorff_dist(b, a, space)
    assert hausdorff_dist(a, c, space) <= \
        hausdorff_dist(a, b, space) + hausdorff_dist(b, c, space)
    assert hausdorff_dist(a, b, space) >= 0
