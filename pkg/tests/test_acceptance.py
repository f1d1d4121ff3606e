"""Acceptance suite: one test per criterion, at its stated tolerance.

Exact means exact: every assertion in rational mode is ==, never
approximate.  A summary line per criterion is printed at the end of the
run (see conftest).
"""

import itertools
import json
import random
import time
from fractions import Fraction as F

import pytest
from click.testing import CliRunner

from aelin import (
    EXACT,
    FiniteMetricSpace,
    FormalCombination,
    GeneratorMap,
    OrbitStatus,
    PointedSpace,
    SemigroupAction,
    adjoin_identity,
    ae_norm,
    apply_action,
    apply_word,
    check_diam_bound,
    check_group_identification,
    check_remark2_transfer,
    embed,
    float_mode,
    hausdorff_dist,
    orbit,
    reduce,
    validate_extension,
)
from aelin import formats
from aelin.cli import main as cli_main
from aelin.extension import SupdistExtension
from tests.gen import (
    cyclic_isometry_space,
    mass_to_combination,
    random_integer_mass,
    random_mass,
    random_space,
)
from tests.oracles import matching_norm_oracle


def _pointed(entry):
    ext = entry.extension
    return ext, PointedSpace(ext.full_space(), ext.z)


@pytest.mark.criterion(1, "fixed-point extension valid on 200 random spaces, exact, < 10 s")
def test_criterion_1_extension_validity(corpus_build):
    entries, build_seconds = corpus_build
    assert len(entries) >= 200
    t0 = time.perf_counter()
    for entry in entries:
        assert 4 <= entry.space.n <= 12
        assert 1 <= len(entry.action.generators) <= 3
        report = validate_extension(entry.extension, entry.action)
        assert report.ok, report.violations
    validate_seconds = time.perf_counter() - t0
    assert build_seconds + validate_seconds < 10.0, \
        f"criterion 1 took {build_seconds + validate_seconds:.2f}s"


@pytest.mark.criterion(2, "diam(S.x) <= 2 d(x,z) exactly on every extension")
def test_criterion_2_diam_bound(corpus):
    for entry in corpus:
        act = adjoin_identity(entry.action)
        report = check_diam_bound(entry.extension, act, 1000)
        assert report.ok, report.violations


@pytest.mark.criterion(3, "orbit diameter transfer holds for all point pairs")
def test_criterion_3_remark2_transfer(corpus):
    for entry in corpus:
        diams = {name: entry.orbits[name].diameter_so_far
                 for name in entry.space.names()}
        for x in entry.space.names():
            for y in entry.space.names():
                assert diams[y] <= 2 * entry.space.d(x, y) + diams[x]
    # and through the public operation on a sample
    rng = random.Random(31)
    for entry in rng.sample(corpus, 10):
        names = entry.space.names()
        x, y = rng.choice(names), rng.choice(names)
        assert check_remark2_transfer(
            x, y, adjoin_identity(entry.action), entry.space, 1000).ok


@pytest.mark.criterion(4, "plan cost equals dual value on 500 random masses")
def test_criterion_4_primal_dual(corpus):
    rng = random.Random(41)
    checked = 0
    float_checked = 0
    while checked < 500:
        entry = rng.choice(corpus)
        ext, pointed = _pointed(entry)
        mass = random_mass(rng, pointed.space, max_support=10)
        u = mass_to_combination(mass, pointed.base)
        result = ae_norm(u, pointed)
        pot = result.potential.as_dict()
        pairing = sum((v * pot[p] for p, v in reduce(u).entries), F(0))
        assert result.plan.cost(pointed.space) == result.value
        assert pairing == result.value
        checked += 1
        if float_checked < 100:
            fmode = float_mode(1e-9)
            fspace = FiniteMetricSpace.from_matrix(
                pointed.space.names(),
                [[float(v) for v in row] for row in pointed.space.rows],
                fmode)
            fpointed = PointedSpace(fspace, pointed.base)
            fu = FormalCombination(tuple((float(c), x, y) for c, x, y in u.terms))
            fres = ae_norm(fu, fpointed)
            fpot = fres.potential.as_dict()
            fpair = sum(v * fpot[p] for p, v in reduce(fu).entries)
            fcost = fres.plan.cost(fspace)
            assert abs(fcost - fpair) <= 1e-9 * (1 + abs(fpair))
            float_checked += 1
    assert checked >= 500 and float_checked >= 100


@pytest.mark.criterion(5, "norm equals the exhaustive matching oracle")
def test_criterion_5_oracle_equivalence():
    rng = random.Random(51)
    spaces_checked = 0
    while spaces_checked < 50:
        space = random_space(rng, rng.randint(2, 5))
        base = rng.choice(list(space.names()))
        pointed = PointedSpace(space, base)
        for _ in range(4):
            mass = random_integer_mass(rng, space, max_support=5, max_total=6)
            if not mass:
                continue
            u = mass_to_combination(mass, base)
            assert ae_norm(u, pointed).value == matching_norm_oracle(mass, space)
        spaces_checked += 1
    # the crossing instance must be 2, not 4
    line4 = FiniteMetricSpace.from_pairs(
        ["p0", "p1", "p2", "p3"],
        [("p0", "p1", F(1)), ("p0", "p2", F(2)), ("p0", "p3", F(3)),
         ("p1", "p2", F(1)), ("p1", "p3", F(2)), ("p2", "p3", F(1))])
    u = FormalCombination.of((F(1), "p0", "p2"), (F(1), "p3", "p1"))
    assert ae_norm(u, PointedSpace(line4, "p0")).value == 2


@pytest.mark.criterion(6, "embedding is isometric on every extension point")
def test_criterion_6_embedding_isometry(corpus):
    for entry in corpus:
        ext, pointed = _pointed(entry)
        for x in ext.base.names():
            assert ae_norm(embed(x, pointed), pointed).value == ext.d_z(x)


@pytest.mark.criterion(7, "equivariance for words <= 4; contraction on 500 pairs")
def test_criterion_7_equivariance_and_contraction(corpus):
    from aelin.extension import extend_action

    # equivariance for single generators, all corpus entries
    for entry in corpus:
        ext, pointed = _pointed(entry)
        act = extend_action(adjoin_identity(entry.action), ext)
        for g in act.generators:
            for x in ext.base.names():
                lhs = reduce(apply_action((g.name,), embed(x, pointed), act))
                rhs = reduce(embed(g.image_name(x), pointed))
                assert lhs == rhs
    # all words up to length 4 on a deterministic subsample
    rng = random.Random(71)
    for entry in rng.sample(corpus, 25):
        ext, pointed = _pointed(entry)
        act = extend_action(adjoin_identity(entry.action), ext)
        names = [g.name for g in act.generators]
        for length in range(1, 5):
            for word in itertools.product(names, repeat=length):
                for x in ext.base.names():
                    lhs = reduce(apply_action(word, embed(x, pointed), act))
                    wx = apply_word(word, x, act, pointed.space)
                    assert lhs == reduce(embed(wx, pointed))
    # contraction on 500 random (word, combination) pairs, exact
    pairs = 0
    while pairs < 500:
        entry = rng.choice(corpus)
        ext, pointed = _pointed(entry)
        act = extend_action(adjoin_identity(entry.action), ext)
        names = [g.name for g in act.generators]
        word = tuple(rng.choice(names) for _ in range(rng.randint(1, 4)))
        pts = list(pointed.space.names())
        terms = tuple(
            (F(rng.randint(-6, 6), rng.randint(1, 4)), rng.choice(pts), rng.choice(pts))
            for _ in range(rng.randint(1, 3)))
        u = FormalCombination(terms)
        assert ae_norm(apply_action(word, u, act), pointed).value <= \
            ae_norm(u, pointed).value
        pairs += 1


@pytest.mark.criterion(8, "boundedness semi-decision and pipeline exit codes")
def test_criterion_8_boundedness_semidecision(corpus, tmp_path):
    shift_space = formats.parse_space(
        {"implicit": True, "seeds": [[0]], "metric": "l1"}, EXACT)
    shift_action = formats.parse_action(
        {"generators": [{"name": "s", "rule": "n -> n+1"}]}, shift_space)
    res = orbit("0", shift_action, shift_space, 100)
    assert res.status is OrbitStatus.BUDGET_EXHAUSTED
    assert res.diameter_so_far >= 99

    runner = CliRunner()
    shift_doc = json.dumps({
        "space": {"implicit": True, "seeds": [[0]], "metric": "l1"},
        "action": {"generators": [{"name": "s", "rule": "n -> n+1"}]}})
    refusal = runner.invoke(cli_main, ["linearize", "-i", "-", "--budget", "100"],
                            input=shift_doc)
    assert refusal.exit_code == 2

    rng = random.Random(81)
    for entry in rng.sample(corpus, 3):
        for name in entry.space.names():
            assert entry.orbits[name].status is OrbitStatus.CLOSED
        doc = json.dumps({
            "space": formats.serialize_space(entry.space),
            "action": formats.serialize_action(entry.action)})
        run = runner.invoke(cli_main, ["linearize", "-i", "-", "--budget", "1000"],
                            input=doc)
        assert run.exit_code == 0, run.output


@pytest.mark.criterion(9, "subset-space identification for cyclic isometry groups")
def test_criterion_9_group_identification():
    rng = random.Random(91)
    for _ in range(20):
        space, action = cyclic_isometry_space(rng, rng.randint(3, 8))
        report = check_group_identification(space, action, 1000)
        assert report.ok, report.violations
        # the two identification identities, re-checked directly
        from aelin import build_fixed_point_extension

        ext = build_fixed_point_extension(space, action, 1000)
        assert isinstance(ext.provenance, SupdistExtension)
        orbit_x0 = ext.provenance.orbits[ext.provenance.x0]
        for x in space.names():
            assert hausdorff_dist((x,), orbit_x0, space) == ext.d_z(x)
        for g in action.generators:
            image = {g.image_name(p) for p in orbit_x0}
            assert image == set(orbit_x0)

    # the non-group action fails in exactly the documented way
    space = FiniteMetricSpace.from_pairs(["a", "b"], [("a", "b", F(1))])
    action = SemigroupAction((GeneratorMap("s", table={"a": "b", "b": "b"}),))
    report = check_group_identification(space, action, 100)
    assert not report.ok
    assert any(v.kind == "orbit_not_fixed" for v in report.violations)


@pytest.mark.criterion(10, "byte-identical bundles for identical inputs")
def test_criterion_10_determinism(tmp_path):
    doc = json.dumps({
        "space": {"points": ["a", "b", "c"],
                  "dist": [["a", "b", "2"], ["b", "c", "1"], ["a", "c", "2"]]},
        "action": {"monoid": True,
                   "generators": [{"name": "s", "map": {"a": "b", "b": "c", "c": "c"}}]}})
    runner = CliRunner()
    paths = []
    for tag in ("one", "two"):
        out = tmp_path / f"{tag}.json"
        result = runner.invoke(
            cli_main,
            ["linearize", "-i", "-", "-o", str(out), "--budget", "100", "--seed", "7"],
            input=doc)
        assert result.exit_code == 0
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()
