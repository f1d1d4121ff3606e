"""Finitely generated semigroup actions and orbit enumeration.

An action is given by its generator self-maps; words are never
materialized, the action is always evaluated generator by generator.
Orbit enumeration is a breadth-first closure with a point budget:
``Closed`` is a proof that the orbit is finite (hence bounded), while
``BudgetExhausted`` means "unknown", never "unbounded".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, Sequence, Union

from .errors import OrbitBudgetExceeded, PreconditionError, StructuralError
from .metric import (
    FiniteMetricSpace,
    ImplicitMetricSpace,
    ImplicitPoint,
    MetricSpace,
    ValidationReport,
    Violation,
)
from .scalars import Scalar


@dataclass(frozen=True)
class GeneratorMap:
    """One generator: a total self-map of the space's points.

    Finite spaces use a name-to-name table; implicit spaces use a rule
    on integer tuples (with its source text kept for serialization).
    """

    name: str
    table: Union[dict, None] = None
    rule: Union[Callable[[ImplicitPoint], ImplicitPoint], None] = None
    rule_src: Union[str, None] = None

    def __post_init__(self):
        if not self.name:
            raise StructuralError("generator names must be nonempty")
        if (self.table is None) == (self.rule is None):
            raise StructuralError(f"generator {self.name!r} needs exactly one of table or rule")

    def image_name(self, point: str) -> str:
        if self.table is None:
            raise StructuralError(f"generator {self.name!r} has no finite table")
        try:
            return self.table[point]
        except KeyError:
            raise StructuralError(
                f"generator {self.name!r} is not total: no image for point {point!r}") from None

    def image_point(self, point: ImplicitPoint) -> ImplicitPoint:
        if self.rule is None:
            raise StructuralError(f"generator {self.name!r} has no symbolic rule")
        try:
            image = self.rule(point)
        except Exception as exc:
            raise StructuralError(f"generator {self.name!r} failed on point {point}: {exc}") from exc
        if not isinstance(image, tuple) or not all(isinstance(c, int) for c in image):
            raise StructuralError(f"generator {self.name!r} produced a non-point value: {image!r}")
        return image


@dataclass(frozen=True)
class SemigroupAction:
    """A nonempty generator list plus the monoid flag.

    The semigroup elements are exactly the nonempty generator words;
    with `has_identity` the empty word is included, so every orbit
    contains its base point.
    """

    generators: tuple[GeneratorMap, ...]
    has_identity: bool = False

    def __post_init__(self):
        if not self.generators:
            raise StructuralError("an action needs at least one generator")
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise StructuralError("generator names must be unique")

    def generator(self, name: str) -> GeneratorMap:
        for g in self.generators:
            if g.name == name:
                return g
        raise StructuralError(f"unknown generator {name!r}")


class OrbitStatus(enum.Enum):
    CLOSED = "closed"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class OrbitResult:
    """Points reached from `base`, in breadth-first discovery order.

    With status CLOSED the point set is closed under every generator
    and equals the orbit exactly; with BUDGET_EXHAUSTED it is a subset
    and `diameter_so_far` a lower bound on the orbit diameter.
    """

    base: str
    points: tuple[str, ...]
    status: OrbitStatus
    diameter_so_far: Scalar
    budget_used: int

    @property
    def closed(self) -> bool:
        return self.status is OrbitStatus.CLOSED


def adjoin_identity(action: SemigroupAction) -> SemigroupAction:
    """Extend a plain semigroup with the empty word; idempotent."""
    if action.has_identity:
        return action
    return replace(action, has_identity=True)


def _resolve_implicit_base(space: ImplicitMetricSpace, x) -> ImplicitPoint:
    if isinstance(x, tuple):
        return x
    if isinstance(x, str):
        return space.point_from_name(x)
    raise StructuralError(f"not an implicit point: {x!r}")


def orbit(x, action: SemigroupAction, space: MetricSpace, budget: int) -> OrbitResult:
    """Breadth-first closure of `x` under the generators.

    Starts from the generator images of `x`, plus `x` itself iff the
    action has an identity.  Stops with BUDGET_EXHAUSTED as soon as a
    new point would push the orbit past `budget` points.  For implicit
    spaces the materialized subset is checked against the metric
    axioms, not assumed to satisfy them.
    """
    if budget < 1:
        raise PreconditionError("orbit budget must be at least 1")
    if isinstance(space, FiniteMetricSpace):
        base_key = x if isinstance(x, str) else x.name
        space.index(base_key)
        step = lambda g, p: g.image_name(p)
        name_of = lambda p: p
    else:
        base_key = _resolve_implicit_base(space, x)
        step = lambda g, p: g.image_point(p)
        name_of = space.name_of

    reached: dict = {}
    exhausted = False

    def add(p) -> bool:
        nonlocal exhausted
        if p in reached:
            return False
        if len(reached) >= budget:
            exhausted = True
            return False
        reached[p] = None
        return True

    if action.has_identity:
        add(base_key)
    frontier = []
    for g in action.generators:
        p = step(g, base_key)
        if add(p):
            frontier.append(p)
    while frontier and not exhausted:
        next_frontier = []
        for p in frontier:
            for g in action.generators:
                q = step(g, p)
                if add(q):
                    next_frontier.append(q)
                if exhausted:
                    break
            if exhausted:
                break
        frontier = next_frontier

    pts = list(reached.keys())
    if isinstance(space, FiniteMetricSpace):
        diameter = _finite_diameter(space, pts)
    else:
        space.check_materialized(pts)
        diameter = _implicit_diameter(space, pts)
    status = OrbitStatus.BUDGET_EXHAUSTED if exhausted else OrbitStatus.CLOSED
    return OrbitResult(
        base=base_key if isinstance(base_key, str) else name_of(base_key),
        points=tuple(name_of(p) for p in pts),
        status=status,
        diameter_so_far=diameter,
        budget_used=len(pts),
    )


def _finite_diameter(space: FiniteMetricSpace, pts: Sequence[str]) -> Scalar:
    best = space.mode.zero()
    idxs = [space.index(p) for p in pts]
    for a in range(len(idxs)):
        row = space.rows[idxs[a]]
        for b in range(a + 1, len(idxs)):
            v = row[idxs[b]]
            if v > best:
                best = v
    return best


def _implicit_diameter(space: ImplicitMetricSpace, pts: Sequence[ImplicitPoint]) -> Scalar:
    best = space.mode.zero()
    for a in range(len(pts)):
        for b in range(a + 1, len(pts)):
            v = space.distance(pts[a], pts[b])
            if v > best:
                best = v
    return best


def check_non_expansive(action: SemigroupAction, space: MetricSpace,
                        budget: int = 0) -> ValidationReport:
    """Check d(g(x), g(y)) <= d(x, y) for every generator and pair.

    Checking generators suffices: compositions of non-expansive maps
    are non-expansive, so the property extends to all words.  Finite
    spaces are checked on all pairs (budget ignored); implicit spaces
    on all pairs among the points materialized from the seeds, up to
    `budget` points.
    """
    if isinstance(space, FiniteMetricSpace):
        names = space.names()
        for g in action.generators:
            for p in names:
                image = g.image_name(p)
                space.index(image)
        violations = []
        for g in action.generators:
            for i in range(space.n):
                for j in range(i + 1, space.n):
                    x, y = names[i], names[j]
                    dxy = space.rows[i][j]
                    dgg = space.d(g.image_name(x), g.image_name(y))
                    if not space.mode.le(dgg, dxy):
                        violations.append(Violation(
                            "non_expansive", (g.name, x, y), (dgg, dxy),
                            note="d(g(x), g(y)) > d(x, y)"))
        return ValidationReport.from_violations(
            violations, checked=f"all {space.n * (space.n - 1) // 2} pairs, "
                                f"{len(action.generators)} generators")

    if budget < 1:
        raise PreconditionError("implicit spaces need a positive budget")
    pts = _materialized_from_seeds(space, action, budget)
    space.check_materialized(pts)
    violations = []
    for g in action.generators:
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                x, y = pts[a], pts[b]
                dxy = space.distance(x, y)
                dgg = space.distance(g.image_point(x), g.image_point(y))
                if not space.mode.le(dgg, dxy):
                    violations.append(Violation(
                        "non_expansive",
                        (g.name, space.name_of(x), space.name_of(y)),
                        (dgg, dxy), note="d(g(x), g(y)) > d(x, y)"))
    return ValidationReport.from_violations(
        violations, checked=f"first {len(pts)} materialized points only")


def _materialized_from_seeds(space: ImplicitMetricSpace, action: SemigroupAction,
                             budget: int) -> list[ImplicitPoint]:
    """Seeds plus their generator closure, truncated at `budget` points."""
    reached: dict = {}
    frontier = []
    for s in space.seeds:
        if s not in reached and len(reached) < budget:
            reached[s] = None
            frontier.append(s)
    while frontier:
        next_frontier = []
        for p in frontier:
            for g in action.generators:
                q = g.image_point(p)
                if q not in reached and len(reached) < budget:
                    reached[q] = None
                    next_frontier.append(q)
        frontier = next_frontier
    return list(reached.keys())


def find_fixed_points(action: SemigroupAction, space: MetricSpace) -> tuple[str, ...]:
    """All points fixed by every generator (hence by every word)."""
    if isinstance(space, FiniteMetricSpace):
        out = []
        for p in space.names():
            if all(g.image_name(p) == p for g in action.generators):
                out.append(p)
        return tuple(out)
    out = []
    for s in space.seeds:
        if all(g.image_point(s) == s for g in action.generators):
            out.append(space.name_of(s))
    return tuple(out)


def check_remark2_transfer(x, y, action: SemigroupAction, space: MetricSpace,
                           budget: int) -> ValidationReport:
    """Check diam(S.y) <= 2 d(x,y) + diam(S.x) on certified orbits.

    Raises `OrbitBudgetExceeded` when either orbit fails to close: the
    outcome is then inconclusive, not a violation.
    """
    ox = orbit(x, action, space, budget)
    if not ox.closed:
        raise OrbitBudgetExceeded(ox.base, "orbit of the first point did not close")
    oy = orbit(y, action, space, budget)
    if not oy.closed:
        raise OrbitBudgetExceeded(oy.base, "orbit of the second point did not close")
    if isinstance(space, FiniteMetricSpace):
        dxy = space.d(x if isinstance(x, str) else x.name, y if isinstance(y, str) else y.name)
    else:
        dxy = space.distance(_resolve_implicit_base(space, x), _resolve_implicit_base(space, y))
    bound = 2 * dxy + ox.diameter_so_far
    violations = []
    if not space.mode.le(oy.diameter_so_far, bound):
        violations.append(Violation(
            "orbit_diameter_transfer", (ox.base, oy.base),
            (oy.diameter_so_far, dxy, ox.diameter_so_far),
            note="diam(S.y) > 2 d(x,y) + diam(S.x)"))
    return ValidationReport.from_violations(
        violations,
        checked=f"diam(S.{oy.base}) = {oy.diameter_so_far} vs "
                f"2*{dxy} + {ox.diameter_so_far}")


def apply_word(word: Sequence[str], p, action: SemigroupAction, space: MetricSpace):
    """Apply a generator word to one point, first name first.

    The empty word is the identity and is only allowed on monoids.
    """
    if not word and not action.has_identity:
        raise PreconditionError("the empty word needs an identity (monoid) action")
    if isinstance(space, FiniteMetricSpace):
        q = p if isinstance(p, str) else p.name
        for name in word:
            q = action.generator(name).image_name(q)
        return q
    q = _resolve_implicit_base(space, p)
    for name in word:
        q = action.generator(name).image_point(q)
    return q


def materialize_closure(space: MetricSpace, action: SemigroupAction,
                        budget: int) -> tuple[FiniteMetricSpace, SemigroupAction]:
    """Materialize an implicit space into the closure of its seeds.

    Computes each seed's orbit (raising `OrbitBudgetExceeded` with the
    offending seed if one fails to close), then builds the finite
    subspace on seeds plus orbit points and rewrites rule generators as
    finite tables over it.  Finite spaces pass through unchanged.
    """
    if isinstance(space, FiniteMetricSpace):
        return space, action
    pts: dict = {s: None for s in space.seeds}
    for s in space.seeds:
        res = orbit(s, action, space, budget)
        if not res.closed:
            raise OrbitBudgetExceeded(res.base)
        for name in res.points:
            pts[space.point_from_name(name)] = None
    ordered = list(pts.keys())
    finite = space.materialize(ordered)
    tables = []
    for g in action.generators:
        table = {space.name_of(p): space.name_of(g.image_point(p)) for p in ordered}
        tables.append(GeneratorMap(name=g.name, table=table))
    return finite, SemigroupAction(tuple(tables), action.has_identity)
