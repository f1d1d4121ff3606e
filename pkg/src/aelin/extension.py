"""Fixed-point extensions of a space under a non-expansive action.

Two constructions produce a one-point extension in which the new point
is fixed under the action: the constant-distance extension (valid for
any bounded space, given a constant above the diameter) and the supdist
extension, which sets the new point's distances to

    d(z, x) = supdist(x0, S.x)

over certified-bounded orbits, for a deterministic non-fixed base point
x0.  Validation re-checks every claimed property instead of trusting
the construction: metric axioms including both nontrivial triangle
cases at z, fixedness of z, non-expansivity on the union, and the
verbatim reuse of the base table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .action import (
    GeneratorMap,
    OrbitResult,
    SemigroupAction,
    adjoin_identity,
    orbit,
)
from .errors import InternalDefect, OrbitBudgetExceeded, PreconditionError, StructuralError
from .metric import (
    RESERVED_POINT_NAME,
    FiniteMetricSpace,
    ValidationReport,
    Violation,
    diam,
    supdist,
    validate_metric,
)
from .scalars import Scalar


@dataclass(frozen=True)
class ConstantExtension:
    """Provenance: all distances to z equal one constant above diam."""

    c: Scalar

    kind = "constant"


@dataclass(frozen=True)
class SupdistExtension:
    """Provenance: d(z, x) = supdist(x0, orbit of x), with the orbits kept."""

    x0: str
    orbits: dict

    kind = "supdist"


Provenance = Union[ConstantExtension, SupdistExtension]


@dataclass(frozen=True)
class ExtendedSpace:
    """The base space plus one adjoined point z with its distances.

    The base table is reused verbatim, so the inclusion of the base
    into the extension is distance-preserving by construction.
    """

    base: FiniteMetricSpace
    z: str
    dist_to_z: dict
    provenance: Provenance

    def __post_init__(self):
        if self.base.has_point(self.z):
            raise StructuralError(f"adjoined point name {self.z!r} collides with a base point")
        for name in self.base.names():
            if name not in self.dist_to_z:
                raise StructuralError(f"missing distance to z for base point {name!r}")

    def full_space(self) -> FiniteMetricSpace:
        """The union as a finite space, z last."""
        names = list(self.base.names()) + [self.z]
        n = self.base.n
        rows = [list(r) + [self.dist_to_z[names[i]]] for i, r in enumerate(self.base.rows)]
        rows.append([self.dist_to_z[nm] for nm in names[:n]] + [self.base.mode.zero()])
        return FiniteMetricSpace.from_matrix(names, rows, self.base.mode)

    def d_z(self, x: str) -> Scalar:
        try:
            return self.dist_to_z[x]
        except KeyError:
            raise StructuralError(f"unknown base point {x!r}") from None


def extend_bounded_const(space: FiniteMetricSpace, action: SemigroupAction,
                         c: Scalar) -> ExtendedSpace:
    """Adjoin a fixed point at constant distance c > diam from everything."""
    for g in action.generators:
        if g.table is not None and RESERVED_POINT_NAME in g.table:
            raise StructuralError("the action already mentions the reserved point name")
    dm = diam(space.names(), space)
    if not space.mode.lt(dm, c):
        raise PreconditionError(
            f"constant extension needs c > diam; got c = {c} with diam = {dm}")
    return ExtendedSpace(
        base=space,
        z=RESERVED_POINT_NAME,
        dist_to_z={name: c for name in space.names()},
        provenance=ConstantExtension(c),
    )


def build_fixed_point_extension(space: FiniteMetricSpace, action: SemigroupAction,
                                budget: int) -> ExtendedSpace:
    """Adjoin a fixed point via the supdist construction.

    Adjoins an identity first if absent, so every orbit contains its
    base point.  Requires every orbit to close within `budget`; raises
    `OrbitBudgetExceeded` with the offending point otherwise.  When all
    points are fixed, falls back to the constant extension with
    c = diam + 1.
    """
    if not isinstance(space, FiniteMetricSpace):
        raise PreconditionError("the extension is built over a finite (materialized) space")
    act = adjoin_identity(action)
    orbits: dict[str, OrbitResult] = {}
    for name in space.names():
        res = orbit(name, act, space, budget)
        if not res.closed:
            raise OrbitBudgetExceeded(res.base)
        orbits[name] = res

    x0 = None
    for name in space.names():
        if any(g.image_name(name) != name for g in act.generators):
            x0 = name
            break
    if x0 is None:
        return extend_bounded_const(space, action, diam(space.names(), space) + space.mode.one())

    dist_to_z = {}
    for name in space.names():
        dist_to_z[name] = supdist(x0, orbits[name].points, space)
        if not space.mode.lt(space.mode.zero(), dist_to_z[name]):
            raise InternalDefect(f"nonpositive extension distance at {name!r}")
    return ExtendedSpace(
        base=space,
        z=RESERVED_POINT_NAME,
        dist_to_z=dist_to_z,
        provenance=SupdistExtension(x0, {n: orbits[n].points for n in space.names()}),
    )


def extend_action(action: SemigroupAction, ext: ExtendedSpace) -> SemigroupAction:
    """The action on the union: every generator additionally fixes z."""
    tables = []
    for g in action.generators:
        if g.table is None:
            raise StructuralError("extending an action requires finite generator tables")
        table = dict(g.table)
        table[ext.z] = ext.z
        tables.append(GeneratorMap(name=g.name, table=table))
    return SemigroupAction(tuple(tables), action.has_identity)


# Validation is split into aspect helpers so the pipeline can emit one
# certificate per claim; validate_extension aggregates all of them.

def metric_violations(ext: ExtendedSpace) -> list[Violation]:
    """Axioms on the union, with the two z-triangle cases labeled."""
    violations = list(validate_metric(ext.base).violations)
    mode = ext.base.mode
    names = ext.base.names()
    for x in names:
        if not mode.lt(mode.zero(), ext.d_z(x)):
            violations.append(Violation(
                "positivity_at_z", (x, ext.z), (ext.d_z(x),), note="d(x,z) <= 0"))
    for x in names:
        for y in names:
            if x == y:
                continue
            if not mode.le(ext.d_z(x), ext.base.d(x, y) + ext.d_z(y)):
                violations.append(Violation(
                    "triangle_a", (x, y, ext.z),
                    (ext.d_z(x), ext.base.d(x, y), ext.d_z(y)),
                    note="d(x,z) > d(x,y) + d(y,z)"))
    for i, x in enumerate(names):
        for y in names[i + 1:]:
            if not mode.le(ext.base.d(x, y), ext.d_z(x) + ext.d_z(y)):
                violations.append(Violation(
                    "triangle_b", (x, y, ext.z),
                    (ext.base.d(x, y), ext.d_z(x), ext.d_z(y)),
                    note="d(x,y) > d(x,z) + d(y,z)"))
    return violations


def fixed_point_violations(ext: ExtendedSpace, action: SemigroupAction) -> list[Violation]:
    """z must be fixed: a generator table may omit z or map it to z."""
    violations = []
    for g in action.generators:
        if g.table is not None and g.table.get(ext.z, ext.z) != ext.z:
            violations.append(Violation(
                "z_not_fixed", (g.name, ext.z), (),
                note=f"generator maps z to {g.table[ext.z]!r}"))
    return violations


def non_expansive_violations(ext: ExtendedSpace, action: SemigroupAction) -> list[Violation]:
    """Non-expansivity of every generator on the union, z included."""
    violations = []
    full = ext.full_space()
    mode = full.mode
    names = full.names()

    def image(g: GeneratorMap, p: str) -> str:
        if p == ext.z:
            return g.table.get(ext.z, ext.z) if g.table is not None else ext.z
        return g.image_name(p)

    for g in action.generators:
        for i in range(len(names)):
            for j in range(i + 1, len(names)):
                x, y = names[i], names[j]
                dxy = full.d(x, y)
                dgg = full.d(image(g, x), image(g, y))
                if not mode.le(dgg, dxy):
                    kind = "non_expansive_at_z" if ext.z in (x, y) else "non_expansive"
                    violations.append(Violation(
                        kind, (g.name, x, y), (dgg, dxy), note="d(g(x), g(y)) > d(x, y)"))
    return violations


def inclusion_violations(ext: ExtendedSpace) -> list[Violation]:
    """The base table must be reused verbatim in the union."""
    violations = []
    full = ext.full_space()
    for i, x in enumerate(ext.base.names()):
        for y in ext.base.names()[i + 1:]:
            if full.d(x, y) != ext.base.d(x, y):
                violations.append(Violation(
                    "inclusion_isometry", (x, y), (full.d(x, y), ext.base.d(x, y)),
                    note="the union disagrees with the base table"))
    return violations


def validate_extension(ext: ExtendedSpace, action: SemigroupAction) -> ValidationReport:
    """Every claimed property of the extension, re-checked exactly."""
    violations = []
    violations.extend(metric_violations(ext))
    violations.extend(fixed_point_violations(ext, action))
    violations.extend(non_expansive_violations(ext, action))
    violations.extend(inclusion_violations(ext))
    return ValidationReport.from_violations(
        violations,
        checked=f"extension of {ext.base.n} points by {ext.z!r}")


def check_diam_bound(ext: ExtendedSpace, action: SemigroupAction,
                     budget: int) -> ValidationReport:
    """Check diam(S.x) <= 2 d(x,z) for every base point.

    Orbits are taken under the action as given; a budget-exhausted
    orbit raises `OrbitBudgetExceeded` (inconclusive).
    """
    violations = []
    mode = ext.base.mode
    for name in ext.base.names():
        res = orbit(name, action, ext.base, budget)
        if not res.closed:
            raise OrbitBudgetExceeded(res.base)
        if not mode.le(res.diameter_so_far, 2 * ext.d_z(name)):
            violations.append(Violation(
                "diam_bound", (name, ext.z), (res.diameter_so_far, ext.d_z(name)),
                note="diam(S.x) > 2 d(x,z)"))
    return ValidationReport.from_violations(
        violations, checked=f"orbit diameters of {ext.base.n} points")
