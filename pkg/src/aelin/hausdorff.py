"""Hausdorff pseudometric on finite subsets and the group identification.

For a group of isometries, the extension built by the supdist
construction can be read inside the space of bounded subsets: points
become singletons, the adjoined fixed point becomes the orbit of x0,
and the Hausdorff distance reproduces the extension's distances.  For
a semigroup that is not a group this breaks in a specific way: the
orbit fails to be fixed under the elementwise action on subsets.
`check_group_identification` verifies the former exactly and reports
the latter as a finding instead of assuming either.
"""

from __future__ import annotations

from typing import Iterable

from .action import SemigroupAction
from .errors import PreconditionError
from .extension import ConstantExtension, build_fixed_point_extension
from .metric import FiniteMetricSpace, ValidationReport, Violation
from .scalars import Scalar


def as_subset(space: FiniteMetricSpace, names: Iterable[str]) -> tuple[str, ...]:
    """Normalize a nonempty point collection: dedup, space order."""
    idxs = sorted({space.index(n) for n in names})
    if not idxs:
        raise PreconditionError("bounded subsets must be nonempty")
    return tuple(space.points[i].name for i in idxs)


def hausdorff_dist(a: Iterable[str], b: Iterable[str], space: FiniteMetricSpace) -> Scalar:
    """max of the two one-sided deviations max-min between finite sets."""
    sa = as_subset(space, a)
    sb = as_subset(space, b)
    ia = [space.index(n) for n in sa]
    ib = [space.index(n) for n in sb]
    rows = space.rows
    best = space.mode.zero()
    for i in ia:
        v = min(rows[i][j] for j in ib)
        if v > best:
            best = v
    for j in ib:
        v = min(rows[i][j] for i in ia)
        if v > best:
            best = v
    return best


def _image_subset(space: FiniteMetricSpace, gen, subset: tuple[str, ...]) -> tuple[str, ...]:
    return as_subset(space, (gen.image_name(p) for p in subset))


def check_group_identification(space: FiniteMetricSpace, action: SemigroupAction,
                               budget: int) -> ValidationReport:
    """Check the subset-space reading of the extension, exactly.

    For bijective generators with non-expansive inverses (a group of
    isometries on a finite space) this verifies: singleton distances
    reproduce the metric, d_H({x}, S.x0) equals d(x, z) for the built
    extension, and the orbit of x0 is fixed under every generator's
    elementwise image.  Non-bijective generators are reported as
    violations, together with the orbit-not-fixed finding that explains
    why the identification fails for plain semigroups.
    """
    violations: list[Violation] = []
    names = space.names()
    bijective = True
    for g in action.generators:
        image = [g.image_name(p) for p in names]
        if len(set(image)) != len(names):
            bijective = False
            collisions = sorted({p for p in image if image.count(p) > 1})
            violations.append(Violation(
                "generator_not_bijective", (g.name,) + tuple(collisions), (),
                note="the generated action is not a group action"))
    if bijective:
        mode = space.mode
        for g in action.generators:
            inverse = {g.image_name(p): p for p in names}
            for i in range(space.n):
                for j in range(i + 1, space.n):
                    x, y = names[i], names[j]
                    dinv = space.d(inverse[x], inverse[y])
                    if not mode.le(dinv, space.rows[i][j]):
                        violations.append(Violation(
                            "inverse_expansive", (g.name, x, y), (dinv, space.rows[i][j]),
                            note="the inverse map is expansive"))

    ext = build_fixed_point_extension(space, action, budget)
    mode = space.mode

    for i in range(space.n):
        for j in range(i + 1, space.n):
            x, y = names[i], names[j]
            dh = hausdorff_dist((x,), (y,), space)
            if not mode.eq(dh, space.rows[i][j]):
                violations.append(Violation(
                    "singleton_isometry", (x, y), (dh, space.rows[i][j]),
                    note="d_H({x},{y}) != d(x,y)"))

    if isinstance(ext.provenance, ConstantExtension):
        return ValidationReport.from_violations(
            violations,
            checked="all points fixed: identification reduces to singleton pairs")

    x0 = ext.provenance.x0
    orbit_x0 = as_subset(space, ext.provenance.orbits[x0])
    for x in names:
        dh = hausdorff_dist((x,), orbit_x0, space)
        if not mode.eq(dh, ext.d_z(x)):
            violations.append(Violation(
                "orbit_distance", (x,) + orbit_x0, (dh, ext.d_z(x)),
                note="d_H({x}, S.x0) != d(x, z)"))

    for g in action.generators:
        im = _image_subset(space, g, orbit_x0)
        if im != orbit_x0:
            violations.append(Violation(
                "orbit_not_fixed", (g.name,) + orbit_x0, (),
                note=f"elementwise image is {{{', '.join(im)}}}"))

    return ValidationReport.from_violations(
        violations,
        checked=f"identification over the orbit of {x0!r} ({len(orbit_x0)} subsets + singletons)")
