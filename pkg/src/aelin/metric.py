"""Finite and implicit metric spaces with exact validation.

A `FiniteMetricSpace` stores one distance per ordered pair so that the
validator can detect asymmetric tables; the constructors that build
spaces from user input only ever produce symmetric tables.  An
`ImplicitMetricSpace` is a distance oracle over integer-tuple points
plus a finite list of seed points; it is materialized lazily and every
materialized finite subset is checked against the metric axioms rather
than trusted.

`supdist` and `diam` are the two primitives the extension construction
is built from: the largest distance from a point into a finite set, and
the largest distance within a set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .errors import InternalDefect, PreconditionError, StructuralError
from .scalars import EXACT, Mode, Scalar

RESERVED_POINT_NAME = "__z"

ImplicitPoint = tuple[int, ...]

# Materialized subsets larger than this are checked pairwise only
# (identity, positivity, symmetry); the triangle check is cubic.
TRIANGLE_CHECK_LIMIT = 500


@dataclass(frozen=True)
class PointId:
    """A named point with its dense index within one space."""

    name: str
    index: int


@dataclass(frozen=True)
class Violation:
    """One axiom violation with a concrete witness.

    `witness` names the offending points (and generator, where one is
    involved); `values` carries the numbers that break the axiom.
    """

    kind: str
    witness: tuple[str, ...]
    values: tuple[Scalar, ...]
    note: str = ""


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validation pass: ok iff no violations were found."""

    ok: bool
    violations: tuple[Violation, ...]
    checked: str = ""

    def __post_init__(self):
        if self.ok != (len(self.violations) == 0):
            raise InternalDefect("report consistency: ok must match empty violations")

    @classmethod
    def from_violations(cls, violations: Iterable[Violation], checked: str = "") -> "ValidationReport":
        vs = tuple(violations)
        return cls(ok=not vs, violations=vs, checked=checked)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """A finite point set with a fully populated ordered distance table.

    `rows[i][j]` is d(points[i], points[j]); `None` marks a missing
    entry, which `validate_metric` reports as a structural error rather
    than an axiom violation.
    """

    points: tuple[PointId, ...]
    rows: tuple[tuple[Union[Scalar, None], ...], ...]
    mode: Mode = EXACT

    def __post_init__(self):
        names = [p.name for p in self.points]
        if len(set(names)) != len(names):
            raise StructuralError("point names must be unique")
        for p in self.points:
            if not p.name:
                raise StructuralError("point names must be nonempty")
        if len(self.rows) != len(self.points) or any(len(r) != len(self.points) for r in self.rows):
            raise StructuralError("distance table shape must match the point list")
        object.__setattr__(self, "_index", {p.name: p.index for p in self.points})

    @classmethod
    def from_matrix(cls, names: Sequence[str], rows: Sequence[Sequence[Union[Scalar, None]]],
                    mode: Mode = EXACT) -> "FiniteMetricSpace":
        """Raw constructor; the table is taken verbatim, even if invalid."""
        points = tuple(PointId(n, i) for i, n in enumerate(names))
        return cls(points, tuple(tuple(r) for r in rows), mode)

    @classmethod
    def from_pairs(cls, names: Sequence[str], entries: Iterable[tuple[str, str, Scalar]],
                   mode: Mode = EXACT, allow_reserved: bool = False) -> "FiniteMetricSpace":
        """Build a symmetric table from one entry per unordered pair.

        Every unordered pair of distinct points must appear exactly
        once; self-pairs, duplicates, unknown names and missing pairs
        are structural errors.  The reserved name is rejected unless
        the caller is rebuilding an extension.
        """
        names = list(names)
        if not allow_reserved and RESERVED_POINT_NAME in names:
            raise StructuralError(f"point name {RESERVED_POINT_NAME!r} is reserved")
        index = {n: i for i, n in enumerate(names)}
        if len(index) != len(names):
            raise StructuralError("point names must be unique")
        n = len(names)
        table: list[list[Union[Scalar, None]]] = [[None] * n for _ in range(n)]
        for i in range(n):
            table[i][i] = mode.zero()
        for x, y, value in entries:
            if x not in index or y not in index:
                raise StructuralError(f"distance entry references unknown point: ({x!r}, {y!r})")
            i, j = index[x], index[y]
            if i == j:
                raise StructuralError(f"distance entry for a self-pair: {x!r}")
            if table[i][j] is not None:
                raise StructuralError(f"duplicate distance entry for pair ({x!r}, {y!r})")
            table[i][j] = value
            table[j][i] = value
        for i in range(n):
            for j in range(i + 1, n):
                if table[i][j] is None:
                    raise StructuralError(
                        f"missing distance entry for pair ({names[i]!r}, {names[j]!r})")
        return cls.from_matrix(names, table, mode)

    @property
    def n(self) -> int:
        return len(self.points)

    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.points)

    def has_point(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructuralError(f"unknown point {name!r}") from None

    def point(self, name: str) -> PointId:
        return self.points[self.index(name)]

    def d(self, x: Union[str, PointId], y: Union[str, PointId]) -> Scalar:
        i = x.index if isinstance(x, PointId) else self.index(x)
        j = y.index if isinstance(y, PointId) else self.index(y)
        value = self.rows[i][j]
        if value is None:
            raise StructuralError(
                f"missing distance entry for pair ({self.points[i].name!r}, {self.points[j].name!r})")
        return value


@dataclass(frozen=True)
class ImplicitMetricSpace:
    """A distance oracle over integer-tuple points, with seed points.

    Only finitely many points ever exist at runtime: the seeds plus
    whatever orbit enumeration materializes.  The oracle must be a
    metric on every materialized subset; `check_materialized` enforces
    that instead of assuming it.
    """

    seeds: tuple[ImplicitPoint, ...]
    oracle: Callable[[ImplicitPoint, ImplicitPoint], Scalar]
    mode: Mode = EXACT
    doc: Union[dict, None] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.seeds:
            raise StructuralError("an implicit space needs at least one seed point")
        dims = {len(s) for s in self.seeds}
        if len(dims) != 1:
            raise StructuralError("seed points must share one tuple arity")

    @staticmethod
    def name_of(p: ImplicitPoint) -> str:
        return ",".join(str(c) for c in p)

    def point_from_name(self, name: str) -> ImplicitPoint:
        try:
            return tuple(int(part) for part in name.split(","))
        except ValueError as exc:
            raise StructuralError(f"not an implicit point name: {name!r}") from exc

    def distance(self, p: ImplicitPoint, q: ImplicitPoint) -> Scalar:
        key = (p, q)
        hit = self._cache.get(key)
        if hit is None:
            try:
                hit = self.oracle(p, q)
            except Exception as exc:
                raise StructuralError(f"distance oracle failed on ({p}, {q}): {exc}") from exc
            self._cache[key] = hit
        return hit

    def materialize(self, pts: Sequence[ImplicitPoint]) -> FiniteMetricSpace:
        """Build the finite subspace on `pts`, checking the metric axioms."""
        self.check_materialized(pts)
        names = [self.name_of(p) for p in pts]
        rows = [[self.distance(p, q) for q in pts] for p in pts]
        return FiniteMetricSpace.from_matrix(names, rows, self.mode)

    def check_materialized(self, pts: Sequence[ImplicitPoint]) -> None:
        """Check metric axioms on `pts` via the oracle.

        The triangle check runs only up to `TRIANGLE_CHECK_LIMIT` points
        (it is cubic); the pairwise axioms are always checked.
        """
        mode = self.mode
        k = len(pts)
        for i in range(k):
            if not mode.is_zero(self.distance(pts[i], pts[i])):
                raise StructuralError(f"oracle gives d(x,x) != 0 at {pts[i]}")
        for i in range(k):
            for j in range(i + 1, k):
                dij = self.distance(pts[i], pts[j])
                dji = self.distance(pts[j], pts[i])
                if not mode.eq(dij, dji):
                    raise StructuralError(f"oracle is asymmetric on ({pts[i]}, {pts[j]})")
                if not mode.lt(mode.zero(), dij):
                    raise StructuralError(f"oracle gives a nonpositive distance on ({pts[i]}, {pts[j]})")
        if k <= TRIANGLE_CHECK_LIMIT:
            for i in range(k):
                for j in range(k):
                    if j == i:
                        continue
                    dji = self.distance(pts[j], pts[i])
                    for l in range(j + 1, k):
                        if l == i:
                            continue
                        if not mode.le(self.distance(pts[j], pts[l]),
                                       dji + self.distance(pts[i], pts[l])):
                            raise StructuralError(
                                "oracle violates the triangle inequality on "
                                f"({pts[j]}, {pts[i]}, {pts[l]})")


MetricSpace = Union[FiniteMetricSpace, ImplicitMetricSpace]


def validate_metric(space: FiniteMetricSpace) -> ValidationReport:
    """Check all metric axioms, reporting every violation with a witness.

    Missing table entries raise `StructuralError`; they are a malformed
    input, not an axiom violation.  Axioms are checked in a fixed order
    (identity, positivity, symmetry, triangle) with witnesses in point
    order, so reports are deterministic.
    """
    if not isinstance(space, FiniteMetricSpace):
        raise PreconditionError("validate_metric needs a finite space")
    names = space.names()
    n = space.n
    rows = space.rows
    for i in range(n):
        for j in range(n):
            if rows[i][j] is None:
                raise StructuralError(
                    f"missing distance entry for pair ({names[i]!r}, {names[j]!r})")
    mode = space.mode
    zero = mode.zero()
    violations: list[Violation] = []
    for i in range(n):
        if not mode.is_zero(rows[i][i]):
            violations.append(Violation("identity", (names[i],), (rows[i][i],)))
    for i in range(n):
        for j in range(i + 1, n):
            if not mode.lt(zero, rows[i][j]):
                violations.append(Violation("positivity", (names[i], names[j]), (rows[i][j],)))
    for i in range(n):
        for j in range(i + 1, n):
            if not mode.eq(rows[i][j], rows[j][i]):
                violations.append(
                    Violation("symmetry", (names[i], names[j]), (rows[i][j], rows[j][i])))
    for i in range(n):
        for j in range(i + 1, n):
            dij = rows[i][j]
            for k in range(n):
                if k == i or k == j:
                    continue
                if not mode.le(dij, rows[i][k] + rows[k][j]):
                    violations.append(Violation(
                        "triangle", (names[i], names[k], names[j]),
                        (dij, rows[i][k], rows[k][j]),
                        note="d(x,y) > d(x,w) + d(w,y)"))
    return ValidationReport.from_violations(
        violations, checked=f"all axioms on {n} points")


def _resolve_names(space: FiniteMetricSpace, pts: Iterable[Union[str, PointId]]) -> list[int]:
    out = []
    for p in pts:
        out.append(p.index if isinstance(p, PointId) else space.index(p))
    return out


def supdist(x: Union[str, PointId], subset: Iterable[Union[str, PointId]],
            space: FiniteMetricSpace) -> Scalar:
    """Largest distance from `x` into the nonempty finite set `subset`."""
    idxs = _resolve_names(space, subset)
    if not idxs:
        raise PreconditionError("supdist over an empty set is undefined")
    i = x.index if isinstance(x, PointId) else space.index(x)
    return max(space.rows[i][j] for j in idxs)


def diam(subset: Iterable[Union[str, PointId]], space: FiniteMetricSpace) -> Scalar:
    """Largest pairwise distance within `subset`; 0 for at most one point."""
    idxs = _resolve_names(space, subset)
    if len(idxs) <= 1:
        return space.mode.zero()
    best = space.mode.zero()
    for a in range(len(idxs)):
        row = space.rows[idxs[a]]
        for b in range(a + 1, len(idxs)):
            v = row[idxs[b]]
            if v > best:
                best = v
    return best
