"""The Arens-Eells normed space over a pointed finite metric space.

Elements are formal linear combinations of point differences; two
combinations denote the same element iff they reduce to the same
zero-total signed mass, and the norm is the least total cost of
transporting the positive part of that mass onto the negative part.
Because the ground distance satisfies the triangle inequality, routing
through extra points never beats a direct flow edge, so the infimum
over all representations is attained by a min-cost flow on the support
alone; the returned dual potential is 1-Lipschitz on the whole space by
construction and certifies optimality against every representation,
support-restricted or not.

Every norm comes back as a `NormResult` carrying both witnesses: the
optimal transport plan (a representation achieving the value) and the
potential (a lower bound matching it exactly in rational mode).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .action import SemigroupAction
from .errors import InternalDefect, PreconditionError, StructuralError
from .metric import FiniteMetricSpace, ValidationReport, Violation
from .scalars import Scalar
from .transport import solve_transport

Term = tuple[Scalar, str, str]


@dataclass(frozen=True)
class PointedSpace:
    """A finite metric space with a designated base point."""

    space: FiniteMetricSpace
    base: str

    def __post_init__(self):
        self.space.index(self.base)


@dataclass(frozen=True)
class FormalCombination:
    """A presentation sum of coefficient * (x - y) terms.

    Presentations are not canonical; equality of elements is equality
    of reduced signed masses.
    """

    terms: tuple[Term, ...]

    @classmethod
    def of(cls, *terms: Term) -> "FormalCombination":
        return cls(tuple(terms))

    def scale(self, c: Scalar) -> "FormalCombination":
        return FormalCombination(tuple((c * coeff, x, y) for coeff, x, y in self.terms))

    def __add__(self, other: "FormalCombination") -> "FormalCombination":
        return FormalCombination(self.terms + other.terms)


ZERO = FormalCombination(())


@dataclass(frozen=True)
class SignedMass:
    """Canonical form: point weights summing to zero, zeros removed.

    Entries are sorted by point name, so equal masses compare equal.
    """

    entries: tuple[tuple[str, Scalar], ...]

    def as_dict(self) -> dict:
        return dict(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)


@dataclass(frozen=True)
class TransportPlan:
    """Positive flows between points; cost is sum amount * d(from, to)."""

    flows: tuple[tuple[str, str, Scalar], ...]

    def cost(self, space: FiniteMetricSpace) -> Scalar:
        total = space.mode.zero()
        for src, dst, amount in self.flows:
            total += amount * space.d(src, dst)
        return total


@dataclass(frozen=True)
class LipschitzPotential:
    """A point function intended to be 1-Lipschitz; the dual witness."""

    values: tuple[tuple[str, Scalar], ...]

    def as_dict(self) -> dict:
        return dict(self.values)


@dataclass(frozen=True)
class NormResult:
    """Norm value with its primal witness (plan) and dual witness (potential)."""

    value: Scalar
    plan: TransportPlan
    potential: LipschitzPotential


def reduce(u: FormalCombination) -> SignedMass:
    """Accumulate +c at x and -c at y per term; drop exact zeros."""
    acc: dict[str, Scalar] = {}
    for c, x, y in u.terms:
        acc[x] = acc.get(x, 0) + c
        acc[y] = acc.get(y, 0) - c
    entries = tuple(sorted((name, val) for name, val in acc.items() if val != 0))
    return SignedMass(entries)


def _check_membership(u: FormalCombination, space: FiniteMetricSpace):
    for _, x, y in u.terms:
        space.index(x)
        space.index(y)


def ae_norm(u: FormalCombination, pointed: PointedSpace) -> NormResult:
    """Exact norm of a combination, with primal and dual certificates.

    The value is the minimum cost of moving the reduced positive mass
    onto the reduced negative mass; the plan is an optimal such move
    (hence a representation of `u` achieving the value) and the
    potential is 1-Lipschitz with sum(mass * potential) equal to the
    value, exactly in rational mode.
    """
    space = pointed.space
    _check_membership(u, space)
    mass = reduce(u)
    return mass_norm(mass, pointed)


def mass_norm(mass: SignedMass, pointed: PointedSpace) -> NormResult:
    """Norm of an already-reduced signed mass (see `ae_norm`)."""
    space = pointed.space
    mode = space.mode
    zero = mode.zero()
    for name, _ in mass.entries:
        space.index(name)

    pos = [(name, val) for name, val in mass.entries if val > zero]
    neg = [(name, -val) for name, val in mass.entries if val < zero]
    if not pos and not neg:
        potential = LipschitzPotential(((pointed.base, zero),))
        return NormResult(zero, TransportPlan(()), potential)
    if not pos or not neg:
        raise StructuralError("signed mass does not sum to zero")
    if mode.exact and sum(v for _, v in pos) != sum(v for _, v in neg):
        raise StructuralError("signed mass does not sum to zero")

    pos.sort(key=lambda e: space.index(e[0]))
    neg.sort(key=lambda e: space.index(e[0]))
    supply = [v for _, v in pos]
    demand = [v for _, v in neg]
    if not mode.exact:
        demand[-1] += sum(supply) - sum(demand)
    cost = [[space.d(p, q) for q, _ in neg] for p, _ in pos]
    total, flows, _, v_dual = solve_transport(cost, supply, demand, mode)

    plan = TransportPlan(tuple(
        (pos[i][0], neg[j][0], amt) for (i, j), amt in sorted(flows.items())))

    # McShane extension of the column duals: 1-Lipschitz on the whole
    # space, and its pairing with the mass equals the optimal cost.
    domain = list(mass.support)
    if pointed.base not in mass.support:
        domain.append(pointed.base)
    domain.sort(key=space.index)
    values = []
    for t in domain:
        values.append((t, min(space.d(t, neg[j][0]) - v_dual[j] for j in range(len(neg)))))
    potential = LipschitzPotential(tuple(values))

    if mode.exact:
        if plan.cost(space) != total:
            raise InternalDefect("transport plan cost disagrees with the optimum")
        potdict = dict(values)
        pairing = sum(val * potdict[name] for name, val in mass.entries)
        if pairing != total:
            raise InternalDefect("dual potential does not match the optimum")
    return NormResult(total, plan, potential)


def embed(x: str, pointed: PointedSpace) -> FormalCombination:
    """The isometric embedding x -> (x - base); the base goes to zero."""
    pointed.space.index(x)
    if x == pointed.base:
        return ZERO
    return FormalCombination.of((pointed.space.mode.one(), x, pointed.base))


def apply_action(word: Sequence[str], u: FormalCombination,
                 action: SemigroupAction) -> FormalCombination:
    """Termwise image of a combination under a generator word.

    Linear by construction; non-expansivity of the action makes it a
    contraction in the norm.  The empty word needs a monoid.
    """
    if not word and not action.has_identity:
        raise PreconditionError("the empty word needs an identity (monoid) action")
    gens = [action.generator(name) for name in word]
    out = []
    for c, x, y in u.terms:
        gx, gy = x, y
        for g in gens:
            gx = g.image_name(gx)
            gy = g.image_name(gy)
        out.append((c, gx, gy))
    return FormalCombination(tuple(out))


def verify_dual_certificate(u: FormalCombination, claimed: NormResult,
                            pointed: PointedSpace) -> ValidationReport:
    """Re-check a NormResult from scratch: Lipschitzness of the
    potential, plan feasibility against the reduced mass, plan cost
    equal to the value, and dual pairing equal to the value.  Exact in
    rational mode; within tol*(1+|value|) in float mode.
    """
    space = pointed.space
    mode = space.mode
    violations: list[Violation] = []
    mass = reduce(u)

    pot = claimed.potential.as_dict()
    for name in mass.support:
        if name not in pot:
            violations.append(Violation(
                "potential_domain", (name,), (), note="reduced support not covered"))
    if pointed.base not in pot:
        violations.append(Violation(
            "potential_domain", (pointed.base,), (), note="base point not covered"))
    dom = [n for n in pot if space.has_point(n)]
    dom.sort(key=space.index)
    for n in pot:
        if not space.has_point(n):
            violations.append(Violation("potential_domain", (n,), (), note="unknown point"))
    for i in range(len(dom)):
        for j in range(i + 1, len(dom)):
            gap = pot[dom[i]] - pot[dom[j]]
            dij = space.d(dom[i], dom[j])
            if not mode.le(abs(gap), dij):
                violations.append(Violation(
                    "lipschitz", (dom[i], dom[j]), (gap, dij),
                    note="|f(p) - f(q)| > d(p,q)"))

    divergence: dict[str, Scalar] = {}
    for src, dst, amount in claimed.plan.flows:
        if not space.has_point(src) or not space.has_point(dst):
            violations.append(Violation("plan_endpoint", (src, dst), (amount,)))
            continue
        if not amount > mode.zero():
            violations.append(Violation(
                "plan_amount", (src, dst), (amount,), note="flow amounts must be positive"))
        divergence[src] = divergence.get(src, 0) + amount
        divergence[dst] = divergence.get(dst, 0) - amount
    mass_dict = mass.as_dict()
    for name in sorted(set(divergence) | set(mass_dict)):
        net = divergence.get(name, mode.zero())
        want = mass_dict.get(name, mode.zero())
        if not mode.eq(net, want):
            violations.append(Violation(
                "plan_divergence", (name,), (net, want),
                note="plan divergence disagrees with the reduced mass"))

    plan_cost = claimed.plan.cost(space)
    if not mode.close_rel(plan_cost, claimed.value):
        violations.append(Violation(
            "plan_cost", (), (plan_cost, claimed.value), note="plan cost != value"))
    missing = [n for n in mass.support if n not in pot]
    if not missing:
        pairing = mode.zero()
        for name, val in mass.entries:
            pairing += val * pot[name]
        if not mode.close_rel(pairing, claimed.value):
            violations.append(Violation(
                "dual_value", (), (pairing, claimed.value),
                note="sum(mass * potential) != value"))

    return ValidationReport.from_violations(
        violations, checked=f"certificate for a mass of support {len(mass.support)}")
