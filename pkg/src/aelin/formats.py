"""Structured-text (JSON) formats for every document the tools exchange.

Spaces, actions, combinations, orbit results, reports, extensions and
norm results all have one canonical serialization with bit-exact
rationals ("p/q" strings in exact mode, numbers in float mode), so any
output can be re-validated by an independent tool.  `canonical_json`
is deterministic: sorted keys, fixed separators, trailing newline.
"""

from __future__ import annotations

import ast
import json
from fractions import Fraction
from .action import GeneratorMap, OrbitResult, SemigroupAction
from .arens_eells import (
    FormalCombination,
    LipschitzPotential,
    NormResult,
    SignedMass,
    TransportPlan,
)
from .errors import StructuralError
from .extension import ConstantExtension, ExtendedSpace, SupdistExtension
from .metric import (
    FiniteMetricSpace,
    ImplicitMetricSpace,
    MetricSpace,
    ValidationReport,
)
from .scalars import Mode

FORMAT_VERSION = "1"

IMPLICIT_METRICS = ("l1", "linf")


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _require(cond: bool, message: str):
    if not cond:
        raise StructuralError(message)


# ---------------------------------------------------------------- spaces

def parse_space(doc: dict, mode: Mode) -> MetricSpace:
    _require(isinstance(doc, dict), "space document must be an object")
    if doc.get("implicit"):
        return _parse_implicit_space(doc, mode)
    _require("points" in doc and "dist" in doc, "space document needs points and dist")
    points = doc["points"]
    _require(isinstance(points, list) and all(isinstance(p, str) for p in points),
             "points must be a list of names")
    entries = []
    _require(isinstance(doc["dist"], list), "dist must be a list of [x, y, value] entries")
    for entry in doc["dist"]:
        _require(isinstance(entry, (list, tuple)) and len(entry) == 3,
                 f"bad dist entry: {entry!r}")
        x, y, value = entry
        entries.append((x, y, mode.parse(value)))
    return FiniteMetricSpace.from_pairs(points, entries, mode)


def _parse_implicit_space(doc: dict, mode: Mode) -> ImplicitMetricSpace:
    seeds = doc.get("seeds")
    _require(isinstance(seeds, list) and seeds, "implicit space needs a nonempty seeds list")
    parsed = []
    for s in seeds:
        _require(isinstance(s, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in s),
                 f"bad seed point: {s!r}")
        parsed.append(tuple(s))
    metric = doc.get("metric", "l1")
    _require(metric in IMPLICIT_METRICS,
             f"unknown implicit metric {metric!r}; known: {', '.join(IMPLICIT_METRICS)}")
    if metric == "l1":
        def oracle(p, q):
            v = sum(abs(a - b) for a, b in zip(p, q))
            return Fraction(v) if mode.exact else float(v)
    else:
        def oracle(p, q):
            v = max(abs(a - b) for a, b in zip(p, q))
            return Fraction(v) if mode.exact else float(v)
    clean = {"implicit": True, "seeds": [list(s) for s in parsed], "metric": metric}
    return ImplicitMetricSpace(tuple(parsed), oracle, mode, doc=clean)


def serialize_space(space: MetricSpace) -> dict:
    if isinstance(space, ImplicitMetricSpace):
        _require(space.doc is not None, "this implicit space has no serializable description")
        return dict(space.doc)
    mode = space.mode
    names = space.names()
    dist = []
    for i in range(space.n):
        for j in range(i + 1, space.n):
            dist.append([names[i], names[j], mode.format(space.rows[i][j])])
    return {"points": list(names), "dist": dist}


# ---------------------------------------------------------------- actions

def compile_rule(src: str) -> tuple:
    """Compile a rule like ``n -> n+1`` or ``(a,b) -> (b, a-1)``.

    The expression language is integer arithmetic (+, -, *) over the
    tuple components named on the left-hand side.
    """
    _require(isinstance(src, str) and "->" in src, f"bad generator rule: {src!r}")
    lhs, rhs = src.split("->", 1)
    names = [part.strip() for part in lhs.strip().strip("()").split(",") if part.strip()]
    _require(names and all(n.isidentifier() for n in names),
             f"bad rule variables in {src!r}")
    _require(len(set(names)) == len(names), f"repeated rule variables in {src!r}")
    try:
        tree = ast.parse(rhs.strip(), mode="eval")
    except SyntaxError as exc:
        raise StructuralError(f"bad rule expression in {src!r}: {exc}") from exc
    for node in ast.walk(tree):
        if isinstance(node, (ast.Expression, ast.Tuple, ast.Load)):
            continue
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Add, ast.Sub, ast.Mult)):
            continue
        if isinstance(node, (ast.Add, ast.Sub, ast.Mult, ast.USub, ast.UAdd)):
            continue
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            continue
        if isinstance(node, ast.Name):
            _require(node.id in names, f"unknown variable {node.id!r} in rule {src!r}")
            continue
        if isinstance(node, ast.Constant) and isinstance(node.value, int) \
                and not isinstance(node.value, bool):
            continue
        raise StructuralError(f"disallowed construct in rule {src!r}")
    code = compile(tree, "<rule>", "eval")
    arity = len(names)

    def rule(pt: tuple) -> tuple:
        if len(pt) != arity:
            raise StructuralError(f"rule {src!r} expects {arity}-tuples, got {pt}")
        value = eval(code, {"__builtins__": {}}, dict(zip(names, pt)))
        out = value if isinstance(value, tuple) else (value,)
        return tuple(int(c) for c in out)

    return rule, arity


def parse_action(doc: dict, space: MetricSpace) -> SemigroupAction:
    _require(isinstance(doc, dict), "action document must be an object")
    gens = doc.get("generators")
    _require(isinstance(gens, list) and gens, "action needs a nonempty generators list")
    implicit = isinstance(space, ImplicitMetricSpace)
    maps = []
    for g in gens:
        _require(isinstance(g, dict) and isinstance(g.get("name"), str),
                 f"bad generator entry: {g!r}")
        if implicit:
            _require("rule" in g, f"generator {g['name']!r} needs a rule on an implicit space")
            rule, arity = compile_rule(g["rule"])
            _require(arity == len(space.seeds[0]),
                     f"rule arity of generator {g['name']!r} does not match the seed arity")
            maps.append(GeneratorMap(name=g["name"], rule=rule, rule_src=g["rule"]))
        else:
            table = g.get("map")
            _require(isinstance(table, dict), f"generator {g['name']!r} needs a map table")
            for k, v in table.items():
                _require(isinstance(k, str) and isinstance(v, str),
                         f"bad map entry in generator {g['name']!r}")
            maps.append(GeneratorMap(name=g["name"], table=dict(table)))
    return SemigroupAction(tuple(maps), has_identity=bool(doc.get("monoid", False)))


def serialize_action(action: SemigroupAction) -> dict:
    gens = []
    for g in action.generators:
        if g.table is not None:
            gens.append({"name": g.name, "map": {k: g.table[k] for k in sorted(g.table)}})
        else:
            _require(g.rule_src is not None,
                     f"generator {g.name!r} has no serializable rule")
            gens.append({"name": g.name, "rule": g.rule_src})
    return {"monoid": action.has_identity, "generators": gens}


# ----------------------------------------------------------- combinations

def parse_combination(doc: dict, mode: Mode) -> FormalCombination:
    _require(isinstance(doc, dict) and isinstance(doc.get("terms"), list),
             "combination document needs a terms list")
    terms = []
    for t in doc["terms"]:
        _require(isinstance(t, dict) and {"c", "x", "y"} <= set(t),
                 f"bad combination term: {t!r}")
        _require(isinstance(t["x"], str) and isinstance(t["y"], str),
                 f"bad combination term: {t!r}")
        terms.append((mode.parse(t["c"]), t["x"], t["y"]))
    return FormalCombination(tuple(terms))


def serialize_combination(u: FormalCombination, mode: Mode) -> dict:
    return {"terms": [{"c": mode.format(c), "x": x, "y": y} for c, x, y in u.terms]}


def serialize_mass(mass: SignedMass, mode: Mode) -> dict:
    return {name: mode.format(val) for name, val in mass.entries}


def serialize_norm_result(result: NormResult, mode: Mode) -> dict:
    return {
        "value": mode.format(result.value),
        "plan": [{"from": src, "to": dst, "amount": mode.format(a)}
                 for src, dst, a in result.plan.flows],
        "potential": {name: mode.format(v) for name, v in result.potential.values},
    }


def parse_norm_result(doc: dict, mode: Mode) -> NormResult:
    _require(isinstance(doc, dict) and "value" in doc, "norm result needs a value")
    plan = TransportPlan(tuple(
        (f["from"], f["to"], mode.parse(f["amount"])) for f in doc.get("plan", [])))
    potential = LipschitzPotential(tuple(
        sorted((name, mode.parse(v)) for name, v in doc.get("potential", {}).items())))
    return NormResult(mode.parse(doc["value"]), plan, potential)


# ---------------------------------------------------------------- reports

def serialize_report(report: ValidationReport, mode: Mode) -> dict:
    return {
        "ok": report.ok,
        "checked": report.checked,
        "violations": [
            {
                "kind": v.kind,
                "witness": list(v.witness),
                "values": [mode.format(s) for s in v.values],
                "note": v.note,
            }
            for v in report.violations
        ],
    }


def serialize_orbit(result: OrbitResult, mode: Mode) -> dict:
    return {
        "base": result.base,
        "points": list(result.points),
        "status": result.status.value,
        "diameter": mode.format(result.diameter_so_far),
        "budget_used": result.budget_used,
    }


# ------------------------------------------------------------- extensions

def serialize_extension(ext: ExtendedSpace) -> dict:
    full = ext.full_space()
    doc = serialize_space(full)
    doc["z"] = ext.z
    if isinstance(ext.provenance, ConstantExtension):
        doc["provenance"] = {"kind": "constant", "c": full.mode.format(ext.provenance.c)}
    else:
        doc["provenance"] = {
            "kind": "supdist",
            "x0": ext.provenance.x0,
            "orbits": {name: list(pts) for name, pts in sorted(ext.provenance.orbits.items())},
        }
    return doc


def parse_extension(doc: dict, mode: Mode) -> ExtendedSpace:
    _require(isinstance(doc, dict) and "z" in doc, "extension document needs a z field")
    z = doc["z"]
    points = doc.get("points", [])
    _require(z in points, "the adjoined point must be listed among the points")
    entries = []
    for entry in doc.get("dist", []):
        _require(isinstance(entry, (list, tuple)) and len(entry) == 3,
                 f"bad dist entry: {entry!r}")
        x, y, value = entry
        entries.append((x, y, mode.parse(value)))
    full = FiniteMetricSpace.from_pairs(points, entries, mode, allow_reserved=True)
    base_names = [p for p in points if p != z]
    base_rows = [[full.d(x, y) for y in base_names] for x in base_names]
    base = FiniteMetricSpace.from_matrix(base_names, base_rows, mode)
    dist_to_z = {name: full.d(name, z) for name in base_names}
    prov_doc = doc.get("provenance")
    _require(isinstance(prov_doc, dict) and "kind" in prov_doc,
             "extension document needs a provenance object")
    if prov_doc["kind"] == "constant":
        prov = ConstantExtension(mode.parse(prov_doc["c"]))
    elif prov_doc["kind"] == "supdist":
        orbits = prov_doc.get("orbits")
        _require(isinstance(orbits, dict), "supdist provenance needs an orbits table")
        prov = SupdistExtension(prov_doc["x0"], {k: tuple(v) for k, v in orbits.items()})
    else:
        raise StructuralError(f"unknown provenance kind {prov_doc['kind']!r}")
    return ExtendedSpace(base=base, z=z, dist_to_z=dist_to_z, provenance=prov)
