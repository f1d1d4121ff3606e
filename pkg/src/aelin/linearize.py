"""End-to-end linearization pipeline and certificate bundles.

`linearize` takes a space and a non-expansive action and either
produces a certified bundle (fixed-point extension, embedding table,
induced generator matrices, and one re-checkable certificate per
claimed property) or refuses, naming a point whose orbit could not be
certified bounded within the budget.  Bundles are deterministic:
identical inputs and budget produce byte-identical documents.

`certify` re-verifies a bundle from its raw data, recomputing every
check and comparing against a fresh run, so tampered bundles fail with
the specific certificate that no longer holds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from . import formats
from .action import SemigroupAction, adjoin_identity, materialize_closure
from .arens_eells import (
    FormalCombination,
    PointedSpace,
    SignedMass,
    ae_norm,
    apply_action,
    embed,
    reduce,
    verify_dual_certificate,
)
from .errors import OrbitBudgetExceeded, StructuralError
from .extension import (
    ExtendedSpace,
    SupdistExtension,
    build_fixed_point_extension,
    check_diam_bound,
    extend_action,
    fixed_point_violations,
    inclusion_violations,
    metric_violations,
    non_expansive_violations,
)
from .metric import MetricSpace, ValidationReport, Violation, diam
from .scalars import Mode


@dataclass(frozen=True)
class LinearizeConfig:
    """Sampling knobs for the contraction certificate."""

    seed: int = 0
    contraction_samples: int = 20
    max_word_len: int = 4


@dataclass(frozen=True)
class Certificate:
    claim: str
    ok: bool
    witness: dict


@dataclass(frozen=True)
class LinearizationBundle:
    """Everything a third party needs to re-check a linearization."""

    status: str  # "certified" | "violated" | "inconclusive"
    mode: Mode
    inputs: dict
    extension: Union[ExtendedSpace, None]
    extended_action: Union[SemigroupAction, None]
    embedding: tuple[tuple[str, SignedMass], ...]
    generator_matrices: dict
    certificates: tuple[Certificate, ...]
    refusal: Union[dict, None]

    @property
    def certified(self) -> bool:
        return self.status == "certified"


CLAIMS = (
    "metric_validity",
    "fixed_point",
    "non_expansivity",
    "diam_bound",
    "embedding_isometry",
    "equivariance",
    "contraction",
)


def linearize(space: MetricSpace, action: SemigroupAction, budget: int,
              config: LinearizeConfig = LinearizeConfig()) -> LinearizationBundle:
    """Run the full pipeline; never raises for budget exhaustion.

    Implicit spaces are linearized on the materialized closure of their
    seeds.  Any orbit that fails to close within `budget` produces an
    inconclusive refusal bundle naming the suspect point.
    """
    mode = space.mode
    inputs = {
        "space": formats.serialize_space(space),
        "action": formats.serialize_action(action),
        "budget": budget,
        "mode": mode.kind,
        "tolerance": mode.tolerance,
        "config": {
            "seed": config.seed,
            "contraction_samples": config.contraction_samples,
            "max_word_len": config.max_word_len,
        },
    }
    try:
        base_space, base_action = materialize_closure(space, action, budget)
        ext = build_fixed_point_extension(base_space, base_action, budget)
    except OrbitBudgetExceeded as exc:
        return LinearizationBundle(
            status="inconclusive", mode=mode, inputs=inputs,
            extension=None, extended_action=None, embedding=(),
            generator_matrices={}, certificates=(),
            refusal={"point": exc.point,
                     "reason": "orbit did not close within the budget"},
        )

    act = adjoin_identity(base_action)
    ext_action = extend_action(act, ext)
    pointed = PointedSpace(ext.full_space(), ext.z)
    certificates = _run_certificates(ext, act, ext_action, pointed, budget, config, mode)
    embedding = tuple((x, reduce(embed(x, pointed))) for x in base_space.names())
    # the induced linear action on the span of the embedded points:
    # basis vector x - z maps to g(x) - z, one column per base point
    matrices = {g.name: {x: g.table[x] for x in base_space.names()}
                for g in ext_action.generators}
    status = "certified" if all(c.ok for c in certificates) else "violated"
    return LinearizationBundle(
        status=status, mode=mode, inputs=inputs,
        extension=ext, extended_action=ext_action, embedding=embedding,
        generator_matrices=matrices, certificates=certificates, refusal=None,
    )


def _violation_docs(violations, mode: Mode) -> list:
    return formats.serialize_report(
        ValidationReport.from_violations(violations), mode)["violations"]


def _run_certificates(ext: ExtendedSpace, act: SemigroupAction,
                      ext_action: SemigroupAction, pointed: PointedSpace,
                      budget: int, config: LinearizeConfig, mode: Mode):
    certs = []

    vs = metric_violations(ext) + inclusion_violations(ext)
    # norms are only meaningful over a genuine metric; when the union
    # fails the axioms, the norm-backed certificates are not evaluated
    metric_ok = not vs
    certs.append(Certificate("metric_validity", not vs, {"violations": _violation_docs(vs, mode)}))

    vs = fixed_point_violations(ext, ext_action)
    images = {g.name: (g.table.get(ext.z, ext.z) if g.table else ext.z)
              for g in ext_action.generators}
    certs.append(Certificate("fixed_point", not vs,
                             {"images": images, "violations": _violation_docs(vs, mode)}))

    vs = non_expansive_violations(ext, ext_action)
    certs.append(Certificate("non_expansivity", not vs,
                             {"violations": _violation_docs(vs, mode)}))

    try:
        report = check_diam_bound(ext, act, budget)
        vs = list(report.violations)
    except OrbitBudgetExceeded as exc:  # cannot happen after a successful build
        vs = [Violation("diam_bound_inconclusive", (exc.point,), ())]
    diameters = {}
    if isinstance(ext.provenance, SupdistExtension):
        diameters = {x: mode.format(diam(pts, ext.base))
                     for x, pts in sorted(ext.provenance.orbits.items())}
    certs.append(Certificate("diam_bound", not vs,
                             {"orbit_diameters": diameters,
                              "violations": _violation_docs(vs, mode)}))

    if metric_ok:
        vs = []
        norms = {}
        for x in ext.base.names():
            result = ae_norm(embed(x, pointed), pointed)
            norms[x] = mode.format(result.value)
            if not mode.eq(result.value, ext.d_z(x)):
                vs.append(Violation("embedding_isometry", (x,),
                                    (result.value, ext.d_z(x)),
                                    note="norm of the embedded point != d(x,z)"))
            cert_report = verify_dual_certificate(embed(x, pointed), result, pointed)
            vs.extend(cert_report.violations)
        certs.append(Certificate("embedding_isometry", not vs,
                                 {"norms": norms, "violations": _violation_docs(vs, mode)}))
    else:
        certs.append(Certificate(
            "embedding_isometry", False,
            {"norms": {}, "violations": [],
             "skipped": "not evaluated: the extended space is not a metric space"}))

    vs = equivariance_violations(ext, ext_action, pointed)
    certs.append(Certificate(
        "equivariance", not vs,
        {"generators": [g.name for g in ext_action.generators],
         "violations": _violation_docs(vs, mode)}))

    if metric_ok:
        samples, vs = _contraction_samples(ext_action, pointed, config, mode)
        certs.append(Certificate("contraction", not vs,
                                 {"samples": samples, "violations": _violation_docs(vs, mode)}))
    else:
        certs.append(Certificate(
            "contraction", False,
            {"samples": [], "violations": [],
             "skipped": "not evaluated: the extended space is not a metric space"}))
    return tuple(certs)


def equivariance_violations(ext: ExtendedSpace, ext_action: SemigroupAction,
                            pointed: PointedSpace) -> list[Violation]:
    """embed(g(x)) must equal g applied inside the normed space, per generator."""
    vs = []
    for g in ext_action.generators:
        for x in ext.base.names():
            via_space = reduce(embed(g.image_name(x), pointed))
            via_action = reduce(apply_action((g.name,), embed(x, pointed), ext_action))
            if via_space != via_action:
                vs.append(Violation(
                    "equivariance", (g.name, x), (),
                    note="embed(g(x)) and g(embed(x)) reduce differently"))
    return vs


def _sample_word(rng: random.Random, ext_action: SemigroupAction, max_len: int):
    names = [g.name for g in ext_action.generators]
    return tuple(rng.choice(names) for _ in range(rng.randint(1, max_len)))


def _sample_combination(rng: random.Random, pointed: PointedSpace, mode: Mode):
    names = pointed.space.names()
    terms = []
    for _ in range(rng.randint(1, 3)):
        c = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        terms.append((c if mode.exact else float(c),
                      rng.choice(names), rng.choice(names)))
    return FormalCombination(tuple(terms))


def _contraction_samples(ext_action: SemigroupAction, pointed: PointedSpace,
                         config: LinearizeConfig, mode: Mode):
    rng = random.Random(config.seed)
    samples = []
    violations = []
    for _ in range(config.contraction_samples):
        word = _sample_word(rng, ext_action, config.max_word_len)
        u = _sample_combination(rng, pointed, mode)
        before = ae_norm(u, pointed).value
        after = ae_norm(apply_action(word, u, ext_action), pointed).value
        ok = mode.le(after, before)
        samples.append({
            "word": list(word),
            "combination": formats.serialize_combination(u, mode),
            "norm_before": mode.format(before),
            "norm_after": mode.format(after),
            "ok": ok,
        })
        if not ok:
            violations.append(Violation(
                "contraction", word + ("|",) + tuple(t[1] for t in u.terms),
                (after, before), note="norm grew under the action"))
    return samples, violations


# ------------------------------------------------------------ documents

def bundle_doc(bundle: LinearizationBundle) -> dict:
    mode = bundle.mode
    doc = {
        "format_version": formats.FORMAT_VERSION,
        "status": bundle.status,
        "inputs": bundle.inputs,
        "refusal": bundle.refusal,
        "extension": None,
        "extended_action": None,
        "embedding": {},
        "generator_matrices": {},
        "certificates": [
            {"claim": c.claim, "ok": c.ok, "witness": c.witness}
            for c in bundle.certificates
        ],
    }
    if bundle.extension is not None:
        doc["extension"] = formats.serialize_extension(bundle.extension)
        doc["extended_action"] = formats.serialize_action(bundle.extended_action)
        doc["embedding"] = {x: formats.serialize_mass(m, mode) for x, m in bundle.embedding}
        doc["generator_matrices"] = bundle.generator_matrices
        doc["notes"] = [
            "certificates concern the normed space of finitely supported "
            "combinations; it is dense in its completion, and every certified "
            "identity involves finitely many points, so passing to the "
            "completion changes none of them",
            "closedness of the embedded copy inside the completion is a "
            "topological fact and is not finitely checkable",
        ]
    return doc


def parse_bundle(doc: dict) -> LinearizationBundle:
    if not isinstance(doc, dict):
        raise StructuralError("bundle document must be an object")
    if doc.get("format_version") != formats.FORMAT_VERSION:
        raise StructuralError(f"unknown bundle format version {doc.get('format_version')!r}")
    inputs = doc.get("inputs")
    if not isinstance(inputs, dict) or "space" not in inputs or "action" not in inputs:
        raise StructuralError("bundle inputs must carry space and action documents")
    mode = Mode(inputs.get("mode", "exact"), inputs.get("tolerance", 1e-9))
    status = doc.get("status")
    if status not in ("certified", "violated", "inconclusive"):
        raise StructuralError(f"unknown bundle status {status!r}")
    extension = None
    ext_action = None
    embedding = ()
    if doc.get("extension") is not None:
        extension = formats.parse_extension(doc["extension"], mode)
        full = extension.full_space()
        ext_action = formats.parse_action(doc.get("extended_action") or {}, full)
        embedding = tuple(
            (x, SignedMass(tuple(sorted((n, mode.parse(v)) for n, v in m.items()))))
            for x, m in sorted(doc.get("embedding", {}).items()))
    certificates = tuple(
        Certificate(c["claim"], bool(c["ok"]), c.get("witness", {}))
        for c in doc.get("certificates", []))
    return LinearizationBundle(
        status=status, mode=mode, inputs=inputs, extension=extension,
        extended_action=ext_action, embedding=embedding,
        generator_matrices=doc.get("generator_matrices", {}),
        certificates=certificates, refusal=doc.get("refusal"),
    )


def _parse_inputs(bundle: LinearizationBundle):
    mode = bundle.mode
    space = formats.parse_space(bundle.inputs["space"], mode)
    action = formats.parse_action(bundle.inputs["action"], space)
    budget = bundle.inputs.get("budget")
    if not isinstance(budget, int) or budget < 1:
        raise StructuralError("bundle inputs need a positive integer budget")
    cfg = bundle.inputs.get("config", {})
    config = LinearizeConfig(
        seed=int(cfg.get("seed", 0)),
        contraction_samples=int(cfg.get("contraction_samples", 20)),
        max_word_len=int(cfg.get("max_word_len", 4)),
    )
    return space, action, budget, config


def certify(bundle: Union[LinearizationBundle, dict]) -> ValidationReport:
    """Re-verify a bundle from raw data; equals a fresh certification.

    Recomputes every certificate against the bundle's own extension and
    action, re-checks stored norms and samples, and compares the whole
    construction against a fresh pipeline run on the recorded inputs.
    Tampering shows up as the specific certificate that fails.
    """
    if isinstance(bundle, dict):
        bundle = parse_bundle(bundle)
    mode = bundle.mode
    space, action, budget, config = _parse_inputs(bundle)
    violations: list[Violation] = []

    fresh = linearize(space, action, budget, config)

    if bundle.status == "inconclusive":
        if fresh.status != "inconclusive":
            violations.append(Violation(
                "refusal_unjustified", (str((bundle.refusal or {}).get("point")),), (),
                note="a fresh run does not refuse"))
        elif (bundle.refusal or {}).get("point") != fresh.refusal["point"]:
            violations.append(Violation(
                "refusal_point_mismatch",
                (str((bundle.refusal or {}).get("point")), fresh.refusal["point"]), ()))
        return ValidationReport.from_violations(
            violations, checked="refusal re-checked against a fresh run")

    if bundle.extension is None or bundle.extended_action is None:
        raise StructuralError("a conclusive bundle must carry its extension and action")

    ext = bundle.extension
    ext_action = bundle.extended_action
    pointed = PointedSpace(ext.full_space(), ext.z)
    act_base = SemigroupAction(
        tuple(g for g in ext_action.generators), has_identity=True)

    recomputed = _run_certificates(ext, act_base, ext_action, pointed, budget, config, mode)
    stored = {c.claim: c for c in bundle.certificates}
    for cert in recomputed:
        told = stored.get(cert.claim)
        if told is None:
            violations.append(Violation("certificate_missing", (cert.claim,), ()))
            continue
        if told.ok != cert.ok:
            violations.append(Violation(
                "certificate_status_mismatch", (cert.claim,), (),
                note=f"stored ok={told.ok}, recomputed ok={cert.ok}"))
        elif formats.canonical_json(told.witness) != formats.canonical_json(cert.witness):
            violations.append(Violation(
                "certificate_witness_mismatch", (cert.claim,), (),
                note="stored witness disagrees with recomputation"))
        if not cert.ok:
            for v in _parse_witness_violations(cert, mode):
                violations.append(v)

    metric_ok = not (metric_violations(ext) + inclusion_violations(ext))

    # stored embedding masses and per-point norms
    for x, mass in bundle.embedding:
        want = reduce(embed(x, pointed))
        if mass != want:
            violations.append(Violation(
                "embedding_table", (x,), (), note="stored mass is not embed(x) reduced"))
    want_matrices = {g.name: {x: g.table[x] for x in ext.base.names()}
                     for g in ext_action.generators}
    if bundle.generator_matrices != want_matrices:
        violations.append(Violation(
            "generator_matrices", (), (),
            note="stored matrices disagree with the extended action"))
    stored_iso = stored.get("embedding_isometry")
    if stored_iso is not None and metric_ok:
        norms = stored_iso.witness.get("norms", {})
        for x in ext.base.names():
            if x not in norms:
                violations.append(Violation("embedding_isometry", (x,), (),
                                            note="missing stored norm"))
                continue
            got = ae_norm(embed(x, pointed), pointed).value
            if not mode.eq(got, mode.parse(norms[x])):
                violations.append(Violation(
                    "embedding_isometry", (x,), (got, mode.parse(norms[x])),
                    note="stored norm disagrees with recomputation"))

    stored_contraction = stored.get("contraction")
    if stored_contraction is not None and metric_ok:
        for k, sample in enumerate(stored_contraction.witness.get("samples", [])):
            u = formats.parse_combination(sample["combination"], mode)
            word = tuple(sample["word"])
            before = ae_norm(u, pointed).value
            after = ae_norm(apply_action(word, u, ext_action), pointed).value
            if not mode.eq(before, mode.parse(sample["norm_before"])) or \
                    not mode.eq(after, mode.parse(sample["norm_after"])):
                violations.append(Violation(
                    "contraction_sample", (str(k),), (before, after),
                    note="stored sample norms disagree with recomputation"))
            elif not mode.le(after, before):
                violations.append(Violation(
                    "contraction_sample", (str(k),), (after, before),
                    note="sample violates contraction"))

    # whole-construction comparison against the fresh run
    if fresh.status == "inconclusive":
        violations.append(Violation(
            "status_mismatch", (bundle.status, fresh.status), (),
            note="a fresh run refuses where the bundle concludes"))
    else:
        a = formats.canonical_json(formats.serialize_extension(fresh.extension))
        b = formats.canonical_json(formats.serialize_extension(ext))
        if a != b:
            violations.append(Violation(
                "construction_mismatch", (), (),
                note="the stored extension differs from a fresh construction"))
        a = formats.canonical_json(formats.serialize_action(fresh.extended_action))
        b = formats.canonical_json(formats.serialize_action(ext_action))
        if a != b:
            violations.append(Violation(
                "construction_mismatch", (), (),
                note="the stored extended action differs from the recorded inputs"))
        if fresh.status != bundle.status:
            violations.append(Violation(
                "status_mismatch", (bundle.status, fresh.status), ()))

    ok_claims = all(c.ok for c in bundle.certificates) and bool(bundle.certificates)
    want_status = "certified" if ok_claims else "violated"
    if bundle.status != want_status:
        violations.append(Violation(
            "status_mismatch", (bundle.status, want_status), (),
            note="bundle status disagrees with its own certificates"))

    return ValidationReport.from_violations(
        violations, checked=f"{len(bundle.certificates)} certificates re-verified")


def _parse_witness_violations(cert: Certificate, mode: Mode):
    for v in cert.witness.get("violations", []):
        yield Violation(
            v.get("kind", cert.claim),
            tuple(v.get("witness", ())),
            tuple(mode.parse(s) for s in v.get("values", ())),
            v.get("note", ""),
        )
