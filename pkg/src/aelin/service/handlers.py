"""Request handlers shared by the HTTP service and the CLI.

Each handler is a pure function from a request model to a response
model; the FastAPI app and the command-line client both route through
these, so the two front ends cannot drift apart.
"""

from __future__ import annotations

from .. import formats
from ..action import materialize_closure, orbit
from ..arens_eells import PointedSpace, ae_norm, reduce, verify_dual_certificate
from ..errors import OrbitBudgetExceeded, PreconditionError, StructuralError
from ..extension import build_fixed_point_extension, extend_bounded_const, validate_extension
from ..hausdorff import check_group_identification, hausdorff_dist
from ..linearize import LinearizeConfig, bundle_doc, certify, linearize, parse_bundle
from ..metric import FiniteMetricSpace, ImplicitMetricSpace, validate_metric
from ..scalars import Mode
from . import models


def _mode(options: models.Options) -> Mode:
    return Mode(options.mode, options.tolerance)


def _report_doc(report, mode: Mode) -> models.ReportDoc:
    return models.ReportDoc(**formats.serialize_report(report, mode))


def validate(req: models.ValidateRequest) -> models.ReportResponse:
    """Check the metric axioms; implicit spaces are checked on their seeds."""
    mode = _mode(req.options)
    space = formats.parse_space(req.space.as_doc(), mode)
    if isinstance(space, ImplicitMetricSpace):
        finite = space.materialize(list(space.seeds))
        report = validate_metric(finite)
        report = type(report)(report.ok, report.violations,
                              checked=f"materialized seed points only ({finite.n})")
    else:
        report = validate_metric(space)
    return models.ReportResponse(
        status="ok" if report.ok else "violated",
        report=_report_doc(report, mode))


def run_orbit(req: models.OrbitRequest) -> models.OrbitResponse:
    mode = _mode(req.options)
    space = formats.parse_space(req.space.as_doc(), mode)
    action = formats.parse_action(req.action.as_doc(), space)
    result = orbit(req.point, action, space, req.budget)
    return models.OrbitResponse(
        status="ok" if result.closed else "inconclusive",
        orbit=formats.serialize_orbit(result, mode))


def extend(req: models.ExtendRequest) -> models.ExtendResponse:
    mode = _mode(req.options)
    space = formats.parse_space(req.space.as_doc(), mode)
    action = formats.parse_action(req.action.as_doc(), space)
    try:
        finite, finite_action = materialize_closure(space, action, req.budget)
        if req.constant is not None:
            ext = extend_bounded_const(finite, finite_action, mode.parse(req.constant))
        else:
            ext = build_fixed_point_extension(finite, finite_action, req.budget)
    except OrbitBudgetExceeded as exc:
        return models.ExtendResponse(status="inconclusive", point=exc.point)
    report = validate_extension(ext, finite_action)
    return models.ExtendResponse(
        status="ok" if report.ok else "violated",
        extension=formats.serialize_extension(ext),
        report=_report_doc(report, mode))


def norm(req: models.NormRequest) -> models.NormResponse:
    mode = _mode(req.options)
    doc = req.space
    if isinstance(doc, dict) and "z" in doc:
        ext = formats.parse_extension(doc, mode)
        space = ext.full_space()
        base = req.base or ext.z
    else:
        space = formats.parse_space(doc, mode)
        if not isinstance(space, FiniteMetricSpace):
            raise PreconditionError("norms need a finite (materialized) space")
        if req.base is None:
            raise StructuralError("a plain space document needs an explicit base point")
        base = req.base
    pointed = PointedSpace(space, base)
    u = formats.parse_combination(req.combination.as_doc(), mode)
    result = ae_norm(u, pointed)
    report = verify_dual_certificate(u, result, pointed)
    return models.NormResponse(
        status="ok" if report.ok else "violated",
        result=formats.serialize_norm_result(result, mode),
        reduced=formats.serialize_mass(reduce(u), mode),
        report=_report_doc(report, mode))


def hausdorff(req: models.HausdorffRequest) -> models.HausdorffResponse:
    mode = _mode(req.options)
    space = formats.parse_space(req.space.as_doc(), mode)
    if not isinstance(space, FiniteMetricSpace):
        raise PreconditionError("subset distances need a finite space")
    if req.a is not None or req.b is not None:
        if not (req.a and req.b):
            raise StructuralError("subset distance needs both subsets a and b")
        value = hausdorff_dist(req.a, req.b, space)
        return models.HausdorffResponse(status="ok", distance=mode.format(value))
    if req.action is None:
        raise StructuralError("group identification needs an action")
    action = formats.parse_action(req.action.as_doc(), space)
    try:
        report = check_group_identification(space, action, req.budget)
    except OrbitBudgetExceeded:
        return models.HausdorffResponse(status="inconclusive")
    return models.HausdorffResponse(
        status="ok" if report.ok else "violated",
        report=_report_doc(report, mode))


def run_linearize(req: models.LinearizeRequest) -> models.LinearizeResponse:
    mode = _mode(req.options)
    space = formats.parse_space(req.space.as_doc(), mode)
    action = formats.parse_action(req.action.as_doc(), space)
    config = LinearizeConfig(seed=req.seed,
                             contraction_samples=req.contraction_samples,
                             max_word_len=req.max_word_len)
    bundle = linearize(space, action, req.budget, config)
    return models.LinearizeResponse(status=bundle.status, bundle=bundle_doc(bundle))


def run_certify(req: models.CertifyRequest) -> models.CertifyResponse:
    bundle = parse_bundle(req.bundle)
    report = certify(bundle)
    if not report.ok:
        status = "violated"
    elif bundle.status == "certified":
        status = "ok"
    elif bundle.status == "inconclusive":
        status = "inconclusive"
    else:
        status = "violated"
    return models.CertifyResponse(
        status=status, bundle_status=bundle.status,
        report=_report_doc(report, bundle.mode))
