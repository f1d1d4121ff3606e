"""Command-line client for the linearization pipeline.

Each subcommand builds the same request models the HTTP service
accepts and, by default, runs the handler in process; with --server it
posts the request to a running service instead, so scripts behave the
same either way.

Exit codes: 0 ok/certified, 1 a claimed property was proved false,
2 inconclusive (budget), 3 structural input error.

Input documents are JSON.  Finite spaces look like
``{"points": ["a","b"], "dist": [["a","b","3/2"]]}`` with rationals as
"p/q" strings or integers; implicit spaces like
``{"implicit": true, "seeds": [[0]], "metric": "l1"}`` over integer
tuples; actions like
``{"monoid": true, "generators": [{"name": "s", "map": {"a": "b", "b": "b"}}]}``
with ``"rule": "n -> n+1"`` instead of ``map`` on implicit spaces (the
rule language is +, -, * over the tuple components).
"""

from __future__ import annotations

import json
import os
import sys

import click

from .errors import AelinError, InternalDefect, OrbitBudgetExceeded
from .service import handlers, models

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INCONCLUSIVE = 2
EXIT_STRUCTURAL = 3

_STATUS_EXIT = {
    "ok": EXIT_OK,
    "certified": EXIT_OK,
    "violated": EXIT_VIOLATED,
    "inconclusive": EXIT_INCONCLUSIVE,
    "error": EXIT_STRUCTURAL,
}


def _default_budget() -> int:
    raw = os.environ.get("AELIN_BUDGET", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 10000


def _read_doc(input_path: str) -> dict:
    if input_path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(input_path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            _fail(f"cannot read {input_path!r}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"input is not valid JSON: {exc}")


def _write(doc, output_path):
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if output_path:
        with open(output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _fail(detail: str, kind: str = "structural"):
    err = {"status": "error", "kind": kind, "detail": detail}
    click.echo(json.dumps(err, sort_keys=True), err=True)
    sys.exit(EXIT_STRUCTURAL)


def _finish(payload: dict, status: str, output_path):
    _write(payload, output_path)
    sys.exit(_STATUS_EXIT.get(status, EXIT_STRUCTURAL))


def _call(path: str, request, server: str) -> dict:
    """Run a request in process, or against a server when one is given."""
    if server:
        import httpx

        url = server.rstrip("/") + path
        try:
            resp = httpx.post(url, json=request.model_dump(mode="json"), timeout=300.0)
        except httpx.HTTPError as exc:
            _fail(f"cannot reach {url}: {exc}", kind="transport")
        body = resp.json()
        if resp.status_code >= 400:
            _fail(body.get("detail", str(body)))
        return body
    handler = {
        "/validate": handlers.validate,
        "/orbit": handlers.run_orbit,
        "/extend": handlers.extend,
        "/norm": handlers.norm,
        "/hausdorff": handlers.hausdorff,
        "/linearize": handlers.run_linearize,
        "/certify": handlers.run_certify,
    }[path]
    try:
        return handler(request).model_dump(mode="json", exclude_none=True)
    except OrbitBudgetExceeded as exc:
        _write({"status": "inconclusive", "point": exc.point}, None)
        sys.exit(EXIT_INCONCLUSIVE)
    except InternalDefect as exc:
        _fail(str(exc), kind="defect")
    except AelinError as exc:
        _fail(str(exc))


def _options(req_doc, mode: str, tolerance: float) -> dict:
    req_doc["options"] = {"mode": mode, "tolerance": tolerance}
    return req_doc


mode_option = click.option("--mode", type=click.Choice(["exact", "float"]),
                           default="exact", show_default=True,
                           help="Arithmetic mode for all scalars.")
tolerance_option = click.option("--tolerance", type=float, default=1e-9,
                                show_default=True,
                                help="Comparison tolerance in float mode.")
input_option = click.option("--input", "-i", "input_path", default="-",
                            show_default=True,
                            help="Input JSON file, or - for stdin.")
output_option = click.option("--output", "-o", "output_path", default=None,
                             help="Write the result document to a file.")
server_option = click.option("--server", default="",
                             help="Base URL of a running service; "
                                  "when set the CLI acts as an HTTP client.")
budget_option = click.option("--budget", type=int, default=_default_budget,
                             show_default="10000 (or AELIN_BUDGET)",
                             help="Orbit point budget.")


@click.group()
def main():
    """Certify fixed-point extensions and linearizations of
    non-expansive semigroup actions.

    \b
    Input documents are JSON.
    Finite space:   {"points": ["a","b"], "dist": [["a","b","3/2"]]}
                    (rationals as "p/q" strings or integers; one entry
                    per unordered pair, no inferred distances)
    Implicit space: {"implicit": true, "seeds": [[0]], "metric": "l1"}
                    (points are integer tuples; metrics: l1, linf)
    Action:         {"monoid": true, "generators":
                      [{"name": "s", "map": {"a": "b", "b": "b"}}]}
                    On implicit spaces a generator carries a rule
                    instead of a map, e.g. {"name": "s", "rule": "n -> n+1"}.
                    Rules use +, -, * over the tuple components:
                    "n -> n+1", "(a,b) -> (b, a-2*b)".
    Combination:    {"terms": [{"c": "3/2", "x": "p0", "y": "p2"}]}

    The point name "__z" is reserved for the adjoined fixed point.
    Exit codes: 0 ok/certified, 1 a claimed property is false,
    2 inconclusive within the budget, 3 structural input error.
    """


@main.command()
@input_option
@output_option
@mode_option
@tolerance_option
@server_option
def validate(input_path, output_path, mode, tolerance, server):
    """Check the metric axioms of a space document."""
    doc = _read_doc(input_path)
    req = models.ValidateRequest(**_options({"space": doc}, mode, tolerance))
    body = _call("/validate", req, server)
    _finish(body, body["status"], output_path)


@main.command()
@input_option
@output_option
@click.option("--point", required=True, help="Base point of the orbit.")
@budget_option
@mode_option
@tolerance_option
@server_option
def orbit(input_path, output_path, point, budget, mode, tolerance, server):
    """Enumerate one orbit; input holds {"space": ..., "action": ...}."""
    doc = _read_doc(input_path)
    req = models.OrbitRequest(**_options(
        {"space": doc.get("space"), "action": doc.get("action"),
         "point": point, "budget": budget}, mode, tolerance))
    body = _call("/orbit", req, server)
    _finish(body, body["status"], output_path)


@main.command()
@input_option
@output_option
@budget_option
@click.option("--constant", default=None,
              help="Use the constant-distance extension with this value "
                   "instead of the supdist construction.")
@mode_option
@tolerance_option
@server_option
def extend(input_path, output_path, budget, constant, mode, tolerance, server):
    """Adjoin a fixed point; input holds {"space": ..., "action": ...}."""
    doc = _read_doc(input_path)
    req = models.ExtendRequest(**_options(
        {"space": doc.get("space"), "action": doc.get("action"),
         "budget": budget, "constant": constant}, mode, tolerance))
    body = _call("/extend", req, server)
    _finish(body, body["status"], output_path)


@main.command()
@input_option
@output_option
@mode_option
@tolerance_option
@server_option
def norm(input_path, output_path, mode, tolerance, server):
    """Norm of a formal combination, with primal and dual certificates.

    Input holds {"space": ..., "combination": ...} where the space may
    be an extension document (its z is the base point) or a plain space
    plus a "base" field.
    """
    doc = _read_doc(input_path)
    req = models.NormRequest(**_options(
        {"space": doc.get("space"), "base": doc.get("base"),
         "combination": doc.get("combination")}, mode, tolerance))
    body = _call("/norm", req, server)
    _finish(body, body["status"], output_path)


@main.command()
@input_option
@output_option
@budget_option
@mode_option
@tolerance_option
@server_option
def hausdorff(input_path, output_path, budget, mode, tolerance, server):
    """Hausdorff-subset checks: group identification, or a subset distance.

    Input holds {"space": ..., "action": ...} for the identification
    report, or {"space": ..., "a": [...], "b": [...]} for a distance.
    """
    doc = _read_doc(input_path)
    req = models.HausdorffRequest(**_options(
        {"space": doc.get("space"), "action": doc.get("action"),
         "a": doc.get("a"), "b": doc.get("b"), "budget": budget},
        mode, tolerance))
    body = _call("/hausdorff", req, server)
    _finish(body, body["status"], output_path)


@main.command()
@input_option
@output_option
@budget_option
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for the contraction sampling.")
@click.option("--samples", type=int, default=20, show_default=True,
              help="Number of contraction samples.")
@mode_option
@tolerance_option
@server_option
def linearize(input_path, output_path, budget, seed, samples, mode, tolerance, server):
    """Full pipeline; writes a certificate bundle document."""
    doc = _read_doc(input_path)
    req = models.LinearizeRequest(**_options(
        {"space": doc.get("space"), "action": doc.get("action"),
         "budget": budget, "seed": seed, "contraction_samples": samples},
        mode, tolerance))
    body = _call("/linearize", req, server)
    _finish(body["bundle"], body["status"], output_path)


@main.command()
@input_option
@output_option
@server_option
def certify(input_path, output_path, server):
    """Re-verify a bundle document produced by linearize."""
    doc = _read_doc(input_path)
    if "bundle" in doc and "format_version" not in doc:
        doc = doc["bundle"]
    req = models.CertifyRequest(bundle=doc)
    body = _call("/certify", req, server)
    _finish(body, body["status"], output_path)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service (same operations as the subcommands)."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
