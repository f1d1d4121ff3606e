"""FastAPI application exposing the pipeline over HTTP.

One POST endpoint per operation, mirroring the CLI subcommands.
Structural and precondition errors come back as 400 with a typed error
body; inconclusive outcomes are ordinary responses, not errors.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import AelinError, InternalDefect, PreconditionError, StructuralError
from . import handlers, models


def create_app() -> FastAPI:
    app = FastAPI(title="aelin", version=__version__,
                  description="Fixed-point extensions and Arens-Eells "
                              "linearization certificates as a service.")

    @app.exception_handler(AelinError)
    async def aelin_error(request: Request, exc: AelinError):
        if isinstance(exc, InternalDefect):
            kind, code = "defect", 500
        elif isinstance(exc, PreconditionError):
            kind, code = "precondition", 400
        elif isinstance(exc, StructuralError):
            kind, code = "structural", 400
        else:
            kind, code = "error", 400
        body = models.ErrorResponse(status="error", kind=kind, detail=str(exc))
        return JSONResponse(status_code=code, content=body.model_dump())

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "service": "aelin", "version": __version__}

    @app.post("/validate", response_model=models.ReportResponse)
    def validate(req: models.ValidateRequest):
        return handlers.validate(req)

    @app.post("/orbit", response_model=models.OrbitResponse)
    def orbit(req: models.OrbitRequest):
        return handlers.run_orbit(req)

    @app.post("/extend", response_model=models.ExtendResponse)
    def extend(req: models.ExtendRequest):
        return handlers.extend(req)

    @app.post("/norm", response_model=models.NormResponse)
    def norm(req: models.NormRequest):
        return handlers.norm(req)

    @app.post("/hausdorff", response_model=models.HausdorffResponse)
    def hausdorff(req: models.HausdorffRequest):
        return handlers.hausdorff(req)

    @app.post("/linearize", response_model=models.LinearizeResponse)
    def linearize(req: models.LinearizeRequest):
        return handlers.run_linearize(req)

    @app.post("/certify", response_model=models.CertifyResponse)
    def certify(req: models.CertifyRequest):
        return handlers.run_certify(req)

    return app


app = create_app()
