"""Pydantic request and response models for the service endpoints.

The payload shapes mirror the package's structured-text formats; the
models validate envelope structure, while the domain parsers own the
deeper checks (metric axioms, totality, reserved names).
"""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field


class Options(BaseModel):
    mode: Literal["exact", "float"] = "exact"
    tolerance: float = 1e-9


class SpaceDoc(BaseModel):
    points: Optional[list[str]] = None
    dist: Optional[list[tuple[str, str, Union[int, str, float]]]] = None
    implicit: bool = False
    seeds: Optional[list[list[int]]] = None
    metric: Optional[str] = None

    def as_doc(self) -> dict:
        return self.model_dump(exclude_none=True)


class GeneratorDoc(BaseModel):
    name: str
    map: Optional[dict[str, str]] = None
    rule: Optional[str] = None


class ActionDoc(BaseModel):
    monoid: bool = False
    generators: list[GeneratorDoc]

    def as_doc(self) -> dict:
        return self.model_dump(exclude_none=True)


class ViolationDoc(BaseModel):
    kind: str
    witness: list[str]
    values: list[Union[int, str, float]]
    note: str = ""


class ReportDoc(BaseModel):
    ok: bool
    checked: str = ""
    violations: list[ViolationDoc] = Field(default_factory=list)


class ValidateRequest(BaseModel):
    space: SpaceDoc
    options: Options = Field(default_factory=Options)


class ReportResponse(BaseModel):
    status: Literal["ok", "violated", "inconclusive"]
    report: ReportDoc


class OrbitRequest(BaseModel):
    space: SpaceDoc
    action: ActionDoc
    point: str
    budget: int = Field(gt=0)
    options: Options = Field(default_factory=Options)


class OrbitResponse(BaseModel):
    status: Literal["ok", "inconclusive"]
    orbit: dict[str, Any]


class ExtendRequest(BaseModel):
    space: SpaceDoc
    action: ActionDoc
    budget: int = Field(gt=0)
    constant: Optional[Union[int, str, float]] = None
    options: Options = Field(default_factory=Options)


class ExtendResponse(BaseModel):
    status: Literal["ok", "violated", "inconclusive"]
    extension: Optional[dict[str, Any]] = None
    report: Optional[ReportDoc] = None
    point: Optional[str] = None


class CombinationDoc(BaseModel):
    terms: list[dict[str, Union[int, str, float]]]

    def as_doc(self) -> dict:
        return self.model_dump()


class NormRequest(BaseModel):
    space: dict[str, Any]  # plain space doc or extension doc (with "z")
    base: Optional[str] = None
    combination: CombinationDoc
    options: Options = Field(default_factory=Options)


class NormResponse(BaseModel):
    status: Literal["ok", "violated"]
    result: dict[str, Any]
    reduced: dict[str, Union[int, str, float]]
    report: ReportDoc


class HausdorffRequest(BaseModel):
    space: SpaceDoc
    action: Optional[ActionDoc] = None
    a: Optional[list[str]] = None
    b: Optional[list[str]] = None
    budget: int = Field(default=10000, gt=0)
    options: Options = Field(default_factory=Options)


class HausdorffResponse(BaseModel):
    status: Literal["ok", "violated", "inconclusive"]
    distance: Optional[Union[int, str, float]] = None
    report: Optional[ReportDoc] = None


class LinearizeRequest(BaseModel):
    space: SpaceDoc
    action: ActionDoc
    budget: int = Field(gt=0)
    seed: int = 0
    contraction_samples: int = Field(default=20, ge=0)
    max_word_len: int = Field(default=4, ge=1)
    options: Options = Field(default_factory=Options)


class LinearizeResponse(BaseModel):
    status: Literal["certified", "violated", "inconclusive"]
    bundle: dict[str, Any]


class CertifyRequest(BaseModel):
    bundle: dict[str, Any]


class CertifyResponse(BaseModel):
    status: Literal["ok", "violated", "inconclusive"]
    bundle_status: str
    report: ReportDoc


class ErrorResponse(BaseModel):
    status: Literal["error"]
    kind: str
    detail: str
