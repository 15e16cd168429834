"""Request and response bodies of the HTTP API."""

from __future__ import annotations

from typing import Annotated, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, StringConstraints

Symbol = Annotated[str, StringConstraints(min_length=1)]


class RunRequest(BaseModel):
    """Body of POST /machines/{id}/run."""

    model_config = ConfigDict(extra="forbid")

    tape: list[Symbol]
    kind: Literal["nfa", "dfa"] = "nfa"


class ValidationErrorModel(BaseModel):
    code: str
    state: Optional[int] = None
    symbol: Optional[str] = None
    message: str = ""


class ValidateResponse(BaseModel):
    """Either {"ok": true} or {"ok": false, "error": ...}; never an HTTP error."""

    ok: bool
    error: Optional[ValidationErrorModel] = None


class RunResponse(BaseModel):
    """Successful runs carry accepted+trace; DFA validation failures carry ok+error."""

    ok: Optional[bool] = None
    accepted: Optional[bool] = None
    trace: Optional[list[list[int]]] = None
    error: Optional[ValidationErrorModel] = None


class CreateResponse(BaseModel):
    id: str


class MachineSummary(BaseModel):
    id: str
    name: str


class DefinitionResponse(BaseModel):
    text: str


class ExportResponse(BaseModel):
    source: str
    nodeNames: dict[str, str] = Field(default_factory=dict)


class AlphabetResponse(BaseModel):
    alphabet: list[str]
    keyMapping: dict[str, str]


class ApiErrorModel(BaseModel):
    """Uniform error body for every non-2xx response."""

    httpStatus: int
    code: str
    message: str
    details: Optional[dict] = None
