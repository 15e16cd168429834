"""HTTP API over the machine store and the core algorithms.

Build an application with :func:`create_app`.  All compute endpoints (run,
validate, definition, export, alphabet) are read-only: they never mutate
the stored document.  Errors use one body shape everywhere::

    {"httpStatus": 422, "code": "INVARIANT_ERROR", "message": "...", "details": ...}

Validation failures of a machine *as a DFA* are not HTTP errors; they are
ordinary 200 responses with ``{"ok": false, "error": ...}`` because the
client presents them as user feedback, not as a failed request.
"""

from __future__ import annotations

import json
import uuid
from pathlib import Path
from typing import Literal, Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from finsm import persistence
from finsm.analysis import (
    ValidationError,
    format_definition,
    infer_alphabet,
    run_tape,
    validate_as_dfa,
)
from finsm.machine import EPSILON, FinsmError, Machine, new_machine
from finsm.persistence import MachineStore
from finsm.service.schemas import (
    AlphabetResponse,
    ApiErrorModel,
    CreateResponse,
    DefinitionResponse,
    ExportResponse,
    MachineSummary,
    RunRequest,
    RunResponse,
    ValidateResponse,
    ValidationErrorModel,
)
from finsm.simulation import AlphabetTooLargeError, key_mapping
from finsm.tikz import ExportOptions, export_tikz

__all__ = ["ApiException", "create_app"]


class ApiException(Exception):
    """Carries an ApiError body to the exception handler."""

    def __init__(self, http_status: int, code: str, message: str, details=None):
        super().__init__(message)
        self.http_status = http_status
        self.code = code
        self.message = message
        self.details = details


def _error_response(exc: ApiException) -> JSONResponse:
    body = ApiErrorModel(
        httpStatus=exc.http_status,
        code=exc.code,
        message=exc.message,
        details=exc.details,
    )
    return JSONResponse(
        status_code=exc.http_status,
        content=body.model_dump(exclude_none=True),
    )


def _persistence_error(exc: FinsmError) -> ApiException:
    mapping = [
        (persistence.ParseError, 400, "PARSE_ERROR"),
        (persistence.SchemaError, 422, "SCHEMA_ERROR"),
        (persistence.VersionError, 422, "VERSION_ERROR"),
        (persistence.InvariantError, 422, "INVARIANT_ERROR"),
        (persistence.InvalidIdError, 422, "INVALID_ID"),
        (persistence.NotFoundError, 404, "NOT_FOUND"),
    ]
    for cls, status, code in mapping:
        if isinstance(exc, cls):
            return ApiException(status, code, str(exc))
    return ApiException(500, "INTERNAL", str(exc))


def _validation_error_model(error: ValidationError) -> ValidationErrorModel:
    return ValidationErrorModel(
        code=error.code.value,
        state=error.state,
        symbol=error.symbol,
        message=error.message,
    )


async def _read_document(request: Request) -> dict:
    """Parse a request body that must be a JSON object."""
    raw = await request.body()
    try:
        document = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ApiException(400, "PARSE_ERROR", f"not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ApiException(422, "SCHEMA_ERROR", "request body must be a JSON object")
    return document


def _machine_from_document(document: dict) -> Machine:
    """Accept a full document, or {"name": ...} as shorthand for an empty machine."""
    if set(document) <= {"name"}:
        if "name" not in document:
            raise ApiException(422, "SCHEMA_ERROR", "body needs a name or a full document")
        if not isinstance(document["name"], str):
            raise ApiException(422, "SCHEMA_ERROR", "name must be a string")
        return new_machine(document["name"])
    try:
        return persistence.deserialize(json.dumps(document))
    except FinsmError as exc:
        raise _persistence_error(exc) from exc


def create_app(
    data_dir: str | Path,
    cors_origin: str = "*",
) -> FastAPI:
    """Application factory; one store rooted at ``data_dir`` per app."""
    app = FastAPI(title="finsm", version="0.1.0")
    store = MachineStore(data_dir)
    app.state.store = store

    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiException)
    async def handle_api_exception(_request: Request, exc: ApiException):
        return _error_response(exc)

    @app.exception_handler(FinsmError)
    async def handle_finsm_error(_request: Request, exc: FinsmError):
        return _error_response(_persistence_error(exc))

    @app.exception_handler(RequestValidationError)
    async def handle_request_validation(_request: Request, exc: RequestValidationError):
        errors = exc.errors()
        malformed = any(e.get("type") == "json_invalid" for e in errors)
        status, code = (400, "PARSE_ERROR") if malformed else (422, "SCHEMA_ERROR")
        details = {"errors": [
            {"loc": [str(part) for part in e.get("loc", ())], "msg": e.get("msg", "")}
            for e in errors
        ]}
        return _error_response(
            ApiException(status, code, "invalid request", details)
        )

    def load(machine_id: str) -> Machine:
        try:
            return store.load(machine_id)
        except FinsmError as exc:
            raise _persistence_error(exc) from exc

    # -- machine CRUD ------------------------------------------------------

    @app.post("/machines", status_code=201, response_model=CreateResponse)
    async def create_machine(
        request: Request, requested_id: Optional[str] = Query(None, alias="id")
    ):
        document = await _read_document(request)
        machine = _machine_from_document(document)
        machine_id = requested_id if requested_id is not None else uuid.uuid4().hex[:12]
        try:
            if store.exists(machine_id):
                raise ApiException(
                    409, "ID_COLLISION", f"machine id {machine_id!r} already exists"
                )
            store.save(machine_id, machine)
        except FinsmError as exc:
            raise _persistence_error(exc) from exc
        return CreateResponse(id=machine_id)

    @app.get("/machines", response_model=list[MachineSummary])
    def list_machines():
        summaries = []
        for machine_id in store.list():
            name = ""
            try:
                parsed = json.loads(store.load_text(machine_id))
                if isinstance(parsed, dict) and isinstance(parsed.get("name"), str):
                    name = parsed["name"]
            except (FinsmError, json.JSONDecodeError, UnicodeDecodeError):
                pass
            summaries.append(MachineSummary(id=machine_id, name=name))
        return summaries

    @app.get("/machines/{machine_id}")
    def get_machine(machine_id: str):
        try:
            text = store.load_text(machine_id)
        except FinsmError as exc:
            raise _persistence_error(exc) from exc
        return Response(content=text, media_type="application/json")

    @app.put("/machines/{machine_id}", response_model=CreateResponse)
    async def put_machine(machine_id: str, request: Request):
        document = await _read_document(request)
        machine = _machine_from_document(document)
        try:
            store.save(machine_id, machine)
        except FinsmError as exc:
            raise _persistence_error(exc) from exc
        return CreateResponse(id=machine_id)

    @app.delete("/machines/{machine_id}", status_code=204)
    def delete_machine(machine_id: str):
        try:
            if not store.exists(machine_id):
                raise persistence.NotFoundError(f"no machine with id {machine_id!r}")
            store.delete(machine_id)
        except FinsmError as exc:
            raise _persistence_error(exc) from exc
        return Response(status_code=204)

    # -- compute (read-only) -----------------------------------------------

    @app.post(
        "/machines/{machine_id}/validate",
        response_model=ValidateResponse,
        response_model_exclude_none=True,
    )
    def validate_machine(machine_id: str, kind: Literal["dfa", "nfa"] = Query("dfa")):
        machine = load(machine_id)
        if kind == "dfa":
            error = validate_as_dfa(machine)
            if error is not None:
                return ValidateResponse(ok=False, error=_validation_error_model(error))
        return ValidateResponse(ok=True)

    @app.post(
        "/machines/{machine_id}/run",
        response_model=RunResponse,
        response_model_exclude_none=True,
    )
    def run_machine(machine_id: str, body: RunRequest):
        machine = load(machine_id)
        if body.kind == "dfa":
            error = validate_as_dfa(machine)
            if error is not None:
                return RunResponse(ok=False, error=_validation_error_model(error))
        if any(sym == EPSILON for sym in body.tape):
            raise ApiException(422, "EPSILON_ON_TAPE", "epsilon may not appear on a tape")
        result = run_tape(machine, body.tape)
        return RunResponse(
            accepted=result.accepted,
            trace=[sorted(active) for active in result.trace],
        )

    @app.get("/machines/{machine_id}/definition", response_model=DefinitionResponse)
    def machine_definition(machine_id: str):
        return DefinitionResponse(text=format_definition(load(machine_id)))

    @app.get("/machines/{machine_id}/export/tikz", response_model=ExportResponse)
    def machine_tikz(
        machine_id: str,
        nonce: Optional[str] = Query(None),
        scale: float = Query(1.0, gt=0),
        grid: float = Query(0.0, ge=0),
    ):
        machine = load(machine_id)
        document = export_tikz(
            machine, ExportOptions(scale=scale, grid_snap=grid, nonce=nonce)
        )
        return ExportResponse(
            source=document.source,
            nodeNames={str(sid): name for sid, name in document.node_names.items()},
        )

    @app.get("/machines/{machine_id}/alphabet", response_model=AlphabetResponse)
    def machine_alphabet(machine_id: str):
        machine = load(machine_id)
        alphabet = list(infer_alphabet(machine))
        try:
            mapping = key_mapping(alphabet)
        except AlphabetTooLargeError as exc:
            raise ApiException(422, "ALPHABET_TOO_LARGE", str(exc)) from exc
        return AlphabetResponse(alphabet=alphabet, keyMapping=mapping)

    return app
