"""Canonical JSON documents and a file-backed machine store.

The document format is versioned and strict: deserialization rejects
anything malformed, out of version, or violating a machine invariant.  It
never repairs input.  Serialization is canonical (fixed key order, records
sorted by id, symbols sorted), so equal machines produce identical bytes.
"""

from __future__ import annotations

import json
import math
import os
import re
import tempfile
import threading
from pathlib import Path

from finsm.machine import FinsmError, Machine, MachineInvariantError, Transition

__all__ = [
    "FORMAT_VERSION",
    "ParseError",
    "SchemaError",
    "InvariantError",
    "VersionError",
    "NotFoundError",
    "InvalidIdError",
    "StoreIOError",
    "serialize",
    "deserialize",
    "MachineStore",
]

FORMAT_VERSION = 1

MACHINE_ID_RE = re.compile(r"^[A-Za-z0-9_-]{1,64}$")


class ParseError(FinsmError):
    """The input is not JSON at all."""


class SchemaError(FinsmError):
    """The JSON shape is wrong: missing keys, wrong types, unknown keys."""


class InvariantError(FinsmError):
    """Structurally valid JSON describing an invalid machine."""


class VersionError(FinsmError):
    """The document's formatVersion is not supported."""


class NotFoundError(FinsmError):
    """No stored machine under that id."""


class InvalidIdError(FinsmError):
    """Machine ids are limited to 1-64 characters of [A-Za-z0-9_-]."""


class StoreIOError(FinsmError):
    """The underlying filesystem operation failed."""


def serialize(machine: Machine) -> str:
    """Canonical JSON text for a machine; byte-stable across calls."""
    states = [
        {
            "id": sid,
            "name": machine.state_names[sid],
            "x": machine.positions[sid][0],
            "y": machine.positions[sid][1],
            "isStart": sid in machine.start,
            "isFinal": sid in machine.final,
        }
        for sid in sorted(machine.states)
    ]
    transitions = [
        {
            "id": t.id,
            "from": t.source,
            "to": t.target,
            "symbols": sorted(t.label),
            "curve": t.curve,
        }
        for _, t in sorted(machine.transitions.items())
    ]
    document = {
        "formatVersion": FORMAT_VERSION,
        "name": machine.name,
        "states": states,
        "transitions": transitions,
    }
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def _require(condition: bool, message: str):
    if not condition:
        raise SchemaError(message)


def _check_keys(record: dict, expected: set[str], where: str):
    _require(isinstance(record, dict), f"{where} must be an object")
    missing = expected - set(record)
    _require(not missing, f"{where} missing keys: {sorted(missing)}")
    unknown = set(record) - expected
    _require(not unknown, f"{where} has unknown keys: {sorted(unknown)}")


def _as_int(value, where: str) -> int:
    # bool is an int subclass; reject it explicitly.
    _require(isinstance(value, int) and not isinstance(value, bool), f"{where} must be an integer")
    return value


def _as_real(value, where: str) -> float:
    _require(
        isinstance(value, (int, float)) and not isinstance(value, bool),
        f"{where} must be a number",
    )
    _require(math.isfinite(value), f"{where} must be finite")
    return float(value)


def _as_bool(value, where: str) -> bool:
    _require(isinstance(value, bool), f"{where} must be a boolean")
    return value


def _as_str(value, where: str) -> str:
    _require(isinstance(value, str), f"{where} must be a string")
    return value


def deserialize(text: str) -> Machine:
    """Parse a document into a machine, enforcing every invariant.

    Raises ParseError, SchemaError, VersionError or InvariantError; never
    returns a repaired machine.
    """
    try:
        document = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError, TypeError) as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc

    _check_keys(document, {"formatVersion", "name", "states", "transitions"}, "document")
    version = _as_int(document["formatVersion"], "formatVersion")
    if version != FORMAT_VERSION:
        raise VersionError(f"unsupported formatVersion {version}")
    name = _as_str(document["name"], "name")
    _require(isinstance(document["states"], list), "states must be a list")
    _require(isinstance(document["transitions"], list), "transitions must be a list")

    states: set[int] = set()
    start: set[int] = set()
    final: set[int] = set()
    state_names: dict[int, str] = {}
    positions: dict[int, tuple[float, float]] = {}
    for i, record in enumerate(document["states"]):
        where = f"states[{i}]"
        _check_keys(record, {"id", "name", "x", "y", "isStart", "isFinal"}, where)
        sid = _as_int(record["id"], f"{where}.id")
        if sid in states:
            raise InvariantError(f"duplicate state id {sid}")
        states.add(sid)
        state_names[sid] = _as_str(record["name"], f"{where}.name")
        positions[sid] = (
            _as_real(record["x"], f"{where}.x"),
            _as_real(record["y"], f"{where}.y"),
        )
        if _as_bool(record["isStart"], f"{where}.isStart"):
            start.add(sid)
        if _as_bool(record["isFinal"], f"{where}.isFinal"):
            final.add(sid)

    transitions: dict[int, Transition] = {}
    for i, record in enumerate(document["transitions"]):
        where = f"transitions[{i}]"
        _check_keys(record, {"id", "from", "to", "symbols", "curve"}, where)
        tid = _as_int(record["id"], f"{where}.id")
        if tid in transitions:
            raise InvariantError(f"duplicate transition id {tid}")
        _require(isinstance(record["symbols"], list), f"{where}.symbols must be a list")
        symbols = [_as_str(s, f"{where}.symbols[*]") for s in record["symbols"]]
        try:
            transitions[tid] = Transition(
                id=tid,
                source=_as_int(record["from"], f"{where}.from"),
                target=_as_int(record["to"], f"{where}.to"),
                label=symbols,
                curve=_as_real(record["curve"], f"{where}.curve"),
            )
        except FinsmError as exc:
            raise InvariantError(f"{where}: {exc}") from exc

    try:
        return Machine(
            name=name,
            states=frozenset(states),
            transitions=transitions,
            start=frozenset(start),
            final=frozenset(final),
            state_names=state_names,
            positions=positions,
        )
    except MachineInvariantError as exc:
        raise InvariantError(str(exc)) from exc


class MachineStore:
    """One canonical JSON file per machine id under a data directory.

    Writes go through a temp file in the same directory followed by an
    atomic rename, so readers only ever observe complete documents.  Writes
    to the same id are serialized with a process-local lock; distinct ids
    never contend.
    """

    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreIOError(f"cannot create data directory {self.root}: {exc}") from exc
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _path(self, machine_id: str) -> Path:
        if not MACHINE_ID_RE.fullmatch(machine_id):
            raise InvalidIdError(f"invalid machine id {machine_id!r}")
        return self.root / f"{machine_id}.json"

    def _lock(self, machine_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(machine_id, threading.Lock())

    def save(self, machine_id: str, machine: Machine):
        path = self._path(machine_id)
        text = serialize(machine)
        with self._lock(machine_id):
            try:
                fd, tmp = tempfile.mkstemp(
                    dir=self.root, prefix=f".{machine_id}.", suffix=".tmp"
                )
                try:
                    with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
                        handle.write(text)
                    os.replace(tmp, path)
                except BaseException:
                    try:
                        os.unlink(tmp)
                    except OSError:
                        pass
                    raise
            except OSError as exc:
                raise StoreIOError(f"cannot write {path}: {exc}") from exc

    def load(self, machine_id: str) -> Machine:
        path = self._path(machine_id)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise NotFoundError(f"no machine with id {machine_id!r}") from None
        except OSError as exc:
            raise StoreIOError(f"cannot read {path}: {exc}") from exc
        return deserialize(text)

    def load_text(self, machine_id: str) -> str:
        """Raw stored bytes, exactly as serialize() wrote them."""
        path = self._path(machine_id)
        try:
            return path.read_text(encoding="utf-8")
        except FileNotFoundError:
            raise NotFoundError(f"no machine with id {machine_id!r}") from None
        except OSError as exc:
            raise StoreIOError(f"cannot read {path}: {exc}") from exc

    def exists(self, machine_id: str) -> bool:
        return self._path(machine_id).exists()

    def list(self) -> list[str]:
        try:
            ids = [
                p.stem
                for p in self.root.glob("*.json")
                if MACHINE_ID_RE.fullmatch(p.stem)
            ]
        except OSError as exc:
            raise StoreIOError(f"cannot list {self.root}: {exc}") from exc
        return sorted(ids)

    def delete(self, machine_id: str):
        """Remove a stored machine; deleting a missing id is a no-op."""
        path = self._path(machine_id)
        with self._lock(machine_id):
            try:
                path.unlink(missing_ok=True)
            except OSError as exc:
                raise StoreIOError(f"cannot delete {path}: {exc}") from exc
