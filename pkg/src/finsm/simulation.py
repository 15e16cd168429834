"""Interactive simulation sessions.

A session owns a machine plus a set of named tapes.  Each tape has a ticker
(the current read position); the active state set at any ticker position
comes from a cached full-tape trace, so scrubbing back and forth is pure
lookup.  Sessions are single-writer: callers must serialize mutations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from finsm.analysis import (
    MachineKind,
    RunResult,
    ValidationError,
    run_tape,
    validate_as_dfa,
)
from finsm.machine import EPSILON, FinsmError, Machine

__all__ = [
    "UnknownTapeError",
    "AlphabetTooLargeError",
    "DfaValidationFailure",
    "TapeStatus",
    "Tape",
    "SimulationSession",
    "start_session",
    "key_mapping",
    "KEY_SEQUENCE",
]

#: Keys handed out to alphabet symbols, in order: home row first, then the
#: rest of the letter rows.
KEY_SEQUENCE = "asdfghjklqwertyuiopzxcvbnm"


class UnknownTapeError(FinsmError):
    """A tape id does not exist in the session."""


class AlphabetTooLargeError(FinsmError):
    """More alphabet symbols than assignable keys."""


class DfaValidationFailure(FinsmError):
    """Raised when a machine fails DFA validation; carries the diagnostic."""

    def __init__(self, error: ValidationError):
        super().__init__(error.message)
        self.error = error


class TapeStatus(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"


@dataclass
class Tape:
    id: int
    symbols: tuple[str, ...]
    ticker: int = 0


def _check_tape_symbols(symbols) -> tuple[str, ...]:
    symbols = tuple(symbols)
    for sym in symbols:
        if sym == EPSILON:
            raise FinsmError("epsilon may not appear on a tape")
        if not isinstance(sym, str) or not sym:
            raise ValueError("tape symbols must be non-empty strings")
    return symbols


class SimulationSession:
    """Machine + tapes + cached traces.  Use :func:`start_session` to create."""

    def __init__(self, machine: Machine):
        self.machine = machine
        self.tapes: dict[int, Tape] = {}
        self.active_tape: int | None = None
        self._traces: dict[int, RunResult] = {}

    # -- tape management --------------------------------------------------

    def add_tape(self, symbols) -> int:
        tape_id = max(self.tapes) + 1 if self.tapes else 0
        tape = Tape(id=tape_id, symbols=_check_tape_symbols(symbols))
        self.tapes[tape_id] = tape
        self._traces[tape_id] = run_tape(self.machine, tape.symbols)
        self.active_tape = tape_id
        return tape_id

    def edit_tape(self, tape_id: int, symbols):
        tape = self._require_tape(tape_id)
        tape.symbols = _check_tape_symbols(symbols)
        tape.ticker = 0
        self._traces[tape_id] = run_tape(self.machine, tape.symbols)

    def delete_tape(self, tape_id: int):
        self._require_tape(tape_id)
        del self.tapes[tape_id]
        del self._traces[tape_id]
        if self.active_tape == tape_id:
            self.active_tape = None

    def select_tape(self, tape_id: int):
        self._require_tape(tape_id)
        self.active_tape = tape_id

    # -- scrubbing --------------------------------------------------------

    def advance(self, tape_id: int):
        tape = self._require_tape(tape_id)
        tape.ticker = min(tape.ticker + 1, len(tape.symbols))

    def rewind(self, tape_id: int):
        tape = self._require_tape(tape_id)
        tape.ticker = max(tape.ticker - 1, 0)

    def active_states(self, tape_id: int) -> frozenset[int]:
        tape = self._require_tape(tape_id)
        return self._traces[tape_id].trace[tape.ticker]

    def trace(self, tape_id: int) -> tuple[frozenset[int], ...]:
        self._require_tape(tape_id)
        return self._traces[tape_id].trace

    def status(self, tape_id: int) -> TapeStatus:
        self._require_tape(tape_id)
        accepted = self._traces[tape_id].accepted
        return TapeStatus.ACCEPTED if accepted else TapeStatus.REJECTED

    # -- machine replacement ----------------------------------------------

    def set_machine(self, machine: Machine):
        """Swap in an edited machine and recompute every cached trace."""
        self.machine = machine
        for tape in self.tapes.values():
            self._traces[tape.id] = run_tape(machine, tape.symbols)

    def _require_tape(self, tape_id: int) -> Tape:
        if tape_id not in self.tapes:
            raise UnknownTapeError(f"no tape with id {tape_id}")
        return self.tapes[tape_id]


def start_session(machine: Machine, kind: MachineKind) -> SimulationSession:
    """Open a session; simulating as a DFA first requires clean validation."""
    if kind is MachineKind.DFA:
        error = validate_as_dfa(machine)
        if error is not None:
            raise DfaValidationFailure(error)
    return SimulationSession(machine)


def key_mapping(alphabet) -> dict[str, str]:
    """Assign one keyboard key per symbol, smallest symbol first."""
    symbols = sorted(alphabet)
    if len(symbols) > len(KEY_SEQUENCE):
        raise AlphabetTooLargeError(
            f"cannot map {len(symbols)} symbols to {len(KEY_SEQUENCE)} keys"
        )
    return {KEY_SEQUENCE[i]: sym for i, sym in enumerate(symbols)}
