"""Machine data model.

A single ``Machine`` value represents both DFAs and NFAs: a DFA is just a
machine that happens to satisfy the determinism checks in
:mod:`finsm.analysis`.  Transitions carry a *set* of symbols, so one arrow
labelled ``{"0", "1"}`` stands for two classic transitions.  The reserved
symbol :data:`EPSILON` marks spontaneous moves.

Machines are immutable: every editing operation returns a new value, which
makes them safe to share between threads and trivial to snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

__all__ = [
    "EPSILON",
    "FinsmError",
    "MachineInvariantError",
    "UnknownStateError",
    "DuplicateNameError",
    "EmptyLabelError",
    "MixedEpsilonLabelError",
    "Transition",
    "Machine",
    "new_machine",
]

#: The reserved epsilon symbol.  Stored and exported verbatim.
EPSILON = "\\epsilon"


class FinsmError(Exception):
    """Base class for all errors raised by this package."""


class MachineInvariantError(FinsmError):
    """A machine value violates a structural invariant."""


class UnknownStateError(FinsmError):
    """A state id does not exist in the machine."""


class DuplicateNameError(FinsmError):
    """A display name is already used by another state."""


class EmptyLabelError(FinsmError):
    """A transition label must contain at least one symbol."""


class MixedEpsilonLabelError(FinsmError):
    """Epsilon may not share a label with ordinary symbols."""


def check_label(symbols) -> frozenset[str]:
    """Normalize and validate a transition label.

    Labels are non-empty sets of non-empty symbol strings; epsilon is only
    allowed on its own.
    """
    label = frozenset(symbols)
    if not label:
        raise EmptyLabelError("transition label must contain at least one symbol")
    for sym in label:
        if not isinstance(sym, str) or not sym:
            raise MachineInvariantError("symbols must be non-empty strings")
    if EPSILON in label and len(label) > 1:
        raise MixedEpsilonLabelError(
            "epsilon may not be combined with other symbols in one label"
        )
    return label


@dataclass(frozen=True)
class Transition:
    """One arrow of the transition relation.

    ``curve`` is the perpendicular control-point offset used for layout and
    TikZ export; 0 means a straight arrow.
    """

    id: int
    source: int
    target: int
    label: frozenset[str]
    curve: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "label", check_label(self.label))
        object.__setattr__(self, "curve", float(self.curve))

    @property
    def is_epsilon(self) -> bool:
        return EPSILON in self.label


@dataclass(frozen=True)
class Machine:
    """An automaton plus its presentation data (names, positions).

    ``start`` is a *set* of states; a machine intended as a DFA simply has
    one element there.  The dict-valued fields are never mutated in place;
    treat the whole value as read-only.
    """

    name: str = ""
    states: frozenset[int] = frozenset()
    transitions: dict[int, Transition] = field(default_factory=dict)
    start: frozenset[int] = frozenset()
    final: frozenset[int] = frozenset()
    state_names: dict[int, str] = field(default_factory=dict)
    positions: dict[int, tuple[float, float]] = field(default_factory=dict)
    # High-water marks: ids of removed states/transitions are never handed
    # out again within this value's lifetime.  Not part of equality.
    next_state_id: int = field(default=0, compare=False)
    next_transition_id: int = field(default=0, compare=False)

    def __post_init__(self):
        if not self.start <= self.states:
            raise MachineInvariantError("start states must be a subset of states")
        if not self.final <= self.states:
            raise MachineInvariantError("final states must be a subset of states")
        if set(self.state_names) != set(self.states):
            raise MachineInvariantError("state_names must cover exactly the states")
        if set(self.positions) != set(self.states):
            raise MachineInvariantError("positions must cover exactly the states")
        names = list(self.state_names.values())
        if len(set(names)) != len(names):
            raise MachineInvariantError("state display names must be unique")
        for tid, t in self.transitions.items():
            if tid != t.id:
                raise MachineInvariantError("transition keyed under a foreign id")
            if t.source not in self.states or t.target not in self.states:
                raise MachineInvariantError(
                    f"transition {tid} references a missing state"
                )
        state_floor = max(self.states, default=-1) + 1
        transition_floor = max(self.transitions, default=-1) + 1
        if self.next_state_id < state_floor:
            object.__setattr__(self, "next_state_id", state_floor)
        if self.next_transition_id < transition_floor:
            object.__setattr__(self, "next_transition_id", transition_floor)

    # -- queries ---------------------------------------------------------

    def state_name(self, state: int) -> str:
        self._require_state(state)
        return self.state_names[state]

    def transitions_from(self, state: int) -> list[Transition]:
        """Outgoing transitions of ``state``, ordered by transition id."""
        return [t for _, t in sorted(self.transitions.items()) if t.source == state]

    def _require_state(self, state: int):
        if state not in self.states:
            raise UnknownStateError(f"no state with id {state}")

    # -- editing ---------------------------------------------------------

    def add_state(
        self,
        name: str | None = None,
        pos: tuple[float, float] = (0.0, 0.0),
    ) -> tuple["Machine", int]:
        """Add a state, auto-naming it ``q_k`` with the smallest free k."""
        if name is None:
            used = set(self.state_names.values())
            k = 0
            while f"q_{k}" in used:
                k += 1
            name = f"q_{k}"
        elif name in self.state_names.values():
            raise DuplicateNameError(f"state name {name!r} already in use")
        sid = self.next_state_id
        m = replace(
            self,
            states=self.states | {sid},
            state_names={**self.state_names, sid: name},
            positions={**self.positions, sid: (float(pos[0]), float(pos[1]))},
            next_state_id=sid + 1,
        )
        return m, sid

    def add_transition(
        self,
        source: int,
        target: int,
        symbols,
        curve: float = 0.0,
    ) -> tuple["Machine", int]:
        """Add a transition; parallel arrows between the same states are kept."""
        self._require_state(source)
        self._require_state(target)
        tid = self.next_transition_id
        t = Transition(id=tid, source=source, target=target, label=symbols, curve=curve)
        m = replace(
            self,
            transitions={**self.transitions, tid: t},
            next_transition_id=tid + 1,
        )
        return m, tid

    def remove_state(self, state: int) -> "Machine":
        """Remove a state together with every transition touching it."""
        self._require_state(state)
        names = dict(self.state_names)
        positions = dict(self.positions)
        del names[state]
        del positions[state]
        transitions = {
            tid: t
            for tid, t in self.transitions.items()
            if t.source != state and t.target != state
        }
        return replace(
            self,
            states=self.states - {state},
            transitions=transitions,
            start=self.start - {state},
            final=self.final - {state},
            state_names=names,
            positions=positions,
        )

    def remove_transition(self, tid: int) -> "Machine":
        if tid not in self.transitions:
            raise FinsmError(f"no transition with id {tid}")
        transitions = dict(self.transitions)
        del transitions[tid]
        return replace(self, transitions=transitions)

    def set_state_flags(
        self,
        state: int,
        is_start: bool | None = None,
        is_final: bool | None = None,
    ) -> "Machine":
        """Update start/final membership; ``None`` leaves a flag unchanged."""
        self._require_state(state)
        start, final = self.start, self.final
        if is_start is not None:
            start = start | {state} if is_start else start - {state}
        if is_final is not None:
            final = final | {state} if is_final else final - {state}
        return replace(self, start=start, final=final)

    def rename_state(self, state: int, new_name: str) -> "Machine":
        """Change a display name; the machine's language is untouched."""
        self._require_state(state)
        if new_name != self.state_names[state] and new_name in self.state_names.values():
            raise DuplicateNameError(f"state name {new_name!r} already in use")
        return replace(self, state_names={**self.state_names, state: new_name})

    def move_state(self, state: int, pos: tuple[float, float]) -> "Machine":
        self._require_state(state)
        return replace(
            self, positions={**self.positions, state: (float(pos[0]), float(pos[1]))}
        )

    def rename(self, name: str) -> "Machine":
        return replace(self, name=name)


def new_machine(name: str) -> Machine:
    """An empty machine: no states, no transitions, nothing marked."""
    return Machine(name=name)
