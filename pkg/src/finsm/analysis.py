"""Language-level algorithms over machines.

Everything here is a pure function of its inputs: alphabet inference,
epsilon closure, stepping, tape runs, determinism diagnostics, subset
construction, bounded language equivalence, and the textual rendering of a
machine's formal definition.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from finsm.machine import EPSILON, FinsmError, Machine

__all__ = [
    "EpsilonOnTapeError",
    "MachineKind",
    "ValidationCode",
    "ValidationError",
    "RunResult",
    "EquivalenceResult",
    "infer_alphabet",
    "epsilon_closure",
    "step",
    "run_tape",
    "validate_as_dfa",
    "as_dfa_table",
    "classify",
    "subset_construction",
    "equivalent_up_to",
    "format_definition",
]


class EpsilonOnTapeError(FinsmError):
    """Epsilon is not an input symbol and may not appear on a tape."""


class MachineKind(enum.Enum):
    DFA = "dfa"
    NFA = "nfa"


class ValidationCode(enum.Enum):
    NO_START_STATE = "NO_START_STATE"
    MULTIPLE_START_STATES = "MULTIPLE_START_STATES"
    EPSILON_TRANSITION = "EPSILON_TRANSITION"
    NONDETERMINISTIC_TRANSITION = "NONDETERMINISTIC_TRANSITION"
    MISSING_TRANSITION = "MISSING_TRANSITION"


@dataclass(frozen=True)
class ValidationError:
    """One determinism diagnostic; ``validate_as_dfa`` reports a single one."""

    code: ValidationCode
    state: int | None = None
    symbol: str | None = None
    message: str = ""


@dataclass(frozen=True)
class RunResult:
    accepted: bool
    trace: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    counterexample: tuple[str, ...] | None = None


def _check_tape_symbol(symbol: str):
    if symbol == EPSILON:
        raise EpsilonOnTapeError("epsilon may not appear on a tape")
    if not isinstance(symbol, str) or not symbol:
        raise ValueError("tape symbols must be non-empty strings")


def infer_alphabet(machine: Machine) -> tuple[str, ...]:
    """Union of all label symbols except epsilon, sorted lexicographically."""
    symbols = set()
    for t in machine.transitions.values():
        symbols |= t.label
    symbols.discard(EPSILON)
    return tuple(sorted(symbols))


def epsilon_closure(machine: Machine, states: frozenset[int]) -> frozenset[int]:
    """Least superset of ``states`` closed under epsilon transitions."""
    closure = set(states)
    queue = deque(states)
    while queue:
        s = queue.popleft()
        for t in machine.transitions.values():
            if t.source == s and t.is_epsilon and t.target not in closure:
                closure.add(t.target)
                queue.append(t.target)
    return frozenset(closure)


def step(machine: Machine, active: frozenset[int], symbol: str) -> frozenset[int]:
    """Active states after reading ``symbol``; the result is epsilon-closed.

    A symbol appearing on no outgoing label simply yields the empty set.
    """
    _check_tape_symbol(symbol)
    targets = {
        t.target
        for t in machine.transitions.values()
        if t.source in active and symbol in t.label
    }
    return epsilon_closure(machine, frozenset(targets))


def run_tape(machine: Machine, tape) -> RunResult:
    """Run a tape from the start set; the trace has one entry per ticker stop."""
    tape = tuple(tape)
    for sym in tape:
        _check_tape_symbol(sym)
    trace = [epsilon_closure(machine, machine.start)]
    for sym in tape:
        trace.append(step(machine, trace[-1], sym))
    accepted = bool(trace[-1] & machine.final)
    return RunResult(accepted=accepted, trace=tuple(trace))


def _diagnostic_message(
    machine: Machine, code: ValidationCode, state: int | None, symbol: str | None
) -> str:
    name = machine.state_names.get(state) if state is not None else None
    if code is ValidationCode.NO_START_STATE:
        return "no start state"
    if code is ValidationCode.MULTIPLE_START_STATES:
        return "multiple start states"
    if code is ValidationCode.EPSILON_TRANSITION:
        return f"epsilon transition at state {name}"
    if code is ValidationCode.NONDETERMINISTIC_TRANSITION:
        return f"nondeterministic transition at state {name} on symbol {symbol}"
    return f"missing transition at state {name} for symbol {symbol}"


def validate_as_dfa(machine: Machine) -> ValidationError | None:
    """First determinism problem, or ``None`` for a valid (total) DFA.

    Only one diagnostic is ever reported.  Precedence: no start state,
    multiple start states, epsilon transition, nondeterministic transition,
    missing transition; within a class the smallest state id wins, then the
    lexicographically smallest symbol.
    """

    def error(code, state=None, symbol=None):
        return ValidationError(
            code=code,
            state=state,
            symbol=symbol,
            message=_diagnostic_message(machine, code, state, symbol),
        )

    if not machine.start:
        return error(ValidationCode.NO_START_STATE)
    if len(machine.start) > 1:
        return error(ValidationCode.MULTIPLE_START_STATES)

    epsilon_states = sorted(
        t.source for t in machine.transitions.values() if t.is_epsilon
    )
    if epsilon_states:
        return error(ValidationCode.EPSILON_TRANSITION, state=epsilon_states[0])

    alphabet = infer_alphabet(machine)
    for state in sorted(machine.states):
        outgoing = machine.transitions_from(state)
        for symbol in alphabet:
            count = sum(1 for t in outgoing if symbol in t.label)
            if count > 1:
                return error(
                    ValidationCode.NONDETERMINISTIC_TRANSITION,
                    state=state,
                    symbol=symbol,
                )
    for state in sorted(machine.states):
        outgoing = machine.transitions_from(state)
        for symbol in alphabet:
            if not any(symbol in t.label for t in outgoing):
                return error(
                    ValidationCode.MISSING_TRANSITION, state=state, symbol=symbol
                )
    return None


def as_dfa_table(machine: Machine) -> dict[tuple[int, str], int] | None:
    """Total transition table of a valid DFA, or ``None`` if validation fails."""
    if validate_as_dfa(machine) is not None:
        return None
    table: dict[tuple[int, str], int] = {}
    for t in machine.transitions.values():
        for symbol in t.label:
            table[(t.source, symbol)] = t.target
    return table


def classify(machine: Machine) -> MachineKind:
    """DFA exactly when the determinism validation is clean."""
    return MachineKind.DFA if validate_as_dfa(machine) is None else MachineKind.NFA


def subset_construction(machine: Machine) -> Machine:
    """Determinize into the reachable epsilon-closed subset automaton.

    The result is total over the source alphabet (an empty subset state is
    materialized when some step dead-ends), a subset state is final iff it
    contains a final state, and state names list the sorted member names.
    Transitions into the same target are merged into one labelled arrow.
    """
    alphabet = infer_alphabet(machine)

    def subset_name(subset: frozenset[int]) -> str:
        return "{%s}" % ",".join(sorted(machine.state_names[s] for s in subset))

    start = epsilon_closure(machine, machine.start)
    ids: dict[frozenset[int], int] = {start: 0}
    order = [start]
    edges: list[tuple[int, int, str]] = []
    queue = deque([start])
    while queue:
        subset = queue.popleft()
        sid = ids[subset]
        for symbol in alphabet:
            nxt = step(machine, subset, symbol)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            edges.append((sid, ids[nxt], symbol))

    result = Machine(name=f"{machine.name} (determinized)")
    for i, subset in enumerate(order):
        result, sid = result.add_state(
            name=subset_name(subset), pos=(3.0 * (i % 4), -2.5 * (i // 4))
        )
        assert sid == i
        if subset & machine.final:
            result = result.set_state_flags(sid, is_final=True)
    result = result.set_state_flags(0, is_start=True)

    merged: dict[tuple[int, int], list[str]] = {}
    for source, target, symbol in edges:
        merged.setdefault((source, target), []).append(symbol)
    for (source, target), symbols in sorted(merged.items()):
        result, _ = result.add_transition(source, target, symbols)
    return result


def equivalent_up_to(a: Machine, b: Machine, max_len: int) -> EquivalenceResult:
    """Compare acceptance of every tape up to ``max_len`` in shortlex order.

    Returns the first disagreeing tape as a counterexample.  The walk keeps
    the active sets of both machines per prefix, which is exactly what
    ``run_tape`` would recompute from scratch.
    """
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    alphabet = sorted(set(infer_alphabet(a)) | set(infer_alphabet(b)))

    def accepts(active: frozenset[int], machine: Machine) -> bool:
        return bool(active & machine.final)

    level: list[tuple[tuple[str, ...], frozenset[int], frozenset[int]]] = [
        ((), epsilon_closure(a, a.start), epsilon_closure(b, b.start))
    ]
    for depth in range(max_len + 1):
        nxt = []
        for tape, act_a, act_b in level:
            if accepts(act_a, a) != accepts(act_b, b):
                return EquivalenceResult(equivalent=False, counterexample=tape)
            if depth < max_len:
                for symbol in alphabet:
                    nxt.append(
                        (
                            tape + (symbol,),
                            step(a, act_a, symbol),
                            step(b, act_b, symbol),
                        )
                    )
        level = nxt
    return EquivalenceResult(equivalent=True)


def format_definition(machine: Machine) -> str:
    """Render the 5-tuple definition of the machine as plain text.

    Deterministic machines are shown with a single-valued transition
    function and a single start state; everything else uses the set-valued
    form.  Output is stable: states by id, symbols lexicographically.
    """
    kind = classify(machine)
    names = machine.state_names

    def fmt_set(items) -> str:
        return "{%s}" % ", ".join(items)

    def fmt_symbol(symbol: str) -> str:
        return "ε" if symbol == EPSILON else symbol

    # Group arrows by source and symbol: one line per (state, symbol) pair.
    mapping: dict[tuple[int, str], set[int]] = {}
    for t in machine.transitions.values():
        for symbol in t.label:
            mapping.setdefault((t.source, symbol), set()).add(t.target)

    title = machine.name or "M"
    lines = []
    if kind is MachineKind.DFA:
        lines.append(f"{title} = (Q, Σ, δ, s, F)")
    else:
        lines.append(f"{title} = (Q, Σ, Δ, S, F)")
    lines.append("Q = " + fmt_set(sorted(names.values())))
    lines.append("Σ = " + fmt_set(infer_alphabet(machine)))
    for (state, symbol), targets in sorted(
        mapping.items(), key=lambda kv: (kv[0][0], kv[0][1])
    ):
        target_names = sorted(names[t] for t in targets)
        if kind is MachineKind.DFA:
            lines.append(f"δ({names[state]}, {fmt_symbol(symbol)}) = {target_names[0]}")
        else:
            lines.append(
                f"Δ({names[state]}, {fmt_symbol(symbol)}) = {fmt_set(target_names)}"
            )
    if kind is MachineKind.DFA:
        lines.append(f"s = {names[next(iter(machine.start))]}")
    else:
        lines.append("S = " + fmt_set(sorted(names[s] for s in machine.start)))
    lines.append("F = " + fmt_set(sorted(names[s] for s in machine.final)))
    return "\n".join(lines) + "\n"
