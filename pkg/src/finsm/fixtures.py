"""Bundled example machines used by tests, docs and the demo data set.

All three accept (or are meant to accept) the language of strings over
{0, 1} that are empty or end in "01".  The partial DFA variant omits the
on-1 arrow out of q_0, so it is not total and rejects strings such as
"101"; it exists to exercise the missing-transition diagnostic.
"""

from __future__ import annotations

from finsm.machine import EPSILON, Machine, new_machine

__all__ = ["ends_in_01_nfa", "ends_in_01_dfa", "ends_in_01_dfa_partial"]


def ends_in_01_nfa() -> Machine:
    """Four-state NFA with two epsilon arrows and a set-labelled self-loop."""
    m = new_machine("N")
    m, q0 = m.add_state("q_0'", (0.0, 0.0))
    m, q1 = m.add_state("q_1'", (2.5, 1.5))
    m, q2 = m.add_state("q_2'", (5.0, 0.0))
    m, q3 = m.add_state("q_3'", (2.5, -1.5))
    m = m.set_state_flags(q0, is_start=True)
    m = m.set_state_flags(q3, is_final=True)
    m, _ = m.add_transition(q0, q1, {EPSILON})
    m, _ = m.add_transition(q0, q3, {EPSILON})
    m, _ = m.add_transition(q1, q2, {"0"})
    m, _ = m.add_transition(q1, q1, {"0", "1"})
    m, _ = m.add_transition(q2, q3, {"1"})
    return m


def _dfa_base() -> Machine:
    m = new_machine("D")
    m, q0 = m.add_state("q_0", (0.0, 0.0))
    m, q1 = m.add_state("q_1", (3.0, 0.0))
    m, q2 = m.add_state("q_2", (6.0, 0.0))
    m = m.set_state_flags(q0, is_start=True, is_final=True)
    m, _ = m.add_transition(q0, q1, {"0"}, curve=0.5)
    m, _ = m.add_transition(q1, q1, {"0"})
    m, _ = m.add_transition(q2, q1, {"0"})
    m, _ = m.add_transition(q1, q0, {"1"}, curve=0.5)
    m, _ = m.add_transition(q2, q2, {"1"})
    return m


def ends_in_01_dfa() -> Machine:
    """Total three-state DFA for the same language as the NFA."""
    m = _dfa_base()
    m, _ = m.add_transition(0, 2, {"1"}, curve=-1.0)
    return m


def ends_in_01_dfa_partial() -> Machine:
    """The DFA without its on-1 arrow out of q_0; fails totality validation."""
    return _dfa_base()
