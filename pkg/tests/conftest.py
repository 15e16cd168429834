import random

import pytest

from finsm.fixtures import ends_in_01_dfa, ends_in_01_dfa_partial, ends_in_01_nfa
from finsm.machine import EPSILON, Machine, new_machine


@pytest.fixture
def nfa() -> Machine:
    return ends_in_01_nfa()


@pytest.fixture
def dfa() -> Machine:
    return ends_in_01_dfa()


@pytest.fixture
def partial_dfa() -> Machine:
    return ends_in_01_dfa_partial()


def random_machine(rng: random.Random, max_states: int = 5, alphabet=("0", "1")) -> Machine:
    """Small random machine over the given alphabet, epsilon edges included."""
    m = new_machine(f"R{rng.randrange(10**6)}")
    ids = []
    for _ in range(rng.randint(1, max_states)):
        m, sid = m.add_state(pos=(rng.uniform(-5, 5), rng.uniform(-5, 5)))
        ids.append(sid)
    for sid in ids:
        m = m.set_state_flags(
            sid, is_start=rng.random() < 0.4, is_final=rng.random() < 0.4
        )
    symbols = list(alphabet)[: rng.randint(1, len(alphabet))]
    for _ in range(rng.randint(0, 2 * max_states)):
        if rng.random() < 0.2:
            label = {EPSILON}
        else:
            label = set(rng.sample(symbols, rng.randint(1, len(symbols))))
        m, _ = m.add_transition(
            rng.choice(ids), rng.choice(ids), label, curve=rng.choice([0.0, 0.5, -1.0])
        )
    return m


def all_tapes(alphabet, max_len: int):
    """Every tape over the alphabet up to max_len, shortlex order."""
    level = [()]
    for _ in range(max_len + 1):
        yield from level
        level = [tape + (sym,) for tape in level for sym in alphabet]
