"""Document format laws, strict deserialization, and the file store."""

import json
import random
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_machine
from finsm.machine import new_machine
from finsm.persistence import (
    FORMAT_VERSION,
    InvalidIdError,
    InvariantError,
    MachineStore,
    NotFoundError,
    ParseError,
    SchemaError,
    VersionError,
    deserialize,
    serialize,
)


class TestSerialize:
    def test_empty_machine(self):
        doc = json.loads(serialize(new_machine("m")))
        assert doc == {
            "formatVersion": FORMAT_VERSION,
            "name": "m",
            "states": [],
            "transitions": [],
        }

    def test_fixture_records(self, nfa):
        doc = json.loads(serialize(nfa))
        assert len(doc["states"]) == 4
        assert len(doc["transitions"]) == 5
        by_name = {s["name"]: s for s in doc["states"]}
        assert by_name["q_0'"]["isStart"] is True
        assert by_name["q_3'"]["isFinal"] is True
        assert by_name["q_1'"]["isStart"] is False

    def test_records_sorted_by_id(self, nfa):
        doc = json.loads(serialize(nfa))
        assert [s["id"] for s in doc["states"]] == [0, 1, 2, 3]
        assert [t["id"] for t in doc["transitions"]] == [0, 1, 2, 3, 4]

    def test_symbols_sorted(self, nfa):
        doc = json.loads(serialize(nfa))
        self_loop = next(t for t in doc["transitions"] if t["id"] == 3)
        assert self_loop["symbols"] == ["0", "1"]

    def test_key_order_fixed(self, nfa):
        text = serialize(nfa)
        assert text.index('"formatVersion"') < text.index('"name"')
        assert text.index('"name"') < text.index('"states"')
        assert text.index('"states"') < text.index('"transitions"')

    def test_byte_stable(self, nfa):
        assert serialize(nfa) == serialize(nfa)

    def test_ends_with_single_newline(self, nfa):
        text = serialize(nfa)
        assert text.endswith("\n") and not text.endswith("\n\n")


class TestRoundTrip:
    def test_fixtures(self, nfa, dfa, partial_dfa):
        for m in (nfa, dfa, partial_dfa):
            assert deserialize(serialize(m)) == m

    def test_random_machines(self):
        rng = random.Random(3)
        for _ in range(300):
            m = random_machine(rng)
            assert deserialize(serialize(m)) == m

    def test_canonical_idempotence(self):
        rng = random.Random(4)
        for _ in range(100):
            text = serialize(random_machine(rng))
            assert serialize(deserialize(text)) == text

    def test_positions_and_curves_survive(self, dfa):
        m = deserialize(serialize(dfa))
        assert m.positions == dfa.positions
        assert m.transitions[0].curve == 0.5
        assert m.transitions[5].curve == -1.0


class TestStrictness:
    def test_not_json(self):
        with pytest.raises(ParseError):
            deserialize("{nope")

    def test_top_level_not_object(self):
        with pytest.raises(SchemaError):
            deserialize("[1, 2]")

    def test_missing_key(self):
        with pytest.raises(SchemaError):
            deserialize('{"formatVersion": 1, "name": "m", "states": []}')

    def test_unknown_key_rejected(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["extra"] = True
        with pytest.raises(SchemaError):
            deserialize(json.dumps(doc))

    def test_unknown_state_key_rejected(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["states"][0]["color"] = "red"
        with pytest.raises(SchemaError):
            deserialize(json.dumps(doc))

    def test_unsupported_version(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["formatVersion"] = 99
        with pytest.raises(VersionError):
            deserialize(json.dumps(doc))

    def test_bool_is_not_an_id(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["states"][0]["id"] = True
        with pytest.raises(SchemaError):
            deserialize(json.dumps(doc))

    def test_is_start_must_be_bool(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["states"][0]["isStart"] = 1
        with pytest.raises(SchemaError):
            deserialize(json.dumps(doc))

    def test_non_finite_coordinate(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["states"][0]["x"] = float("inf")
        with pytest.raises(SchemaError):
            deserialize(json.dumps(doc))

    def test_dangling_endpoint(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["transitions"][0]["from"] = 77
        with pytest.raises(InvariantError):
            deserialize(json.dumps(doc))

    def test_duplicate_state_id(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["states"][1]["id"] = 0
        with pytest.raises((InvariantError, SchemaError)):
            deserialize(json.dumps(doc))

    def test_duplicate_name(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["states"][1]["name"] = "q_0'"
        with pytest.raises(InvariantError):
            deserialize(json.dumps(doc))

    def test_mixed_epsilon_label(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["transitions"][0]["symbols"] = ["\\epsilon", "0"]
        with pytest.raises(InvariantError):
            deserialize(json.dumps(doc))

    def test_empty_label(self, nfa):
        doc = json.loads(serialize(nfa))
        doc["transitions"][0]["symbols"] = []
        with pytest.raises(InvariantError):
            deserialize(json.dumps(doc))

    def test_never_repairs(self, nfa):
        # a fixable defect (duplicate transition id) must still be fatal
        doc = json.loads(serialize(nfa))
        doc["transitions"][1]["id"] = 0
        with pytest.raises((InvariantError, SchemaError)):
            deserialize(json.dumps(doc))


FINSM_ERRORS = (ParseError, SchemaError, InvariantError, VersionError)


@given(st.text(max_size=300))
@settings(max_examples=500, deadline=None)
def test_fuzz_text_never_crashes(text):
    try:
        deserialize(text)
    except FINSM_ERRORS:
        pass


@given(
    st.recursive(
        st.none() | st.booleans() | st.integers() | st.floats() | st.text(max_size=10),
        lambda children: st.lists(children, max_size=4)
        | st.dictionaries(st.text(max_size=8), children, max_size=4),
        max_leaves=20,
    )
)
@settings(max_examples=500, deadline=None)
def test_fuzz_json_values_never_crash(value):
    try:
        deserialize(json.dumps(value))
    except FINSM_ERRORS:
        pass


@given(st.integers(0, 10**6), st.data())
@settings(max_examples=300, deadline=None)
def test_fuzz_mutated_documents_never_crash(seed, data):
    """Random single-field corruption of a valid document."""
    text = serialize(random_machine(random.Random(seed)))
    doc = json.loads(text)
    path = data.draw(st.sampled_from(["formatVersion", "name", "states", "transitions"]))
    doc[path] = data.draw(
        st.none() | st.booleans() | st.integers() | st.text(max_size=5)
    )
    try:
        deserialize(json.dumps(doc))
    except FINSM_ERRORS:
        pass


class TestStore:
    def test_save_load_roundtrip(self, tmp_path, nfa):
        store = MachineStore(tmp_path)
        store.save("m1", nfa)
        assert store.load("m1") == nfa

    def test_load_missing(self, tmp_path):
        with pytest.raises(NotFoundError):
            MachineStore(tmp_path).load("missing")

    def test_list_sorted(self, tmp_path, nfa):
        store = MachineStore(tmp_path)
        for machine_id in ("zz", "aa", "mm"):
            store.save(machine_id, nfa)
        assert store.list() == ["aa", "mm", "zz"]

    def test_delete_idempotent(self, tmp_path, nfa):
        store = MachineStore(tmp_path)
        store.save("m1", nfa)
        store.delete("m1")
        store.delete("m1")  # second delete is a no-op
        assert store.list() == []

    def test_exists(self, tmp_path, nfa):
        store = MachineStore(tmp_path)
        assert not store.exists("m1")
        store.save("m1", nfa)
        assert store.exists("m1")

    def test_invalid_ids_rejected(self, tmp_path):
        store = MachineStore(tmp_path)
        for bad in ("", "a/b", "..", "a" * 65, "sp ace", "dot.json"):
            with pytest.raises(InvalidIdError):
                store.load(bad)

    def test_id_charset_accepted(self, tmp_path, nfa):
        store = MachineStore(tmp_path)
        ok = "AZaz09_-"
        store.save(ok, nfa)
        assert store.load(ok) == nfa

    def test_load_text_is_canonical(self, tmp_path, nfa):
        store = MachineStore(tmp_path)
        store.save("m1", nfa)
        assert store.load_text("m1") == serialize(nfa)

    def test_overwrite_replaces(self, tmp_path, nfa, dfa):
        store = MachineStore(tmp_path)
        store.save("m1", nfa)
        store.save("m1", dfa)
        assert store.load("m1") == dfa

    def test_no_stray_temp_files(self, tmp_path, nfa):
        store = MachineStore(tmp_path)
        for _ in range(20):
            store.save("m1", nfa)
        assert [p.name for p in tmp_path.iterdir()] == ["m1.json"]

    def test_concurrent_saves_distinct_ids(self, tmp_path):
        store = MachineStore(tmp_path)
        rng = random.Random(9)
        machines = {f"m{i}": random_machine(rng) for i in range(20)}
        errors = []

        def save(machine_id, machine):
            try:
                for _ in range(10):
                    store.save(machine_id, machine)
            except Exception as exc:  # pragma: no cover
                errors.append(exc)

        threads = [
            threading.Thread(target=save, args=item) for item in machines.items()
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        assert store.list() == sorted(machines)
        for machine_id, machine in machines.items():
            assert store.load(machine_id) == machine

    def test_concurrent_same_id_keeps_file_whole(self, tmp_path, nfa, dfa):
        store = MachineStore(tmp_path)
        stop = threading.Event()
        errors = []

        def writer(machine):
            while not stop.is_set():
                store.save("shared", machine)

        def reader():
            while not stop.is_set():
                try:
                    loaded = store.load("shared")
                    assert loaded.name in ("N", "D")
                except NotFoundError:
                    pass
                except Exception as exc:  # pragma: no cover
                    errors.append(exc)
                    return

        store.save("shared", nfa)
        threads = [
            threading.Thread(target=writer, args=(nfa,)),
            threading.Thread(target=writer, args=(dfa,)),
            threading.Thread(target=reader),
            threading.Thread(target=reader),
        ]
        for t in threads:
            t.start()
        stop_timer = threading.Timer(0.5, stop.set)
        stop_timer.start()
        for t in threads:
            t.join()
        stop_timer.cancel()
        assert not errors
