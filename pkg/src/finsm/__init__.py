"""finsm: build, simulate, validate and export finite state machines.

The public surface re-exported here covers the machine model, the language
algorithms, simulation sessions, TikZ export and JSON persistence.  The
HTTP service lives in :mod:`finsm.service` and the command line front end
in :mod:`finsm.cli`.
"""

from finsm.analysis import (
    EpsilonOnTapeError,
    EquivalenceResult,
    MachineKind,
    RunResult,
    ValidationCode,
    ValidationError,
    classify,
    epsilon_closure,
    equivalent_up_to,
    format_definition,
    infer_alphabet,
    run_tape,
    step,
    subset_construction,
    validate_as_dfa,
)
from finsm.machine import (
    EPSILON,
    DuplicateNameError,
    EmptyLabelError,
    FinsmError,
    Machine,
    MachineInvariantError,
    MixedEpsilonLabelError,
    Transition,
    UnknownStateError,
    new_machine,
)
from finsm.persistence import (
    InvalidIdError,
    InvariantError,
    MachineStore,
    NotFoundError,
    ParseError,
    SchemaError,
    StoreIOError,
    VersionError,
    deserialize,
    serialize,
)
from finsm.simulation import (
    KEY_SEQUENCE,
    AlphabetTooLargeError,
    DfaValidationFailure,
    SimulationSession,
    Tape,
    TapeStatus,
    UnknownTapeError,
    key_mapping,
    start_session,
)
from finsm.tikz import ExportOptions, TikzDocument, export_tikz, hash_node_name, snap_to_grid

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "EPSILON",
    "KEY_SEQUENCE",
    "FinsmError",
    "MachineInvariantError",
    "UnknownStateError",
    "DuplicateNameError",
    "EmptyLabelError",
    "MixedEpsilonLabelError",
    "EpsilonOnTapeError",
    "UnknownTapeError",
    "AlphabetTooLargeError",
    "DfaValidationFailure",
    "ParseError",
    "SchemaError",
    "InvariantError",
    "VersionError",
    "NotFoundError",
    "InvalidIdError",
    "StoreIOError",
    "Machine",
    "Transition",
    "MachineKind",
    "ValidationCode",
    "ValidationError",
    "RunResult",
    "EquivalenceResult",
    "Tape",
    "TapeStatus",
    "SimulationSession",
    "ExportOptions",
    "TikzDocument",
    "MachineStore",
    "new_machine",
    "infer_alphabet",
    "epsilon_closure",
    "step",
    "run_tape",
    "validate_as_dfa",
    "classify",
    "subset_construction",
    "equivalent_up_to",
    "format_definition",
    "start_session",
    "key_mapping",
    "export_tikz",
    "hash_node_name",
    "snap_to_grid",
    "serialize",
    "deserialize",
]
