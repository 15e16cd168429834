"""TikZ code generation.

The emitted picture is self-contained: it only needs ``\\usepackage{tikz}``
(loop paths and bends come from core TikZ).  Node identifiers are opaque
hashes regenerated per export unless a fixed nonce is supplied, so pasting
several exported pictures into one document cannot collide.
"""

from __future__ import annotations

import math
import uuid
from dataclasses import dataclass, field

from finsm.machine import Machine

__all__ = [
    "ExportOptions",
    "TikzDocument",
    "hash_node_name",
    "snap_to_grid",
    "export_tikz",
]

# Degrees of bend per unit of curve offset, clamped to +/-80.
BEND_DEGREES_PER_UNIT = 30.0
_MAX_BEND = 80.0


@dataclass(frozen=True)
class ExportOptions:
    scale: float = 1.0
    grid_snap: float = 0.0
    nonce: str | None = None

    def __post_init__(self):
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.grid_snap < 0:
            raise ValueError("grid_snap must be non-negative")


@dataclass(frozen=True)
class TikzDocument:
    source: str
    node_names: dict[int, str] = field(default_factory=dict)
    scale: float = 1.0


def _fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def hash_node_name(state_id: int, nonce: str, attempt: int = 0) -> str:
    """Eight lowercase letters derived from (nonce, state id).

    ``attempt`` > 0 rehashes with the counter mixed in and appended, for
    resolving the (astronomically rare) collisions within one export.
    """
    seed = f"{nonce}:{state_id}" if attempt == 0 else f"{nonce}:{state_id}:{attempt}"
    h = _fnv1a64(seed.encode("utf-8"))
    letters = []
    for _ in range(8):
        letters.append(chr(ord("a") + h % 26))
        h //= 26
    name = "".join(letters)
    return name if attempt == 0 else f"{name}{attempt}"


def snap_to_grid(pos: tuple[float, float], grid_size: float) -> tuple[float, float]:
    """Round each coordinate to the nearest grid multiple, halves away from zero."""
    if grid_size <= 0:
        raise ValueError("grid_size must be positive")

    def snap(v: float) -> float:
        return math.copysign(math.floor(abs(v) / grid_size + 0.5), v) * grid_size

    return (snap(pos[0]), snap(pos[1]))


def _fmt(value: float) -> str:
    text = f"{value:.3f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _bend(curve: float) -> float:
    return max(-_MAX_BEND, min(_MAX_BEND, curve * BEND_DEGREES_PER_UNIT))


def export_tikz(machine: Machine, options: ExportOptions | None = None) -> TikzDocument:
    """Emit one tikzpicture: a node per state, an edge per transition.

    Start states get an unlabelled incoming arrow, final states a double
    circle.  Emission order is state id, then transition id, so a fixed
    nonce makes the output byte-stable.
    """
    opts = options or ExportOptions()
    nonce = opts.nonce if opts.nonce is not None else uuid.uuid4().hex

    node_names: dict[int, str] = {}
    used: set[str] = set()
    for sid in sorted(machine.states):
        attempt = 0
        name = hash_node_name(sid, nonce)
        while name in used:
            attempt += 1
            name = hash_node_name(sid, nonce, attempt)
        used.add(name)
        node_names[sid] = name

    def placed(sid: int) -> tuple[float, float]:
        x, y = machine.positions[sid]
        if opts.grid_snap > 0:
            x, y = snap_to_grid((x, y), opts.grid_snap)
        return (x * opts.scale, y * opts.scale)

    lines = ["\\begin{tikzpicture}[>=stealth, shorten >=1pt, semithick]"]
    for sid in sorted(machine.states):
        x, y = placed(sid)
        style = "draw, circle, minimum size=7mm, inner sep=1pt"
        if sid in machine.final:
            style += ", double"
        label = machine.state_names[sid]
        lines.append(
            f"  \\node [{style}] ({node_names[sid]}) "
            f"at ({_fmt(x)}, {_fmt(y)}) {{${label}$}};"
        )
    for sid in sorted(machine.start):
        x, y = placed(sid)
        lines.append(
            f"  \\draw [->] ({_fmt(x - 1.2)}, {_fmt(y)}) -- ({node_names[sid]});"
        )
    for tid in sorted(machine.transitions):
        t = machine.transitions[tid]
        label = ",".join(sorted(t.label))
        if t.source == t.target:
            side = "below" if t.curve < 0 else "above"
            opt = f" [loop {side}]"
        elif t.curve > 0:
            opt = f" [bend left={_fmt(_bend(t.curve))}]"
        elif t.curve < 0:
            opt = f" [bend right={_fmt(-_bend(t.curve))}]"
        else:
            opt = ""
        lines.append(
            f"  \\path [->] ({node_names[t.source]}) edge{opt} "
            f"node [auto] {{${label}$}} ({node_names[t.target]});"
        )
    lines.append("\\end{tikzpicture}")
    return TikzDocument(
        source="\n".join(lines) + "\n", node_names=node_names, scale=opts.scale
    )
