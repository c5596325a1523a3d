"""Compilation of string diagrams into parameterized circuits.

Word states use the IQP recipe: a single-qubit word is three rotations
RX, RZ, RX; a k-qubit word is a Hadamard on every qubit followed, per
layer, by controlled-RZ rotations on adjacent pairs.  A cup becomes the
Bell effect CX, H with both qubits post-selected on 0.  A bent effect
replays its sub-part transposed: for the gate set used here every gate
matrix equals its own transpose, so transposition is reversal of the gate
order with angles kept.  Parameters are named ``word__k`` and shared by
every circuit mentioning the word.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .diagram import STATE, BendStep, StringDiagram
from .pregroup import Atom, S

GATE_KINDS = ("H", "RX", "RZ", "CRZ", "CX")
_ANGLED = {"RX", "RZ", "CRZ"}
_TWO_QUBIT = {"CRZ", "CX"}


class CompileError(ValueError):
    """Raised when a diagram cannot be compiled."""


class BindingError(ValueError):
    """Raised when parameter values are missing at bind time."""


@dataclass(frozen=True)
class ParameterRef:
    """A named angle; ``sign`` is flipped by the dagger transform."""

    name: str
    sign: int = 1


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | ParameterRef | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind in _TWO_QUBIT else 1
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} acts on {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind} qubits must be distinct: {self.qubits}")
        needs_angle = self.kind in _ANGLED
        if needs_angle and self.angle is None:
            raise ValueError(f"{self.kind} requires an angle")
        if not needs_angle and self.angle is not None:
            raise ValueError(f"{self.kind} carries no angle")


@dataclass(frozen=True)
class AnsatzConfig:
    qubits_per_n: int = 1
    qubits_per_s: int = 1
    iqp_layers: int = 1

    def __post_init__(self) -> None:
        if min(self.qubits_per_n, self.qubits_per_s, self.iqp_layers) < 1:
            raise ValueError("all ansatz counts must be >= 1")

    def width(self, atom: Atom) -> int:
        return self.qubits_per_n if atom == Atom.N else self.qubits_per_s


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]
    postselect: Mapping[int, int]
    measured: int

    def __post_init__(self) -> None:
        qubits = set(self.postselect) | {self.measured}
        if self.measured in self.postselect:
            raise ValueError("measured qubit cannot also be post-selected")
        if qubits != set(range(self.n_qubits)):
            raise ValueError("post-selected and measured qubits must cover the register")

    def parameter_refs(self) -> list[ParameterRef]:
        return [g.angle for g in self.gates if isinstance(g.angle, ParameterRef)]


def word_state_gates(
    word: str, qubits: Sequence[int], iqp_layers: int = 1
) -> list[Gate]:
    """The preparation gates of one word on its qubit block."""
    k = len(qubits)
    if k == 1:
        q = qubits[0]
        return [
            Gate("RX", (q,), ParameterRef(f"{word}__0")),
            Gate("RZ", (q,), ParameterRef(f"{word}__1")),
            Gate("RX", (q,), ParameterRef(f"{word}__2")),
        ]
    gates = [Gate("H", (q,)) for q in qubits]
    i = 0
    for _ in range(iqp_layers):
        for j in range(k - 1):
            gates.append(
                Gate("CRZ", (qubits[j], qubits[j + 1]), ParameterRef(f"{word}__{i}"))
            )
            i += 1
    return gates


def word_parameter_count(wire_qubits: int, iqp_layers: int = 1) -> int:
    return 3 if wire_qubits == 1 else iqp_layers * (wire_qubits - 1)


def _negated(angle):
    if isinstance(angle, ParameterRef):
        return replace(angle, sign=-angle.sign)
    return -angle


def transpose_gates(gates: Iterable[Gate]) -> list[Gate]:
    """Matrix transpose of a gate sequence.

    Every supported gate matrix is symmetric, so transposing the product
    reduces to reversing the order.
    """
    return list(reversed(list(gates)))


def dagger_gates(gates: Iterable[Gate]) -> list[Gate]:
    """Adjoint of a gate sequence: reversed order, negated angles."""
    out = []
    for g in reversed(list(gates)):
        out.append(g if g.angle is None else replace(g, angle=_negated(g.angle)))
    return out


def compile_diagram(d: StringDiagram, cfg: AnsatzConfig = AnsatzConfig()) -> Circuit:
    """Compile a (possibly rewritten) sentence diagram to a circuit."""
    if len(d.open_wires) != 1 or d.wires[d.open_wires[0]].stype != S:
        raise CompileError(
            f"expected exactly one open sentence wire, got {len(d.open_wires)}"
        )
    if cfg.width(Atom.S) != 1:
        raise CompileError("the measured sentence wire must be one qubit wide")

    wire_qubits: dict[int, list[int]] = {}
    next_qubit = 0
    for w, wire in enumerate(d.wires):
        if d.boxes[wire.box].kind != STATE:
            continue
        width = cfg.width(wire.stype.base)
        wire_qubits[w] = list(range(next_qubit, next_qubit + width))
        next_qubit += width

    gates: list[Gate] = []
    postselect: dict[int, int] = {}

    def box_qubits(b: int) -> list[int]:
        return [q for w in d.box_wires(b) for q in wire_qubits[w]]

    for b, box in enumerate(d.boxes):
        if box.kind == STATE:
            gates.extend(word_state_gates(box.word, box_qubits(b), cfg.iqp_layers))

    for a, bwire in d.cups:
        for qa, qb in zip(wire_qubits[a], wire_qubits[bwire]):
            gates.append(Gate("CX", (qa, qb)))
            gates.append(Gate("H", (qa,)))
            postselect[qa] = 0
            postselect[qb] = 0

    def child_ports(step: BendStep) -> list[tuple[int, BendStep]]:
        children = [d.bent[i] for i in step.absorbed]
        return sorted(
            ((d.wires[c.onto].port, c) for c in children), key=lambda pc: pc[0]
        )

    def alloc(width: int) -> list[int]:
        nonlocal next_qubit
        block = list(range(next_qubit, next_qubit + width))
        next_qubit += width
        return block

    def emit_effect(step: BendStep, target: list[int]) -> None:
        # transpose of the step's closed sub-part, consuming ``target``
        box = d.boxes[step.box]
        port_map = {step.folded_port: target}
        fresh: list[int] = []
        pending: list[tuple[BendStep, list[int]]] = []
        for port, child in child_ports(step):
            block = alloc(cfg.width(box.ptype[port].base))
            port_map[port] = block
            fresh.extend(block)
            pending.append((child, block))
        for child, block in pending:
            emit_closed_state(child, block)
        qubits = [q for port in range(len(box.ptype)) for q in port_map[port]]
        gates.extend(transpose_gates(word_state_gates(box.word, qubits, cfg.iqp_layers)))
        for q in [*target, *fresh]:
            postselect[q] = 0

    def emit_closed_state(step: BendStep, target: list[int]) -> None:
        # the step's original closed sub-part, prepared as a state on ``target``
        box = d.boxes[step.box]
        port_map = {step.folded_port: target}
        pending: list[tuple[BendStep, list[int]]] = []
        for port, child in child_ports(step):
            block = alloc(cfg.width(box.ptype[port].base))
            port_map[port] = block
            pending.append((child, block))
        qubits = [q for port in range(len(box.ptype)) for q in port_map[port]]
        gates.extend(word_state_gates(box.word, qubits, cfg.iqp_layers))
        for child, block in pending:
            emit_effect(child, block)

    for i in d.top_level_bends():
        step = d.bent[i]
        emit_effect(step, wire_qubits[step.onto])

    measured = wire_qubits[d.open_wires[0]][0]
    return Circuit(next_qubit, tuple(gates), postselect, measured)


def parameter_names(
    diagrams: Iterable[StringDiagram], cfg: AnsatzConfig = AnsatzConfig()
) -> list[str]:
    """Sorted union of the parameter names of a collection of diagrams."""
    names: set[str] = set()
    for d in diagrams:
        for box in d.boxes:
            k = sum(cfg.width(t.base) for t in box.ptype)
            names.update(
                f"{box.word}__{i}" for i in range(word_parameter_count(k, cfg.iqp_layers))
            )
    return sorted(names)


def missing_parameters(c: Circuit, values: Mapping[str, float]) -> list[str]:
    return sorted({r.name for r in c.parameter_refs() if r.name not in values})


def bind(c: Circuit, values: Mapping[str, float]) -> Circuit:
    """Replace every parameter reference with ``sign * value``."""
    missing = missing_parameters(c, values)
    if missing:
        raise BindingError("missing parameter values: " + ", ".join(missing))
    bound = []
    for g in c.gates:
        if isinstance(g.angle, ParameterRef):
            g = replace(g, angle=g.angle.sign * values[g.angle.name])
        bound.append(g)
    return replace(c, gates=tuple(bound))


def circuit_text(c: Circuit) -> str:
    """Line-oriented serialization used for golden tests and inspection."""
    lines = [f"qubits {c.n_qubits}"]
    if c.postselect:
        lines.append(
            "postselect " + " ".join(f"{q}={c.postselect[q]}" for q in sorted(c.postselect))
        )
    lines.append(f"measure {c.measured}")
    for g in c.gates:
        parts = [g.kind, *map(str, g.qubits)]
        if isinstance(g.angle, ParameterRef):
            parts.append(("-" if g.angle.sign < 0 else "") + g.angle.name)
        elif g.angle is not None:
            parts.append(repr(g.angle))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
