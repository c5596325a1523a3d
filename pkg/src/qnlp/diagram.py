"""String diagrams: word states wired by cups, and the cup-removal rewrite.

A sentence diagram has one state box per word, one wire per simple type
(numbered by position in the concatenated type sequence), one cup per
contraction pair of the reduction witness, and a single open sentence wire.

``remove_cups`` shrinks qubit requirements by bending: when one endpoint of
a cup is the only non-consumed wire of a closed sub-part (a state box whose
other wires are all consumed by previously bent effects), the cup is deleted
and that sub-part is replayed, transposed, as an effect on the opposite
endpoint.  Each step is logged in ``bent``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping, Sequence

from .pregroup import Atom, PregroupType, ReductionWitness, S, SimpleType

STATE = "state"
EFFECT = "effect"


class DiagramError(ValueError):
    """Raised for structurally inconsistent diagrams."""


@dataclass(frozen=True)
class WordBox:
    word: str
    ptype: PregroupType
    kind: str = STATE


@dataclass(frozen=True)
class Wire:
    stype: SimpleType
    box: int
    port: int


@dataclass(frozen=True)
class BendStep:
    """One application of the bending rule.

    ``box`` was folded into an effect, ``cup`` was removed, and the effect
    now consumes wire ``onto`` (the cup's other endpoint).  ``absorbed``
    lists the indices, into the diagram's ``bent`` log, of earlier effects
    that sat on the box's remaining ports and were swallowed by this step.
    """

    box: int
    cup: tuple[int, int]
    onto: int
    folded_port: int
    absorbed: tuple[int, ...]


@dataclass(frozen=True)
class StringDiagram:
    boxes: tuple[WordBox, ...]
    wires: tuple[Wire, ...]
    cups: tuple[tuple[int, int], ...]
    open_wires: tuple[int, ...]
    bent: tuple[BendStep, ...] = ()

    def box_wires(self, box: int) -> list[int]:
        return [w for w, wire in enumerate(self.wires) if wire.box == box]

    def top_level_bends(self) -> list[int]:
        absorbed = {i for step in self.bent for i in step.absorbed}
        return [i for i in range(len(self.bent)) if i not in absorbed]


@dataclass(frozen=True)
class ResourceCount:
    qubits_total: int
    qubits_postselected: int
    qubits_measured: int


def build_diagram(
    typed_sentence: Sequence[tuple[str, PregroupType]], witness: ReductionWitness
) -> StringDiagram:
    """Assemble the diagram for a typed sentence and its reduction witness."""
    types: list[SimpleType] = []
    boxes: list[WordBox] = []
    wires: list[Wire] = []
    for b, (word, ptype) in enumerate(typed_sentence):
        boxes.append(WordBox(word, tuple(ptype)))
        for port, stype in enumerate(ptype):
            wires.append(Wire(stype, b, port))
            types.append(stype)
    try:
        witness.validate(types)
    except ValueError as exc:
        raise DiagramError(f"witness does not fit the sentence types: {exc}") from exc
    if not witness.grammatical:
        raise DiagramError("cannot build a sentence diagram from a non-grammatical witness")
    return StringDiagram(
        boxes=tuple(boxes),
        wires=tuple(wires),
        cups=tuple(sorted(witness.pairs)),
        open_wires=tuple(witness.residual),
        bent=(),
    )


def _consumer_map(d: StringDiagram) -> dict[int, tuple[str, int]]:
    """wire -> ("cup", cup index) | ("bend", step index); open wires absent."""
    consumer: dict[int, tuple[str, int]] = {}
    for c, (a, b) in enumerate(d.cups):
        consumer[a] = ("cup", c)
        consumer[b] = ("cup", c)
    for s, step in enumerate(d.bent):
        consumer[step.onto] = ("bend", s)
        # the folded endpoint no longer exists as an output
        consumer[step.cup[0] if step.cup[1] == step.onto else step.cup[1]] = ("bend", s)
    return consumer


def remove_cups(d: StringDiagram) -> StringDiagram:
    """Apply the bending rule until no cup is removable, rightmost cup first.

    Cups whose endpoints close no sub-part are left in place.  Idempotent:
    a second application returns the diagram unchanged.
    """
    kinds = [box.kind for box in d.boxes]
    cups = list(d.cups)
    bent = list(d.bent)
    consumer = _consumer_map(d)

    def bend_consuming(w: int) -> int | None:
        got = consumer.get(w)
        return got[1] if got is not None and got[0] == "bend" else None

    while True:
        fold = None
        for cup in sorted(cups, key=lambda c: (max(c), min(c)), reverse=True):
            for endpoint, other in ((max(cup), min(cup)), (min(cup), max(cup))):
                b = d.wires[endpoint].box
                if kinds[b] != STATE or d.wires[other].box == b:
                    continue
                siblings = [w for w in d.box_wires(b) if w != endpoint]
                absorbed = [bend_consuming(w) for w in siblings]
                if all(s is not None for s in absorbed):
                    fold = (cup, endpoint, other, b, tuple(absorbed))
                    break
            if fold:
                break
        if fold is None:
            break
        cup, endpoint, other, b, absorbed = fold
        step = BendStep(
            box=b,
            cup=cup,
            onto=other,
            folded_port=d.wires[endpoint].port,
            absorbed=absorbed,
        )
        kinds[b] = EFFECT
        cups.remove(cup)
        consumer[other] = ("bend", len(bent))
        consumer[endpoint] = ("bend", len(bent))
        bent.append(step)

    boxes = tuple(replace(box, kind=kind) for box, kind in zip(d.boxes, kinds))
    open_wires = tuple(
        w
        for w in range(len(d.wires))
        if w not in consumer and boxes[d.wires[w].box].kind == STATE
    )
    return StringDiagram(boxes, d.wires, tuple(sorted(cups)), open_wires, tuple(bent))


def bend_fresh_qubits(
    d: StringDiagram, step: BendStep, width: Mapping[Atom, int]
) -> int:
    """Fresh qubits a bent effect introduces: one block per absorbed child,
    plus whatever those children introduce in turn."""
    total = 0
    for child_index in step.absorbed:
        child = d.bent[child_index]
        total += width[d.wires[child.onto].stype.base]
        total += bend_fresh_qubits(d, child, width)
    return total


def count_resources(
    d: StringDiagram, qubits_per_type: Mapping[Atom, int] | None = None
) -> ResourceCount:
    """Qubit accounting for the compiled form of a diagram."""
    width = dict(qubits_per_type or {Atom.N: 1, Atom.S: 1})

    def wire_width(w: int) -> int:
        return width[d.wires[w].stype.base]

    state_qubits = sum(
        wire_width(w)
        for w, wire in enumerate(d.wires)
        if d.boxes[wire.box].kind == STATE
    )
    top = [d.bent[i] for i in d.top_level_bends()]
    fresh = sum(bend_fresh_qubits(d, step, width) for step in top)
    effect_widths = sum(
        wire_width(step.onto) + bend_fresh_qubits(d, step, width) for step in top
    )
    postselected = sum(wire_width(a) + wire_width(b) for a, b in d.cups) + effect_widths
    measured = sum(wire_width(w) for w in d.open_wires)
    return ResourceCount(state_qubits + fresh, postselected, measured)


def render(d: StringDiagram, format: str = "text") -> str:
    """Deterministic text or DOT rendering of a diagram."""
    if format == "text":
        return _render_text(d)
    if format == "dot":
        return _render_dot(d)
    raise ValueError(f"unknown render format {format!r}")


def _render_text(d: StringDiagram) -> str:
    lines = []
    for b, box in enumerate(d.boxes):
        types = " ".join(str(t) for t in box.ptype)
        lines.append(f"[{box.kind}] {box.word}: {types}")
    if d.cups:
        lines.append("cups: " + " ".join(f"{a}-{b}" for a, b in d.cups))
    if d.open_wires:
        lines.append(
            "open: " + " ".join(f"{w}:{d.wires[w].stype}" for w in d.open_wires)
        )
    for step in d.bent:
        lines.append(
            f"bent: {d.boxes[step.box].word} onto wire {step.onto}"
            f" (cup {step.cup[0]}-{step.cup[1]})"
        )
    return "\n".join(lines)


def _render_dot(d: StringDiagram) -> str:
    lines = ["graph diagram {"]
    for b, box in enumerate(d.boxes):
        types = " ".join(str(t) for t in box.ptype)
        shape = "triangle" if box.kind == STATE else "invtriangle"
        lines.append(f'  b{b} [shape={shape}, label="{box.word} : {types}"];')
    for a, b in d.cups:
        lines.append(
            f'  b{d.wires[a].box} -- b{d.wires[b].box}'
            f' [label="cup {d.wires[a].stype}~{d.wires[b].stype}"];'
        )
    for w in d.open_wires:
        lines.append("  out [shape=point];")
        lines.append(f'  b{d.wires[w].box} -- out [label="{d.wires[w].stype}"];')
    lines.append("}")
    return "\n".join(lines)
