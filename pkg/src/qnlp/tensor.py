"""Classical pipeline: words as real tensors over 2-dimensional wires.

Each word carries one rank per wire of its type; a cup contracts its two
incident indices; the sentence meaning is the vector left on the open
sentence wire.  Readout is a softmax over the two components, and the
cross-entropy gradient is computed analytically by re-contracting the
network against each word in turn.
"""
from __future__ import annotations

from typing import Mapping

import numpy as np

from .diagram import StringDiagram
from .pregroup import Lexicon

WIRE_DIM = 2

TensorStore = dict[str, np.ndarray]


class TensorError(ValueError):
    """Raised for missing or mis-shaped word tensors."""


def word_shape(wire_count: int) -> tuple[int, ...]:
    return (WIRE_DIM,) * wire_count


def init_store(lexicon: Lexicon, seed: int, low: float = -0.5, high: float = 0.5) -> TensorStore:
    """Uniformly initialized tensors for every lexicon word, in word order."""
    rng = np.random.default_rng(seed)
    store: TensorStore = {}
    for word in sorted(lexicon.entries):
        shape = word_shape(len(lexicon.entries[word].ptype))
        store[word] = rng.uniform(low, high, size=shape)
    return store


def _operands(d: StringDiagram, store: Mapping[str, np.ndarray]):
    """einsum operands and subscripts: one label per wire, cups share labels."""
    if d.bent:
        raise TensorError("the classical pipeline contracts un-rewritten diagrams")
    label = list(range(len(d.wires)))
    for a, b in d.cups:
        label[b] = label[a]
    args = []
    box_wires: list[list[int]] = [[] for _ in d.boxes]
    for w, wire in enumerate(d.wires):
        box_wires[wire.box].append(w)
    for b, box in enumerate(d.boxes):
        if box.word not in store:
            raise TensorError(f"no tensor for word {box.word!r}")
        tensor = store[box.word]
        if tensor.shape != word_shape(len(box_wires[b])):
            raise TensorError(
                f"tensor for {box.word!r} has shape {tensor.shape},"
                f" expected {word_shape(len(box_wires[b]))}"
            )
        args.append((tensor, [label[w] for w in box_wires[b]]))
    out = [label[w] for w in d.open_wires]
    return args, out


def evaluate(
    d: StringDiagram, store: Mapping[str, np.ndarray], optimize: bool = False
) -> np.ndarray:
    """Contract the diagram's tensor network down to the open-wire vector."""
    args, out = _operands(d, store)
    interleaved: list = []
    for tensor, sub in args:
        interleaved.extend((tensor, sub))
    interleaved.append(out)
    return np.einsum(*interleaved, optimize=optimize)


def predict_classical(v: np.ndarray) -> tuple[float, float]:
    """Softmax readout over the two sentence-vector components."""
    shifted = np.asarray(v, dtype=float) - np.max(v)
    e = np.exp(shifted)
    p = e / e.sum()
    return float(p[0]), float(p[1])


def gradient(
    d: StringDiagram, store: Mapping[str, np.ndarray], label: int
) -> dict[str, np.ndarray]:
    """Exact gradient of -log softmax(evaluate(d))[label] per word tensor.

    Words not occurring in the sentence get zero cotensors; a word occurring
    twice accumulates both occurrence gradients.
    """
    args, out = _operands(d, store)
    v = evaluate(d, store)
    p = np.array(predict_classical(v))
    cot = p.copy()
    cot[label] -= 1.0  # d(-log p_label)/dv for softmax cross-entropy
    grads = {word: np.zeros_like(tensor) for word, tensor in store.items()}
    words = [box.word for box in d.boxes]
    for i, (_, sub_i) in enumerate(args):
        interleaved: list = []
        for j, (tensor, sub) in enumerate(args):
            if j == i:
                continue
            interleaved.extend((tensor, sub))
        interleaved.extend((cot, out))
        interleaved.append(sub_i)
        grads[words[i]] += np.einsum(*interleaved)
    return grads


def save_store(store: TensorStore, path) -> None:
    """Checkpoint format: a word line, then its entries row-major on one line."""
    with open(path, "w", encoding="utf-8") as fh:
        for word in sorted(store):
            fh.write(word + "\n")
            fh.write(" ".join(repr(float(x)) for x in store[word].reshape(-1)) + "\n")


def load_store(path, lexicon: Lexicon | None = None) -> TensorStore:
    store: TensorStore = {}
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    for word_line, entry_line in zip(lines[0::2], lines[1::2]):
        word = word_line.strip()
        flat = np.array([float(x) for x in entry_line.split()])
        rank = int(round(np.log2(flat.size)))
        if WIRE_DIM**rank != flat.size:
            raise TensorError(f"entry count {flat.size} for {word!r} is not a power of 2")
        store[word] = flat.reshape(word_shape(rank))
    if lexicon is not None:
        for word in lexicon.entries:
            if word not in store:
                raise TensorError(f"checkpoint is missing word {word!r}")
            expected = word_shape(len(lexicon.entries[word].ptype))
            if store[word].shape != expected:
                raise TensorError(f"checkpoint shape mismatch for {word!r}")
    return store
