"""Dense statevector evaluation of bound circuits, exact and noisy.

Qubit ordering is little-endian throughout: qubit 0 is the least
significant bit of a basis index.  Gate conventions:

    RZ(t)  = diag(exp(-it/2), exp(+it/2))
    RX(t)  = cos(t/2) I - i sin(t/2) X
    CRZ(t) = RZ(t) on the target when the control is 1
    CX     = target flipped when the control is 1

The exact path projects onto the post-selected outcomes and reports raw
and renormalized probabilities for the measured qubit.  The noisy path
samples Monte-Carlo trajectories: with some probability per gate a uniform
random non-identity Pauli is inserted on the gate's qubits, and classical
readout bits flip independently; shots whose post-selected bits read 0 are
accepted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .circuit import Circuit, Gate, ParameterRef, missing_parameters
from .circuit import BindingError

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_CX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


class DegeneratePostselection(ValueError):
    """Raised only on request; the default contract returns a degenerate pair."""


@dataclass
class StateVector:
    """A dense state on ``n_qubits`` qubits, little-endian amplitude order."""

    n_qubits: int
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def zero_state(n_qubits: int) -> StateVector:
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _rz(theta: float) -> np.ndarray:
    return np.array(
        [[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex
    )


def _crz(theta: float) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    u[2, 2] = np.exp(-0.5j * theta)
    u[3, 3] = np.exp(0.5j * theta)
    return u


def gate_matrix(g: Gate) -> np.ndarray:
    """The unitary of a bound gate (2x2, or 4x4 over (control, target))."""
    if isinstance(g.angle, ParameterRef):
        raise BindingError(f"gate {g.kind} has unbound parameter {g.angle.name!r}")
    if g.kind == "H":
        return _H
    if g.kind == "RX":
        return _rx(g.angle)
    if g.kind == "RZ":
        return _rz(g.angle)
    if g.kind == "CX":
        return _CX
    if g.kind == "CRZ":
        return _crz(g.angle)
    raise ValueError(f"unknown gate kind {g.kind!r}")


def _apply(amps: np.ndarray, g: Gate, n: int, batch: bool = False) -> np.ndarray:
    """Apply a bound gate to amplitudes of shape (2**n,) or (shots, 2**n)."""
    u = gate_matrix(g)
    lead = amps.shape[:1] if batch else ()
    a = amps.reshape(*lead, *([2] * n))
    offset = 1 if batch else 0
    if len(g.qubits) == 1:
        axis = offset + (n - 1 - g.qubits[0])
        a = np.tensordot(a, u, axes=([axis], [1]))
        a = np.moveaxis(a, -1, axis)
    else:
        control, target = g.qubits
        axes = (offset + (n - 1 - control), offset + (n - 1 - target))
        a = np.moveaxis(a, axes, (offset, offset + 1))
        shape = a.shape
        a = a.reshape(*lead, 4, -1)
        a = np.einsum("ij,...jk->...ik", u, a)
        a = np.moveaxis(a.reshape(shape), (offset, offset + 1), axes)
    return np.ascontiguousarray(a).reshape(*lead, 2**n)


def apply_gate(psi: StateVector, g: Gate) -> StateVector:
    """Pure application of one bound gate."""
    return StateVector(psi.n_qubits, _apply(psi.amplitudes, g, psi.n_qubits))


@dataclass(frozen=True)
class OutcomePair:
    """Raw and renormalized probabilities of the measured qubit.

    ``p0_raw + p1_raw`` is the post-selection mass.  When the mass is zero
    the pair is degenerate: ``p0 = p1 = 0`` and predictions count as ties.
    """

    p0_raw: float
    p1_raw: float
    p0: float
    p1: float
    postselect_mass: float

    @classmethod
    def from_raw(cls, p0_raw: float, p1_raw: float) -> "OutcomePair":
        mass = p0_raw + p1_raw
        if mass > 0.0:
            return cls(p0_raw, p1_raw, p0_raw / mass, p1_raw / mass, mass)
        return cls(p0_raw, p1_raw, 0.0, 0.0, mass)

    @property
    def degenerate(self) -> bool:
        return self.postselect_mass == 0.0


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing-style trajectory noise plus readout flips.

    ``p1``/``p2`` are per-gate probabilities of inserting a uniform random
    non-identity Pauli on a 1-/2-qubit gate's qubits; ``readout_flip`` is
    the per-bit classical flip probability at measurement.
    """

    p1: float = 0.001
    p2: float = 0.01
    readout_flip: float = 0.02
    shots: int = 1024
    seed: int = 0

    def __post_init__(self) -> None:
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ValueError("gate noise probabilities must lie in [0, 1]")
        if not 0.0 <= self.readout_flip <= 0.5:
            raise ValueError("readout flip probability must lie in [0, 0.5]")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")


def _resolve(angle, values: Mapping[str, float]):
    if isinstance(angle, ParameterRef):
        return angle.sign * values[angle.name]
    return angle


def _bound_gates(c: Circuit, values: Mapping[str, float]) -> list[Gate]:
    missing = missing_parameters(c, values)
    if missing:
        raise BindingError("missing parameter values: " + ", ".join(missing))
    out = []
    for g in c.gates:
        if g.angle is None:
            out.append(g)
        else:
            out.append(Gate(g.kind, g.qubits, _resolve(g.angle, values)))
    return out


def run_exact(c: Circuit, values: Mapping[str, float] | None = None) -> OutcomePair:
    """Evolve |0...0>, project onto the post-selected outcomes, and read out."""
    values = values or {}
    n = c.n_qubits
    amps = zero_state(n).amplitudes
    for g in _bound_gates(c, values):
        amps = _apply(amps, g, n)
    index = np.arange(2**n)
    keep = np.ones(2**n, dtype=bool)
    for q, outcome in c.postselect.items():
        keep &= ((index >> q) & 1) == outcome
    probs = np.abs(amps) ** 2
    probs[~keep] = 0.0
    measured_bit = (index >> c.measured) & 1
    p0_raw = float(probs[measured_bit == 0].sum())
    p1_raw = float(probs[measured_bit == 1].sum())
    return OutcomePair.from_raw(p0_raw, p1_raw)


def _apply_pauli_rows(amps: np.ndarray, rows: np.ndarray, code: int, q: int, n: int) -> None:
    """In-place Pauli (1=X, 2=Y, 3=Z) on qubit q of the selected shot rows."""
    sub = amps[rows].reshape((len(rows),) + (2,) * n)
    axis = 1 + (n - 1 - q)
    if code == 1:
        sub = np.flip(sub, axis=axis)
    elif code == 3:
        lower = [slice(None)] * (n + 1)
        lower[axis] = 1
        sub = sub.copy()
        sub[tuple(lower)] *= -1
    else:  # Y = i X Z
        lower = [slice(None)] * (n + 1)
        lower[axis] = 1
        sub = sub.copy()
        sub[tuple(lower)] *= -1
        sub = np.flip(sub, axis=axis) * 1j
    amps[rows] = sub.reshape(len(rows), -1)


def run_noisy(c: Circuit, values: Mapping[str, float], nm: NoiseModel) -> OutcomePair:
    """Monte-Carlo trajectory estimate of the post-selected outcome pair.

    Deterministic for a fixed ``nm.seed``; the raw probabilities are
    acceptance-weighted shot fractions.
    """
    rng = np.random.default_rng(nm.seed)
    n, shots = c.n_qubits, nm.shots
    amps = np.zeros((shots, 2**n), dtype=complex)
    amps[:, 0] = 1.0
    for g in _bound_gates(c, values):
        amps = _apply(amps, g, n, batch=True)
        p_err = nm.p1 if len(g.qubits) == 1 else nm.p2
        if p_err <= 0.0:
            continue
        hit = np.flatnonzero(rng.random(shots) < p_err)
        if hit.size == 0:
            continue
        if len(g.qubits) == 1:
            picks = rng.integers(1, 4, hit.size)
            for code in (1, 2, 3):
                rows = hit[picks == code]
                if rows.size:
                    _apply_pauli_rows(amps, rows, code, g.qubits[0], n)
        else:
            picks = rng.integers(1, 16, hit.size)
            for pick in np.unique(picks):
                rows = hit[picks == pick]
                code_a, code_b = divmod(int(pick), 4)
                if code_a:
                    _apply_pauli_rows(amps, rows, code_a, g.qubits[0], n)
                if code_b:
                    _apply_pauli_rows(amps, rows, code_b, g.qubits[1], n)

    probs = np.abs(amps) ** 2
    cum = np.cumsum(probs, axis=1)
    draws = rng.random(shots) * cum[:, -1]
    outcomes = (cum < draws[:, None]).sum(axis=1).clip(max=2**n - 1)
    bits = (outcomes[:, None] >> np.arange(n)) & 1
    if nm.readout_flip > 0.0:
        bits ^= rng.random((shots, n)) < nm.readout_flip
    accept = np.ones(shots, dtype=bool)
    for q, outcome in c.postselect.items():
        accept &= bits[:, q] == outcome
    measured = bits[:, c.measured]
    p0_raw = float(np.count_nonzero(accept & (measured == 0))) / shots
    p1_raw = float(np.count_nonzero(accept & (measured == 1))) / shots
    return OutcomePair.from_raw(p0_raw, p1_raw)
