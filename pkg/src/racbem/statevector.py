"""Dense ideal statevector simulation.

States are complex vectors of length 2**n with qubit 0 as the most
significant bit of the state index.  Gate application reshapes the
amplitude array to ``(2,)*n`` and contracts the gate tensor against the
target axes, so no full-matrix product is ever formed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .gates import Gate, QuantumCircuit, gate_unitary

UNITARY_QUBIT_CAP = 12

NORM_TOL = 1e-10


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray
    unnormalized: bool = False

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.n_qubits,):
            raise ValueError("amplitude vector has wrong length")
        if not self.unnormalized:
            nrm = np.linalg.norm(self.amplitudes)
            if abs(nrm - 1.0) > NORM_TOL:
                raise ValueError(f"state norm {nrm} not within {NORM_TOL} of 1")

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def basis(cls, n_qubits: int, index: int) -> "StateVector":
        amps = np.zeros(2**n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls(n_qubits, amps)


def _apply_gate_tensor(g: Gate, arr: np.ndarray, n_qubits: int) -> np.ndarray:
    """Apply a gate to an array of shape (2,)*n_qubits + rest."""
    u = gate_unitary(g)
    axes = g.qubits
    if len(axes) == 1:
        out = np.tensordot(u, arr, axes=([1], [axes[0]]))
        return np.moveaxis(out, 0, axes[0])
    # two-qubit gate: 4x4 -> (2,2,2,2) with (c_out, t_out, c_in, t_in)
    u4 = u.reshape(2, 2, 2, 2)
    out = np.tensordot(u4, arr, axes=([2, 3], list(axes)))
    return np.moveaxis(out, [0, 1], list(axes))


def apply_gate(g: Gate, s: StateVector) -> StateVector:
    arr = s.amplitudes.reshape((2,) * s.n_qubits)
    arr = _apply_gate_tensor(g, arr, s.n_qubits)
    return StateVector(s.n_qubits, arr.reshape(-1), s.unnormalized)


def apply(c: QuantumCircuit, s: StateVector) -> StateVector:
    """Return U_c |s>."""
    if c.n_qubits != s.n_qubits:
        raise ValueError("circuit/state qubit-count mismatch")
    arr = s.amplitudes.reshape((2,) * s.n_qubits)
    for g in c.gates():
        arr = _apply_gate_tensor(g, arr, s.n_qubits)
    return StateVector(s.n_qubits, arr.reshape(-1), s.unnormalized)


def circuit_unitary(c: QuantumCircuit, cap: int = UNITARY_QUBIT_CAP) -> np.ndarray:
    """Dense 2^q x 2^q unitary of the circuit (column j = U|j>)."""
    q = c.n_qubits
    if q > cap:
        raise ValueError(f"{q} qubits exceeds unitary cap {cap}")
    dim = 2**q
    arr = np.eye(dim, dtype=complex).reshape((2,) * q + (dim,))
    for g in c.gates():
        arr = _apply_gate_tensor(g, arr, q)
    return arr.reshape(dim, dim)


def success_probability_exact(
    c: QuantumCircuit, m_ancilla: int, input_state: StateVector
) -> float:
    """Probability of reading |0^m> on the m lowest-indexed (ancilla) qubits."""
    out = apply(c, input_state)
    keep = 2 ** (c.n_qubits - m_ancilla)
    return float(np.sum(np.abs(out.amplitudes[:keep]) ** 2))


def postselect_collapse(
    s: StateVector, ancillas: list[int]
) -> tuple[StateVector, float]:
    """Project onto ancillas = |0...0>, renormalize, drop the ancilla qubits.

    Raises on degenerate post-selection (probability < 1e-14)."""
    arr = s.amplitudes.reshape((2,) * s.n_qubits)
    idx = tuple(0 if q in ancillas else slice(None) for q in range(s.n_qubits))
    sub = arr[idx].reshape(-1)
    prob = float(np.sum(np.abs(sub) ** 2))
    if prob < 1e-14:
        raise ValueError("degenerate post-selection: probability below 1e-14")
    rest = s.n_qubits - len(ancillas)
    return StateVector(rest, sub / np.sqrt(prob)), prob


@dataclass
class CountsHistogram:
    """Measurement counts keyed by bitstring (qubit 0 written first)."""

    counts: dict[str, int]
    shots: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to shots")

    def to_json(self) -> str:
        return json.dumps(dict(sorted(self.counts.items())))

    @classmethod
    def from_json(cls, text: str) -> "CountsHistogram":
        counts = {k: int(v) for k, v in json.loads(text).items()}
        return cls(counts, sum(counts.values()))


def marginal_probabilities(s: StateVector, measured: list[int]) -> np.ndarray:
    """Exact outcome distribution on the measured qubits, in bitstring order."""
    if not measured:
        raise ValueError("empty measured qubit list")
    probs = np.abs(s.amplitudes.reshape((2,) * s.n_qubits)) ** 2
    drop = tuple(q for q in range(s.n_qubits) if q not in measured)
    marg = probs.sum(axis=drop) if drop else probs
    # reorder axes to the order the qubits are listed in `measured`
    order = np.argsort(np.argsort(measured)) if measured != sorted(measured) else None
    if order is not None:
        marg = np.moveaxis(marg, range(len(measured)), order)
    return marg.reshape(-1)


def sample_from_probs(
    probs: np.ndarray, n_bits: int, shots: int, rng: np.random.Generator
) -> CountsHistogram:
    draws = rng.multinomial(shots, probs / probs.sum())
    counts = {
        format(i, f"0{n_bits}b"): int(k) for i, k in enumerate(draws) if k > 0
    }
    return CountsHistogram(counts, shots)


def sample_counts(
    c: QuantumCircuit,
    shots: int,
    measured: list[int],
    rng: np.random.Generator,
    input_state: StateVector | None = None,
) -> CountsHistogram:
    """Sample measurement outcomes from the exact Born distribution."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if input_state is None:
        input_state = StateVector.zero(c.n_qubits)
    out = apply(c, input_state)
    probs = marginal_probabilities(out, measured)
    return sample_from_probs(probs, len(measured), shots, rng)
