"""Stochastic Pauli noise with readout confusion, tunable by one knob.

Each gate kind/operand pair carries a discrete distribution over error
operations (identity or Pauli insertions after the ideal gate); each
measured qubit carries a 2x2 readout confusion matrix.  A parameter
sigma in [0, 1] interpolates between noiseless (0) and the full model
(1) by scaling every non-correct probability.  Sampling runs batched
trajectories: exact for Pauli channels, no density matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .gates import Gate, QuantumCircuit, ONE_QUBIT_KINDS
from .statevector import CountsHistogram, StateVector, _apply_gate_tensor

PAULI_1Q = ("i", "x", "y", "z")

DIST_TOL = 1e-12

SCHEMA = 1


def _check_dist(dist: dict[str, float], n_ops: int) -> dict[str, float]:
    labels = PAULI_1Q if n_ops == 1 else tuple(
        a + b for a in PAULI_1Q for b in PAULI_1Q
    )
    out = {}
    for k, v in dist.items():
        if k not in labels:
            raise ValueError(f"unknown error op {k!r}")
        if v < 0:
            raise ValueError("negative probability")
        out[k] = float(v)
    total = sum(out.values())
    if abs(total - 1.0) > DIST_TOL:
        raise ValueError(f"distribution sums to {total}, not 1")
    correct = out.get("i" * n_ops, 0.0)
    if any(v > correct + DIST_TOL for k, v in out.items() if k != "i" * n_ops):
        raise ValueError("correct-operation entry must be the largest")
    return out


@dataclass(frozen=True)
class NoiseModel:
    """Per-gate error distributions plus per-qubit readout confusion.

    gate_errors keys are (gate kind, operand tuple); readout maps qubit
    index to a 2x2 row-stochastic matrix (row = true bit, column = read
    bit).  Gates or qubits without an entry are noiseless."""

    gate_errors: dict[tuple[str, tuple[int, ...]], dict[str, float]] = field(
        default_factory=dict
    )
    readout: dict[int, tuple[tuple[float, float], tuple[float, float]]] = field(
        default_factory=dict
    )

    def __post_init__(self):
        checked = {}
        for (kind, qubits), dist in self.gate_errors.items():
            qubits = tuple(int(q) for q in qubits)
            checked[(kind, qubits)] = _check_dist(dist, len(qubits))
        object.__setattr__(self, "gate_errors", checked)
        ro = {}
        for q, rows in self.readout.items():
            rows = tuple(tuple(float(x) for x in r) for r in rows)
            for r in rows:
                if len(r) != 2 or any(x < 0 for x in r) or abs(sum(r) - 1) > DIST_TOL:
                    raise ValueError("readout rows must be length-2 distributions")
            ro[int(q)] = rows
        object.__setattr__(self, "readout", ro)

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema": SCHEMA,
                "gate_errors": [
                    {"kind": k, "qubits": list(q), "dist": d}
                    for (k, q), d in sorted(self.gate_errors.items())
                ],
                "readout": {str(q): [list(r) for r in rows] for q, rows in self.readout.items()},
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "NoiseModel":
        d = json.loads(text)
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {d.get('schema')!r}")
        ge = {
            (e["kind"], tuple(e["qubits"])): e["dist"] for e in d["gate_errors"]
        }
        ro = {int(q): tuple(tuple(r) for r in rows) for q, rows in d["readout"].items()}
        return cls(ge, ro)


def scale_dist(dist: dict[str, float], sigma: float, n_ops: int) -> dict[str, float]:
    ident = "i" * n_ops
    out = {}
    for k, v in dist.items():
        if k == ident:
            out[k] = 1.0 - sigma * (1.0 - v)
        else:
            out[k] = sigma * v
    if ident not in out:
        out[ident] = 1.0 - sigma
    return out


def scale(m: NoiseModel, sigma: float) -> NoiseModel:
    """Multiply every error probability by sigma (readout rows included)."""
    if not 0.0 <= sigma <= 1.0:
        raise ValueError("sigma must be in [0, 1]")
    ge = {
        key: scale_dist(dist, sigma, len(key[1]))
        for key, dist in m.gate_errors.items()
    }
    ro = {}
    for q, rows in m.readout.items():
        new_rows = []
        for b, row in enumerate(rows):
            correct = row[b]
            wrong = row[1 - b]
            r = [0.0, 0.0]
            r[b] = 1.0 - sigma * (1.0 - correct)
            r[1 - b] = sigma * wrong
            new_rows.append(tuple(r))
        ro[q] = tuple(new_rows)
    return NoiseModel(ge, ro)


def synth_model(
    coupling,
    base_1q_rate: float,
    base_2q_rate: float,
    readout_rate: float,
    rng: np.random.Generator,
) -> NoiseModel:
    """Depolarizing-style model sized from base rates with 20% jitter.

    One-qubit kinds share a per-qubit Pauli distribution; CNOT entries
    exist only on coupling edges; readout confusion is symmetric."""
    for r in (base_1q_rate, base_2q_rate, readout_rate):
        if not 0.0 <= r < 0.5:
            raise ValueError("rates must be in [0, 0.5)")
    ge = {}
    for q in range(coupling.n_qubits):
        e = base_1q_rate * (1.0 + 0.2 * rng.uniform(-1, 1))
        dist = {"i": 1.0 - e, "x": e / 3, "y": e / 3, "z": e / 3}
        for kind in sorted(ONE_QUBIT_KINDS):
            ge[(kind, (q,))] = dict(dist)
    labels2 = [a + b for a in PAULI_1Q for b in PAULI_1Q if a + b != "ii"]
    for c, t in sorted(coupling.edges):
        e = base_2q_rate * (1.0 + 0.2 * rng.uniform(-1, 1))
        dist = {"ii": 1.0 - e}
        dist.update({lab: e / 15 for lab in labels2})
        ge[("cnot", (c, t))] = dist
    ro = {
        q: ((1.0 - readout_rate, readout_rate), (readout_rate, 1.0 - readout_rate))
        for q in range(coupling.n_qubits)
    }
    return NoiseModel(ge, ro)


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_PAULI_MATS = {"x": _X, "y": _Y, "z": _Z}


def _apply_pauli_subset(arr: np.ndarray, mask: np.ndarray, pauli: str, qubit: int):
    """Apply a 1-qubit Pauli to the masked trajectories in place.

    arr has shape (n_shots,) + (2,)*n_qubits."""
    sub = arr[mask]
    u = _PAULI_MATS[pauli]
    moved = np.moveaxis(sub, qubit + 1, 1)
    out = np.einsum("ab,sb...->sa...", u, moved)
    arr[mask] = np.moveaxis(out, 1, qubit + 1)


def sample_noisy_counts(
    c: QuantumCircuit,
    model: NoiseModel,
    shots: int,
    measured: list[int],
    rng: np.random.Generator,
    input_state: StateVector | None = None,
) -> CountsHistogram:
    """Counts from batched noisy trajectories of the circuit.

    After each ideal gate an error op is drawn per trajectory from the
    gate's distribution and applied; measured bits are then flipped per
    their readout confusion rows."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    n = c.n_qubits
    if input_state is None:
        input_state = StateVector.zero(n)
    arr = np.broadcast_to(
        input_state.amplitudes.reshape((2,) * n), (shots,) + (2,) * n
    ).copy()
    for g in c.gates():
        arr = _apply_batched_gate(g, arr, n)
        dist = model.gate_errors.get((g.kind, g.qubits))
        if dist is None:
            continue
        labels = sorted(dist)
        probs = np.array([dist[k] for k in labels])
        draws = rng.choice(len(labels), size=shots, p=probs / probs.sum())
        for idx, lab in enumerate(labels):
            if lab == "i" * len(g.qubits):
                continue
            mask = draws == idx
            if not mask.any():
                continue
            for p, q in zip(lab, g.qubits):
                if p != "i":
                    _apply_pauli_subset(arr, mask, p, q)

    # per-trajectory measurement of the requested qubits
    probs = np.abs(arr) ** 2
    drop = tuple(q + 1 for q in range(n) if q not in measured)
    marg = probs.sum(axis=drop) if drop else probs
    k = len(measured)
    order = np.argsort(np.argsort(measured))
    if not np.array_equal(order, np.arange(k)):
        marg = np.moveaxis(marg, range(1, k + 1), [1 + o for o in order])
    flat = marg.reshape(shots, -1)
    flat = flat / flat.sum(axis=1, keepdims=True)
    cdf = np.cumsum(flat, axis=1)
    u = rng.random(shots)
    outcomes = (u[:, None] > cdf).sum(axis=1)

    # readout confusion: flip each measured bit per its row
    bits = ((outcomes[:, None] >> np.arange(k - 1, -1, -1)) & 1).astype(np.int8)
    for pos, q in enumerate(measured):
        rows = model.readout.get(q)
        if rows is None:
            continue
        flip_prob = np.where(bits[:, pos] == 0, rows[0][1], rows[1][0])
        flips = rng.random(shots) < flip_prob
        bits[flips, pos] ^= 1
    strings = ["".join(str(b) for b in row) for row in bits]
    counts: dict[str, int] = {}
    for s in strings:
        counts[s] = counts.get(s, 0) + 1
    return CountsHistogram(counts, shots)


def _apply_batched_gate(g: Gate, arr: np.ndarray, n: int) -> np.ndarray:
    """Ideal gate on a batch: reuse the single-state tensor contraction
    with the shot axis folded into the trailing dimensions."""
    moved = np.moveaxis(arr, 0, -1)  # (2,)*n + (shots,)
    out = _apply_gate_tensor(g, moved, n)
    return np.moveaxis(out, -1, 0)
