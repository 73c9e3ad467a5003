"""Block-encodings and Hermitian random-circuit block-encoded matrices.

A circuit U on m + n_sys qubits block-encodes the matrix
A = (<0^m| x I) U (|0^m> x I), the top-left 2^n_sys x 2^n_sys block of
the circuit unitary under the qubit-0-is-MSB ordering.  From a 1-ancilla
block-encoding of A this module builds 2-ancilla block-encodings of the
Hermitian matrix h(A) = a2 * A^dag A + a0 * I, where the quadratic
h(x) = a2 x^2 + a0 is selected by two rotation phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import gates as G
from .statevector import circuit_unitary


@dataclass(frozen=True)
class BlockEncoding:
    """A circuit whose top-left block (ancillas read |0^m>) is the matrix.

    Ancillas are the m lowest-indexed qubits.  alpha is the encoding scale
    (always 1 for circuits built here; kept for bookkeeping)."""

    circuit: G.QuantumCircuit
    n_sys: int
    m: int = 1
    alpha: float = 1.0

    def __post_init__(self):
        if self.n_sys < 1 or self.m < 0:
            raise ValueError("need n_sys >= 1 and m >= 0")
        if self.circuit.n_qubits != self.n_sys + self.m:
            raise ValueError(
                f"circuit has {self.circuit.n_qubits} qubits, "
                f"expected n_sys + m = {self.n_sys + self.m}"
            )


@dataclass(frozen=True)
class QuadraticH:
    """The quadratic h(x) = a2 x^2 + a0 with its realizing phases.

    Constraints |a0| <= 1 and |a0 + a2| <= 1 keep |h| <= 1 on [-1, 1].
    The phases satisfy a2 = -2 sin(2 phi0) sin(phi1), a0 = cos(2 phi0 - phi1).
    """

    a2: float
    a0: float
    phi0: float
    phi1: float

    def __post_init__(self):
        tol = 1e-9
        if abs(self.a0) > 1 + tol or abs(self.a0 + self.a2) > 1 + tol:
            raise ValueError("|a0| and |a0 + a2| must be <= 1")
        a2c = -2.0 * math.sin(2 * self.phi0) * math.sin(self.phi1)
        a0c = math.cos(2 * self.phi0 - self.phi1)
        if abs(a2c - self.a2) > 1e-9 or abs(a0c - self.a0) > 1e-9:
            raise ValueError("phases do not realize (a2, a0)")

    def __call__(self, x):
        return self.a2 * np.asarray(x) ** 2 + self.a0


def extract_block(be: BlockEncoding) -> np.ndarray:
    """The encoded matrix: top-left block of the circuit unitary."""
    U = circuit_unitary(be.circuit)
    k = 2**be.n_sys
    return U[:k, :k]


def _rotation_group(varphi: float, ctrl: int, targ: int) -> list[G.Gate]:
    """Open-controlled-NOT sandwich around exp(-i varphi Z) on `targ`.

    The sandwich applies the rotation on the signal qubit unconditionally
    (the X/CNOT pairs cancel); it is kept verbatim from the reference
    construction so gate counts match the 7-gate budget."""
    return [
        G.x(ctrl),
        G.cnot(ctrl, targ),
        G.x(ctrl),
        G.rz(targ, 2.0 * varphi),
        G.x(ctrl),
        G.cnot(ctrl, targ),
        G.x(ctrl),
    ]


def build_hracbem(ua: BlockEncoding, phi0: float, phi1: float) -> BlockEncoding:
    """2-ancilla block-encoding of a2 * A^dag A + a0 * I from a 1-ancilla one.

    Layout: signal qubit q0, block-encoding ancilla q1, system q2..  The
    circuit is H(q0), rotation group (phi0), U_A, rotation group (phi1),
    U_A^dag, rotation group (phi0), H(q0)."""
    if ua.m != 1:
        raise ValueError("build_hracbem needs a 1-ancilla block-encoding")
    n = ua.circuit.n_qubits + 1
    ua_s = G.shift_qubits(ua.circuit, 1, n)
    uad_s = G.shift_qubits(G.adjoint(ua.circuit), 1, n)
    c = G.concat(
        n,
        G.from_gates(n, [G.h(0)] + _rotation_group(phi0, 1, 0)),
        ua_s,
        G.from_gates(n, _rotation_group(phi1, 1, 0)),
        uad_s,
        G.from_gates(n, _rotation_group(phi0, 1, 0) + [G.h(0)]),
        name="hracbem",
    )
    return BlockEncoding(c, ua.n_sys, m=2)


def build_canonical_hracbem(ua: BlockEncoding) -> BlockEncoding:
    """2-ancilla block-encoding of A^dag A using only Clifford+T overhead.

    Extra gates beyond U_A and U_A^dag are exactly 2 H, 2 CNOT, 1 Sdg, 2 T.
    """
    if ua.m != 1:
        raise ValueError("build_canonical_hracbem needs a 1-ancilla block-encoding")
    n = ua.circuit.n_qubits + 1
    ua_s = G.shift_qubits(ua.circuit, 1, n)
    uad_s = G.shift_qubits(G.adjoint(ua.circuit), 1, n)
    c = G.concat(
        n,
        G.from_gates(n, [G.h(0), G.t(0)]),
        ua_s,
        G.from_gates(n, [G.cnot(1, 0), G.sdg(0), G.cnot(1, 0)]),
        uad_s,
        G.from_gates(n, [G.t(0), G.h(0)]),
        name="canonical-hracbem",
    )
    return BlockEncoding(c, ua.n_sys, m=2)


def phases_for_quadratic(a2: float, a0: float) -> tuple[float, float]:
    """Phases (phi0, phi1) realizing h(x) = a2 x^2 + a0.

    Closed form: with u = arccos(a0) and v = arccos(a0 + a2),
    phi0 = (u + v) / 4 and phi1 = (v - u) / 2."""
    if abs(a0) > 1 or abs(a0 + a2) > 1:
        raise ValueError("infeasible quadratic: need |a0| <= 1 and |a0 + a2| <= 1")
    u = math.acos(a0)
    v = math.acos(a0 + a2)
    return (u + v) / 4.0, (v - u) / 2.0


def quadratic_for_condition(kappa: float) -> QuadraticH:
    """h_kappa(x) = (1 - 1/kappa) x^2 + 1/kappa, condition bound kappa."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    a2 = 1.0 - 1.0 / kappa
    a0 = 1.0 / kappa
    phi0, phi1 = phases_for_quadratic(a2, a0)
    return QuadraticH(a2=a2, a0=a0, phi0=phi0, phi1=phi1)


def condition_bound(q: QuadraticH) -> float:
    """Upper bound on the condition number of h(A): (a0 + a2) / a0.

    Valid when h is positive and increasing on [0, 1], i.e. a0 > 0 and
    a2 >= 0 (h ranges over [a0, a0 + a2] as x^2 sweeps [0, 1])."""
    if q.a0 <= 0 or q.a2 < 0:
        raise ValueError("condition bound needs a0 > 0 and a2 >= 0")
    return (q.a0 + q.a2) / q.a0
