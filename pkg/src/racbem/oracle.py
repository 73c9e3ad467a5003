"""Dense classical references the circuit pipeline is checked against.

Everything here is brute-force linear algebra on the encoded matrices:
singular-value transforms, success probabilities, Hamiltonian time
series, broadened spectral measures, and thermal energies.
"""

from __future__ import annotations

import numpy as np

from .chebpoly import ChebPoly
from .statevector import StateVector

SIGMA_TOL = 1e-8

DIM_CAP = 2**10


def _check_matrix(A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("need a square matrix")
    if A.shape[0] > DIM_CAP:
        raise ValueError(f"dimension {A.shape[0]} exceeds cap {DIM_CAP}")
    if not np.all(np.isfinite(A)):
        raise ValueError("non-finite entries")
    return A


def matfun_right(A: np.ndarray, f: ChebPoly) -> np.ndarray:
    """V f(Sigma) V^dag for A = W Sigma V^dag (right singular transform)."""
    A = _check_matrix(A)
    _, s, Vh = np.linalg.svd(A)
    if s.size and s[0] > 1 + SIGMA_TOL:
        raise ValueError(f"largest singular value {s[0]} exceeds 1")
    fs = f(np.clip(s, 0.0, 1.0))
    return Vh.conj().T @ (fs[:, None] * Vh)


def exact_success_prob(A: np.ndarray, f: ChebPoly, b: StateVector) -> float:
    """|| f|>(A) |b> ||^2, the all-ancillas-zero probability."""
    if abs(np.linalg.norm(b.amplitudes) - 1.0) > 1e-10:
        raise ValueError("b must be normalized")
    v = matfun_right(A, f) @ b.amplitudes
    return float(np.vdot(v, v).real)


def _check_hermitian(H: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    H = _check_matrix(H)
    if np.abs(H - H.conj().T).max() > tol:
        raise ValueError("matrix is not Hermitian")
    return H


def exact_time_series(H: np.ndarray, psi: np.ndarray, t: float) -> complex:
    """<psi| exp(i H t) |psi> via eigendecomposition."""
    H = _check_hermitian(H)
    lam, V = np.linalg.eigh(H)
    w = np.abs(V.conj().T @ np.asarray(psi, dtype=complex)) ** 2
    return complex(np.sum(w * np.exp(1j * lam * t)))


def exact_spectral_measure(
    H: np.ndarray, psi: np.ndarray, E: float, eta: float
) -> float:
    """Lorentzian-broadened local density of states at energy E."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    H = _check_hermitian(H)
    lam, V = np.linalg.eigh(H)
    w = np.abs(V.conj().T @ np.asarray(psi, dtype=complex)) ** 2
    return float((eta / np.pi) * np.sum(w / ((lam - E) ** 2 + eta**2)))


def exact_thermal_energy(H: np.ndarray, beta: float) -> float:
    """Tr[H exp(-beta H)] / Tr[exp(-beta H)] for Hermitian PSD H."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    H = _check_hermitian(H)
    lam = np.linalg.eigvalsh(H)
    w = np.exp(-beta * (lam - lam.min()))  # shift for stability
    return float(np.sum(lam * w) / np.sum(w))
