"""Phase-factor finding for signal-processing circuits.

A length d+1 real sequence Phi parameterizes the SU(2) product
U_Phi(x) = e^{i phi_0 Z} prod_{j=1..d} [e^{i arccos(x) X} e^{i phi_j Z}],
whose upper-left real part is a degree-d polynomial in x with the parity
of d.  Given a target polynomial, the phases are found by minimizing the
mean squared residual on Chebyshev nodes with an analytic gradient and a
quasi-Newton solver.  Two phase conventions exist: the optimization one
("phi") and the circuit one ("varphi"); they differ by fixed shifts of
pi/4 at the ends and pi/2 inside.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .chebpoly import ChebPoly

CONVENTIONS = ("phi", "varphi")

SYM_TOL = 1e-12


@dataclass(frozen=True)
class PhaseFactors:
    values: tuple[float, ...]
    convention: str = "phi"
    symmetric: bool = False

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("need at least one phase")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")
        if self.symmetric:
            for a, b in zip(vals, vals[::-1]):
                if abs(a - b) > SYM_TOL:
                    raise ValueError("symmetric flag set but sequence is not")

    @property
    def degree(self) -> int:
        return len(self.values) - 1

    def to_json(self, residual: float | None = None) -> str:
        d = {"convention": self.convention, "values": list(self.values)}
        if residual is not None:
            d["residual"] = residual
        return json.dumps(d)

    @classmethod
    def from_json(cls, text: str) -> "PhaseFactors":
        d = json.loads(text)
        vals = tuple(d["values"])
        sym = all(abs(a - b) <= SYM_TOL for a, b in zip(vals, vals[::-1]))
        return cls(vals, d["convention"], sym)


def u_phi(x: float, phases: PhaseFactors) -> np.ndarray:
    """The 2x2 product U_Phi(x) in the phi convention."""
    if phases.convention != "phi":
        raise ValueError("u_phi takes phi-convention phases")
    if abs(x) > 1:
        raise ValueError("x outside [-1, 1]")
    th = math.acos(x)
    c, s = math.cos(th), math.sin(th)
    W = np.array([[c, 1j * s], [1j * s, c]])
    v = phases.values
    U = np.diag([np.exp(1j * v[0]), np.exp(-1j * v[0])])
    for p in v[1:]:
        U = U @ W @ np.diag([np.exp(1j * p), np.exp(-1j * p)])
    return U


def qsp_value(x, phases: PhaseFactors):
    """Re<0|U_Phi(x)|0>, the polynomial the phases encode (vectorized)."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    vals = np.array([u_phi(xi, phases)[0, 0].real for xi in xs])
    return vals if np.ndim(x) else float(vals[0])


def _nodes(d: int) -> np.ndarray:
    """Positive Chebyshev roots x_j = cos((2j-1) pi / (4 d~)), j = 1..d~."""
    dt = (d + 1 + 1) // 2
    j = np.arange(1, dt + 1)
    return np.cos((2 * j - 1) * np.pi / (4 * dt))


def _stacks(values: np.ndarray, xs: np.ndarray):
    """Prefix/suffix 2x2 product stacks over all nodes at once.

    Returns (prefix, suffix) with prefix[k] = e^{i phi_0 Z} W e^{i phi_1 Z}
    ... W e^{i phi_k Z} and suffix[k] = the remaining right factors, each
    of shape (n_nodes, 2, 2)."""
    d = len(values) - 1
    n = len(xs)
    th = np.arccos(xs)
    c, s = np.cos(th), np.sin(th)
    W = np.empty((n, 2, 2), dtype=complex)
    W[:, 0, 0] = c
    W[:, 1, 1] = c
    W[:, 0, 1] = 1j * s
    W[:, 1, 0] = 1j * s

    def ez(p):
        E = np.zeros((2, 2), dtype=complex)
        E[0, 0] = np.exp(1j * p)
        E[1, 1] = np.exp(-1j * p)
        return E

    prefix = np.empty((d + 1, n, 2, 2), dtype=complex)
    cur = np.broadcast_to(ez(values[0]), (n, 2, 2)).copy()
    prefix[0] = cur
    for k in range(1, d + 1):
        cur = cur @ W @ ez(values[k])
        prefix[k] = cur
    suffix = np.empty((d + 1, n, 2, 2), dtype=complex)
    cur = np.broadcast_to(np.eye(2, dtype=complex), (n, 2, 2)).copy()
    suffix[d] = cur
    for k in range(d - 1, -1, -1):
        cur = (W @ ez(values[k + 1])) @ cur
        suffix[k] = cur
    return prefix, suffix


def _residuals_and_grad(values: np.ndarray, xs: np.ndarray, targets: np.ndarray):
    prefix, suffix = _stacks(values, xs)
    U = prefix[-1]
    res = U[:, 0, 0].real - targets
    # d(Re U00)/d phi_k = Re[i (L_k Z R_k)_00]
    L = prefix  # includes e^{i phi_k Z}
    R = suffix
    # (L Z R)_00 = L00 R00 - L01 R10
    zr = L[:, :, 0, 0] * R[:, :, 0, 0] - L[:, :, 0, 1] * R[:, :, 1, 0]
    dre = (1j * zr).real  # shape (d+1, n_nodes)
    n = len(xs)
    grad = (2.0 / n) * dre @ res
    return res, grad


def objective(phases: PhaseFactors, f: ChebPoly) -> float:
    """Mean squared residual of Re<0|U_Phi|0> against f on the node set."""
    _check_pair(phases, f)
    xs = _nodes(phases.degree)
    res = qsp_value(xs, phases) - f(xs)
    return float(np.mean(res**2))


def gradient(phases: PhaseFactors, f: ChebPoly) -> np.ndarray:
    """Analytic gradient of the objective with respect to each phase."""
    _check_pair(phases, f)
    xs = _nodes(phases.degree)
    _, grad = _residuals_and_grad(np.asarray(phases.values), xs, f(xs))
    return grad


def _check_pair(phases: PhaseFactors, f: ChebPoly):
    if phases.convention != "phi":
        raise ValueError("objective works in the phi convention")
    d = phases.degree
    if f.degree != d:
        raise ValueError(f"need len(phases) = deg(f)+1, got {d + 1} vs {f.degree}")
    want = "even" if d % 2 == 0 else "odd"
    if f.parity != want:
        raise ValueError(f"degree-{d} phases need {want} target parity")


MAX_ITER = 10_000

L_TOL = 1e-24

GRAD_TOL = 1e-12


def _solve_targets(
    d: int, xs: np.ndarray, targets: np.ndarray, v0: np.ndarray, max_iter: int
) -> tuple[np.ndarray, float]:
    """Fit the free symmetric phases to target values on the nodes.

    L-BFGS with the analytic gradient, then Gauss-Newton polish: the
    folded system is square (one node per free symmetric phase), so
    Newton steps reach machine-precision residuals where the quasi-Newton
    loop stalls near sqrt(eps).  Returns (free phases, residual L)."""
    half = (d + 1 + 1) // 2  # free symmetric coordinates

    def expand(v):
        full = np.empty(d + 1)
        full[:half] = v
        full[-half:] = v[::-1]
        return full

    def fold(g):
        out = g[:half].copy()
        # mirrored coordinates share a variable; the middle one of an
        # odd-length sequence is its own mirror
        for i in range(half):
            j = d - i
            if j != i:
                out[i] += g[j]
        return out

    def fun(v):
        res, grad = _residuals_and_grad(expand(v), xs, targets)
        return float(np.mean(res**2)), fold(grad)

    result = minimize(
        fun,
        v0,
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_iter, "ftol": 1e-30, "gtol": GRAD_TOL, "maxcor": 10},
    )
    v = result.x

    def res_jac(v):
        prefix, suffix = _stacks(expand(v), xs)
        res = prefix[-1][:, 0, 0].real - targets
        zr = prefix[:, :, 0, 0] * suffix[:, :, 0, 0] - prefix[:, :, 0, 1] * suffix[:, :, 1, 0]
        dre = (1j * zr).real  # (d+1, n_nodes)
        J = dre[:half].T.copy()
        for i in range(half):
            j = d - i
            if j != i:
                J[:, i] += dre[j]
        return res, J

    best_v, best_L = v, float(result.fun)
    for _ in range(50):
        res, J = res_jac(v)
        L = float(np.mean(res**2))
        if L < best_L:
            best_v, best_L = v.copy(), L
        if L < 1e-31:
            break
        try:
            step = np.linalg.lstsq(J, res, rcond=None)[0]
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        v = v - step
    return best_v, best_L


CONVERGED_L = 1e-24

HOMOTOPY_TAUS = (0.5, 0.7, 0.85, 0.95, 0.99, 1.0)


def optimize(f: ChebPoly, max_iter: int = MAX_ITER) -> tuple[PhaseFactors, float]:
    """Symmetric phase factors reproducing the polynomial f.

    Optimizes only the first half of the sequence (mirroring the rest)
    from the flat start (pi/4, 0, ..., 0, pi/4).  When the direct solve
    stalls in a poor local minimum (targets with sup norm near 1 at
    higher degree), an amplitude continuation refits against tau * f for
    an increasing ramp of tau with warm starts.  Returns (phases,
    residual L); raises only on malformed input, a poor local minimum is
    reported via L."""
    d = f.degree
    if d < 1:
        raise ValueError("need degree >= 1")
    xs = _nodes(d)
    targets = f(xs)
    half = (d + 1 + 1) // 2

    v0 = np.zeros(half)
    v0[0] = np.pi / 4
    best_v, best_L = _solve_targets(d, xs, targets, v0, max_iter)

    if best_L > CONVERGED_L:
        v = v0
        for tau in HOMOTOPY_TAUS:
            v, L = _solve_targets(d, xs, tau * targets, v, max_iter)
        if L < best_L:
            best_v, best_L = v, L

    full = np.empty(d + 1)
    full[:half] = best_v
    full[-half:] = best_v[::-1]
    phases = PhaseFactors(tuple(full), "phi", symmetric=True)
    return phases, best_L


def to_varphi(phases: PhaseFactors) -> PhaseFactors:
    """Shift to the circuit convention.

    Interior phases shift by pi/2 and both ends by pi/4; the first phase
    additionally shifts by -d*pi/2, which cancels the global (-i)^d the
    pi/2 bookkeeping leaves on the assembled circuit.  Without that term
    the circuit block comes out as (-i)^d times the encoded polynomial's
    transform (a sign flip for d = 2 mod 4, an imaginary-part swap for
    odd d)."""
    if phases.convention != "phi":
        raise ValueError("expected phi convention")
    v = list(phases.values)
    if len(v) < 2:
        raise ValueError("need length >= 2")
    d = len(v) - 1
    out = (
        [v[0] + np.pi / 4 - d * np.pi / 2]
        + [p + np.pi / 2 for p in v[1:-1]]
        + [v[-1] + np.pi / 4]
    )
    return PhaseFactors(tuple(out), "varphi", symmetric=False)


def to_phi(phases: PhaseFactors) -> PhaseFactors:
    """Inverse of to_varphi."""
    if phases.convention != "varphi":
        raise ValueError("expected varphi convention")
    v = list(phases.values)
    if len(v) < 2:
        raise ValueError("need length >= 2")
    d = len(v) - 1
    out = (
        [v[0] - np.pi / 4 + d * np.pi / 2]
        + [p - np.pi / 2 for p in v[1:-1]]
        + [v[-1] - np.pi / 4]
    )
    sym = all(abs(a - b) <= SYM_TOL for a, b in zip(out, out[::-1]))
    return PhaseFactors(tuple(out), "phi", sym)
