"""Chebyshev polynomials, minimax (Remez) fitting, and target functions.

Polynomials are stored as Chebyshev coefficients on [-1, 1] and must be
bounded by 1 there (the bound a signal-processing circuit can realize);
the ``scale`` field records the divisor that was applied to the original
target so callers can undo it.  Fitting happens on a subinterval [a, b]
where the target is smooth; the polynomial is then re-expanded in the
global basis.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as C

from .blockenc import QuadraticH

BOUND_TOL = 1e-12

PARITIES = ("even", "odd", "none")


def _grid_max(coeffs: np.ndarray) -> float:
    # dense mixed grid: Chebyshev points resolve the edges, the uniform
    # part catches interior bumps a coarse grid can miss (a target even
    # 1e-3 above 1 is unrealizable and stalls the phase solver)
    d = max(len(coeffs) - 1, 1)
    xs = np.concatenate(
        [np.cos(np.linspace(0.0, np.pi, 30 * d + 31)), np.linspace(-1.0, 1.0, 2001)]
    )
    return float(np.abs(C.chebval(xs, coeffs)).max())


@dataclass(frozen=True)
class ChebPoly:
    """Chebyshev-basis polynomial on [-1, 1] with |p| <= 1 there.

    ``scale`` is the positive divisor already applied: the represented
    approximation to the original target is scale * p(x)."""

    coeffs: tuple[float, ...]
    parity: str = "none"
    scale: float = 1.0

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if not coeffs:
            raise ValueError("empty coefficient list")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be one of {PARITIES}")
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        start = 1 if self.parity == "even" else 0
        if self.parity in ("even", "odd"):
            if any(abs(c) > 1e-12 for c in coeffs[start::2]):
                raise ValueError(f"nonzero off-parity coefficient for {self.parity}")
        if _grid_max(np.asarray(coeffs)) > 1.0 + BOUND_TOL:
            raise ValueError("polynomial exceeds 1 in magnitude on [-1, 1]")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return eval_cheb(self, x)

    def to_json(self) -> str:
        return json.dumps(
            {"parity": self.parity, "scale": self.scale, "cheb_coeffs": list(self.coeffs)}
        )

    @classmethod
    def from_json(cls, text: str) -> "ChebPoly":
        d = json.loads(text)
        return cls(tuple(d["cheb_coeffs"]), d["parity"], d["scale"])


def eval_cheb(p: ChebPoly, x):
    """Clenshaw evaluation of p at x in [-1, 1]."""
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1 + 1e-12):
        raise ValueError("argument outside [-1, 1]")
    return C.chebval(arr, p.coeffs)


# -- target functions ---------------------------------------------------


@dataclass(frozen=True)
class TargetFunction:
    """Closed-form scalar target with its natural approximation domain."""

    kind: str
    params: tuple[tuple[str, float], ...]
    domain: tuple[float, float]
    fn: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))


def inverse(kappa: float) -> TargetFunction:
    """1/x on [1/kappa, 1] (scaling applied separately)."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    return TargetFunction(
        "inverse", (("kappa", kappa),), (1.0 / kappa, 1.0), lambda x: 1.0 / x
    )


def cos_sqrt(t: float, eta: float) -> TargetFunction:
    """sqrt((cos(t x) + eta) / 2), real part carrier for time series."""
    if eta < 1:
        raise ValueError("eta must be >= 1")
    return TargetFunction(
        "cos_sqrt",
        (("t", t), ("eta", eta)),
        (0.0, 1.0),
        lambda x: np.sqrt((np.cos(t * x) + eta) / 2.0),
    )


def sin_sqrt(t: float, eta: float) -> TargetFunction:
    """sqrt((sin(t x) + eta) / 2), imaginary part carrier for time series."""
    if eta < 1:
        raise ValueError("eta must be >= 1")
    return TargetFunction(
        "sin_sqrt",
        (("t", t), ("eta", eta)),
        (0.0, 1.0),
        lambda x: np.sqrt((np.sin(t * x) + eta) / 2.0),
    )


def lorentzian_sqrt(eta: float, E: float) -> TargetFunction:
    """sqrt(eta^2 / ((x - E)^2 + eta^2)), spectral-measure carrier."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    return TargetFunction(
        "lorentzian_sqrt",
        (("eta", eta), ("E", E)),
        (0.0, 1.0),
        lambda x: np.sqrt(eta**2 / ((x - E) ** 2 + eta**2)),
    )


def gibbs(beta: float) -> TargetFunction:
    """exp(-beta x / 2), imaginary-time half-evolution weight."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    return TargetFunction(
        "gibbs", (("beta", beta),), (0.0, 1.0), lambda x: np.exp(-beta * x / 2.0)
    )


def gibbs_sqrt_x(beta: float, floor: float = 0.0) -> TargetFunction:
    """exp(-beta x / 2) sqrt(x) on [floor, 1]; floor keeps clear of x=0."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    return TargetFunction(
        "gibbs_sqrt_x",
        (("beta", beta), ("floor", floor)),
        (floor, 1.0),
        lambda x: np.exp(-beta * x / 2.0) * np.sqrt(x),
    )


def odd_gibbs(beta: float) -> TargetFunction:
    """x exp(-beta x^2 / 2), odd on [-1, 1]."""
    if beta < 0:
        raise ValueError("beta must be >= 0")
    return TargetFunction(
        "odd_gibbs",
        (("beta", beta),),
        (-1.0, 1.0),
        lambda x: x * np.exp(-beta * x**2 / 2.0),
    )


# -- scaling ------------------------------------------------------------

DEFAULT_MARGIN = 1e-2


def apply_scaling(
    t: Callable, interval: tuple[float, float], margin: float = DEFAULT_MARGIN
) -> tuple[Callable, float]:
    """Divide the target by (1 + margin) times its grid max on the interval.

    Returns (scaled evaluator, scale factor); the scaled target stays
    strictly below 1 in magnitude."""
    a, b = interval
    xs = np.linspace(a, b, 2001)
    vals = np.abs(np.asarray(t(xs), dtype=float))
    if not np.all(np.isfinite(vals)):
        raise ValueError("target unbounded or undefined on the interval")
    scale = float(vals.max()) * (1.0 + margin)
    return (lambda x, _s=scale: np.asarray(t(x)) / _s), scale


# -- Chebyshev projection -----------------------------------------------


def cheb_interp_coeffs(
    f: Callable, degree: int, interval: tuple[float, float] = (-1.0, 1.0)
) -> np.ndarray:
    """Chebyshev coefficients from first-kind-node interpolation.

    Uses 2*(degree + 1) nodes on the mapped interval, so the result is a
    near-best truncation (aliasing error only) of degree ``degree``."""
    a, b = interval
    npts = 2 * (degree + 1)
    theta = (2 * np.arange(npts) + 1) * np.pi / (2 * npts)
    xi = np.cos(theta)
    xs = 0.5 * (b - a) * xi + 0.5 * (b + a)
    vals = np.asarray(f(xs), dtype=float)
    # discrete orthogonality of T_k at first-kind nodes
    full = np.polynomial.chebyshev.chebfit(xi, vals, npts - 1)
    return full[: degree + 1]


def cheb_project(t: Callable, degree: int, parity: str = "none") -> ChebPoly:
    """Truncated Chebyshev expansion of t on [-1, 1].

    Off-parity coefficients are zeroed when a parity is declared."""
    coeffs = cheb_interp_coeffs(t, degree, (-1.0, 1.0))
    if parity == "even":
        coeffs[1::2] = 0.0
    elif parity == "odd":
        coeffs[0::2] = 0.0
    return ChebPoly(tuple(coeffs), parity)


# -- Remez minimax fitting ----------------------------------------------

REMEZ_MAX_ITER = 100

REMEZ_GRID = 4000


class RemezError(RuntimeError):
    pass


def _remez_core(
    f: Callable,
    w: Callable,
    degree: int,
    interval: tuple[float, float],
    max_iter: int = REMEZ_MAX_ITER,
) -> tuple[np.ndarray, float]:
    """Best weighted approximation min max |w(x) p(x) - f(x)| on [a, b].

    p is returned as Chebyshev coefficients on the mapped interval.  The
    weight w must be positive on the interval (w = 1 for plain fitting).
    Single-point exchange: each iteration replaces one reference point
    with the location of the current worst error, preserving sign
    alternation."""
    a, b = interval
    npts = degree + 2
    # initial references: Chebyshev extrema mapped to [a, b]
    refs = 0.5 * (b - a) * np.cos(np.pi * np.arange(npts) / (npts - 1))[::-1] + 0.5 * (
        b + a
    )
    if np.any(np.asarray(w(refs), dtype=float) == 0.0):
        # a zero-weight reference (w vanishing at an endpoint) forces the
        # leveled error to 0 there and stalls the exchange; fall back to
        # interior Chebyshev roots, where the weight is positive
        refs = 0.5 * (b - a) * np.cos(
            (2 * np.arange(npts) + 1) * np.pi / (2 * npts)
        )[::-1] + 0.5 * (b + a)
    grid = 0.5 * (b - a) * np.cos(np.linspace(np.pi, 0.0, REMEZ_GRID)) + 0.5 * (b + a)
    fg = np.asarray(f(grid), dtype=float)
    wg = np.asarray(w(grid), dtype=float)

    def solve(refs):
        xi = (2 * refs - (a + b)) / (b - a)
        V = C.chebvander(xi, degree) * np.asarray(w(refs), dtype=float)[:, None]
        signs = (-1.0) ** np.arange(npts)
        M = np.hstack([V, signs[:, None]])
        rhs = np.asarray(f(refs), dtype=float)
        sol = np.linalg.solve(M, rhs)
        return sol[:-1], sol[-1]

    prev_E = None
    for _ in range(max_iter):
        coeffs, E = solve(refs)
        xi_g = (2 * grid - (a + b)) / (b - a)
        err = wg * C.chebval(xi_g, coeffs) - fg
        k = int(np.abs(err).argmax())
        emax = abs(err[k])
        if prev_E is not None and emax - abs(E) <= 1e-12 * max(emax, 1.0):
            return coeffs, emax
        prev_E = E
        x_new = grid[k]
        s_new = np.sign(err[k])
        # current reference deviations alternate starting with sign(E)... use
        # recomputed signs to slot the new point in without breaking alternation
        xi_r = (2 * refs - (a + b)) / (b - a)
        ref_err = np.asarray(w(refs), dtype=float) * C.chebval(xi_r, coeffs) - np.asarray(
            f(refs), dtype=float
        )
        if x_new < refs[0]:
            if np.sign(ref_err[0]) == s_new:
                refs[0] = x_new
            else:
                refs = np.concatenate([[x_new], refs[:-1]])
        elif x_new > refs[-1]:
            if np.sign(ref_err[-1]) == s_new:
                refs[-1] = x_new
            else:
                refs = np.concatenate([refs[1:], [x_new]])
        else:
            j = int(np.searchsorted(refs, x_new))
            # neighbor with matching sign gets replaced
            if np.sign(ref_err[j - 1]) == s_new:
                refs[j - 1] = x_new
            else:
                refs[j] = x_new
        refs = np.sort(refs)
    coeffs, E = solve(refs)
    xi_g = (2 * grid - (a + b)) / (b - a)
    err = wg * C.chebval(xi_g, coeffs) - fg
    emax = float(np.abs(err).max())
    if emax > 2.0 * abs(E) + 1e-14:
        raise RemezError(
            f"no convergence in {max_iter} exchanges (E={E:.3e}, max={emax:.3e})"
        )
    return coeffs, emax


def _global_coeffs_from_local(
    local: np.ndarray,
    interval: tuple[float, float],
    degree: int,
    transform: str = "none",
) -> np.ndarray:
    """Re-expand a locally fitted polynomial in the global [-1, 1] basis.

    transform 'none': p(x) = q(map(x)), degree unchanged.
    transform 'even': p(x) = q(map(x^2)), degree doubled.
    transform 'odd':  p(x) = x q(map(x^2)), degree doubled plus one."""
    a, b = interval

    def p(x):
        x = np.asarray(x, dtype=float)
        if transform == "none":
            u = x
        else:
            u = x**2
        xi = (2 * u - (a + b)) / (b - a)
        vals = C.chebval(xi, local)
        if transform == "odd":
            vals = x * vals
        return vals

    return C.chebinterpolate(p, degree)


def remez(
    t: Callable,
    degree: int,
    parity: str = "none",
    interval: tuple[float, float] | None = None,
    max_iter: int = REMEZ_MAX_ITER,
) -> tuple[ChebPoly, float]:
    """Best degree-``degree`` polynomial approximation of t on the interval.

    For parity 'even' the fit runs on the squared variable: an even p of
    degree 2k with p(x) = q(x^2) where q is the plain minimax fit of
    t(sqrt(u)).  For 'odd', p(x) = x q(x^2) and the fit is weighted by
    sqrt(u).  Returns (polynomial on [-1, 1], sup-norm error on the fit
    interval).  The polynomial keeps the target's values only on the fit
    interval (and its mirror image for definite parity)."""
    if interval is None:
        interval = getattr(t, "domain", (-1.0, 1.0))
    a, b = interval
    if parity == "none":
        local, err = _remez_core(t, lambda x: np.ones_like(np.asarray(x, float)), degree, (a, b), max_iter)
        coeffs = _global_coeffs_from_local(local, (a, b), degree, "none")
    elif parity == "even":
        if degree % 2 or a < 0:
            raise ValueError("even fit needs even degree and interval in [0, 1]")
        k = degree // 2
        ua, ub = a * a, b * b
        local, err = _remez_core(
            lambda u: t(np.sqrt(np.asarray(u, float))),
            lambda u: np.ones_like(np.asarray(u, float)),
            k,
            (ua, ub),
            max_iter,
        )
        coeffs = _global_coeffs_from_local(local, (ua, ub), degree, "even")
        coeffs[1::2] = 0.0
    elif parity == "odd":
        if degree % 2 == 0 or a < 0:
            raise ValueError("odd fit needs odd degree and interval in [0, 1]")
        k = (degree - 1) // 2
        ua, ub = a * a, b * b
        local, err = _remez_core(
            lambda u: t(np.sqrt(np.asarray(u, float))),
            lambda u: np.sqrt(np.asarray(u, float)),
            k,
            (ua, ub),
            max_iter,
        )
        coeffs = _global_coeffs_from_local(local, (ua, ub), degree, "odd")
        coeffs[0::2] = 0.0
    else:
        raise ValueError(f"parity must be one of {PARITIES}")
    # the fit can poke above 1 outside the fit interval; fold the excess
    # into the scale so the stored polynomial stays realizable
    m = _grid_max(coeffs)
    bump = m * (1.0 + 10 * BOUND_TOL) if m > 1.0 else 1.0
    return ChebPoly(tuple(coeffs / bump), parity, scale=bump), float(err)


def fit_scaled(
    t: TargetFunction,
    degree: int,
    parity: str = "none",
    interval: tuple[float, float] | None = None,
    margin: float = DEFAULT_MARGIN,
) -> tuple[ChebPoly, float]:
    """Scale the target below 1, minimax-fit the scaled target.

    Returns (poly, err) where poly.scale is the total divisor (target
    scaling times any overshoot correction from the fit) and err is the
    sup-norm error of poly.scale * poly versus t on the fit interval."""
    if interval is None:
        interval = t.domain
    scaled, alpha = apply_scaling(t, interval, margin)
    poly, err = remez(scaled, degree, parity, interval)
    total = alpha * poly.scale
    return ChebPoly(poly.coeffs, poly.parity, scale=total), float(err * alpha)


@dataclass(frozen=True)
class IntervalFit:
    """A minimax fit kept in its own interval's Chebyshev basis.

    Unlike ChebPoly, no bound is imposed outside the fit interval; this
    is the right carrier for a function of a matrix whose spectrum stays
    inside the interval, where the polynomial is only ever evaluated
    there.  scale * p approximates the original target within err."""

    coeffs: tuple[float, ...]
    interval: tuple[float, float]
    scale: float
    err: float

    def __call__(self, y):
        a, b = self.interval
        xi = (2.0 * np.asarray(y, dtype=float) - (a + b)) / (b - a)
        return C.chebval(xi, self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def fit_on_interval(
    t: TargetFunction | Callable,
    degree: int,
    interval: tuple[float, float] | None = None,
    margin: float = DEFAULT_MARGIN,
) -> IntervalFit:
    """Scale then minimax-fit the target on its interval, kept local.

    The scaled fit is clipped to magnitude 1 on the interval by
    construction (target below 1/(1+margin) plus a smaller fit error)."""
    if interval is None:
        interval = getattr(t, "domain", (-1.0, 1.0))
    scaled, alpha = apply_scaling(t, interval, margin)
    local, err = _remez_core(
        scaled,
        lambda x: np.ones_like(np.asarray(x, dtype=float)),
        degree,
        interval,
    )
    return IntervalFit(tuple(local), interval, alpha, float(err * alpha))


def project_on_interval(
    t: TargetFunction | Callable,
    degree: int,
    interval: tuple[float, float] | None = None,
    scale: float = 1.0,
) -> IntervalFit:
    """Truncated Chebyshev expansion on the interval with an explicit scale.

    The error field is the sup-norm deviation of scale * p from the
    unscaled target divided by scale, measured on a dense grid."""
    if interval is None:
        interval = getattr(t, "domain", (-1.0, 1.0))
    local = cheb_interp_coeffs(lambda x: np.asarray(t(x)) / scale, degree, interval)
    fit = IntervalFit(tuple(local), interval, scale, 0.0)
    xs = np.linspace(interval[0], interval[1], 4001)
    err = float(np.abs(scale * fit(xs) - np.asarray(t(xs))).max())
    return IntervalFit(tuple(local), interval, scale, err)


def compose_fit(g: IntervalFit, q: QuadraticH) -> ChebPoly:
    """Even composite f(x) = g_scaled-fit(a2 x^2 + a0) as a global ChebPoly.

    The quadratic's range must sit inside g's fit interval, so the
    composite never sees the polynomial's off-interval behavior and the
    global bound holds up to the fit's own margin."""
    lo = min(q.a0, q.a0 + q.a2)
    hi = max(q.a0, q.a0 + q.a2)
    a, b = g.interval
    if lo < a - 1e-12 or hi > b + 1e-12:
        raise ValueError("quadratic range leaves the fit interval")
    deg = 2 * g.degree
    coeffs = C.chebinterpolate(lambda x: g(q(x)), deg)
    coeffs[1::2] = 0.0
    m = _grid_max(coeffs)
    bump = m * (1.0 + 10 * BOUND_TOL) if m > 1.0 else 1.0
    return ChebPoly(tuple(coeffs / bump), "even", g.scale * bump)


def compose_quadratic(g: ChebPoly, q: QuadraticH) -> ChebPoly:
    """f(x) = g(a2 x^2 + a0) as an even polynomial of degree 2 deg(g)."""
    lo = min(q.a0, q.a0 + q.a2)
    hi = max(q.a0, q.a0 + q.a2)
    if lo < -1 - 1e-12 or hi > 1 + 1e-12:
        raise ValueError("quadratic range leaves [-1, 1]")
    deg = 2 * g.degree
    coeffs = C.chebinterpolate(lambda x: C.chebval(np.clip(q(x), -1, 1), g.coeffs), deg)
    coeffs[1::2] = 0.0
    return ChebPoly(tuple(coeffs), "even", g.scale)
