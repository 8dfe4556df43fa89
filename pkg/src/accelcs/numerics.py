"""Grids, quadrature, finite-difference stencils, and the Airy function Ai."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

# Ai(0) and -Ai'(0); the Maclaurin series of Ai is C1*f(x) - C2*g(x).
_AIRY_C1 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
_AIRY_C2 = 3.0 ** (-1.0 / 3.0) / math.gamma(1.0 / 3.0)

# Method-switch points.  The Maclaurin series covers [0, 6]; on [-6.5, 0)
# an anchored Taylor table keeps the evaluation noise near 1 ulp (the raw
# Maclaurin loses ~e^{|x|} digits to cancellation there, which the stencil
# tests would amplify); asymptotic expansions take over outside.  The
# negative seam sits at -6.5 rather than -6.0 because the oscillatory
# expansion at zeta(6.0)=9.8 leaves only ~2x margin against the 1e-10
# seam-continuity requirement, while at zeta(6.5)=11.05 the smallest term
# is a few 1e-12.
AIRY_SEAM_POS = 6.0
AIRY_SEAM_NEG = -6.5

_AIRY_SERIES_TERMS = 46
_ANCHOR_STEP = 0.5
_ANCHOR_COUNT = 14  # anchors at 0, -0.5, ..., -6.5
_ANCHOR_TERMS = 28


def _airy_asymptotic_u(count: int) -> np.ndarray:
    u = np.empty(count)
    u[0] = 1.0
    for k in range(count - 1):
        u[k + 1] = u[k] * (3 * k + 0.5) * (3 * k + 1.5) * (3 * k + 2.5) / (
            54.0 * (k + 1) * (k + 0.5)
        )
    return u


_AIRY_U = _airy_asymptotic_u(22)


def _airy_series(x: np.ndarray) -> np.ndarray:
    # Ai = C1*f - C2*g with f'' = x f, g'' = x g, f(0)=1, g(0)=0, g'(0)=1.
    x3 = x * x * x
    term_f = np.ones_like(x)
    term_g = x.copy()
    f = term_f.copy()
    g = term_g.copy()
    for k in range(1, _AIRY_SERIES_TERMS):
        term_f = term_f * x3 / ((3 * k) * (3 * k - 1))
        term_g = term_g * x3 / ((3 * k + 1) * (3 * k))
        f += term_f
        g += term_g
    return _AIRY_C1 * f - _AIRY_C2 * g


def _airy_taylor_coefficients(x0: float, y: float, yp: float, terms: int) -> np.ndarray:
    # Local solution of y'' = (x0 + d) y around an anchor:
    # (k+2)(k+1) a_{k+2} = x0 a_k + a_{k-1}.
    a = np.zeros(terms)
    a[0] = y
    a[1] = yp
    for k in range(terms - 2):
        prev = a[k - 1] if k >= 1 else 0.0
        a[k + 2] = (x0 * a[k] + prev) / ((k + 2) * (k + 1))
    return a


def _airy_anchor_table() -> np.ndarray:
    # Step (Ai, Ai') from 0 toward negative x; both solutions oscillate
    # there, so the propagation carries no growing mode.
    table = np.zeros((_ANCHOR_COUNT, _ANCHOR_TERMS))
    y, yp = _AIRY_C1, -_AIRY_C2
    for j in range(_ANCHOR_COUNT):
        x0 = -j * _ANCHOR_STEP
        a = _airy_taylor_coefficients(x0, y, yp, 40)
        table[j] = a[:_ANCHOR_TERMS]
        d = -_ANCHOR_STEP
        powers = d ** np.arange(40)
        y = float(np.dot(a, powers))
        yp = float(np.dot(a[1:] * np.arange(1, 40), powers[:-1]))
    return table


_AIRY_ANCHORS = _airy_anchor_table()


def _airy_midrange_neg(x: np.ndarray) -> np.ndarray:
    idx = np.clip(np.rint(-x / _ANCHOR_STEP).astype(int), 0, _ANCHOR_COUNT - 1)
    delta = x + idx * _ANCHOR_STEP
    coeff = _AIRY_ANCHORS[idx]
    out = coeff[:, -1].copy()
    for k in range(_ANCHOR_TERMS - 2, -1, -1):
        out = out * delta + coeff[:, k]
    return out


def _airy_asymptotic_pos(x: np.ndarray) -> np.ndarray:
    zeta = (2.0 / 3.0) * x ** 1.5
    s = np.zeros_like(x)
    sign = 1.0
    zk = np.ones_like(x)
    for k in range(19):
        s += sign * _AIRY_U[k] * zk
        zk /= zeta
        sign = -sign
    return np.exp(-zeta) / (2.0 * math.sqrt(math.pi) * x ** 0.25) * s


def _airy_asymptotic_neg(x: np.ndarray) -> np.ndarray:
    y = -x
    zeta = (2.0 / 3.0) * y ** 1.5
    inv2 = 1.0 / (zeta * zeta)
    s_even = np.zeros_like(y)
    s_odd = np.zeros_like(y)
    sign = 1.0
    zk = np.ones_like(y)
    for k in range(11):
        s_even += sign * _AIRY_U[2 * k] * zk
        s_odd += sign * _AIRY_U[2 * k + 1] * zk / zeta
        zk *= inv2
        sign = -sign
    phase = zeta + 0.25 * math.pi
    return (np.sin(phase) * s_even - np.cos(phase) * s_odd) / (
        math.sqrt(math.pi) * y ** 0.25
    )


def airy_ai(x):
    """Airy function Ai(x), convention Ai(x) = (1/pi) int_0^inf cos(u^3/3 + u x) du.

    Power series on [-6.5, 6.0], asymptotic expansions outside; absolute
    error below 1e-10 for |x| <= 10.  Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("airy_ai requires finite input")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)
    series = (arr >= 0.0) & (arr <= AIRY_SEAM_POS)
    mid_neg = (arr >= AIRY_SEAM_NEG) & (arr < 0.0)
    pos = arr > AIRY_SEAM_POS
    neg = arr < AIRY_SEAM_NEG
    if series.any():
        out[series] = _airy_series(arr[series])
    if mid_neg.any():
        out[mid_neg] = _airy_midrange_neg(arr[mid_neg])
    if pos.any():
        out[pos] = _airy_asymptotic_pos(arr[pos])
    if neg.any():
        out[neg] = _airy_asymptotic_neg(arr[neg])
    return float(out[0]) if scalar else out


class QuadratureResult(NamedTuple):
    value: complex
    error: float
    converged: bool


def airy_ai_quadrature_oracle(x: float, u_max: float, damping: float) -> QuadratureResult:
    """Damped, truncated integral representation of Ai, used as an independent oracle.

    Evaluates (1/pi) int_0^{u_max} cos(u^3/3 + u x) exp(-damping u^2) du by
    composite Simpson with one refinement step for the error estimate.
    """
    if not (u_max > 0.0):
        return QuadratureResult(0.0, 0.0, True)
    if damping < 0.0:
        raise ValueError("damping must be >= 0")
    # Node budget from the total phase swept by u^3/3 + u x.
    phase = u_max ** 3 / 3.0 + abs(x) * u_max
    n = max(801, int(16 * phase / (2.0 * math.pi)) | 1)

    def evaluate(nodes: int) -> float:
        u = np.linspace(0.0, u_max, nodes)
        f = np.cos(u ** 3 / 3.0 + u * x) * np.exp(-damping * u * u)
        w = simpson_weights(nodes, u[1] - u[0])
        return float(np.dot(w, f)) / math.pi

    coarse = evaluate(n)
    fine = evaluate(2 * n - 1)
    err = abs(fine - coarse) / 15.0
    return QuadratureResult(fine, err, True)


def integrate_adaptive(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_intervals: int = 200_000,
) -> QuadratureResult:
    """Adaptive composite Simpson quadrature for a complex-valued integrand.

    Bisects intervals until the local Richardson estimate meets the shared
    absolute tolerance; returns the value, the accumulated error estimate and
    a convergence flag (False once the subdivision budget is exhausted).
    """
    if not (a < b):
        raise ValueError("integration bounds must satisfy a < b")
    if not (tol > 0.0):
        raise ValueError("tol must be positive")

    def simpson(fa, fm, fb, h):
        return (h / 6.0) * (fa + 4.0 * fm + fb)

    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    stack = [(a, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol)]
    total = 0.0 + 0.0j
    err_total = 0.0
    converged = True
    used = 0
    while stack:
        x0, x1, f0, f1, f2, whole, budget = stack.pop()
        used += 1
        xm = 0.5 * (x0 + x1)
        lm = 0.5 * (x0 + xm)
        rm = 0.5 * (xm + x1)
        flm, frm = f(lm), f(rm)
        left = simpson(f0, flm, f1, xm - x0)
        right = simpson(f1, frm, f2, x1 - xm)
        delta = left + right - whole
        if abs(delta) <= 15.0 * budget or used >= max_intervals:
            total += left + right + delta / 15.0
            err_total += abs(delta) / 15.0
            if abs(delta) > 15.0 * budget:
                converged = False
        else:
            half = 0.5 * budget
            stack.append((x0, xm, f0, flm, f1, left, half))
            stack.append((xm, x1, f1, frm, f2, right, half))
    return QuadratureResult(complex(total), err_total, converged)


def simpson_weights(n_points: int, h: float) -> np.ndarray:
    """Composite Simpson weights on a uniform grid (3/8 tail for even counts)."""
    if n_points < 3:
        raise ValueError("need at least 3 nodes for Simpson weights")
    if h <= 0.0:
        raise ValueError("spacing must be positive")
    w = np.zeros(n_points)
    if n_points % 2 == 1:
        w[0] = w[-1] = 1.0
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w *= h / 3.0
    else:
        if n_points == 4:
            w[:] = np.array([3.0, 9.0, 9.0, 3.0]) * h / 8.0
        else:
            head = simpson_weights(n_points - 3, h)
            w[: n_points - 3] += head
            w[-4:] += np.array([3.0, 9.0, 9.0, 3.0]) * h / 8.0
    return w


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1-D coordinate grid."""

    q_min: float
    q_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.q_min) and math.isfinite(self.q_max)):
            raise ValueError("grid bounds must be finite")
        if not self.q_max > self.q_min:
            raise ValueError("q_max must exceed q_min")
        if self.n_points < 3:
            raise ValueError("grid needs at least 3 points")

    @property
    def h(self) -> float:
        return (self.q_max - self.q_min) / (self.n_points - 1)

    def nodes(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.n_points)

    def weights(self) -> np.ndarray:
        return simpson_weights(self.n_points, self.h)


@dataclass(frozen=True)
class WaveField:
    """Complex wave-function samples on a grid at a fixed dimensionless time."""

    grid: Grid1D
    tau: float
    values: np.ndarray
    converged: bool = True

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.n_points,):
            raise ValueError("values length must match grid.n_points")
        if not np.all(np.isfinite(vals.view(float))):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", vals)

    @classmethod
    def sample(cls, grid: Grid1D, tau: float, fn) -> "WaveField":
        return cls(grid, tau, np.asarray(fn(grid.nodes()), dtype=complex))

    def norm(self) -> float:
        return math.sqrt(abs(grid_inner_product(self, self).real))


def grid_inner_product(A: WaveField, B: WaveField) -> complex:
    """Simpson-weighted discrete inner product <A|B> = sum w conj(A) B."""
    if A.grid != B.grid:
        raise ValueError("inner product requires identical grids")
    if A.tau != B.tau:
        raise ValueError("inner product requires equal times")
    w = A.grid.weights()
    return complex(np.dot(w, np.conj(A.values) * B.values))


def central_second_derivative(F: WaveField, i: int) -> complex:
    """Three-point second difference (F[i-1] - 2F[i] + F[i+1]) / h^2."""
    if not 1 <= i <= F.grid.n_points - 2:
        raise ValueError("second derivative needs an interior node index")
    h = F.grid.h
    v = F.values
    return complex((v[i - 1] - 2.0 * v[i] + v[i + 1]) / (h * h))


def first_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central first derivative; second-order at the edges."""
    v = np.asarray(values)
    d = np.empty_like(v)
    d[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
    d[1] = (v[2] - v[0]) / (2.0 * h)
    d[-2] = (v[-1] - v[-3]) / (2.0 * h)
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    d[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return d


def second_derivative_5pt(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central second derivative on interior nodes (edges 3-point)."""
    v = np.asarray(values)
    d = np.empty_like(v)
    d[2:-2] = (
        -v[:-4] + 16.0 * v[1:-3] - 30.0 * v[2:-2] + 16.0 * v[3:-1] - v[4:]
    ) / (12.0 * h * h)
    d[1] = (v[0] - 2.0 * v[1] + v[2]) / (h * h)
    d[-2] = (v[-3] - 2.0 * v[-2] + v[-1]) / (h * h)
    d[0] = d[1]
    d[-1] = d[-2]
    return d


@lru_cache(maxsize=32)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def gauss_legendre(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [a, b]."""
    x, w = _leggauss(n)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid + half * x, half * w
