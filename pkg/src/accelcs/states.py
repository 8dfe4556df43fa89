"""Closed-form state families for a particle in a uniform force field.

Covers the plane-wave-like eta family, stationary Airy states and the
oscillatory-integral transform connecting the two, the linear integral of
motion with its generalized coherent states (GCS), the coherent-state (CS)
sub-family, and the Fock tower built on the moving vacuum.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import numerics
from .numerics import Grid1D, WaveField, gauss_legendre

TWO_PI = 2.0 * math.pi

# Prefactor of the eta states; with it the family obeys
# int conj(chi_eta) chi_eta' dq = sqrt(2*pi) * delta(eta - eta'),
# so sqrt(2*pi) is the Gram constant used by every smeared overlap check.
ETA_PREFACTOR = TWO_PI ** -0.25
ETA_GRAM_CONSTANT = math.sqrt(TWO_PI)

FOCK_N_MAX = 60

IOM_CONSTRAINT_TOL = 1e-12
LABEL_CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class ModelConfig:
    """Dimensionless model: the only physics knob is the force F_q."""

    F_q: float

    def __post_init__(self):
        if not math.isfinite(self.F_q):
            raise ValueError("F_q must be finite")


@dataclass(frozen=True)
class EtaLabel:
    """Initial-momentum label of the nonstationary elementary family."""

    eta: float

    def __post_init__(self):
        if not math.isfinite(self.eta):
            raise ValueError("eta must be finite")


@dataclass(frozen=True)
class EnergyLabel:
    """Dimensionless energy label of a stationary state."""

    epsilon: float

    def __post_init__(self):
        if not math.isfinite(self.epsilon):
            raise ValueError("epsilon must be finite")

    def xi(self, q, cfg: ModelConfig):
        """Airy argument (q + eps/F_q) (2 F_q)^(1/3); recomputed, never cached."""
        if cfg.F_q <= 0.0:
            raise ValueError("xi requires F_q > 0")
        return (np.asarray(q, dtype=float) + self.epsilon / cfg.F_q) * (
            2.0 * cfg.F_q
        ) ** (1.0 / 3.0)


@dataclass(frozen=True)
class IomParams:
    """Constants c1, c2 of the linear integral of motion, 2 Re(c1* c2) = 1."""

    c1: complex
    c2: complex

    def __post_init__(self):
        c1 = complex(self.c1)
        c2 = complex(self.c2)
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)
        if c1 == 0 or c2 == 0:
            raise ValueError("c1 and c2 must be nonzero")
        if abs(2.0 * (c1.conjugate() * c2).real - 1.0) > IOM_CONSTRAINT_TOL:
            raise ValueError("IomParams must satisfy 2 Re(c1* c2) = 1")

    @classmethod
    def from_polar(cls, mod1: float, mu1: float, mod2: float, mu2: float) -> "IomParams":
        return cls(mod1 * cmath.exp(1j * mu1), mod2 * cmath.exp(1j * mu2))


@dataclass(frozen=True)
class IomCoeffs:
    """Time functions f, g, phi of the integral of motion at a given tau."""

    f: complex
    g: complex
    phi: complex
    tau: float


def iom_coefficients(p: IomParams, tau: float, cfg: ModelConfig) -> IomCoeffs:
    """f = c1, g = c2 + i c1 tau, phi = F_q c1 tau^2/2 - i F_q c2 tau (c3 = 0)."""
    f = p.c1
    g = p.c2 + 1j * p.c1 * tau
    phi = cfg.F_q * p.c1 * tau * tau / 2.0 - 1j * cfg.F_q * p.c2 * tau
    return IomCoeffs(f=f, g=g, phi=phi, tau=tau)


@dataclass(frozen=True)
class GcsLabel:
    """Complex eigenvalue z with its classical initial data."""

    z: complex
    q0: float
    p0: float

    @classmethod
    def from_z(cls, z: complex, p: IomParams) -> "GcsLabel":
        z = complex(z)
        q0 = 2.0 * (p.c2.conjugate() * z).real
        p0 = 2.0 * (p.c1.conjugate() * z).imag
        return cls(z=z, q0=q0, p0=p0)

    @classmethod
    def from_trajectory(cls, q0: float, p0: float, p: IomParams) -> "GcsLabel":
        # z = c1 q0 + i c2 p0 inverts the (q0, p0) projections exactly.
        return cls(z=p.c1 * q0 + 1j * p.c2 * p0, q0=q0, p0=p0)


@dataclass(frozen=True)
class CsParams:
    """CS family: initial coordinate spread sigma_q plus the label z."""

    sigma_q: float
    z: complex

    def __post_init__(self):
        if not (self.sigma_q > 0.0):
            raise ValueError("sigma_q must be positive")
        object.__setattr__(self, "z", complex(self.z))

    def to_iom(self) -> IomParams:
        return IomParams(1.0 / (2.0 * self.sigma_q), self.sigma_q)

    def label(self) -> GcsLabel:
        return GcsLabel.from_z(self.z, self.to_iom())


def _as_float_array(q):
    arr = np.asarray(q, dtype=float)
    return arr, arr.ndim == 0


def _scalar_or_array(out, scalar: bool):
    return out[()] if scalar else out


def eta_state(q, tau: float, eta: EtaLabel, cfg: ModelConfig):
    """Elementary nonstationary solution with initial momentum eta.

    Modulus is exactly (2 pi)^(-1/4); the full momentum at time tau is
    eta + F_q tau.
    """
    arr, scalar = _as_float_array(q)
    e = eta.eta
    F = cfg.F_q
    phase = -0.5 * ((e * tau - 2.0 * arr) * (e + tau * F) + F * F * tau ** 3 / 3.0)
    out = ETA_PREFACTOR * np.exp(1j * phase)
    return _scalar_or_array(out, scalar)


def eta_superposition(
    grid: Grid1D,
    tau: float,
    C: Callable[[np.ndarray], np.ndarray],
    eta_window: tuple[float, float],
    cfg: ModelConfig,
    tol: float = 1e-8,
    max_nodes: int = 4096,
) -> WaveField:
    """Node-wise quadrature of int C(eta) chi(q, tau | eta) d(eta).

    Gauss-Legendre order is doubled until two successive answers agree to
    tol at every node; failure to converge is flagged on the field.
    """
    lo, hi = eta_window
    if not lo < hi:
        raise ValueError("eta_window must be an increasing pair")
    q = grid.nodes()[:, None]
    F = cfg.F_q

    def evaluate(n: int) -> np.ndarray:
        nodes, weights = gauss_legendre(n, lo, hi)
        eta = nodes[None, :]
        phase = -0.5 * (
            (eta * tau - 2.0 * q) * (eta + tau * F) + F * F * tau ** 3 / 3.0
        )
        coeff = weights * np.asarray(C(nodes), dtype=complex)
        return (ETA_PREFACTOR * np.exp(1j * phase)) @ coeff

    n = 128
    prev = evaluate(n)
    converged = False
    while n < max_nodes:
        n *= 2
        curr = evaluate(n)
        if np.max(np.abs(curr - prev)) < tol:
            converged = True
            prev = curr
            break
        prev = curr
    return WaveField(grid, tau, prev, converged=converged)


def q_epsilon(eta, eps: EnergyLabel, cfg: ModelConfig):
    """Momentum-space profile mapping the eta family onto stationary states."""
    if cfg.F_q == 0.0:
        raise ValueError("q_epsilon is undefined for F_q = 0")
    arr, scalar = _as_float_array(eta)
    F = cfg.F_q
    pref = (TWO_PI * F * F) ** -0.25
    out = pref * np.exp(
        (0.5j / F) * (arr ** 3 / 3.0 - 2.0 * eps.epsilon * arr)
    )
    return _scalar_or_array(out, scalar)


def stationary_state(q, eps: EnergyLabel, cfg: ModelConfig):
    """Airy stationary state 2^(1/3) F_q^(-1/6) Ai(-xi), delta-normalized in energy."""
    if cfg.F_q <= 0.0:
        raise ValueError("stationary_state requires F_q > 0")
    xi = eps.xi(q, cfg)
    pref = 2.0 ** (1.0 / 3.0) * cfg.F_q ** (-1.0 / 6.0)
    return pref * numerics.airy_ai(-xi)


class TransformResult(NamedTuple):
    value: complex
    error: float
    converged: bool


def _oscillatory_nodes(eta_max: float, rate: Callable[[np.ndarray], np.ndarray]):
    """Panel Gauss-Legendre nodes for exp(i phase(eta)) with |phase'| <= rate."""
    probe = np.linspace(0.0, eta_max, 2049)
    r = rate(probe)
    cumulative = np.concatenate(
        ([0.0], np.cumsum(0.5 * (r[1:] + r[:-1]) * np.diff(probe)))
    )
    total = cumulative[-1]
    # Two oscillation periods per panel, 24-point rule per panel.
    n_panels = max(2, int(total / (4.0 * math.pi)) + 1)
    targets = np.linspace(0.0, total, n_panels + 1)
    edges = np.interp(targets, cumulative, probe)
    x, w = numerics._leggauss(24)
    mids = 0.5 * (edges[1:] + edges[:-1])
    halves = 0.5 * np.diff(edges)
    nodes = (mids[:, None] + halves[:, None] * x[None, :]).ravel()
    weights = (halves[:, None] * w[None, :]).ravel()
    nodes = np.concatenate((-nodes[::-1], nodes))
    weights = np.concatenate((weights[::-1], weights))
    return nodes, weights


def stationary_via_transform(
    q: float,
    tau: float,
    eps: EnergyLabel,
    cfg: ModelConfig,
    damping: float = 0.3,
    levels: int = 6,
    tol: float = 1e-4,
) -> TransformResult:
    """Stationary state rebuilt from the eta family by oscillatory quadrature.

    The conditionally convergent integral over eta is regularized with a
    Gaussian factor exp(-d eta^2) at d = damping / 2^k, k = 0..levels-1, and
    extrapolated to d -> 0 by a Neville table.  In the limit the result
    equals stationary_state(q, eps) * exp(-i eps tau).
    """
    if cfg.F_q <= 0.0:
        raise ValueError("transform requires F_q > 0")
    if not (damping > 0.0):
        raise ValueError("damping must be positive")
    F = cfg.F_q
    lin = q - F * tau * tau / 2.0 + eps.epsilon / F
    const_phase = q * F * tau - F * F * tau ** 3 / 6.0
    pref = (TWO_PI) ** -0.75 * (TWO_PI * F * F) ** -0.25

    def value_at(d: float) -> complex:
        eta_max = math.sqrt(41.5 / d)
        rate = lambda e: e * e / (2.0 * F) + abs(tau) * e + abs(lin) + 1.0
        nodes, weights = _oscillatory_nodes(eta_max, rate)
        phase = (
            -nodes ** 3 / (6.0 * F)
            - 0.5 * tau * nodes ** 2
            + lin * nodes
            + const_phase
        )
        integrand = np.exp(1j * phase - d * nodes * nodes)
        return pref * complex(np.dot(weights, integrand))

    ds = [damping / 2.0 ** k for k in range(levels)]
    table = [value_at(d) for d in ds]
    # Neville extrapolation to d = 0; the error estimate is the change of the
    # top entry when the final order is added.
    err = math.inf
    prev_top = table[0]
    for order in range(1, levels):
        for i in range(levels - order):
            table[i] = table[i + 1] + (table[i + 1] - table[i]) * ds[i + order] / (
                ds[i] - ds[i + order]
            )
        err = abs(table[0] - prev_top)
        prev_top = table[0]
    return TransformResult(table[0], err, err <= tol)


def _gcs_raw(q, tau: float, z: complex, p: IomParams, cfg: ModelConfig):
    arr, scalar = _as_float_array(q)
    F = cfg.F_q
    c1, c2 = p.c1, p.c2
    q0 = 2.0 * (c2.conjugate() * z).real
    p0 = 2.0 * (c1.conjugate() * z).imag
    g = c2 + 1j * c1 * tau
    q_t = q0 + p0 * tau + F * tau * tau / 2.0
    p_t = p0 + F * tau
    # Principal branch: (|c2|/c2) g(tau) crosses the real axis only at tau=0,
    # on the positive side, so the principal square root is continuous in tau.
    pref = 1.0 / np.sqrt(math.sqrt(TWO_PI) * (abs(c2) / c2) * g)
    exponent = (
        1j * (p_t * arr - 0.5 * p0 * p0 * tau)
        - (c1 / g) * (arr - q_t) ** 2 / 2.0
        - 0.5j * F * (F * tau / 3.0 + p0) * tau * tau
    )
    out = pref * np.exp(exponent)
    return _scalar_or_array(out, scalar)


def gcs_wavefunction(q, tau: float, label: GcsLabel, p: IomParams, cfg: ModelConfig):
    """Normalized GCS, the eigenfunction of the integral of motion with eigenvalue z."""
    q0 = 2.0 * (p.c2.conjugate() * label.z).real
    p0 = 2.0 * (p.c1.conjugate() * label.z).imag
    if abs(q0 - label.q0) > LABEL_CONSISTENCY_TOL or abs(p0 - label.p0) > LABEL_CONSISTENCY_TOL:
        raise ValueError("GcsLabel is inconsistent with the given IomParams")
    return _gcs_raw(q, tau, label.z, p, cfg)


def cs_wavefunction(q, tau: float, cs: CsParams, cfg: ModelConfig):
    """CS closed form; equal to the GCS with c1 = 1/(2 sigma_q), c2 = sigma_q."""
    arr, scalar = _as_float_array(q)
    F = cfg.F_q
    s = cs.sigma_q
    q0 = 2.0 * s * cs.z.real
    p0 = cs.z.imag / s
    q_t = q0 + p0 * tau + F * tau * tau / 2.0
    p_t = p0 + F * tau
    pref = 1.0 / np.sqrt((s + 1j * tau / (2.0 * s)) * math.sqrt(TWO_PI))
    exponent = (
        1j * (p_t * arr - 0.5 * p0 * p0 * tau)
        - (arr - q_t) ** 2 / (4.0 * (s * s + 0.5j * tau))
        - 0.5j * F * (F * tau / 3.0 + p0) * tau * tau
    )
    out = pref * np.exp(exponent)
    return _scalar_or_array(out, scalar)


def fock_wavefunction(n: int, q, tau: float, p: IomParams, cfg: ModelConfig):
    """Coordinate representation <q | n, tau> of the moving Fock tower.

    Uses the exact normalized recurrence
        R_{n+1} = ((u/g) R_n - sqrt(n) (g*/g) R_{n-1}) / sqrt(n+1),
    u = q - F_q tau^2/2, which follows from the creation-operator polynomial
    recurrence via g P_n' = n P_{n-1}; no numeric differentiation involved.
    """
    if not 0 <= n <= FOCK_N_MAX:
        raise ValueError(f"n must lie in [0, {FOCK_N_MAX}]")
    arr, scalar = _as_float_array(q)
    g = iom_coefficients(p, tau, cfg).g
    u = arr - cfg.F_q * tau * tau / 2.0
    r_prev = np.asarray(_gcs_raw(arr, tau, 0.0, p, cfg), dtype=complex)
    if n == 0:
        return _scalar_or_array(r_prev, scalar)
    ratio = np.conj(g) / g
    r_curr = (u / g) * r_prev
    for k in range(1, n):
        r_next = ((u / g) * r_curr - math.sqrt(k) * ratio * r_prev) / math.sqrt(k + 1)
        r_prev, r_curr = r_curr, r_next
    return _scalar_or_array(r_curr, scalar)


def displaced_vacuum(q, tau: float, label: GcsLabel, p: IomParams, cfg: ModelConfig):
    """Displacement-operator form of the GCS; differs from it by a phase only."""
    phase = cmath.exp(-0.5j * label.q0 * label.p0)
    return phase * gcs_wavefunction(q, tau, label, p, cfg)


def gcs_overlap(z1: complex, z2: complex) -> complex:
    """Overlap of two displaced-vacuum states, exp(z1* z2 - (|z1|^2 + |z2|^2)/2)."""
    z1 = complex(z1)
    z2 = complex(z2)
    return cmath.exp(z1.conjugate() * z2 - 0.5 * (abs(z1) ** 2 + abs(z2) ** 2))


def eta_family_gram(
    C1: Callable,
    C2: Callable,
    eta_window: tuple[float, float],
    tol: float = 1e-10,
) -> complex:
    """Label-space inner product sqrt(2 pi) int C1*(eta) C2(eta) d(eta)."""
    value, _, _ = numerics.integrate_adaptive(
        lambda e: np.conj(C1(e)) * C2(e), eta_window[0], eta_window[1], tol
    )
    return ETA_GRAM_CONSTANT * value


def lowering_matrix(dim: int) -> np.ndarray:
    """Truncated matrix of a ladder lowering operator in its own Fock basis."""
    if dim < 1:
        raise ValueError("dim must be positive")
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def hamiltonian_ladder_form(dim: int, cfg: ModelConfig) -> np.ndarray:
    """H_q assembled from products of truncated ladder matrices a, a^dag."""
    a = lowering_matrix(dim)
    ad = a.T.copy()
    quad = 0.25 * (ad @ a + a @ ad - ad @ ad - a @ a)
    return quad - cfg.F_q / math.sqrt(2.0) * (a + ad)


def hamiltonian_direct_form(dim: int, cfg: ModelConfig) -> np.ndarray:
    """H_q = p^2/2 - F_q q from its exact matrix elements in the number basis."""
    H = np.zeros((dim, dim))
    n = np.arange(dim)
    H[n, n] = (2.0 * n + 1.0) / 4.0
    m = np.arange(dim - 2)
    off2 = -np.sqrt((m + 1.0) * (m + 2.0)) / 4.0
    H[m, m + 2] = off2
    H[m + 2, m] = off2
    k = np.arange(dim - 1)
    off1 = -cfg.F_q * np.sqrt(k + 1.0) / math.sqrt(2.0)
    H[k, k + 1] += off1
    H[k + 1, k] += off1
    return H
