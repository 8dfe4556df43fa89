"""Trajectories, moments, uncertainty products, packet geometry, arrival
times, a windowed phase-space probe, unit conversion, and semiclassicality
diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import numerics, states
from .numerics import WaveField, first_derivative, simpson_weights
from .states import CsParams, EtaLabel, GcsLabel, IomParams, ModelConfig

TWO_PI = 2.0 * math.pi
FWHM_FACTOR = math.sqrt(8.0 * math.log(2.0))
GEOMETRY_PRODUCT = math.sqrt(4.0 * math.log(2.0) / math.pi)


@dataclass(frozen=True)
class MomentSet:
    """First and second moments of a state at a fixed time.

    rs_tolerance is the slack allowed on the Robertson-Schrodinger floor;
    quadrature-built moment sets carry small discretization error and use a
    looser value than analytically exact ones.
    """

    mean_q: float
    mean_p: float
    sigma_q: float
    sigma_p: float
    sigma_qp: float
    tau: float
    rs_tolerance: float = 1e-12

    def __post_init__(self):
        if not (self.sigma_q > 0.0 and self.sigma_p > 0.0):
            raise ValueError("standard deviations must be positive")
        if self.rs_product() < 0.25 - self.rs_tolerance:
            raise ValueError("moments violate the Robertson-Schrodinger bound")

    def rs_product(self) -> float:
        return self.sigma_q ** 2 * self.sigma_p ** 2 - self.sigma_qp ** 2


@dataclass(frozen=True)
class PacketGeometry:
    """Peak height and full width at half maximum of a Gaussian density."""

    height_L: float
    half_width: float

    def __post_init__(self):
        if abs(self.half_width * self.height_L - GEOMETRY_PRODUCT) > 1e-12:
            raise ValueError("half_width * height_L must equal sqrt(4 ln2 / pi)")


@dataclass(frozen=True)
class UnitsMap:
    """Dimensional <-> dimensionless conversion data (m, hbar, l, F_x)."""

    m: float
    hbar: float
    l: float
    F_x: float

    def __post_init__(self):
        if not (self.m > 0.0 and self.hbar > 0.0 and self.l > 0.0):
            raise ValueError("m, hbar and l must be positive")
        if not math.isfinite(self.F_x):
            raise ValueError("F_x must be finite")

    def F_q(self) -> float:
        return self.m * self.l ** 3 * self.F_x / self.hbar ** 2

    def model_config(self) -> ModelConfig:
        return ModelConfig(self.F_q())

    def q_from_x(self, x):
        return np.asarray(x) / self.l

    def x_from_q(self, q):
        return np.asarray(q) * self.l

    def tau_from_t(self, t):
        return self.hbar * np.asarray(t) / (self.m * self.l ** 2)

    def t_from_tau(self, tau):
        return self.m * self.l ** 2 * np.asarray(tau) / self.hbar

    def p_q_from_p_x(self, p_x):
        return self.l * np.asarray(p_x) / self.hbar

    def p_x_from_p_q(self, p_q):
        return self.hbar * np.asarray(p_q) / self.l


@dataclass(frozen=True)
class SemiclassReport:
    """Spreading-versus-travel comparison for a dimensional CS."""

    lhs: float
    rhs: float
    ratio: float
    lambda_: float
    lambda_form_lhs: float
    verdict: bool


class ArrivalResult(NamedTuple):
    tau_q: float
    omega_q: float
    omega_free: float


def classical_trajectory(tau, q0: float, p0: float, cfg: ModelConfig):
    """Uniformly accelerated classical motion (q(tau), p(tau))."""
    t = np.asarray(tau, dtype=float)
    q = q0 + p0 * t + cfg.F_q * t * t / 2.0
    p = p0 + cfg.F_q * t
    if t.ndim == 0:
        return float(q), float(p)
    return q, p


def label_convert(q0: float, p0: float, sigma_q: float) -> complex:
    """CS label z = q0 / (2 sigma_q) + i sigma_q p0."""
    if not sigma_q > 0.0:
        raise ValueError("sigma_q must be positive")
    return complex(q0 / (2.0 * sigma_q), sigma_q * p0)


def label_invert(z: complex, sigma_q: float) -> tuple[float, float]:
    """Inverse of label_convert: recovers (q0, p0) exactly."""
    if not sigma_q > 0.0:
        raise ValueError("sigma_q must be positive")
    z = complex(z)
    return 2.0 * sigma_q * z.real, z.imag / sigma_q


def sigma_qp_analytic(tau: float, p: IomParams) -> float:
    """Symmetrized covariance i[1/2 - g(tau) f*]; imaginary residue checked."""
    g = p.c2 + 1j * p.c1 * tau
    value = 1j * (0.5 - g * p.c1.conjugate())
    if abs(value.imag) > 1e-12:
        raise ValueError("sigma_qp came out non-real; invalid IomParams")
    return value.real


def analytic_moments(
    tau: float, p: IomParams, label: GcsLabel, cfg: ModelConfig
) -> MomentSet:
    """Closed-form GCS moments: sigma_q = |g|, sigma_p = |c1|, RS floor saturated."""
    g = p.c2 + 1j * p.c1 * tau
    mean_q, mean_p = classical_trajectory(tau, label.q0, label.p0, cfg)
    return MomentSet(
        mean_q=mean_q,
        mean_p=mean_p,
        sigma_q=abs(g),
        sigma_p=abs(p.c1),
        sigma_qp=sigma_qp_analytic(tau, p),
        tau=tau,
    )


def numeric_moments(field: WaveField, rs_tolerance: float = 1e-5) -> MomentSet:
    """Grid-quadrature moments; the independent oracle for analytic_moments.

    Coordinate moments use Simpson weights; momentum moments use a
    fourth-order derivative stencil.
    """
    w = field.grid.weights()
    q = field.grid.nodes()
    psi = field.values
    rho = np.abs(psi) ** 2
    norm = float(np.dot(w, rho))
    if abs(norm - 1.0) > 1e-6:
        raise ValueError("numeric_moments requires a normalized field")
    mean_q = float(np.dot(w, q * rho))
    var_q = float(np.dot(w, (q - mean_q) ** 2 * rho))
    dpsi = first_derivative(psi, field.grid.h)
    mean_p = float(np.dot(w, (np.conj(psi) * dpsi)).imag)
    p2 = float(np.dot(w, np.abs(dpsi) ** 2))
    var_p = p2 - mean_p ** 2
    qp = float(np.dot(w, np.conj(psi) * q * dpsi).imag)
    sigma_qp = qp - mean_q * mean_p
    return MomentSet(
        mean_q=mean_q,
        mean_p=mean_p,
        sigma_q=math.sqrt(var_q),
        sigma_p=math.sqrt(var_p),
        sigma_qp=sigma_qp,
        tau=field.tau,
        rs_tolerance=rs_tolerance,
    )


def heisenberg_product(tau: float, p: IomParams) -> float:
    """sigma_q(tau) sigma_p(tau) = sqrt(1/4 + [Im(c1* c2) + |c1|^2 tau]^2) >= 1/2."""
    s = (p.c1.conjugate() * p.c2).imag + abs(p.c1) ** 2 * tau
    return math.sqrt(0.25 + s * s)


def density(q, tau: float, cs: CsParams, cfg: ModelConfig):
    """Gaussian probability density of a CS: mean q(tau), spread sigma_q(tau)."""
    arr = np.asarray(q, dtype=float)
    label = cs.label()
    q_t, _ = classical_trajectory(tau, label.q0, label.p0, cfg)
    s_t = math.hypot(cs.sigma_q, tau / (2.0 * cs.sigma_q))
    out = np.exp(-((arr - q_t) ** 2) / (2.0 * s_t * s_t)) / (math.sqrt(TWO_PI) * s_t)
    return float(out) if arr.ndim == 0 else out


def packet_geometry(sigma: float) -> PacketGeometry:
    """Height L = 1/(sqrt(2 pi) sigma) and FWHM sqrt(8 ln2) sigma of the packet."""
    if not sigma > 0.0:
        raise ValueError("sigma must be positive")
    return PacketGeometry(
        height_L=1.0 / (math.sqrt(TWO_PI) * sigma),
        half_width=FWHM_FACTOR * sigma,
    )


def arrival_analysis(
    q: float, q0: float, p0: float, sigma: float, cfg: ModelConfig
) -> ArrivalResult:
    """Arrival time at q > q0 and the packet spread there, forced vs free.

    Restricted to F_q >= 0 and p0 > 0; the spread of the forced packet at q
    is strictly below the free-particle spread whenever F_q > 0.
    """
    if not q > q0:
        raise ValueError("arrival analysis requires q > q0")
    if not p0 > 0.0:
        raise ValueError("arrival analysis requires p0 > 0")
    if cfg.F_q < 0.0:
        raise ValueError("arrival analysis requires F_q >= 0")
    if not sigma > 0.0:
        raise ValueError("sigma must be positive")
    F = cfg.F_q
    if F > 0.0:
        tau_q = math.sqrt((p0 / F) ** 2 + 2.0 * (q - q0) / F) - p0 / F
    else:
        tau_q = (q - q0) / p0
    tau_free = (q - q0) / p0
    omega_q = math.hypot(sigma, tau_q / (2.0 * sigma))
    omega_free = math.hypot(sigma, tau_free / (2.0 * sigma))
    return ArrivalResult(tau_q, omega_q, omega_free)


def arrival_large_force_expansion(q: float, q0: float, sigma: float, cfg: ModelConfig) -> float:
    """Leading large-force approximation sigma + (q - q0)/(4 F_q sigma^3)."""
    if cfg.F_q <= 0.0:
        raise ValueError("expansion requires F_q > 0")
    return sigma + (q - q0) / (4.0 * cfg.F_q * sigma ** 3)


def wigner_probe(
    eta: EtaLabel,
    p: float,
    q: float,
    tau: float,
    window_sigma: float,
    cfg: ModelConfig,
) -> float:
    """Windowed phase-space transform of an eta state.

    Computes (1/2 pi) int conj(chi(q - r/2)) chi(q + r/2) e^{-i p r}
    e^{-r^2/(2 w^2)} dr by quadrature.  The result is a Gaussian in p of
    width 1/w centered at eta + F_q tau, independent of q; as w grows it
    concentrates onto the sharp momentum ridge of the family.
    """
    if not window_sigma > 0.0:
        raise ValueError("window_sigma must be positive")
    w = window_sigma
    r_max = w * math.sqrt(2.0 * 41.5)
    rate = abs(eta.eta + cfg.F_q * tau - p) + 1.0
    n = max(2001, int(16 * (2.0 * r_max * rate) / TWO_PI) | 1)
    r = np.linspace(-r_max, r_max, n)
    left = states.eta_state(q - r / 2.0, tau, eta, cfg)
    right = states.eta_state(q + r / 2.0, tau, eta, cfg)
    integrand = (
        np.conj(left) * right * np.exp(-1j * p * r) * np.exp(-r * r / (2.0 * w * w))
    )
    weights = simpson_weights(n, r[1] - r[0])
    value = complex(np.dot(weights, integrand)) / TWO_PI
    return value.real


def dimensionalize(cs: CsParams, units: UnitsMap, x, t):
    """Dimensional wave function Psi(x, t) = l^{-1/2} Phi(x/l, hbar t/(m l^2))."""
    q = units.q_from_x(x)
    tau = float(units.tau_from_t(t))
    cfg = units.model_config()
    psi = states.cs_wavefunction(q, tau, cs, cfg) / math.sqrt(units.l)
    rho = np.abs(psi) ** 2
    if np.asarray(x).ndim == 0:
        return complex(psi), float(rho)
    return psi, rho


def semiclassicality(
    t: float,
    p0x: float,
    sigma_x: float,
    units: UnitsMap,
    threshold: float = 0.01,
) -> SemiclassReport:
    """Quantum-spreading vs distance-traveled comparison for a dimensional CS.

    lhs = (hbar t / 2 sigma_x)^2, rhs = (p0x t + F_x t^2 / 2)^2; the verdict
    is lhs/rhs < threshold.  Also reports the wavelength lambda = 2 pi hbar
    / p0x and the equivalent wavelength-form left side, to be compared with
    4 pi sigma_x.
    """
    if not t > 0.0:
        raise ValueError("t must be positive")
    if not sigma_x > 0.0:
        raise ValueError("sigma_x must be positive")
    hbar = units.hbar
    lhs = (hbar * t / (2.0 * sigma_x)) ** 2
    rhs = (p0x * t + units.F_x * t * t / 2.0) ** 2
    ratio = lhs / rhs if rhs > 0.0 else math.inf
    lam = TWO_PI * hbar / p0x if p0x != 0.0 else math.inf
    denom = abs(1.0 + (lam / (TWO_PI * hbar)) * units.F_x * t / 2.0)
    lam_lhs = lam / denom if denom > 0.0 else math.inf
    return SemiclassReport(
        lhs=lhs,
        rhs=rhs,
        ratio=ratio,
        lambda_=lam,
        lambda_form_lhs=lam_lhs,
        verdict=ratio < threshold,
    )
