"""Analytic quantum states of a particle in a uniform force field.

Stationary Airy states, the elementary nonstationary eta family,
generalized coherent states and coherent states, together with
numerical verification machinery (quadrature oracles, Crank-Nicolson
propagation, named validation suites) and a small CLI.
"""

__version__ = "0.1.0"

from .numerics import (
    Grid1D,
    QuadratureResult,
    WaveField,
    airy_ai,
    airy_ai_quadrature_oracle,
    central_second_derivative,
    grid_inner_product,
    integrate_adaptive,
)
from .observables import (
    ArrivalResult,
    MomentSet,
    PacketGeometry,
    SemiclassReport,
    UnitsMap,
    analytic_moments,
    arrival_analysis,
    classical_trajectory,
    density,
    dimensionalize,
    heisenberg_product,
    label_convert,
    label_invert,
    numeric_moments,
    packet_geometry,
    semiclassicality,
    wigner_probe,
)
from .propagator import (
    PropagationResult,
    PropagatorConfig,
    propagate,
    reference_error,
)
from .states import (
    CsParams,
    EnergyLabel,
    EtaLabel,
    GcsLabel,
    IomCoeffs,
    IomParams,
    ModelConfig,
    TransformResult,
    cs_wavefunction,
    displaced_vacuum,
    eta_state,
    eta_superposition,
    fock_wavefunction,
    gcs_overlap,
    gcs_wavefunction,
    iom_coefficients,
    q_epsilon,
    stationary_state,
    stationary_via_transform,
)
from .validation import SUITES, CheckResult, SuiteReport, run_suite

__all__ = [
    "Grid1D",
    "QuadratureResult",
    "WaveField",
    "airy_ai",
    "airy_ai_quadrature_oracle",
    "central_second_derivative",
    "grid_inner_product",
    "integrate_adaptive",
    "ArrivalResult",
    "MomentSet",
    "PacketGeometry",
    "SemiclassReport",
    "UnitsMap",
    "analytic_moments",
    "arrival_analysis",
    "classical_trajectory",
    "density",
    "dimensionalize",
    "heisenberg_product",
    "label_convert",
    "label_invert",
    "numeric_moments",
    "packet_geometry",
    "semiclassicality",
    "wigner_probe",
    "PropagationResult",
    "PropagatorConfig",
    "propagate",
    "reference_error",
    "CsParams",
    "EnergyLabel",
    "EtaLabel",
    "GcsLabel",
    "IomCoeffs",
    "IomParams",
    "ModelConfig",
    "TransformResult",
    "cs_wavefunction",
    "displaced_vacuum",
    "eta_state",
    "eta_superposition",
    "fock_wavefunction",
    "gcs_overlap",
    "gcs_wavefunction",
    "iom_coefficients",
    "q_epsilon",
    "stationary_state",
    "stationary_via_transform",
    "SUITES",
    "CheckResult",
    "SuiteReport",
    "run_suite",
]
