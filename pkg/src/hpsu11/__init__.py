"""Photon states of the Holstein-Primakoff SU(1,1) realization.

Closed-form photon statistics, antinormally ordered phase moments and
number-phase uncertainty functionals for SU(1,1) coherent states,
Barut-Girardello states and the two philophase families, with a
truncated-Fock brute-force oracle to check them against.
"""
from .contraction import ContractionReport, contraction_report
from .phase import PhaseMoments, PhaseProfile, m_coefficients, phase_moments, q_theta
from .states import (
    CutoffError,
    Family,
    FockAmplitudes,
    InvalidStateError,
    StateSpec,
    amplitudes,
    coefficients,
    overlap,
    theta_function,
)
from .stats import PhotonStats, asymptotic_g2, photon_pdf, photon_stats
from .uncertainty import (
    DegenerateError,
    UncertaintyReport,
    r_functions,
    sigma_intelligence,
    u_function,
    uncertainty_report,
    v_function,
)

__version__ = "0.1.0"

__all__ = [
    "ContractionReport",
    "contraction_report",
    "PhaseMoments",
    "PhaseProfile",
    "m_coefficients",
    "phase_moments",
    "q_theta",
    "CutoffError",
    "Family",
    "FockAmplitudes",
    "InvalidStateError",
    "StateSpec",
    "amplitudes",
    "coefficients",
    "overlap",
    "theta_function",
    "PhotonStats",
    "asymptotic_g2",
    "photon_pdf",
    "photon_stats",
    "DegenerateError",
    "UncertaintyReport",
    "r_functions",
    "sigma_intelligence",
    "u_function",
    "uncertainty_report",
    "v_function",
]
