"""Large-sigma contraction of plus philophase states to Glauber coherent states.

Along ``|z| = 2 sigma`` the state ``|z, sigma>_+`` approaches the coherent
state ``|alpha>`` with ``alpha = z / (2 sqrt(sigma)) = sqrt(sigma)``: the
mean and variance of the photon number both approach ``sigma`` and ``g2``
approaches 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import StateSpec, amplitudes
from .stats import photon_stats

__all__ = ["ContractionReport", "contraction_report", "FIDELITY_TAIL"]

# probability tail for the fidelity overlap; the overlap then errs by about its square root
FIDELITY_TAIL = 1e-24


@dataclass(frozen=True)
class ContractionReport:
    """Distance of ``|2 sigma, sigma>_+`` from its Glauber limit.

    Attributes
    ----------
    sigma : int
    abs_z : float
        ``2 sigma``.
    mean_ratio : float
        ``<n> / sigma``.
    var_ratio : float
        ``var(n) / sigma``.
    g2_gap : float
        ``|g2 - 1|``.
    fidelity : float
        ``|<alpha|z, sigma>_+|^2`` with ``alpha = sqrt(sigma)``.
    """

    sigma: int
    abs_z: float
    mean_ratio: float
    var_ratio: float
    g2_gap: float
    fidelity: float


def contraction_report(sigma: int) -> ContractionReport:
    """Evaluate the contraction at ``z = 2 sigma`` (real, without loss of generality).

    Raises
    ------
    ValueError
        For ``sigma < 1``.
    """
    if int(sigma) != sigma or sigma < 1:
        raise ValueError(f"sigma must be a positive integer, got {sigma!r}")
    sigma = int(sigma)
    abs_z = 2.0 * sigma
    spec = StateSpec.pplus(abs_z, sigma)
    stats = photon_stats(spec)
    plus = amplitudes(spec, FIDELITY_TAIL)
    glauber = amplitudes(StateSpec.glauber(math.sqrt(sigma)), FIDELITY_TAIL)
    top = max(plus.cutoff, glauber.cutoff)
    fidelity = abs(np.vdot(glauber.padded(top), plus.padded(top))) ** 2
    return ContractionReport(
        sigma=sigma,
        abs_z=abs_z,
        mean_ratio=stats.mean_n / sigma,
        var_ratio=stats.variance / sigma,
        g2_gap=abs(stats.g2 - 1.0),
        fidelity=float(fidelity),
    )
