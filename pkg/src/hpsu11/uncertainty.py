"""Number-phase uncertainty functionals.

Each functional divides a product of variances by the square of a
commutator expectation, so each one is bounded below by 1/4:

* ``V = var_n * var_phi / (1 - 2 pi Q(theta0))**2``;
* ``R1 = var_n * var_cos / <S>**2`` and ``R2 = var_n * var_sin / <C>**2``;
* ``U = var_n * (1 - M_1**2) / M_1**2``, independent of the mean phase.

At the vacuum the denominators vanish together with the numerators; such
inputs raise :class:`DegenerateError` instead of returning ``0/0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import specialfn as sf
from .phase import PhaseMoments, phase_moments
from .states import Family, StateSpec
from .stats import PhotonStats, photon_stats

__all__ = [
    "UncertaintyReport",
    "DegenerateError",
    "DEGENERACY_THRESHOLD",
    "v_from_moments",
    "r_from_moments",
    "u_from_moments",
    "v_function",
    "r_functions",
    "u_function",
    "sigma_intelligence",
    "uncertainty_report",
]

DEGENERACY_THRESHOLD = 1e-8


class DegenerateError(ArithmeticError):
    """A functional's denominator is below :data:`DEGENERACY_THRESHOLD`."""


@dataclass(frozen=True)
class UncertaintyReport:
    """All uncertainty functionals of one state.

    Components whose denominator is degenerate are ``None``.
    """

    v: float | None
    r1: float | None
    r2: float | None
    u: float | None
    q_at_theta0: float
    var_n: float
    var_phi: float


def v_from_moments(stats: PhotonStats, moments: PhaseMoments) -> float:
    gap = moments.boundary_gap
    if abs(gap) < DEGENERACY_THRESHOLD:
        raise DegenerateError(f"1 - 2 pi Q(theta0) = {gap:.3g} is below the degeneracy threshold")
    return stats.variance * moments.var_phi / (gap * gap)


def _r_component(var_n: float, var_same: float, mean_other: float) -> float | None:
    # the second functional is this one with cos and sin interchanged
    if abs(mean_other) < DEGENERACY_THRESHOLD:
        return None
    return var_n * var_same / (mean_other * mean_other)


def r_from_moments(stats: PhotonStats, moments: PhaseMoments) -> tuple[float | None, float | None]:
    r1 = _r_component(stats.variance, moments.var_cos, moments.mean_sin)
    r2 = _r_component(stats.variance, moments.var_sin, moments.mean_cos)
    return r1, r2


def u_from_moments(stats: PhotonStats, moments: PhaseMoments) -> float:
    m1 = moments.m1
    if m1 < DEGENERACY_THRESHOLD:
        raise DegenerateError(f"M_1 = {m1:.3g} is below the degeneracy threshold")
    return stats.variance * (1.0 - m1) * (1.0 + m1) / (m1 * m1)


def v_function(spec: StateSpec, tol: float = 1e-10) -> float:
    """Number-phase uncertainty functional ``V``.

    Raises
    ------
    DegenerateError
        Near the vacuum, where ``1 - 2 pi Q(theta0)`` vanishes.
    """
    return v_from_moments(photon_stats(spec), phase_moments(spec, tol))


def r_functions(spec: StateSpec, tol: float = 1e-10) -> tuple[float | None, float | None]:
    """``(R1, R2)``; a component is ``None`` when ``<S>`` (resp. ``<C>``) vanishes."""
    return r_from_moments(photon_stats(spec), phase_moments(spec, tol))


def u_function(spec: StateSpec, tol: float = 1e-10) -> float:
    """Phase-independent functional ``U = var_n (1 - M_1^2) / M_1^2``.

    Raises
    ------
    DegenerateError
        When ``M_1`` vanishes.
    """
    return u_from_moments(photon_stats(spec), phase_moments(spec, tol))


def uncertainty_report(spec: StateSpec, tol: float = 1e-10) -> UncertaintyReport:
    stats = photon_stats(spec)
    moments = phase_moments(spec, tol)
    try:
        v = v_from_moments(stats, moments)
    except DegenerateError:
        v = None
    try:
        u = u_from_moments(stats, moments)
    except DegenerateError:
        u = None
    r1, r2 = r_from_moments(stats, moments)
    q0 = (1.0 - moments.boundary_gap) / (2.0 * math.pi)
    return UncertaintyReport(v, r1, r2, u, q0, stats.variance, moments.var_phi)


def sigma_intelligence(spec: StateSpec) -> tuple[float, float, float]:
    """Uncertainty triple for ``S1 = n - Re(z) C - Im(z) S`` and ``S2 = Re(z) S - Im(z) C``.

    Returns
    -------
    (var1, var2, half_commutator)
        Antinormally ordered variances of ``S1`` and ``S2`` and
        ``|<[S1, S2]>| / 2``.  The mixed number-phase term in ``var1`` uses
        the symmetrized product ``(n X + X n) / 2`` with
        ``X = Re(z) C + Im(z) S``.

    Raises
    ------
    ValueError
        For any family other than the minus philophase states.
    """
    if spec.family is not Family.PHILOPHASE_MINUS:
        raise ValueError("sigma_intelligence applies to the minus philophase family only")
    r = spec.abs_param
    if r == 0:
        return 0.0, 0.0, 0.0
    s = -spec.sigma
    stats = photon_stats(spec)
    moments = phase_moments(spec)
    m1, m2 = moments.m1, moments.m2
    # X = r cos(theta - phi), Y = r sin(theta - phi): only the relative angle enters
    var_x = r * r * (0.5 * (1.0 + m2) - m1 * m1)
    var_y = r * r * 0.5 * (1.0 - m2)
    mean_x = r * m1
    # <(nX + Xn)/2> = (r/2) sum_m (2m + 1) |C_m C_{m+1}|, summed in closed form
    log_i0 = sf.log_bessel_i(0, 2 * r)
    i1 = math.exp(sf.log_bessel_i(1, 2 * r) - log_i0)
    i2 = math.exp(sf.log_bessel_i(2, 2 * r) - log_i0)
    mean_nx = 0.5 * r * (2.0 * r * i2 + (2 * s + 1) * i1)
    cov = mean_nx - stats.mean_n * mean_x
    var1 = stats.variance + var_x - 2.0 * cov
    # <[S1, S2]> = i <X>
    return var1, var_y, 0.5 * abs(mean_x)
