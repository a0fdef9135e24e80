"""Photon-number statistics from closed forms.

All families have analytic first and second moments in terms of modified
Bessel functions (or their truncated tails for the plus philophase family).
Factorial moments ``<n(n-1)>`` are evaluated from positive-term expressions
wherever possible so that ``g2`` keeps full relative accuracy near the
vacuum, where ``<n^2>`` and ``<n>`` nearly cancel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specialfn as sf
from .states import Family, StateSpec, log_abs_coefficients

__all__ = [
    "PhotonStats",
    "photon_pdf",
    "photon_stats",
    "asymptotic_g2",
    "stats_from_moments",
    "pplus_tail_sum_moments",
    "QUANTUM_LIMIT",
    "CLASSICAL_LIMIT",
]

QUANTUM_LIMIT = "quantum_limit"
CLASSICAL_LIMIT = "classical_limit"

# beyond this ratio of term size to result, the truncated-sum plus-family moments
# have lost too many digits and the equivalent positive series is used instead
_CANCELLATION_LIMIT = 1e4


@dataclass(frozen=True)
class PhotonStats:
    """First two photon-number moments and the intensity correlation.

    ``g2`` is ``None`` when ``mean_n == 0`` (the vacuum), where it is
    undefined.
    """

    mean_n: float
    mean_n2: float
    variance: float
    g2: float | None

    @property
    def g2_defined(self) -> bool:
        return self.g2 is not None

    @property
    def relative_uncertainty(self) -> float:
        """``sqrt(variance) / mean_n``."""
        return math.sqrt(self.variance) / self.mean_n


def stats_from_moments(mean_n: float, factorial2: float, variance: float | None = None) -> PhotonStats:
    """Assemble :class:`PhotonStats` from ``<n>`` and ``<n(n-1)>``.

    ``variance`` may be supplied when a better-conditioned expression for
    it is available; otherwise it is ``<n(n-1)> + <n> - <n>**2``.
    """
    mean_n2 = factorial2 + mean_n
    if variance is None:
        variance = max(mean_n2 - mean_n * mean_n, 0.0)
    g2 = factorial2 / (mean_n * mean_n) if mean_n > 0 else None
    return PhotonStats(mean_n, mean_n2, variance, g2)


def photon_pdf(spec: StateSpec, n: int) -> float:
    """Probability of finding ``n`` photons, ``|C_n|**2``, from the closed form."""
    n = int(n)
    if n < 0:
        raise ValueError(f"photon number must be non-negative, got {n}")
    if spec.is_degenerate:
        return 1.0 if n == spec.lowest_level else 0.0
    return float(np.exp(2.0 * log_abs_coefficients(spec, np.array([n]))[0]))


def _pplus_tail_moments(r: float, sigma: int):
    # <n>, <n(n-1)> as positive series over j = n + sigma with weights
    # r^(2j)/(j!)^2, accumulated relative to the first term
    w = 1.0
    s0 = s1 = s2 = 0.0
    j = sigma
    while True:
        n = j - sigma
        s0 += w
        s1 += n * w
        s2 += n * (n - 1) * w
        j += 1
        w *= r * r / (j * j)
        n += 1
        # each sum gets its own relative test: s2 can be far below s0
        if r * r < 0.5 * j * j and n * n * w <= 1e-17 * min(s0, s1 or s0, s2 or s0):
            break
    return s1 / s0, s2 / s0


def pplus_tail_sum_moments(r: float, sigma: int) -> tuple[float, float]:
    """``(<n>, <n^2>)`` of the plus philophase state from the truncated-sum closed form.

    ``<n> = r T1/T0 - sigma`` and
    ``<n^2> = sigma^2 + r^2 - 2 sigma r T1/T0 + r^(2 sigma)/(T0 Gamma(sigma)^2)``,
    the last term being zero at ``sigma = 0``.
    """
    # T0 and T1 as log-domain tails so that large |z| does not overflow
    log_t0 = sf.log_bessel_tail(0, r, sigma)
    log_t1 = sf.log_bessel_tail(1, r, max(sigma - 1, 0))
    ratio = r * math.exp(log_t1 - log_t0)
    extra = 0.0
    if sigma > 0:
        extra = math.exp(2 * sigma * math.log(r) - log_t0 - 2.0 * math.lgamma(sigma))
    return ratio - sigma, sigma * sigma + r * r - 2.0 * sigma * ratio + extra


def _pplus_stats(r: float, sigma: int) -> PhotonStats:
    mean, mean2 = pplus_tail_sum_moments(r, sigma)
    scale = sigma * sigma + r * r + 2.0 * sigma * (mean + sigma)
    fact2 = mean2 - mean
    var = mean2 - mean * mean
    if min(abs(fact2), abs(var), mean) * _CANCELLATION_LIMIT < scale:
        # near the vacuum: same sums, rearranged into non-negative terms
        mean, fact2 = _pplus_tail_moments(r, sigma)
        return stats_from_moments(mean, fact2)
    return stats_from_moments(mean, fact2, var)


def photon_stats(spec: StateSpec) -> PhotonStats:
    """Mean, second moment, variance and ``g2`` from the family's closed form.

    Examples
    --------
    >>> photon_stats(StateSpec.su11cs("1/2", 0.5)).g2
    2.0
    """
    fam = spec.family
    r = spec.abs_param
    if spec.is_degenerate:
        s = spec.lowest_level
        return stats_from_moments(float(s), float(s * (s - 1)), 0.0)
    if fam is Family.SU11CS:
        two_k = spec.twice_k
        x = r * r
        mean = two_k * x / (1.0 - x)
        var = two_k * x / (1.0 - x) ** 2
        # <n(n-1)> = (1 + 1/2k) <n>^2 for the negative binomial
        fact2 = mean * mean * (1.0 + 1.0 / two_k)
        return PhotonStats(mean, var + mean * mean, var, fact2 / (mean * mean))
    if fam is Family.BG:
        nu = spec.twice_k - 1
        log_base = sf.log_bessel_i(nu, 2 * r)
        log_i1 = sf.log_bessel_i(nu + 1, 2 * r)
        log_i2 = sf.log_bessel_i(nu + 2, 2 * r)
        mean = r * math.exp(log_i1 - log_base)
        fact2 = r * r * math.exp(log_i2 - log_base)
        g2 = math.exp(log_i2 + log_base - 2.0 * log_i1)
        var = max(fact2 + mean - mean * mean, 0.0)
        return PhotonStats(mean, fact2 + mean, var, g2)
    if fam is Family.PHILOPHASE_MINUS:
        s = -spec.sigma
        log_i0 = sf.log_bessel_i(0, 2 * r)
        ratio = math.exp(sf.log_bessel_i(1, 2 * r) - log_i0)
        ratio2 = math.exp(sf.log_bessel_i(2, 2 * r) - log_i0)
        mean = r * ratio + s
        fact2 = r * r * ratio2 + 2.0 * s * r * ratio + s * (s - 1)
        # the variance does not depend on sigma: r^2 (1 - (I1/I0)^2)
        var = r * r * (1.0 - ratio) * (1.0 + ratio)
        return stats_from_moments(mean, fact2, var)
    if fam is Family.PHILOPHASE_PLUS:
        return _pplus_stats(r, spec.sigma)
    x = r * r
    return PhotonStats(x, x * x + x, x, 1.0)


def asymptotic_g2(spec: StateSpec, regime: str) -> float:
    """Limiting intensity correlation of a family.

    Parameters
    ----------
    spec : StateSpec
        Supplies ``k`` or ``sigma`` (quantum limit) or ``|z|`` (classical limit).
    regime : {"quantum_limit", "classical_limit"}
        ``quantum_limit`` is ``|z| -> 0``; ``classical_limit`` is the
        leading large-``|z|`` behaviour ``1 - 1/(2|z|)``.

    Raises
    ------
    ValueError
        For the SU(1,1) coherent and Glauber families, whose ``g2`` does
        not depend on the parameter, for an unknown regime, and for the
        classical limit at ``z = 0``.
    """
    fam = spec.family
    if fam in (Family.SU11CS, Family.GLAUBER):
        raise ValueError(f"no parameter limit of g2 for family {fam.value}: it is constant")
    if regime == QUANTUM_LIMIT:
        if fam is Family.BG:
            return spec.twice_k / (spec.twice_k + 1.0)
        if fam is Family.PHILOPHASE_MINUS:
            s = -spec.sigma
            # sigma = 0 is the k = 1/2 Barut-Girardello state
            return 0.5 if s == 0 else 1.0 - 1.0 / s
        sigma = spec.sigma
        return 2.0 * ((sigma + 1.0) / (sigma + 2.0)) ** 2
    if regime == CLASSICAL_LIMIT:
        r = spec.abs_param
        if r == 0:
            raise ValueError("classical limit needs |z| > 0")
        return 1.0 - 1.0 / (2.0 * r)
    raise ValueError(f"unknown regime {regime!r}; expected {QUANTUM_LIMIT!r} or {CLASSICAL_LIMIT!r}")
