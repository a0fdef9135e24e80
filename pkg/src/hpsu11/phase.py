"""Phase distribution and antinormally ordered phase moments.

For a pure state with amplitudes ``C_n = |C_n| exp(i n phi)`` (up to a
global phase) the phase distribution is

    Q(theta) = (1/2pi) [1 + 2 sum_{n>=1} M_n cos(n (theta - phi))],

with ``M_n = sum_m |C_m C_{m+n}|``.  Every antinormally ordered moment of
the phase-related operators follows from the ``M_n`` alone, which is what
this module computes.

These antinormal moments are expected to coincide with Pegg-Barnett
expectation values after the limit of infinite state-space dimension.  No
formulas for that limit are available here, so the equivalence is not
tested.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import spence

from . import specialfn as sf
from .states import Family, FockAmplitudes, StateSpec, amplitudes, log_abs_coefficients, max_cutoff, theta_function

__all__ = [
    "PhaseProfile",
    "PhaseMoments",
    "PhaseConditionError",
    "PhaseSeriesError",
    "m_coefficients",
    "profile_from_amplitudes",
    "q_theta",
    "phase_fourier",
    "phase_moments",
    "moments_from_profile",
    "fold_phase",
]

TWO_PI = 2.0 * math.pi
RANDOM_PHASE_VARIANCE = math.pi**2 / 3.0
# probability tail used when M_n come from amplitudes; M_n then err by about its square root
_PROFILE_TAIL = 1e-30


class PhaseConditionError(ValueError):
    """Amplitude phases are not of the form ``n * phi + const``."""


class PhaseSeriesError(RuntimeError):
    """The ``M_n`` series did not decay below tolerance within the ceiling."""


@dataclass(frozen=True)
class PhaseProfile:
    """Fourier data of a phase distribution.

    Attributes
    ----------
    m_coeffs : ndarray
        ``M_1 .. M_{n_max}`` (index 0 holds ``M_1``).
    mean_phase : float
        ``phi``, the phase around which ``Q`` is symmetric.
    n_max : int
    truncation_bound : float
        Size of the first dropped coefficient.
    """

    m_coeffs: np.ndarray
    mean_phase: float
    n_max: int
    truncation_bound: float

    def __post_init__(self):
        m = np.array(self.m_coeffs, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "m_coeffs", m)

    def m(self, n: int) -> float:
        """``M_n`` with ``M_0 = 1`` and zero beyond ``n_max``."""
        if n == 0:
            return 1.0
        return float(self.m_coeffs[n - 1]) if 1 <= n <= self.n_max else 0.0

    def q(self, theta) -> np.ndarray:
        """``Q(theta)`` summed from the cosine series."""
        theta = np.asarray(theta, dtype=float)
        flat = theta.reshape(-1) - self.mean_phase
        out = np.zeros_like(flat)
        n = np.arange(1, self.n_max + 1)
        for start in range(0, flat.size, 512):
            chunk = flat[start : start + 512]
            out[start : start + 512] = np.cos(np.outer(chunk, n)) @ self.m_coeffs
        return ((1.0 + 2.0 * out) / TWO_PI).reshape(theta.shape)


@dataclass(frozen=True)
class PhaseMoments:
    """Antinormally ordered phase, cosine and sine moments.

    ``boundary_gap`` is ``1 - 2 pi Q(theta0)``, the denominator of the
    number-phase uncertainty functional.
    """

    mean_phi: float
    var_phi: float
    mean_cos: float
    var_cos: float
    mean_sin: float
    var_sin: float
    theta0: float
    m1: float
    m2: float
    boundary_gap: float


def fold_phase(theta, theta0: float):
    """Map ``theta`` into the window ``[theta0, theta0 + 2 pi)``."""
    return theta0 + np.mod(np.asarray(theta, dtype=float) - theta0, TWO_PI)


def _stop_index(values: np.ndarray, tol: float) -> int | None:
    below = np.nonzero(values < tol)[0]
    return int(below[0]) if below.size else None


def _profile_from_series(values: np.ndarray, mean_phase: float, tol: float) -> PhaseProfile:
    # values[i] = M_{i+1}; cut at the first entry below tol
    stop = _stop_index(values, tol)
    if stop is None:
        raise PhaseSeriesError(f"M_n still above {tol:g} after {values.size} terms")
    return PhaseProfile(values[:stop], mean_phase, stop, float(values[stop]))


def _correlation(mags: np.ndarray) -> np.ndarray:
    # M_n = sum_m a_m a_{m+n} for n >= 1, direct (non-FFT) sums of positive terms
    full = np.correlate(mags, mags, mode="full")
    return full[mags.size :]


def profile_from_amplitudes(amps: FockAmplitudes, tol: float = 1e-15, phase_tol: float = 1e-8) -> PhaseProfile:
    """Build a :class:`PhaseProfile` from raw amplitudes.

    Raises
    ------
    PhaseConditionError
        If the amplitude phases are not linear in ``n`` (up to a global phase).
    """
    c = amps.coefficients
    mags = np.abs(c)
    big = np.nonzero(mags > 1e-8 * mags.max())[0]
    if big.size < 2:
        phi = 0.0
    else:
        # adjacent pair with the largest product sets phi; the rest must agree
        prods = mags[:-1] * mags[1:]
        j = int(np.argmax(prods))
        if prods[j] == 0:
            raise PhaseConditionError("occupied levels are not adjacent; phase slope undefined")
        phi = float(np.angle(c[j + 1] / c[j]))
        n = np.arange(c.size)
        residual = c[big] * np.exp(-1j * n[big] * phi)
        ref = residual[np.argmax(np.abs(residual))]
        drift = np.abs(np.angle(residual / ref))
        if drift.max() > phase_tol:
            raise PhaseConditionError(f"amplitude phases deviate from n*phi + const by {drift.max():.3g} rad")
    values = _correlation(mags)
    if values.size == 0:
        values = np.zeros(1)
    values = np.append(values, 0.0)
    stop = _stop_index(values, tol)
    return PhaseProfile(values[:stop], phi, stop, float(values[stop]))


def m_coefficients(spec: StateSpec, tol: float = 1e-15) -> PhaseProfile:
    """``M_n`` coefficients until they drop below ``tol``.

    Closed forms are used where they exist: ``|zeta|**n`` for the ``k=1/2``
    coherent state, Bessel ratios ``I_n(2|z|)/I_0(2|z|)`` for the ``k=1/2``
    Barut-Girardello and minus philophase states, truncated Bessel tails
    for the plus philophase state.  Other states use the correlation sum of
    amplitude magnitudes.

    Raises
    ------
    PhaseSeriesError
        If more than :func:`~hpsu11.states.max_cutoff` terms are needed.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    phi = spec.mean_phase
    if spec.is_degenerate:
        return PhaseProfile(np.zeros(0), phi, 0, 0.0)
    ceiling = max_cutoff()
    fam = spec.family
    r = spec.abs_param
    if fam is Family.SU11CS and spec.twice_k == 1:
        n_needed = int(math.ceil(math.log(tol) / math.log(r))) + 1
        if n_needed > ceiling:
            raise PhaseSeriesError(f"|zeta|**n stays above {tol:g} beyond the cutoff ceiling of {ceiling} terms")
        return _profile_from_series(r ** np.arange(1.0, n_needed + 2), phi, tol)
    if (fam is Family.BG and spec.twice_k == 1) or fam is Family.PHILOPHASE_MINUS or fam is Family.PHILOPHASE_PLUS:
        start = spec.sigma if fam is Family.PHILOPHASE_PLUS else 0
        log_base = sf.log_bessel_tail(0, r, start)
        values = []
        for n in range(1, ceiling + 2):
            v = math.exp(sf.log_bessel_tail(n, r, start) - log_base)
            values.append(v)
            if v < tol:
                return _profile_from_series(np.array(values), phi, tol)
        raise PhaseSeriesError(f"M_n stays above {tol:g} beyond the cutoff ceiling of {ceiling} terms")
    amps = amplitudes(spec, _PROFILE_TAIL)
    mags = np.exp(log_abs_coefficients(spec, np.arange(amps.cutoff + 1)))
    values = np.append(_correlation(mags), 0.0)
    return _profile_from_series(values, phi, tol)


def _closed_q(spec: StateSpec, theta: np.ndarray):
    fam = spec.family
    if spec.is_degenerate:
        return np.full_like(theta, 1.0 / TWO_PI)
    r = spec.abs_param
    delta = theta - spec.mean_phase
    if fam is Family.SU11CS and spec.twice_k == 1:
        return (1.0 - r * r) / (TWO_PI * (1.0 - 2.0 * r * np.cos(delta) + r * r))
    if (fam is Family.BG and spec.twice_k == 1) or fam is Family.PHILOPHASE_MINUS:
        # von Mises, written with the scaled Bessel function
        return np.exp(2.0 * r * (np.cos(delta) - 1.0)) / (TWO_PI * sf.bessel_ie(0, 2.0 * r))
    if fam is Family.PHILOPHASE_PLUS:
        return np.abs(theta_function(spec)(theta)) ** 2 / TWO_PI
    return None


def q_theta(spec: StateSpec, theta, method: str = "auto") -> np.ndarray:
    """Phase distribution ``Q(theta)``.

    Parameters
    ----------
    spec : StateSpec
    theta : float or array_like
    method : {"auto", "closed", "series"}
        ``closed`` uses an analytic expression and fails when there is
        none; ``series`` always sums the ``M_n`` cosine series; ``auto``
        prefers the closed form.
    """
    theta = np.asarray(theta, dtype=float)
    if method not in ("auto", "closed", "series"):
        raise ValueError(f"unknown method {method!r}")
    if method != "series":
        q = _closed_q(spec, theta)
        if q is not None:
            return q
        if method == "closed":
            raise ValueError(f"no closed-form phase distribution for {spec.label()}")
    return m_coefficients(spec).q(theta)


def phase_fourier(n: int, theta0: float) -> tuple[complex, complex]:
    """Fourier coefficients of ``theta`` and ``theta**2`` over ``[theta0, theta0 + 2 pi)``.

    Returns ``(a_n, b_n)`` with ``a_n = (1/2pi) int theta e^{i n theta}`` and
    ``b_n`` the same for ``theta**2``; negative ``n`` gives the conjugates.
    """
    n = int(n)
    if n == 0:
        return complex(theta0 + math.pi), complex(4.0 * math.pi**2 / 3.0 + TWO_PI * theta0 + theta0 * theta0)
    e = complex(math.cos(n * theta0), math.sin(n * theta0))
    first = e / (1j * n)
    second = 2.0 * e * ((math.pi + theta0) / (1j * n) + 1.0 / (n * n))
    return first, second


def _alternating_sums(m: np.ndarray) -> tuple[float, float]:
    # sum (-1)^n M_n / n^2 and sum (-1)^(n+1) M_n, added in (odd, even) pairs
    if m.size == 0:
        return 0.0, 0.0
    if m.size % 2:
        m = np.append(m, 0.0)
    n = np.arange(1, m.size + 1, dtype=float)
    odd, even = m[0::2], m[1::2]
    sq = even / n[1::2] ** 2 - odd / n[0::2] ** 2
    plain = odd - even
    return math.fsum(sq[::-1]), math.fsum(plain[::-1])


def moments_from_profile(profile: PhaseProfile, theta0: float | None = None) -> PhaseMoments:
    """Phase moments from ``M_n`` for any reference angle ``theta0``.

    With the default ``theta0 = phi - pi`` the mean phase is ``phi`` and
    the variance is ``pi^2/3 + 4 sum (-1)^n M_n / n^2``.
    """
    phi = profile.mean_phase
    m = profile.m_coeffs
    m1, m2 = profile.m(1), profile.m(2)
    sq, plain = _alternating_sums(m)
    gap = 2.0 * plain
    standard = theta0 is None
    if standard:
        theta0 = phi - math.pi
        mean_phi = phi
        var_phi = RANDOM_PHASE_VARIANCE + 4.0 * sq
    else:
        n = np.arange(1, profile.n_max + 1, dtype=float)
        delta = theta0 - phi
        s, c = np.sin(n * delta), np.cos(n * delta)
        mean_phi = theta0 + math.pi + 2.0 * math.fsum(m * s / n)
        second = (
            4.0 * math.pi**2 / 3.0
            + TWO_PI * theta0
            + theta0 * theta0
            + math.fsum(m * (4.0 * math.pi * s / n + 4.0 * c / n**2 + 4.0 * theta0 * s / n))
        )
        var_phi = second - mean_phi * mean_phi
        gap = 1.0 - (1.0 + 2.0 * math.fsum(m * np.cos(n * delta)))
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    mean_cos = m1 * cos_phi
    mean_sin = m1 * sin_phi
    spread = 0.5 * (1.0 - m2)
    var_cos = spread + (m2 - m1 * m1) * cos_phi**2
    var_sin = spread + (m2 - m1 * m1) * sin_phi**2
    return PhaseMoments(mean_phi, var_phi, mean_cos, var_cos, mean_sin, var_sin, theta0, m1, m2, gap)


def _su11cs_half_moments(spec: StateSpec) -> PhaseMoments:
    # M_n = r^n: the series sum to a dilogarithm and a geometric series
    r = spec.abs_param
    phi = spec.mean_phase
    var_phi = RANDOM_PHASE_VARIANCE + 4.0 * float(spence(1.0 + r))
    m1, m2 = r, r * r
    cos_phi, sin_phi = math.cos(phi), math.sin(phi)
    spread = 0.5 * (1.0 - m2)
    return PhaseMoments(
        mean_phi=phi,
        var_phi=var_phi,
        mean_cos=m1 * cos_phi,
        var_cos=spread,
        mean_sin=m1 * sin_phi,
        var_sin=spread,
        theta0=phi - math.pi,
        m1=m1,
        m2=m2,
        boundary_gap=2.0 * r / (1.0 + r),
    )


def phase_moments(spec: StateSpec, tol: float = 1e-10, theta0: float | None = None) -> PhaseMoments:
    """Antinormally ordered moments of the phase, cosine and sine operators.

    Parameters
    ----------
    spec : StateSpec
    tol : float
        Truncation tolerance for the ``M_n`` series (tighter values are
        used internally when cheap).
    theta0 : float, optional
        Start of the phase window; defaults to ``phi - pi``.

    Examples
    --------
    >>> pm = phase_moments(StateSpec.bg("1/2", 0))
    >>> round(pm.var_cos, 12)
    0.5
    """
    if spec.family is Family.SU11CS and spec.twice_k == 1 and theta0 is None and not spec.is_degenerate:
        return _su11cs_half_moments(spec)
    profile = m_coefficients(spec, min(tol, 1e-15))
    return moments_from_profile(profile, theta0)
