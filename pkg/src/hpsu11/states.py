"""Photon-state families built on the Holstein-Primakoff SU(1,1) realization.

Five families are supported, all pure states of a single mode:

* ``SU11CS``: SU(1,1) coherent states ``|k, zeta>`` with ``|zeta| < 1``;
* ``BG``: Barut-Girardello states ``|k, z>``, eigenstates of ``K_-``;
* ``PHILOPHASE_MINUS``: ``|z, sigma>`` with ``sigma <= 0``;
* ``PHILOPHASE_PLUS``: ``|z, sigma>_+`` with ``sigma >= 0``;
* ``GLAUBER``: ordinary coherent states ``|alpha>``.

Every amplitude has the form ``C_n = |C_n| exp(i n phi)`` up to a global
phase, with ``phi`` the argument of the complex parameter.  Magnitudes are
computed in the log domain, so cutoffs in the thousands are fine.
"""
from __future__ import annotations

import cmath
import enum
import math
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from scipy.special import gammaln

from . import specialfn as sf

__all__ = [
    "Family",
    "StateSpec",
    "FockAmplitudes",
    "ThetaFunction",
    "InvalidStateError",
    "CutoffError",
    "parse_k",
    "max_cutoff",
    "log_abs_coefficients",
    "coefficients",
    "amplitudes",
    "overlap",
    "theta_function",
    "disk_param",
]

DEFAULT_MAX_CUTOFF = 4096
CUTOFF_ENV = "HPSU11_MAX_CUTOFF"
# probability tail for Fourier-series evaluation; amplitudes err by its square root
SERIES_TAIL = 1e-28


class InvalidStateError(ValueError):
    """A state specification that violates its family's constraints."""


class CutoffError(RuntimeError):
    """The requested tail tolerance needs more number states than allowed."""


class Family(str, enum.Enum):
    SU11CS = "su11cs"
    BG = "bg"
    PHILOPHASE_MINUS = "pminus"
    PHILOPHASE_PLUS = "pplus"
    GLAUBER = "glauber"


def max_cutoff() -> int:
    """Largest allowed cutoff; ``HPSU11_MAX_CUTOFF`` overrides the default 4096."""
    raw = os.environ.get(CUTOFF_ENV)
    if not raw:
        return DEFAULT_MAX_CUTOFF
    try:
        value = int(raw)
    except ValueError:
        raise InvalidStateError(f"{CUTOFF_ENV} must be an integer, got {raw!r}") from None
    if value < 2:
        raise InvalidStateError(f"{CUTOFF_ENV} must be at least 2, got {value}")
    return value


def parse_k(k) -> int:
    """Convert a Bargmann index to the integer ``2k``.

    Accepts ints, floats, :class:`fractions.Fraction` and strings such as
    ``"1/2"`` or ``"1.5"``.

    Raises
    ------
    InvalidStateError
        If ``k`` is not one of 1/2, 1, 3/2, ...
    """
    try:
        frac = Fraction(k.strip()) if isinstance(k, str) else Fraction(k)
    except (ValueError, TypeError, ZeroDivisionError):
        raise InvalidStateError(f"cannot parse Bargmann index {k!r}") from None
    twice = 2 * frac
    if twice.denominator != 1 or twice < 1:
        raise InvalidStateError(f"Bargmann index must be one of 1/2, 1, 3/2, ...; got {k!r}")
    return int(twice)


def _as_complex(value, name):
    try:
        c = complex(value)
    except (TypeError, ValueError):
        raise InvalidStateError(f"{name} must be a complex number, got {value!r}") from None
    if not cmath.isfinite(c):
        raise InvalidStateError(f"{name} must be finite, got {value!r}")
    return c


def _as_int(value, name):
    if isinstance(value, bool) or value is None:
        raise InvalidStateError(f"{name} must be an integer, got {value!r}")
    try:
        as_int = int(value)
    except (TypeError, ValueError):
        raise InvalidStateError(f"{name} must be an integer, got {value!r}") from None
    if as_int != value:
        raise InvalidStateError(f"{name} must be an integer, got {value!r}")
    return as_int


@dataclass(frozen=True)
class StateSpec:
    """Immutable description of one pure state.

    Use the classmethod constructors rather than filling fields by hand;
    ``__post_init__`` validates whatever combination is given.

    Attributes
    ----------
    family : Family
    twice_k : int or None
        ``2k`` for the SU(1,1) families.
    zeta : complex or None
        Disk parameter of ``SU11CS``.
    z : complex or None
        Parameter of ``BG`` and the philophase families.
    sigma : int or None
        Philophase shift; ``<= 0`` for minus, ``>= 0`` for plus.
    alpha : complex or None
        Glauber amplitude.
    """

    family: Family
    twice_k: int | None = None
    zeta: complex | None = None
    z: complex | None = None
    sigma: int | None = None
    alpha: complex | None = None

    def __post_init__(self):
        try:
            fam = Family(self.family)
        except ValueError:
            raise InvalidStateError(f"unknown family {self.family!r}") from None
        object.__setattr__(self, "family", fam)
        expected = {
            Family.SU11CS: {"twice_k", "zeta"},
            Family.BG: {"twice_k", "z"},
            Family.PHILOPHASE_MINUS: {"z", "sigma"},
            Family.PHILOPHASE_PLUS: {"z", "sigma"},
            Family.GLAUBER: {"alpha"},
        }[fam]
        for name in ("twice_k", "zeta", "z", "sigma", "alpha"):
            given = getattr(self, name) is not None
            if given and name not in expected:
                raise InvalidStateError(f"{fam.value} takes no {name}")
            if not given and name not in expected:
                continue
            if not given:
                raise InvalidStateError(f"{fam.value} requires {name}")
            if name == "twice_k":
                tk = _as_int(self.twice_k, "twice_k")
                if tk < 1:
                    raise InvalidStateError(f"Bargmann index must be >= 1/2, got k={tk}/2")
                object.__setattr__(self, name, tk)
            elif name == "sigma":
                object.__setattr__(self, name, _as_int(self.sigma, "sigma"))
            else:
                object.__setattr__(self, name, _as_complex(getattr(self, name), name))
        if fam is Family.SU11CS and not abs(self.zeta) < 1.0:
            raise InvalidStateError(f"SU(1,1) coherent state needs |zeta| < 1, got |zeta|={abs(self.zeta)}")
        if fam is Family.PHILOPHASE_MINUS and self.sigma > 0:
            raise InvalidStateError(f"philophase minus state needs sigma <= 0, got {self.sigma}")
        if fam is Family.PHILOPHASE_PLUS and self.sigma < 0:
            raise InvalidStateError(f"philophase plus state needs sigma >= 0, got {self.sigma}")
        if self.sigma is not None and abs(self.sigma) > sf.MAX_ORDER // 2:
            raise InvalidStateError(f"|sigma| too large: {self.sigma}")

    @classmethod
    def su11cs(cls, k, zeta) -> "StateSpec":
        return cls(Family.SU11CS, twice_k=parse_k(k), zeta=zeta)

    @classmethod
    def bg(cls, k, z) -> "StateSpec":
        return cls(Family.BG, twice_k=parse_k(k), z=z)

    @classmethod
    def pminus(cls, z, sigma) -> "StateSpec":
        return cls(Family.PHILOPHASE_MINUS, z=z, sigma=sigma)

    @classmethod
    def pplus(cls, z, sigma) -> "StateSpec":
        return cls(Family.PHILOPHASE_PLUS, z=z, sigma=sigma)

    @classmethod
    def glauber(cls, alpha) -> "StateSpec":
        return cls(Family.GLAUBER, alpha=alpha)

    @property
    def k(self) -> Fraction | None:
        return None if self.twice_k is None else Fraction(self.twice_k, 2)

    @property
    def param(self) -> complex:
        """The family's complex parameter (zeta, z or alpha)."""
        if self.family is Family.SU11CS:
            return self.zeta
        if self.family is Family.GLAUBER:
            return self.alpha
        return self.z

    @property
    def abs_param(self) -> float:
        return abs(self.param)

    @property
    def mean_phase(self) -> float:
        """Argument of the complex parameter, in ``(-pi, pi]``; 0 at the origin."""
        p = self.param
        return 0.0 if p == 0 else cmath.phase(p)

    @property
    def is_degenerate(self) -> bool:
        """True when the parameter vanishes and the state is a single number state."""
        return self.param == 0

    @property
    def lowest_level(self) -> int:
        """Smallest occupied number state (``|sigma|`` for the minus family)."""
        return -self.sigma if self.family is Family.PHILOPHASE_MINUS else 0

    def with_param(self, value) -> "StateSpec":
        """Copy with the complex parameter replaced."""
        key = {Family.SU11CS: "zeta", Family.GLAUBER: "alpha"}.get(self.family, "z")
        return replace(self, **{key: value})

    def label(self) -> str:
        parts = [self.family.value]
        if self.twice_k is not None:
            parts.append(f"k={self.k}")
        if self.sigma is not None:
            parts.append(f"sigma={self.sigma}")
        parts.append(f"param={self.param!r}")
        return " ".join(parts)


def _family_log_norm(spec: StateSpec) -> float:
    # log of the normalizing constant multiplying the n-dependent part
    r = spec.abs_param
    fam = spec.family
    if fam is Family.SU11CS:
        return 0.5 * spec.twice_k * math.log1p(-r * r)
    if fam is Family.BG:
        return -0.5 * sf.log_bessel_i(spec.twice_k - 1, 2.0 * r)
    if fam is Family.PHILOPHASE_MINUS:
        return -0.5 * sf.log_bessel_i(0, 2.0 * r)
    if fam is Family.PHILOPHASE_PLUS:
        return -0.5 * sf.log_bessel_tail(0, r, spec.sigma)
    return -0.5 * r * r


def log_abs_coefficients(spec: StateSpec, n) -> np.ndarray:
    """``log|C_n|`` for an array of number states ``n``; ``-inf`` where ``C_n = 0``.

    Not defined for degenerate specs (zero parameter); see :func:`coefficients`.
    """
    n = np.asarray(n, dtype=float)
    r = spec.abs_param
    if r == 0:
        raise ValueError("log magnitudes are not defined at zero parameter")
    log_r = math.log(r)
    norm = _family_log_norm(spec)
    fam = spec.family
    if fam is Family.SU11CS:
        tk = spec.twice_k
        out = norm + 0.5 * (gammaln(n + tk) - gammaln(n + 1) - gammaln(tk)) + n * log_r
    elif fam is Family.BG:
        tk = spec.twice_k
        out = norm + (n + 0.5 * (tk - 1)) * log_r - 0.5 * (gammaln(n + 1) + gammaln(n + tk))
    elif fam is Family.PHILOPHASE_MINUS:
        j = n - spec.lowest_level
        with np.errstate(invalid="ignore"):
            out = np.where(j >= 0, norm + j * log_r - gammaln(np.maximum(j, 0) + 1), -np.inf)
    elif fam is Family.PHILOPHASE_PLUS:
        j = n + spec.sigma
        out = norm + j * log_r - gammaln(j + 1)
    else:
        out = norm + n * log_r - 0.5 * gammaln(n + 1)
    return out


def _phase_offset(spec: StateSpec) -> float:
    # C_n = |C_n| exp(i (n + offset) * arg); offset is the global part
    fam = spec.family
    if fam is Family.BG:
        return 0.5 * (spec.twice_k - 1)
    if fam is Family.PHILOPHASE_MINUS:
        return float(spec.sigma)
    if fam is Family.PHILOPHASE_PLUS:
        return float(spec.sigma)
    return 0.0


def coefficients(spec: StateSpec, n_max: int) -> np.ndarray:
    """Complex amplitudes ``C_0 .. C_{n_max}`` without any tail bookkeeping.

    The global phase follows the principal branch of the parameter's
    argument, e.g. ``z**(k - 1/2)`` for Barut-Girardello states.
    """
    n_max = int(n_max)
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    out = np.zeros(n_max + 1, dtype=complex)
    if spec.is_degenerate:
        level = spec.lowest_level
        if level <= n_max:
            out[level] = 1.0
        return out
    n = np.arange(n_max + 1)
    mag = np.exp(log_abs_coefficients(spec, n))
    phi = spec.mean_phase
    return mag * np.exp(1j * (n + _phase_offset(spec)) * phi)


@dataclass(frozen=True)
class FockAmplitudes:
    """Truncated number-state expansion of a pure state.

    Attributes
    ----------
    coefficients : ndarray of complex, shape (cutoff + 1,)
        Read-only amplitudes ``C_0 .. C_N``.
    cutoff : int
        Highest retained number state ``N``.
    tail_mass : float
        Estimate of the probability beyond ``N``.
    spec : StateSpec or None
        The originating spec, if any.
    """

    coefficients: np.ndarray
    cutoff: int
    tail_mass: float = 0.0
    spec: StateSpec | None = field(default=None, compare=False)

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("coefficients must be a non-empty vector")
        if c.size != self.cutoff + 1:
            raise ValueError(f"cutoff {self.cutoff} does not match {c.size} coefficients")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_vector(cls, vector, tail_mass: float = 0.0) -> "FockAmplitudes":
        """Wrap an arbitrary amplitude vector (not renormalized)."""
        v = np.asarray(vector, dtype=complex)
        return cls(v, v.size - 1, tail_mass)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.coefficients) ** 2

    @property
    def norm2(self) -> float:
        return float(math.fsum(self.probabilities))

    def padded(self, cutoff: int) -> np.ndarray:
        """Coefficient vector zero-padded (or truncated) to ``cutoff + 1`` entries."""
        out = np.zeros(cutoff + 1, dtype=complex)
        m = min(cutoff, self.cutoff) + 1
        out[:m] = self.coefficients[:m]
        return out


def _tail_bounds(log_p: np.ndarray) -> np.ndarray:
    """Ratio-test bound on ``sum_{m > N} p_m`` for every ``N`` in range.

    ``bound[N] = p_{N+1} / (1 - p_{N+2}/p_{N+1})``, valid once the term ratio
    is below 1 and non-increasing, which holds for every family here past its
    lowest occupied level.  ``inf`` where the ratio test does not apply.
    """
    lp1 = log_p[1:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.exp(log_p[2:] - lp1)
        bound = np.where(ratio < 1.0, np.exp(lp1) / (1.0 - ratio), np.inf)
    # also require every later ratio to stay below 1 (monotone tail)
    bad = ~(ratio < 1.0)
    if bad.any():
        last_bad = np.nonzero(bad)[0][-1]
        bound[: last_bad + 1] = np.inf
    return bound


def amplitudes(spec: StateSpec, tail_tol: float = 1e-12, cutoff: int | None = None) -> FockAmplitudes:
    """Number-state amplitudes with an automatically chosen cutoff.

    Parameters
    ----------
    spec : StateSpec
    tail_tol : float
        Upper bound on the discarded probability, in ``(0, 1)``.
    cutoff : int, optional
        Use at least this cutoff (the automatic choice may be larger).

    Returns
    -------
    FockAmplitudes
        ``sum |C_n|**2 + tail_mass == 1`` up to rounding.

    Raises
    ------
    CutoffError
        If the tail cannot be pushed below ``tail_tol`` within
        :func:`max_cutoff` number states.
    """
    if not (0.0 < tail_tol < 1.0):
        raise InvalidStateError(f"tail_tol must lie in (0, 1), got {tail_tol}")
    ceiling = max_cutoff()
    min_cut = 1 if cutoff is None else int(cutoff)
    if min_cut < 1:
        raise InvalidStateError(f"cutoff must be positive, got {cutoff}")
    if min_cut > ceiling:
        raise CutoffError(f"cutoff {min_cut} exceeds the ceiling {ceiling} (set {CUTOFF_ENV} to raise it)")

    if spec.is_degenerate:
        n_cut = max(min_cut, spec.lowest_level, 1)
        if n_cut > ceiling:
            raise CutoffError(f"number state {spec.lowest_level} exceeds the cutoff ceiling {ceiling}")
        return FockAmplitudes(coefficients(spec, n_cut), n_cut, 0.0, spec)

    span = max(64, 2 * min_cut, 2 * spec.lowest_level + 64)
    while True:
        n = np.arange(span + 3)
        log_p = 2.0 * log_abs_coefficients(spec, n)
        bound = _tail_bounds(log_p)
        ok = np.nonzero(bound[: span + 1] <= tail_tol)[0]
        ok = ok[ok >= min_cut]
        if ok.size:
            n_cut = int(ok[0])
            break
        if span >= 2 * ceiling:
            raise CutoffError(
                f"tail below {tail_tol:g} needs more than {ceiling} number states for {spec.label()}"
                f" (set {CUTOFF_ENV} to raise the ceiling)"
            )
        span = min(2 * span, 2 * ceiling)
    if n_cut > ceiling:
        raise CutoffError(
            f"tail below {tail_tol:g} needs cutoff {n_cut} > {ceiling} for {spec.label()}"
            f" (set {CUTOFF_ENV} to raise the ceiling)"
        )
    # tail estimate: explicit terms out to where the bound is negligible
    far = np.nonzero(bound <= 1e-30 * max(bound[n_cut], 1e-300))[0]
    far = far[far > n_cut]
    stop = int(far[0]) if far.size else span
    tail = math.fsum(np.exp(log_p[n_cut + 1 : stop + 1])) + float(bound[stop])
    return FockAmplitudes(coefficients(spec, n_cut), n_cut, tail, spec)


def _same_shape(spec1: StateSpec, spec2: StateSpec):
    if spec1.family is not spec2.family:
        raise InvalidStateError(f"cannot overlap {spec1.family.value} with {spec2.family.value}")
    if spec1.twice_k != spec2.twice_k or spec1.sigma != spec2.sigma:
        raise InvalidStateError("overlap needs equal Bargmann index and sigma")


def overlap(spec1: StateSpec, spec2: StateSpec) -> complex:
    """Closed-form inner product ``<spec1|spec2>`` within one family.

    Raises
    ------
    InvalidStateError
        On a family, ``k`` or ``sigma`` mismatch.
    """
    _same_shape(spec1, spec2)
    if spec1.is_degenerate or spec2.is_degenerate:
        # one side is a single number state: read off the other's amplitude
        level = spec1.lowest_level
        if spec1.is_degenerate:
            return complex(coefficients(spec2, level)[level])
        return complex(np.conj(coefficients(spec1, level)[level]))
    fam = spec1.family
    a, b = spec1.param, spec2.param
    ra, rb = abs(a), abs(b)
    y = a.conjugate() * b
    if fam is Family.SU11CS:
        k = 0.5 * spec1.twice_k
        return complex((1 - ra * ra) ** k * (1 - rb * rb) ** k / (1 - y) ** spec1.twice_k)
    if fam is Family.GLAUBER:
        return cmath.exp(-0.5 * ra * ra - 0.5 * rb * rb + y)
    if fam is Family.BG:
        nu = spec1.twice_k - 1
        log_den = 0.5 * (sf.log_bessel_i(nu, 2 * ra) + sf.log_bessel_i(nu, 2 * rb))
        prefix = cmath.exp(0.5 * nu * (complex(math.log(ra), -cmath.phase(a)) + complex(math.log(rb), cmath.phase(b))) - log_den)
        return prefix * sf.bessel_i_reduced(nu, y)
    if fam is Family.PHILOPHASE_MINUS:
        log_den = 0.5 * (sf.log_bessel_i(0, 2 * ra) + sf.log_bessel_i(0, 2 * rb))
        return sf.bessel_i_reduced(0, y) * math.exp(-log_den)
    sigma = spec1.sigma
    log_den = 0.5 * (sf.log_bessel_tail(0, ra, sigma) + sf.log_bessel_tail(0, rb, sigma))
    # the series starts at y**sigma; divide the magnitude out before summing
    return sf.bessel_i_reduced(0, y, sigma) * math.exp(-log_den)


@dataclass(frozen=True)
class ThetaFunction:
    """Phase-state representation ``Theta(theta) = sum_n C_n exp(-i n theta)``.

    Normalized so that ``(1/2pi) * integral |Theta|**2 dtheta = 1``.
    ``closed_form`` tells whether evaluation uses an analytic expression or
    the truncated Fourier series.
    """

    spec: StateSpec
    closed_form: bool
    _coefficients: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        if not self.closed_form:
            return fourier_series(self._coefficients, theta)
        return _closed_theta(self.spec, theta)

    def series(self, theta):
        """Evaluate through the truncated Fourier series regardless of closed form."""
        c = self._coefficients
        if c is None:
            c = amplitudes(self.spec, SERIES_TAIL).coefficients
        return fourier_series(c, np.asarray(theta, dtype=float))


def fourier_series(coefficients, theta) -> np.ndarray:
    """``sum_n c_n exp(-i n theta)`` by Horner's rule in ``exp(-i theta)``."""
    w = np.exp(-1j * np.asarray(theta, dtype=float))
    c = np.asarray(coefficients, dtype=complex)
    acc = np.zeros_like(w)
    for cn in c[::-1]:
        acc = acc * w + cn
    return acc


def _closed_theta(spec: StateSpec, theta: np.ndarray) -> np.ndarray:
    fam = spec.family
    w = np.exp(-1j * theta)
    if spec.is_degenerate:
        return w ** spec.lowest_level + 0j
    r = spec.abs_param
    if fam is Family.SU11CS:
        return math.sqrt(1 - r * r) / (1 - spec.zeta * w)
    if fam is Family.BG:
        return np.exp(spec.z * w - 0.5 * sf.log_bessel_i(0, 2 * r))
    if fam is Family.PHILOPHASE_MINUS:
        return np.exp(1j * spec.sigma * theta + spec.z * w - 0.5 * sf.log_bessel_i(0, 2 * r))
    sigma = spec.sigma
    zw = spec.z * w
    norm = math.exp(-0.5 * sf.log_bessel_tail(0, r, sigma))
    if sigma == 0:
        tail = np.exp(zw)
    elif r < sigma:
        # direct tail sum_{m >= sigma} (zw)^m/m!; the subtraction would cancel
        term = zw**sigma / math.factorial(sigma) if sigma <= 170 else np.exp(sigma * np.log(zw) - sf.log_factorial(sigma))
        tail = term.copy()
        m = sigma
        while True:
            m += 1
            term = term * zw / m
            tail += term
            if np.max(np.abs(term)) <= 1e-17 * np.min(np.abs(tail)) and r < 0.5 * m:
                break
    else:
        head = np.zeros_like(zw)
        term = np.ones_like(zw)
        for m in range(sigma):
            head += term
            term = term * zw / (m + 1)
        tail = np.exp(zw) - head
    return np.exp(1j * sigma * theta) * tail * norm


def theta_function(spec: StateSpec) -> ThetaFunction:
    """Phase-state representation of ``spec``.

    Closed forms exist for ``k = 1/2`` SU(1,1) coherent and Barut-Girardello
    states and for both philophase families; other states fall back on the
    Fourier series of their amplitudes.
    """
    fam = spec.family
    closed = (
        spec.is_degenerate
        or fam in (Family.PHILOPHASE_MINUS, Family.PHILOPHASE_PLUS)
        or (fam in (Family.SU11CS, Family.BG) and spec.twice_k == 1)
    )
    coeffs = None if closed else amplitudes(spec, SERIES_TAIL).coefficients
    return ThetaFunction(spec, closed, coeffs)


def disk_param(tau: float, varphi: float) -> complex:
    """Disk coordinate ``zeta = -tanh(tau/2) exp(-i varphi)`` of a group element."""
    return complex(-math.tanh(0.5 * tau) * cmath.exp(-1j * varphi))
