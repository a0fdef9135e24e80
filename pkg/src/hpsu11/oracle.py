"""Brute-force reference computations in a truncated number-state space.

Nothing here uses the closed forms of :mod:`hpsu11.stats` or the ``M_n``
machinery of :mod:`hpsu11.phase`.  Operators are dense matrices on
``span{|0>, ..., |N>}``.  Antinormally ordered products of phase-related
operators are realized as phase-state kernels: a function ``g(theta)``
becomes the matrix of its Fourier coefficients,
``<m|g|m'> = (1/2pi) int g(theta) exp(i (m - m') theta) dtheta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from . import specialfn as sf
from .phase import PhaseMoments, fold_phase, phase_fourier, profile_from_amplitudes
from .states import Family, FockAmplitudes, StateSpec, coefficients, fourier_series
from .stats import PhotonStats, stats_from_moments

__all__ = [
    "FockOperator",
    "OPERATOR_LABELS",
    "build_operator",
    "antinormal_matrix",
    "antinormal_chain",
    "eigen_residual",
    "algebra_check",
    "quadrature_expectation",
    "moments_via_theta",
    "fock_photon_stats",
    "fock_phase_moments",
    "IdentityCheck",
    "identity_resolution_check",
    "analytic_generator_check",
    "boundary_reconstruction_check",
    "phase_state_limit_deviation",
    "number_phase_commutator_deviation",
    "antinormal_commutator_deviation",
    "antinormal_unitarity_deviation",
    "standard_grid",
]

TWO_PI = 2.0 * math.pi

OPERATOR_LABELS = (
    "number",
    "shift_lower",
    "shift_raise",
    "cosine",
    "sine",
    "K_plus",
    "K_minus",
    "K_3",
    "Kmod_plus",
    "Kmod_minus",
    "Kmod_3",
    "phase_op",
    "phase_op_sq",
)


@dataclass(frozen=True)
class FockOperator:
    """Dense operator matrix on number states ``0..cutoff``."""

    matrix: np.ndarray
    cutoff: int
    label: str
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (self.cutoff + 1, self.cutoff + 1):
            raise ValueError(f"matrix shape {m.shape} does not match cutoff {self.cutoff}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def H(self) -> np.ndarray:
        return self.matrix.conj().T

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            return self.matrix @ other.matrix
        return self.matrix @ other


def _shift_lower(size: int) -> np.ndarray:
    # <n|E|n+1> = 1
    return np.eye(size, k=1, dtype=complex)


def _toeplitz_from_fourier(coeff, size: int) -> np.ndarray:
    # element (m, m') = coeff(m - m')
    d = np.arange(size)[:, None] - np.arange(size)[None, :]
    out = np.empty((size, size), dtype=complex)
    for diff in range(-(size - 1), size):
        out[d == diff] = coeff(diff)
    return out


def _phase_coeff(theta0: float, square: bool):
    def coeff(d):
        first, second = phase_fourier(abs(d), theta0)
        value = second if square else first
        return value if d >= 0 else value.conjugate()

    return coeff


def build_operator(label: str, cutoff: int, *, k=None, sigma: int | None = None, theta0: float = -math.pi) -> FockOperator:
    """Matrix of a standard operator truncated to ``cutoff + 1`` number states.

    Parameters
    ----------
    label : str
        One of :data:`OPERATOR_LABELS`.
    cutoff : int
        Highest number state, at least 2.
    k : Bargmann index for ``K_plus``, ``K_minus``, ``K_3``.
    sigma : non-negative integer for the ``Kmod_*`` generators.
    theta0 : start of the phase window for ``phase_op`` and ``phase_op_sq``.
    """
    from .states import parse_k

    if label not in OPERATOR_LABELS:
        raise ValueError(f"unknown operator label {label!r}")
    cutoff = int(cutoff)
    if cutoff < 2:
        raise ValueError(f"cutoff must be at least 2, got {cutoff}")
    size = cutoff + 1
    n = np.arange(size, dtype=float)
    params: dict = {}
    if label.startswith("K_"):
        if k is None:
            raise ValueError(f"{label} needs a Bargmann index k")
        twice_k = parse_k(k)
        params["twice_k"] = twice_k
        kk = 0.5 * twice_k
        if label == "K_3":
            mat = np.diag(n + kk).astype(complex)
        else:
            # <n-1|K_-|n> = sqrt(n (n + 2k - 1))
            lower = np.diag(np.sqrt(n[1:] * (n[1:] + twice_k - 1)), k=1).astype(complex)
            mat = lower if label == "K_minus" else lower.conj().T
    elif label.startswith("Kmod_"):
        if sigma is None or int(sigma) != sigma or sigma < 0:
            raise ValueError(f"{label} needs an integer sigma >= 0, got {sigma!r}")
        params["sigma"] = int(sigma)
        if label == "Kmod_3":
            mat = np.diag(n + sigma + 0.5).astype(complex)
        else:
            # <n-1|K_-(sigma)|n> = n + sigma; the n = 0 column stays empty
            lower = np.diag(n[1:] + sigma, k=1).astype(complex)
            mat = lower if label == "Kmod_minus" else lower.conj().T
    elif label == "number":
        mat = np.diag(n).astype(complex)
    elif label in ("shift_lower", "shift_raise", "cosine", "sine"):
        e = _shift_lower(size)
        mat = {
            "shift_lower": e,
            "shift_raise": e.conj().T,
            "cosine": 0.5 * (e + e.conj().T),
            "sine": (e - e.conj().T) / 2j,
        }[label]
    else:
        params["theta0"] = float(theta0)
        mat = _toeplitz_from_fourier(_phase_coeff(float(theta0), label == "phase_op_sq"), size)
    return FockOperator(mat, cutoff, label, params)


@lru_cache(maxsize=32)
def _legendre(order: int):
    return roots_legendre(order)


def _window_nodes(theta0: float, order: int):
    x, w = _legendre(order)
    return theta0 + math.pi * (x + 1.0), math.pi * w


def antinormal_matrix(g, cutoff: int, theta0: float = -math.pi, order: int | None = None, rule: str = "uniform") -> np.ndarray:
    """Phase-state kernel ``int g(theta) |theta><theta| dtheta`` as a matrix.

    ``rule="uniform"`` uses the trapezoid rule, exact for trigonometric
    polynomials of degree below the node count.  ``rule="gauss"`` uses
    Gauss-Legendre nodes across ``[theta0, theta0 + 2pi)``, which copes with
    functions such as the folded phase that jump at the window edge.
    """
    size = cutoff + 1
    order = order or 4 * size + 128
    if rule == "uniform":
        theta = theta0 + TWO_PI * np.arange(order) / order
        w = np.full(order, TWO_PI / order)
    elif rule == "gauss":
        theta, w = _window_nodes(theta0, order)
    else:
        raise ValueError(f"unknown rule {rule!r}")
    gw = np.asarray(g(theta), dtype=complex) * w / TWO_PI
    diffs = np.arange(-(size - 1), size)
    coeffs = np.exp(1j * np.outer(diffs, theta)) @ gw
    lookup = dict(zip(diffs.tolist(), coeffs))
    return _toeplitz_from_fourier(lookup.__getitem__, size)


def antinormal_chain(factors, cutoff: int, theta0: float = -math.pi, rule: str = "uniform") -> np.ndarray:
    """Antinormally ordered product of number-diagonal and phase-related factors.

    Parameters
    ----------
    factors : sequence
        Each item is ``("diag", vector)`` for a function of the number
        operator or ``("phase", g)`` for ``g(theta)`` of the phase.  Runs of
        adjacent phase factors are merged into the kernel of their pointwise
        product, which is what antinormal ordering prescribes.
    """
    size = cutoff + 1
    out = np.eye(size, dtype=complex)
    pending = []

    def flush():
        nonlocal out
        if pending:
            funcs = list(pending)
            prod = lambda t: np.prod([f(t) for f in funcs], axis=0)  # noqa: E731
            out = out @ antinormal_matrix(prod, cutoff, theta0, rule=rule)
            pending.clear()

    for kind, item in factors:
        if kind == "phase":
            pending.append(item)
        elif kind == "diag":
            flush()
            out = out @ np.diag(np.asarray(item, dtype=complex))
        else:
            raise ValueError(f"unknown factor kind {kind!r}")
    flush()
    return out


def eigen_residual(op: FockOperator, amps: FockAmplitudes, eigenvalue: complex) -> float:
    """``||(op - eigenvalue) psi||`` over all rows but the top one.

    Raises
    ------
    ValueError
        If the cutoffs differ.
    """
    if op.cutoff != amps.cutoff:
        raise ValueError(f"cutoff mismatch: operator {op.cutoff}, amplitudes {amps.cutoff}")
    c = amps.coefficients
    resid = op.matrix @ c - eigenvalue * c
    return float(np.linalg.norm(resid[:-1]))


def _interior_dev(a: np.ndarray, b: np.ndarray, skip: int = 2, scale: float | None = None) -> float:
    # relative to the largest expected element, so large cutoffs compare fairly
    m = a.shape[0] - skip
    if scale is None:
        scale = max(1.0, float(np.max(np.abs(b[:m, :m]))))
    return float(np.max(np.abs(a[:m, :m] - b[:m, :m]))) / scale


def algebra_check(*, k=None, sigma: int | None = None, cutoff: int = 64) -> dict:
    """Deviations of the su(1,1) relations on the interior block.

    Give ``k`` for the standard realization or ``sigma`` for the modified
    one.  The top two rows and columns are ignored because truncation
    corrupts products there.

    Returns
    -------
    dict
        ``comm_3_plus``, ``comm_3_minus``, ``comm_minus_plus`` and
        ``casimir`` deviations, plus ``casimir_value``.  Commutator
        deviations are relative to the largest expected element (absolute
        when that is below 1); the Casimir deviation is relative to the
        largest ``K_3**2`` element it is computed from.
    """
    if (k is None) == (sigma is None):
        raise ValueError("give exactly one of k or sigma")
    if cutoff < 4:
        raise ValueError(f"cutoff must be at least 4, got {cutoff}")
    size = cutoff + 1
    eye = np.eye(size)
    if k is not None:
        kp = build_operator("K_plus", cutoff, k=k).matrix
        km = build_operator("K_minus", cutoff, k=k).matrix
        k3 = build_operator("K_3", cutoff, k=k).matrix
        kk = 0.5 * build_operator("K_3", cutoff, k=k).params["twice_k"]
        mp = km @ kp
        pm = kp @ km
        expected_casimir = kk * (kk - 1.0)
    else:
        kp = build_operator("Kmod_plus", cutoff, sigma=sigma).matrix
        km = build_operator("Kmod_minus", cutoff, sigma=sigma).matrix
        k3 = build_operator("Kmod_3", cutoff, sigma=sigma).matrix
        shifted = np.arange(size) + sigma
        e_down = lambda t: np.exp(1j * t)  # noqa: E731
        e_up = lambda t: np.exp(-1j * t)  # noqa: E731
        # K_- = E (n + sigma), K_+ = (n + sigma) E^dagger
        mp = antinormal_chain([("phase", e_down), ("diag", shifted), ("diag", shifted), ("phase", e_up)], cutoff)
        pm = antinormal_chain([("diag", shifted), ("phase", e_up), ("phase", e_down), ("diag", shifted)], cutoff)
        expected_casimir = -0.25
    casimir = k3 @ k3 - 0.5 * (pm + mp)
    return {
        "comm_3_plus": _interior_dev(k3 @ kp - kp @ k3, kp),
        "comm_3_minus": _interior_dev(k3 @ km - km @ k3, -km),
        "comm_minus_plus": _interior_dev(mp - pm, 2.0 * k3),
        # the Casimir is a small difference of terms of size K_3^2
        "casimir": _interior_dev(casimir, expected_casimir * eye, scale=float(np.max(np.abs(k3[:-2, :-2]))) ** 2),
        "casimir_value": float(np.real(casimir[0, 0])),
    }


def _default_theta0(amps: FockAmplitudes) -> float:
    return profile_from_amplitudes(amps).mean_phase - math.pi


def quadrature_expectation(g, amps: FockAmplitudes, theta0: float | None = None, order: int | None = None) -> float:
    """``int g(theta) Q(theta) dtheta`` over ``[theta0, theta0 + 2pi)``.

    ``Q = |Theta|^2 / 2pi`` is rebuilt from the amplitudes.  Gauss-Legendre
    nodes across the window cope with integrands such as the folded phase
    that jump at the window edge.
    """
    if theta0 is None:
        theta0 = _default_theta0(amps)
    order = order or 2 * amps.cutoff + 64
    theta, w = _window_nodes(theta0, order)
    q = np.abs(fourier_series(amps.coefficients, theta)) ** 2 / TWO_PI
    return float(np.sum(w * q * np.asarray(g(theta), dtype=float)))


def moments_via_theta(amps: FockAmplitudes, p: int) -> float:
    """``<n^p>`` as ``(i^p / 2pi) int Theta* d^p Theta / dtheta^p``.

    The derivative is taken on the Fourier series (``C_n -> (-i n)^p C_n``)
    and the integral by the trapezoid rule, exact for these band-limited
    integrands.
    """
    if p not in (1, 2):
        raise ValueError(f"p must be 1 or 2, got {p}")
    c = amps.coefficients
    n = np.arange(c.size)
    points = 2 * c.size + 64
    theta = TWO_PI * np.arange(points) / points
    theta_fn = fourier_series(c, theta)
    deriv = fourier_series(c * (-1j * n) ** p, theta)
    return float(np.real((1j**p) * np.mean(np.conj(theta_fn) * deriv)))


def fock_photon_stats(amps: FockAmplitudes) -> PhotonStats:
    """Photon statistics by direct summation over the truncated amplitudes."""
    p = amps.probabilities
    n = np.arange(p.size, dtype=float)
    mean = math.fsum(n * p)
    var = math.fsum((n - mean) ** 2 * p)
    fact2 = math.fsum(n * (n - 1) * p)
    return stats_from_moments(mean, fact2, var)


def fock_phase_moments(amps: FockAmplitudes, theta0: float | None = None) -> PhaseMoments:
    """Phase moments from operator matrices and the phase-state representation.

    Uses the Toeplitz matrices of the phase and squared-phase operators and
    the kernels of ``cos``, ``sin`` and their squares; ``M_1``, ``M_2`` are
    read off as ``|<E>|`` and ``|<E^2>|``.
    """
    phi = profile_from_amplitudes(amps).mean_phase
    if theta0 is None:
        theta0 = phi - math.pi
    # zero padding is exact and keeps tiny states above the operator minimum
    cutoff = max(amps.cutoff, 2)
    c = amps.padded(cutoff)
    phase = build_operator("phase_op", cutoff, theta0=theta0).matrix
    phase_sq = build_operator("phase_op_sq", cutoff, theta0=theta0).matrix
    e = _shift_lower(cutoff + 1)
    e2 = e @ e

    def expect(mat):
        return np.vdot(c, mat @ c)

    mean_phi = float(np.real(expect(phase)))
    var_phi = float(np.real(expect(phase_sq))) - mean_phi**2
    ev = expect(e)
    ev2 = expect(e2)
    mean_cos, mean_sin = float(np.real(ev)), float(np.imag(ev))
    # antinormal squares: cos^2 = (2 + e^{2i} + e^{-2i})/4, sin^2 = (2 - ...)/4
    cos2 = 0.5 + 0.5 * float(np.real(ev2))
    sin2 = 0.5 - 0.5 * float(np.real(ev2))
    q0 = abs(fourier_series(c, np.array([theta0]))[0]) ** 2 / TWO_PI
    return PhaseMoments(
        mean_phi=mean_phi,
        var_phi=var_phi,
        mean_cos=mean_cos,
        var_cos=cos2 - mean_cos**2,
        mean_sin=mean_sin,
        var_sin=sin2 - mean_sin**2,
        theta0=theta0,
        m1=abs(ev),
        m2=abs(ev2),
        boundary_gap=1.0 - TWO_PI * q0,
    )


@dataclass(frozen=True)
class IdentityCheck:
    """Result of an identity-resolution quadrature.

    ``values[(n, n')]`` is the integrated matrix element, ``max_deviation``
    its largest distance from ``delta_{n n'}``.
    """

    max_deviation: float
    values: dict
    nodes: int
    converged: bool


def _radial_segments(family: Family, n_top: int, order_param: int):
    if family is Family.SU11CS:
        return [(0.0, 1.0)]
    # integrand ~ rho^(2n + nu + 1) exp(-2 rho) at large rho
    power = 2 * n_top + order_param + 1
    upper = max(2.0, 0.5 * power)
    while power * math.log(upper) - 2.0 * upper > -45.0:
        upper *= 1.5
    return [(0.0, 1.0), (1.0, upper)]


def _radial_density(family: Family, rho: float, order_param: int) -> float:
    # measure density in rho, including the Jacobian rho and the angular 2pi
    if family is Family.SU11CS:
        twice_k = order_param
        return (twice_k - 1) / math.pi / (1.0 - rho * rho) ** 2 * rho
    if rho == 0.0:
        return 0.0
    if family is Family.BG:
        kernel = sf.bessel_ke(order_param, 2 * rho) * sf.bessel_ie(order_param, 2 * rho)
        return 2.0 / math.pi * kernel * rho
    # plus philophase: K_0(2 rho) T_0(rho, sigma)
    log_t0 = sf.log_bessel_tail(0, rho, order_param)
    return 2.0 / math.pi * sf.bessel_ke(0, 2 * rho) * math.exp(log_t0 - 2 * rho) * rho


def identity_resolution_check(family, pairs, *, k=None, sigma: int | None = None, tol: float = 1e-8, max_order: int = 8192) -> IdentityCheck:
    """Integrate ``<n|psi><psi|n'>`` against a family's measure.

    Supported: SU(1,1) coherent states with ``k >= 1``, Barut-Girardello
    states, plus philophase states.  The radial integral uses
    Gauss-Legendre nodes, doubled until successive results agree to
    ``tol``; the angular integral a uniform grid, exact for the
    trigonometric dependence.

    Raises
    ------
    ValueError
        For an unsupported family or ``k = 1/2`` coherent states, whose
        measure only exists as a limit taken after integration.
    """
    from .states import parse_k

    family = Family(family)
    pairs = [(int(a), int(b)) for a, b in pairs]
    n_top = max(max(p) for p in pairs)
    if family is Family.SU11CS:
        twice_k = parse_k(k)
        if twice_k < 2:
            raise ValueError("the k = 1/2 coherent-state measure is a limit taken after integration; use k >= 1")
        make = lambda rho: StateSpec.su11cs(k, rho)  # noqa: E731
        order_param = twice_k
    elif family is Family.BG:
        twice_k = parse_k(k)
        make = lambda rho: StateSpec.bg(k, rho)  # noqa: E731
        order_param = twice_k - 1
    elif family is Family.PHILOPHASE_PLUS:
        if sigma is None or sigma < 0:
            raise ValueError("plus philophase check needs sigma >= 0")
        make = lambda rho: StateSpec.pplus(rho, sigma)  # noqa: E731
        order_param = int(sigma)
    else:
        raise ValueError(f"no identity-resolution measure for family {family.value}")

    n_ang = 2 * n_top + 4
    angles = TWO_PI * np.arange(n_ang) / n_ang
    levels = np.arange(n_top + 1)
    # the angular average of e^{i (n - n') theta} for every pair
    ang = np.exp(1j * np.outer(levels, angles))

    def integrate(order):
        total = np.zeros((n_top + 1, n_top + 1), dtype=complex)
        x, w = _legendre(order)
        for a, b in _radial_segments(family, n_top, order_param):
            half = 0.5 * (b - a)
            for xi, wi in zip(x, w):
                rho = a + half * (xi + 1.0)
                dens = _radial_density(family, rho, order_param)
                if dens == 0.0:
                    continue
                mags = np.abs(coefficients(make(rho), n_top))
                # angular average of C_n(rho e^{it}) conj(C_n'(rho e^{it}))
                vec = mags[:, None] * ang
                block = vec @ vec.conj().T / n_ang
                total += (wi * half * dens * TWO_PI) * block
        return total

    order = 32
    prev = integrate(order)
    converged = False
    while order < max_order:
        order *= 2
        cur = integrate(order)
        change = np.max(np.abs(cur - prev))
        prev = cur
        if change < tol:
            converged = True
            break
    values = {p: complex(prev[p[0], p[1]]) for p in pairs}
    dev = max(abs(v - (1.0 if a == b else 0.0)) for (a, b), v in values.items())
    return IdentityCheck(dev, values, order, converged)


# ---- analytic realizations, acting on polynomial coefficient arrays ----

def _deriv(c: np.ndarray) -> np.ndarray:
    out = np.zeros_like(c)
    out[:-1] = c[1:] * np.arange(1, c.size)
    return out


def _times_var(c: np.ndarray) -> np.ndarray:
    out = np.zeros_like(c)
    out[1:] = c[:-1]
    return out


def _realization(name: str, k: float):
    """Generators as maps on monomial coefficients, plus basis normalizations.

    For the circle, monomials are powers of ``w = exp(-i theta)`` so that
    ``d/dtheta = -i w d/dw``.
    """
    if name == "disk":
        ops = {
            "plus": lambda c: _times_var(_times_var(_deriv(c))) + 2 * k * _times_var(c),
            "minus": _deriv,
            "three": lambda c: _times_var(_deriv(c)) + k * c,
        }
        norm = lambda n: math.exp(0.5 * (math.lgamma(n + 2 * k) - math.lgamma(n + 1) - math.lgamma(2 * k)))  # noqa: E731
    elif name == "circle":
        # K_+ = e^{-i t}(1 + i d/dt), K_- = i e^{i t} d/dt, K_3 = i d/dt + 1/2
        w_ddw = lambda c: _times_var(_deriv(c))  # noqa: E731
        ops = {
            "plus": lambda c: _times_var(c + w_ddw(c)),
            "minus": _deriv,
            "three": lambda c: w_ddw(c) + 0.5 * c,
        }
        norm = lambda n: 1.0  # noqa: E731
    elif name == "plane":
        ops = {
            "plus": _times_var,
            "minus": lambda c: 2 * k * _deriv(c) + _times_var(_deriv(_deriv(c))),
            "three": lambda c: _times_var(_deriv(c)) + k * c,
        }
        norm = lambda n: math.exp(-0.5 * (math.lgamma(n + 1) + math.lgamma(n + 2 * k)))  # noqa: E731
    else:
        raise ValueError(f"unknown realization {name!r}")
    return ops, norm


def analytic_generator_check(realization: str, degree: int, *, k=None, sigma: int = 0) -> dict:
    """Compare differential-operator realizations with the matrix generators.

    Each basis function is stored as exact polynomial coefficients; the
    realization's operators act on them term by term and the result is
    expanded back in the basis and compared with the number-state matrix
    elements.

    Parameters
    ----------
    realization : {"disk", "circle", "plane", "modified_plane"}
    degree : int
        Highest basis index checked, at least 3.
    k : Bargmann index for ``disk`` and ``plane`` (``circle`` is ``k = 1/2``).
    sigma : shift for ``modified_plane``.

    Returns
    -------
    dict
        ``max_deviation`` over all generators and basis elements; for
        ``modified_plane`` also ``vacuum_residual``, the component of
        ``K_- u_0`` inside the function space (zero) and
        ``vacuum_outside``, the size of the part that falls outside it.
    """
    from .states import parse_k

    if degree < 3:
        raise ValueError(f"degree must be at least 3, got {degree}")
    top = degree + 3
    if realization == "modified_plane":
        sigma = int(sigma)
        if sigma < 0:
            raise ValueError("modified plane needs sigma >= 0")
        length = top + sigma + 3
        ops = {
            "plus": _times_var,
            "minus": lambda c: _deriv(c) + _times_var(_deriv(_deriv(c))),
            "three": lambda c: _times_var(_deriv(c)) + 0.5 * c,
        }

        def basis(n):
            c = np.zeros(length)
            c[n + sigma] = 1.0 / math.factorial(n + sigma)
            return c

        def expand(c):
            # coefficient of u_m sits at power m + sigma; lower powers lie outside
            return np.array([c[m + sigma] * math.factorial(m + sigma) for m in range(top)])

        mats = {
            "plus": build_operator("Kmod_plus", top, sigma=sigma).matrix,
            "minus": build_operator("Kmod_minus", top, sigma=sigma).matrix,
            "three": build_operator("Kmod_3", top, sigma=sigma).matrix,
        }
    else:
        kk = 0.5 if realization == "circle" else 0.5 * parse_k(k)
        ops, norm = _realization(realization, kk)
        length = top + 3

        def basis(n):
            c = np.zeros(length)
            c[n] = norm(n)
            return c

        def expand(c):
            return np.array([c[m] / norm(m) for m in range(top)])

        kspec = "1/2" if realization == "circle" else k
        mats = {
            "plus": build_operator("K_plus", top, k=kspec).matrix,
            "minus": build_operator("K_minus", top, k=kspec).matrix,
            "three": build_operator("K_3", top, k=kspec).matrix,
        }
    worst = 0.0
    for n in range(degree + 1):
        b = basis(n)
        for name, op in ops.items():
            got = expand(op(b))
            want = np.real(mats[name][:top, n])
            worst = max(worst, float(np.max(np.abs(got - want))))
    result = {"max_deviation": worst}
    if realization == "modified_plane":
        image = ops["minus"](basis(0))
        result["vacuum_residual"] = float(np.max(np.abs(expand(image))))
        result["vacuum_outside"] = float(np.max(np.abs(image[:sigma]))) if sigma else 0.0
    return result


def boundary_reconstruction_check(amps: FockAmplitudes, zeta: complex, points: int | None = None) -> float:
    """``|(1/2pi) int Theta(theta)/(1 - zeta e^{i theta}) dtheta - sum C_n zeta^n|``.

    The boundary values of the phase-state representation determine the
    disk function; ``|zeta| <= 0.9`` keeps the trapezoid rule converging
    geometrically.
    """
    zeta = complex(zeta)
    if abs(zeta) > 0.9:
        raise ValueError(f"|zeta| must be at most 0.9, got {abs(zeta)}")
    points = points or 2 * amps.cutoff + 512
    theta = TWO_PI * np.arange(points) / points
    integral = np.mean(fourier_series(amps.coefficients, theta) / (1.0 - zeta * np.exp(1j * theta)))
    series = np.polynomial.polynomial.polyval(zeta, amps.coefficients)
    return float(abs(integral - series))


def phase_state_limit_deviation(radius: float, theta: float, levels: int = 16) -> float:
    """Distance of rescaled ``k = 1/2`` coherent amplitudes from the phase-state pattern.

    ``(1 - r^2)^{-1/2} |1/2, r e^{i theta}>`` has amplitudes ``r^n e^{i n theta}``;
    returns ``max_n |r^n e^{i n theta} - e^{i n theta}|`` over the first
    ``levels`` number states, which vanishes as ``r -> 1``.
    """
    spec = StateSpec.su11cs("1/2", radius * complex(math.cos(theta), math.sin(theta)))
    c = coefficients(spec, levels - 1) / math.sqrt(1.0 - radius * radius)
    pattern = np.exp(1j * np.arange(levels) * theta)
    return float(np.max(np.abs(c - pattern)))


def number_phase_commutator_deviation(cutoff: int, theta0: float = -math.pi) -> float:
    """``max |<m|[n, phi]|m'> - i (delta - e^{i (m - m') theta0})|`` over the full matrix."""
    num = build_operator("number", cutoff).matrix
    phi = build_operator("phase_op", cutoff, theta0=theta0).matrix
    comm = num @ phi - phi @ num
    d = np.arange(cutoff + 1)[:, None] - np.arange(cutoff + 1)[None, :]
    expected = 1j * (np.eye(cutoff + 1) - np.exp(1j * d * theta0))
    return float(np.max(np.abs(comm - expected)))


def antinormal_commutator_deviation(name_a: str, name_b: str, cutoff: int, theta0: float = -math.pi) -> float:
    """Largest element of the antinormal commutator of two phase-related operators.

    Each operator is a real function of the phase (``cos``, ``sin``, ``phi``,
    ``phi2`` for the folded phase and its square); the two antinormal
    products are the kernels of ``g_a g_b`` and ``g_b g_a``.
    """

    def fn(name):
        if name == "phi":
            return lambda t: fold_phase(t, theta0)
        if name == "phi2":
            return lambda t: fold_phase(t, theta0) ** 2
        if name == "cos":
            return np.cos
        if name == "sin":
            return np.sin
        raise ValueError(f"unknown phase function {name!r}")

    ga, gb = fn(name_a), fn(name_b)
    rule = "gauss" if "phi" in name_a + name_b else "uniform"
    ab = antinormal_chain([("phase", ga), ("phase", gb)], cutoff, theta0, rule)
    ba = antinormal_chain([("phase", gb), ("phase", ga)], cutoff, theta0, rule)
    return float(np.max(np.abs(ab - ba)))


def antinormal_unitarity_deviation(amps: FockAmplitudes) -> tuple[float, float]:
    """Norm defect of ``E^dagger E`` without and with antinormal ordering.

    Returns ``(plain, antinormal)``: the plain product loses the vacuum
    probability ``|C_0|^2``; the antinormal kernel of ``e^{-i t} e^{i t} = 1``
    keeps the norm.
    """
    c = amps.coefficients
    e = _shift_lower(amps.cutoff + 1)
    plain = np.vdot(c, e.conj().T @ e @ c)
    anti = antinormal_chain([("phase", lambda t: np.exp(-1j * t)), ("phase", lambda t: np.exp(1j * t))], amps.cutoff)
    norm = np.vdot(c, c)
    return float(abs(norm - plain)), float(abs(norm - np.vdot(c, anti @ c)))


def standard_grid() -> list[StateSpec]:
    """Deterministic test grid: four families with twelve points each."""

    def polar(r, arg):
        return complex(r * math.cos(arg), r * math.sin(arg))

    grid = []
    for i, (k, r) in enumerate((k, r) for k in ("1/2", "1", "3/2", "2") for r in (0.1, 0.5, 0.8)):
        grid.append(StateSpec.su11cs(k, polar(r, 0.37 * i - 1.9)))
    for i, (k, r) in enumerate((k, r) for k in ("1/2", "1", "2") for r in (0.1, 1.0, 3.0, 8.0)):
        grid.append(StateSpec.bg(k, polar(r, 0.41 * i - 2.2)))
    for i, (s, r) in enumerate((s, r) for s in (0, -1, -3) for r in (0.2, 1.0, 3.0, 6.0)):
        grid.append(StateSpec.pminus(polar(r, 0.53 * i - 2.8), s))
    for i, (s, r) in enumerate((s, r) for s in (0, 1, 3) for r in (0.5, 1.0, 3.0, 6.0)):
        grid.append(StateSpec.pplus(polar(r, 0.29 * i - 1.3), s))
    return grid
