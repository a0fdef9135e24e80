import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from conftest import rel_err
from hpsu11 import oracle
from hpsu11.states import StateSpec, amplitudes
from hpsu11.stats import photon_stats
from hpsu11.uncertainty import (
    DegenerateError,
    r_functions,
    sigma_intelligence,
    u_function,
    uncertainty_report,
    v_function,
)

PI2_12 = math.pi**2 / 12


def _polar(r, arg):
    return r * cmath.exp(1j * arg)


def _v_su11cs_half(r):
    # closed form for k = 1/2: (pi^2/3 + 4 Li_2(-r)) / (4 (1 - r)^2)
    r = mpmath.mpf(r)
    return (mpmath.pi**2 / 3 + 4 * mpmath.polylog(2, -r)) / (4 * (1 - r) ** 2)


def _bg_half_parts(r):
    x = 2 * mpmath.mpf(r)
    i0 = mpmath.besseli(0, x)
    m = lambda n: mpmath.besseli(n, x) / i0  # noqa: E731
    var_n = r * m(1) + r * r * m(2) - (r * m(1)) ** 2
    var_phi = mpmath.pi**2 / 3 + 4 * mpmath.nsum(lambda n: (-1) ** n * m(int(n)) / n**2, [1, mpmath.inf])
    return var_n, var_phi, m


def _v_bg_half(r):
    var_n, var_phi, _ = _bg_half_parts(r)
    gap = 1 - mpmath.exp(-2 * mpmath.mpf(r)) / mpmath.besseli(0, 2 * mpmath.mpf(r))
    return var_n * var_phi / gap**2


@pytest.mark.parametrize("r", [0.01, 0.2, 0.5, 0.8, 0.95])
def test_v_su11cs_half_closed_form(r):
    assert rel_err(v_function(StateSpec.su11cs("1/2", _polar(r, 0.4))), _v_su11cs_half(r)) < 1e-9


@pytest.mark.parametrize("r", [0.01, 0.5, 2.0, 10.0, 30.0])
def test_v_bg_half_closed_form(r):
    assert rel_err(v_function(StateSpec.bg("1/2", _polar(r, -1.0))), _v_bg_half(r)) < 1e-9


def test_v_limits():
    assert abs(v_function(StateSpec.su11cs("1/2", 1e-3)) - PI2_12) < 1e-2
    z = 0.01
    assert abs(v_function(StateSpec.bg("1/2", z)) - (PI2_12 - z * (1 - PI2_12))) < 5e-4
    v30 = v_function(StateSpec.bg("1/2", 30.0))
    assert abs(v30 - 0.25) / 0.25 < 0.02
    assert rel_err(v30, _v_bg_half(30.0)) < 1e-9


@pytest.mark.parametrize("r", [0.05, 0.4, 0.9])
@pytest.mark.parametrize("arg", [0.3, math.pi / 2, 2.2])
def test_r_su11cs_half_closed_form(r, arg):
    r1, r2 = r_functions(StateSpec.su11cs("1/2", _polar(r, arg)))
    assert rel_err(r1, 1 / (2 * (1 - r * r) * math.sin(arg) ** 2)) < 1e-9
    if arg == math.pi / 2:
        assert r2 is None  # <C> vanishes
    else:
        assert rel_err(r2, 1 / (2 * (1 - r * r) * math.cos(arg) ** 2)) < 1e-9


@pytest.mark.parametrize("r", [0.05, 1.0, 6.0])
@pytest.mark.parametrize("arg", [0.3, 1.2])
def test_r_bg_half_closed_form(r, arg):
    var_n, _, m = _bg_half_parts(r)
    var_cos = (1 - m(2)) / 2 + (m(2) - m(1) ** 2) * math.cos(arg) ** 2
    ref = var_n * var_cos / (m(1) * math.sin(arg)) ** 2
    r1, _ = r_functions(StateSpec.bg("1/2", _polar(r, arg)))
    assert rel_err(r1, ref) < 1e-9


def test_r_examples():
    r1, r2 = r_functions(StateSpec.su11cs("1/2", _polar(1e-4, math.pi / 2)))
    assert abs(r1 - 0.5) < 1e-6
    assert r2 is None
    r1, _ = r_functions(StateSpec.bg("1/2", 20j))
    assert abs(r1 - 0.25625) / 0.25625 < 0.02
    r1, _ = r_functions(StateSpec.bg("1/2", 1e-4j))
    assert abs(r1 - 0.5) < 1e-3


def test_u_examples():
    for r in (0.2, 0.7):
        spec = StateSpec.su11cs("1/2", _polar(r, 1.0))
        var_n = r * r / (1 - r * r) ** 2
        assert rel_err(u_function(spec), var_n * (1 - r * r) / (r * r)) < 1e-12
    spec = StateSpec.bg("1", _polar(2.0, math.pi / 4))
    r1, r2 = r_functions(spec)
    u = u_function(spec)
    assert rel_err(r1, u) < 1e-12 and rel_err(r2, u) < 1e-12
    spec = StateSpec.bg("1/2", 30.0)
    assert abs(u_function(spec) - v_function(spec)) / v_function(spec) < 0.05


def test_degenerate_inputs():
    vac = StateSpec.bg("1/2", 0)
    with pytest.raises(DegenerateError):
        v_function(vac)
    with pytest.raises(DegenerateError):
        u_function(vac)
    rep = uncertainty_report(vac)
    assert rep.v is None and rep.u is None and rep.r1 is None and rep.r2 is None
    assert rep.q_at_theta0 == pytest.approx(1 / (2 * math.pi))
    # a number state is degenerate too: flat phase distribution
    assert uncertainty_report(StateSpec.pminus(0, -2)).v is None


@pytest.mark.parametrize("spec", oracle.standard_grid(), ids=lambda s: s.label())
def test_lower_bounds_on_grid(spec):
    rep = uncertainty_report(spec)
    assert rep.v >= 0.25 - 1e-9
    for value in (rep.r1, rep.r2, rep.u):
        if value is not None:
            assert value >= 0.25 - 1e-9


def test_su11cs_blow_up():
    rs = np.linspace(0.5, 0.95, 10)
    v = [v_function(StateSpec.su11cs("1/2", r)) for r in rs]
    assert all(a < b for a, b in zip(v, v[1:]))
    assert v[-1] > 10


def test_bg_convergence_ordering():
    v = [v_function(StateSpec.bg(Fraction(tk, 2), 10.0)) for tk in (1, 2, 3, 4)]
    assert all(a < b for a, b in zip(v, v[1:]))


def test_su11cs_v_minimum_recorded():
    # data only: where V(k, .) bottoms out for a few k
    rs = np.linspace(0.05, 0.95, 19)
    for tk in (1, 4, 8):
        v = [v_function(StateSpec.su11cs(Fraction(tk, 2), r)) for r in rs]
        assert min(v) >= 0.25 - 1e-9


def _intelligence_brute(spec):
    """Antinormal variances of S1, S2 and the half commutator from matrices."""
    amps = amplitudes(spec, 1e-26)
    c = amps.coefficients
    size = amps.cutoff + 1
    z = spec.z
    n = np.diag(np.arange(size, dtype=float))
    e = np.eye(size, k=1)
    x_op = (np.conj(z) * e + z * e.T) / 2
    y_op = (np.conj(z) * e - z * e.T) / 2j
    x_sq = oracle.antinormal_matrix(lambda t: (z.real * np.cos(t) + z.imag * np.sin(t)) ** 2, amps.cutoff)
    y_sq = oracle.antinormal_matrix(lambda t: (z.real * np.sin(t) - z.imag * np.cos(t)) ** 2, amps.cutoff)

    def ev(m):
        return np.vdot(c, m @ c)

    mean1 = ev(n - x_op).real
    var1 = (ev(n @ n) - ev(n @ x_op + x_op @ n) + ev(x_sq)).real - mean1**2
    var2 = ev(y_sq).real - ev(y_op).real ** 2
    half = abs(ev(n @ y_op - y_op @ n)) / 2
    return var1, var2, half


@pytest.mark.parametrize("sigma", [0, -1, -3])
@pytest.mark.parametrize("r", [0.5, 1.0, 5.0])
def test_intelligent_equality(sigma, r):
    spec = StateSpec.pminus(_polar(r, 0.7), sigma)
    var1, var2, half = sigma_intelligence(spec)
    assert abs(math.sqrt(var1 * var2) - half) / half < 1e-9
    i_ratio = float(mpmath.besseli(1, 2 * r) / mpmath.besseli(0, 2 * r))
    for value in (var1, var2, half):
        assert rel_err(value, r / 2 * i_ratio) < 1e-12
    brute = _intelligence_brute(spec)
    for a, b in zip((var1, var2, half), brute):
        assert rel_err(a, b) < 1e-10


def test_intelligence_examples():
    expected = 0.5 * float(mpmath.besseli(1, 2) / mpmath.besseli(0, 2))
    for sigma in (0, -3):
        triple = sigma_intelligence(StateSpec.pminus(1.0, sigma))
        assert all(abs(v - expected) < 1e-14 for v in triple)
    assert sigma_intelligence(StateSpec.pminus(0, -2)) == (0.0, 0.0, 0.0)
    assert max(sigma_intelligence(StateSpec.pminus(1e-5, -1))) < 1e-9
    with pytest.raises(ValueError):
        sigma_intelligence(StateSpec.bg("1/2", 1.0))


def test_report_fields():
    spec = StateSpec.bg("1", 1.0 + 1.0j)
    rep = uncertainty_report(spec)
    assert rep.var_n == photon_stats(spec).variance
    assert rep.v == v_function(spec)
