import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rel_err
from hpsu11 import specialfn as sf


@pytest.mark.parametrize("n", [0, 1, 5, 20, 21, 170, 1000, 10000])
def test_log_factorial_matches_mpmath(n):
    assert rel_err(sf.log_factorial(n), mpmath.log(mpmath.factorial(n))) < 1e-15 or n <= 1


@pytest.mark.parametrize("n", [0, 1, 2, 7, 40])
@pytest.mark.parametrize("x", [0.0, 1e-8, 0.3, 2.0, 15.0, 80.0, 600.0])
def test_bessel_i_against_mpmath(n, x):
    ref = mpmath.besseli(n, x)
    if ref == 0:
        assert sf.bessel_i(n, x) == 0.0
        return
    # values come from exp(log I), so the log's rounding grows with x
    tol = 1e-13 * max(1.0, x)
    assert rel_err(sf.bessel_i(n, x), ref) < tol
    assert rel_err(sf.bessel_ie(n, x), ref * mpmath.exp(-x)) < tol


@pytest.mark.parametrize("n", [0, 3, 50])
def test_log_bessel_i_past_overflow(n):
    x = 5000.0
    ref = mpmath.log(mpmath.besseli(n, x))
    assert abs(sf.log_bessel_i(n, x) - float(ref)) < 1e-12 * abs(float(ref))
    with pytest.raises(OverflowError):
        math.exp(sf.log_bessel_i(n, x))


@given(n=st.integers(0, 30), x=st.floats(1e-3, 300.0))
@settings(max_examples=60, deadline=None)
def test_bessel_i_ratio_property(n, x):
    ref = mpmath.besseli(n + 1, x) / mpmath.besseli(n, x)
    assert rel_err(sf.bessel_i_ratio(n, x), ref) < 1e-12


@pytest.mark.parametrize("n", [0, 1, 2, 9])
@pytest.mark.parametrize("x", [1e-6, 0.1, 1.0, 1.999, 2.0, 2.001, 7.5, 40.0, 700.0])
def test_bessel_k_against_mpmath(n, x):
    ref = mpmath.besselk(n, x)
    assert rel_err(sf.bessel_ke(n, x), ref * mpmath.exp(x)) < 1e-12
    if x < 600:
        assert rel_err(sf.bessel_k(n, x), ref) < 1e-12


def _tail_ref(nu, h, start):
    h = mpmath.mpf(h)
    return mpmath.nsum(lambda m: h ** (2 * m + nu) / (mpmath.factorial(m) * mpmath.factorial(m + nu)), [start, mpmath.inf])


@pytest.mark.parametrize("nu,h,start", [(0, 1.0, 0), (0, 1.0, 3), (1, 0.01, 2), (0, 40.0, 200), (2, 10.0, 5), (0, 0.5, 0)])
def test_bessel_tail_against_mpmath(nu, h, start):
    ref = _tail_ref(nu, h, start)
    assert rel_err(sf.bessel_tail(nu, h, start), ref) < 1e-13
    assert abs(sf.log_bessel_tail(nu, h, start) - float(mpmath.log(ref))) < 1e-13 * max(1.0, abs(float(mpmath.log(ref))))


def test_bessel_tail_start_zero_is_bessel_i():
    for h in (0.2, 3.0, 25.0):
        assert rel_err(sf.bessel_tail(0, h), sf.bessel_i(0, 2 * h)) < 1e-14
        assert rel_err(sf.bessel_tail(3, h), sf.bessel_i(3, 2 * h)) < 1e-14


@pytest.mark.parametrize("nu", [0, 1, 3])
@pytest.mark.parametrize("y", [0.5, -4.0, 2.0 + 3.0j, -30.0 + 1.0j])
@pytest.mark.parametrize("start", [0, 2])
def test_bessel_i_reduced_complex(nu, y, start):
    yc = mpmath.mpc(y)
    ref = mpmath.nsum(lambda m: yc**m / (mpmath.factorial(m) * mpmath.factorial(m + nu)), [start, mpmath.inf])
    got = sf.bessel_i_reduced(nu, y, start)
    assert abs(got - complex(ref)) <= 1e-12 * max(abs(complex(ref)), 1e-3)


def test_truncated_sums_fields():
    ts = sf.truncated_sums(2.0, 3)
    assert rel_err(ts.t0, _tail_ref(0, 2.0, 3)) < 1e-14
    assert rel_err(ts.t1, _tail_ref(1, 2.0, 2)) < 1e-14
    with pytest.raises(OverflowError):
        sf.truncated_sums(400.0, 200)
    assert math.isfinite(sf.log_bessel_tail(0, 400.0, 200))


@pytest.mark.parametrize(
    "call",
    [
        lambda: sf.bessel_i(-1, 1.0),
        lambda: sf.bessel_i(1.5, 1.0),
        lambda: sf.bessel_i(0, float("nan")),
        lambda: sf.bessel_k(0, 0.0),
        lambda: sf.bessel_k(0, -1.0),
        lambda: sf.bessel_i(sf.MAX_ORDER + 1, 1.0),
        lambda: sf.truncated_sums(-1.0, 0),
        lambda: sf.truncated_sums(1.0, -2),
    ],
)
def test_domain_errors(call):
    with pytest.raises(sf.DomainError):
        call()


def test_spec_examples():
    assert sf.bessel_i(0, 0.0) == 1.0
    assert sf.bessel_i(3, 0.0) == 0.0
    assert sf.log_factorial(0) == 0.0
    assert sf.log_factorial(1) == 0.0
    assert sf.log_factorial(5) == math.log(120)
    assert sf.bessel_k(0, 5.0) < sf.bessel_k(0, 4.0)
    assert abs(sf.truncated_sums(1.0, 1).t0 - (sf.bessel_i(0, 2.0) - 1.0)) < 1e-14
    for z in (0.0, 0.7, 3.0):
        ts = sf.truncated_sums(z, 0)
        assert ts.t0 == pytest.approx(sf.bessel_i(0, 2 * z), rel=1e-15)
        assert sf.truncated_sums(z, 1).t1 == pytest.approx(sf.bessel_i(1, 2 * z), rel=1e-15)
        assert ts.t1 == pytest.approx(sf.bessel_i(1, 2 * z), rel=1e-15)
    direct = math.fsum(0.25**m / math.factorial(m) ** 2 for m in range(3, 40))
    assert sf.truncated_sums(0.5, 3).t0 == pytest.approx(direct, rel=1e-15)


@pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 20.0, 100.0])
def test_wronskian(x):
    for n in range(11):
        w = sf.bessel_ie(n, x) * sf.bessel_ke(n + 1, x) + sf.bessel_ie(n + 1, x) * sf.bessel_ke(n, x)
        assert abs(w * x - 1.0) < 1e-10


def test_k0_moment_integral():
    # int_0^inf t K_0(t) dt = 1; adaptive quadrature copes with the log at 0
    from scipy.integrate import quad

    head, _ = quad(lambda t: t * sf.bessel_k(0, t) if t > 0 else 0.0, 0.0, 2.0, epsabs=1e-14)
    tail, _ = quad(lambda t: t * sf.bessel_k(0, t), 2.0, 60.0, epsabs=1e-14)
    assert abs(head + tail - 1.0) < 1e-10


@pytest.mark.parametrize("x", [0.5, 3.0, 10.0])
def test_generating_identity(x):
    theta = [-2.5, 0.0, 1.1, 3.0]
    big_n = 60
    for th in theta:
        total = sf.bessel_i(0, x) + 2 * math.fsum(sf.bessel_i(n, x) * math.cos(n * th) for n in range(1, big_n + 1))
        assert abs(total - math.exp(x * math.cos(th))) < 1e-10 * math.exp(x)


def test_truncated_sum_tail_vs_difference():
    # the forward difference is evaluated in 200-digit arithmetic: in doubles it
    # cancels catastrophically once sigma is large against |z|^2
    with mpmath.workdps(200):
        for z in (0.5, 2.0, 10.0):
            for sigma in (0, 1, 5, 30):
                zz = mpmath.mpf(z)
                diff = mpmath.besseli(0, 2 * zz) - mpmath.fsum(zz ** (2 * m) / mpmath.factorial(m) ** 2 for m in range(sigma))
                assert rel_err(sf.truncated_sums(z, sigma).t0, diff) < 1e-10
