import math

import mpmath as mp
import numpy as np
import pytest

from hpsu11.contraction import ContractionReport, contraction_report


def test_g2_gap_at_twenty():
    gap = contraction_report(20).g2_gap
    assert 5e-4 / 2 <= gap <= 5e-4 * 2


def test_mean_ratio_at_fifty():
    dev = abs(contraction_report(50).mean_ratio - 1)
    assert 5e-3 / 2 <= dev <= 5e-3 * 2


def test_var_ratio_at_twenty():
    dev = abs(contraction_report(20).var_ratio - 1)
    assert 1e-5 / 3 <= dev <= 1e-5 * 3


def test_g2_gap_three_point_order():
    gaps = [contraction_report(s).g2_gap for s in (5, 20, 50)]
    assert gaps[2] < gaps[1] < gaps[0]


@pytest.mark.parametrize("field", ["mean_ratio", "var_ratio", "g2_gap", "fidelity"])
def test_monotone_approach_from_five(field):
    # stated: every distance from the Glauber values shrinks with sigma for sigma >= 5
    target = 0.0 if field == "g2_gap" else 1.0
    dist = [abs(getattr(contraction_report(s), field) - target) for s in range(5, 41)]
    rises = [s for s, a, b in zip(range(6, 41), dist, dist[1:]) if b > a]
    assert not rises, f"{field} distance grows at sigma = {rises}"


def test_monotone_approach_past_crossover():
    # past sigma = 25 every distance does shrink
    reps = [contraction_report(s) for s in range(25, 101, 5)]
    for a, b in zip(reps, reps[1:]):
        assert abs(b.mean_ratio - 1) < abs(a.mean_ratio - 1)
        assert abs(b.var_ratio - 1) < abs(a.var_ratio - 1)
        assert b.g2_gap < a.g2_gap
        assert b.fidelity > a.fidelity


@pytest.mark.parametrize("sigma", [30, 40, 50, 100, 200])
def test_fidelity_threshold(sigma):
    assert contraction_report(sigma).fidelity >= 0.999


@pytest.mark.parametrize("sigma", [3, 20])
def test_fidelity_brute_force(sigma):
    mp.mp.dps = 40
    r = 2 * sigma
    top = 6 * sigma + 80
    plus = [mp.mpf(r) ** (n + sigma) / mp.factorial(n + sigma) for n in range(top)]
    plus_norm = mp.sqrt(mp.fsum(x * x for x in plus))
    alpha = mp.sqrt(sigma)
    glauber = [mp.exp(-alpha**2 / 2) * alpha**n / mp.sqrt(mp.factorial(n)) for n in range(top)]
    want = (mp.fsum(a * b for a, b in zip(plus, glauber)) / plus_norm) ** 2
    assert contraction_report(sigma).fidelity == pytest.approx(float(want), rel=1e-12)


def test_report_fields():
    rep = contraction_report(7)
    assert isinstance(rep, ContractionReport)
    assert rep.sigma == 7 and rep.abs_z == 14.0
    assert 0 < rep.fidelity <= 1
    with pytest.raises(Exception):
        rep.sigma = 8


@pytest.mark.parametrize("bad", [0, -3, 2.5])
def test_invalid_sigma(bad):
    with pytest.raises(ValueError):
        contraction_report(bad)


def test_ratios_tend_to_one():
    rep = contraction_report(400)
    assert abs(rep.mean_ratio - 1) < 2e-3
    assert abs(rep.var_ratio - 1) < 1e-6
    assert rep.g2_gap < 1e-5
    assert np.isfinite(rep.fidelity) and rep.fidelity > 0.9999
    assert math.isclose(rep.abs_z, 800.0)
