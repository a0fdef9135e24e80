"""Acceptance criteria, one test each.

Every test collects its sub-checks, prints a single ``PASS``/``FAIL`` line
with the elapsed time, and then asserts, so the summary lines appear in the
log even when a criterion fails.
"""
import cmath
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import i0e

from hpsu11 import oracle
from hpsu11.contraction import contraction_report
from hpsu11.phase import phase_moments, q_theta
from hpsu11.states import StateSpec
from hpsu11.stats import photon_stats
from hpsu11.uncertainty import r_functions, sigma_intelligence, v_function
from hpsu11.verify import oracle_equivalence
from test_uncertainty import _intelligence_brute


class Criterion:
    """Accumulates named sub-checks and the wall time of one criterion."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.failures = []
        self.started = time.perf_counter()

    def check(self, ok, detail):
        if not ok:
            self.failures.append(detail)

    def finish(self, report_line):
        elapsed = time.perf_counter() - self.started
        self.check(elapsed < self.budget, f"runtime {elapsed:.2f} s over budget {self.budget} s")
        status = "PASS" if not self.failures else "FAIL"
        line = f"{status} criterion {self.number}: {self.title} ({elapsed:.2f} s, budget {self.budget} s)"
        if self.failures:
            line += " :: " + "; ".join(self.failures[:5])
        report_line(line)
        assert not self.failures, "; ".join(self.failures)


def test_criterion_1_g2_closed_forms(report_line):
    c = Criterion(1, "g2 closed forms", 1.0)
    for tk in (1, 2, 3, 4):
        k = Fraction(tk, 2)
        for r in (0.1, 0.5, 0.9):
            g2 = photon_stats(StateSpec.su11cs(k, r)).g2
            dev = abs(g2 - (1 + 1 / (2 * k)))
            c.check(dev <= 1e-12, f"SU11CS k={k} |zeta|={r} dev {dev:.2e}")
    g2 = photon_stats(StateSpec.bg("1/2", 1e-3)).g2
    c.check(abs(g2 - 0.5) <= 1e-3, f"BG quantum limit g2 {g2}")
    c.finish(report_line)


def test_criterion_2_antibunching(report_line):
    c = Criterion(2, "philophase antibunching", 1.0)
    g2 = photon_stats(StateSpec.pminus(1e-2, -1)).g2
    c.check(g2 <= 1e-2, f"sigma=-1 g2 {g2}")
    g2 = photon_stats(StateSpec.pminus(1e-2, -2)).g2
    c.check(abs(g2 - 0.5) <= 1e-2, f"sigma=-2 g2 {g2}")
    c.finish(report_line)


def test_criterion_3_contraction(report_line):
    c = Criterion(3, "contraction numbers", 5.0)
    r20, r50 = contraction_report(20), contraction_report(50)
    c.check(r20.g2_gap <= 1e-3, f"sigma=20 g2 gap {r20.g2_gap:.3e}")
    c.check(abs(r50.mean_ratio - 1) <= 1e-2, f"sigma=50 mean ratio {r50.mean_ratio}")
    c.check(abs(r20.var_ratio - 1) <= 3e-5, f"sigma=20 variance ratio {r20.var_ratio}")
    c.finish(report_line)


def test_criterion_4_phase_formalism(report_line):
    c = Criterion(4, "phase formalism", 5.0)
    vac = phase_moments(StateSpec.glauber(0.0))
    c.check(abs(vac.var_phi - math.pi**2 / 3) <= 1e-9, f"vacuum var_phi {vac.var_phi}")
    c.check(abs(vac.var_cos - 0.5) <= 1e-9, f"vacuum var_cos {vac.var_cos}")
    for i in range(1, 10):
        r = i / 10
        got = phase_moments(StateSpec.su11cs("1/2", r)).var_cos
        c.check(abs(got - 0.5 * (1 - r * r)) <= 1e-10, f"SU11CS |zeta|={r} var_cos {got}")
    theta = np.linspace(-math.pi, math.pi, 181)
    for z in (0.1, 1.0, 2.5 * cmath.exp(0.6j), 8.0j):
        spec = StateSpec.bg("1/2", z)
        r, phi = abs(z), cmath.phase(z)
        # von Mises density with the exponential scaled out of I_0
        vm = np.exp(2 * r * (np.cos(theta - phi) - 1)) / (2 * math.pi * i0e(2 * r))
        series = q_theta(spec, theta, "series")
        closed = q_theta(spec, theta, "closed")
        dev = max(np.max(np.abs(series - vm)), np.max(np.abs(closed - series)))
        c.check(dev <= 1e-9, f"BG |z|={r:g} von Mises dev {dev:.2e}")
    c.finish(report_line)


def test_criterion_5_uncertainty_limits(report_line):
    c = Criterion(5, "uncertainty limits", 10.0)
    target = math.pi**2 / 12
    for spec in (StateSpec.su11cs("1/2", 1e-3), StateSpec.bg("1/2", 1e-3)):
        v = v_function(spec)
        c.check(abs(v - target) <= 1e-2, f"{spec.label()} V {v}")
    r1, _ = r_functions(StateSpec.bg("1/2", 20j))
    want = 0.25 * (1 + 1 / 40)
    c.check(abs(r1 - want) <= 0.02 * want, f"R1 {r1} vs {want}")
    for spec in oracle.standard_grid():
        v = v_function(spec)
        c.check(v >= 0.25 - 1e-9, f"{spec.label()} V {v}")
    c.finish(report_line)


def test_criterion_6_intelligent_equality(report_line):
    c = Criterion(6, "intelligent-state equality", 2.0)
    for sigma in (0, -1, -3):
        for r in (0.5, 1.0, 5.0):
            spec = StateSpec.pminus(r * cmath.exp(0.7j), sigma)
            for source, (var1, var2, half) in (("closed", sigma_intelligence(spec)), ("brute", _intelligence_brute(spec))):
                dev = abs(var1 * var2 - half * half) / (half * half)
                c.check(dev <= 1e-9, f"{source} sigma={sigma} |z|={r} rel dev {dev:.2e}")
    c.finish(report_line)


def test_criterion_7_oracle_equivalence(report_line):
    c = Criterion(7, "oracle equivalence", 60.0)
    grid = oracle.standard_grid()
    c.check(len({s.family for s in grid}) == 4 and len(grid) >= 48, "grid shape")
    for spec in grid:
        score, field = oracle_equivalence(spec, rel_tol=1e-8, abs_tol=1e-10)
        c.check(score <= 1.0, f"{spec.label()} {field} score {score:.2g}")

    # property-based sweep off the grid
    misses = []

    @settings(max_examples=60, deadline=None, database=None)
    @given(
        family=st.sampled_from(["su11cs", "bg", "pminus", "pplus"]),
        mod=st.floats(0.02, 0.9),
        arg=st.floats(-math.pi, math.pi),
        index=st.integers(0, 3),
    )
    def sweep(family, mod, arg, index):
        z = mod * cmath.exp(1j * arg)
        spec = {
            "su11cs": lambda: StateSpec.su11cs(Fraction(index + 1, 2), z),
            "bg": lambda: StateSpec.bg(Fraction(index + 1, 2), 8 * z),
            "pminus": lambda: StateSpec.pminus(8 * z, -index),
            "pplus": lambda: StateSpec.pplus(8 * z, index),
        }[family]()
        score, field = oracle_equivalence(spec, rel_tol=1e-8, abs_tol=1e-10)
        if score > 1.0:
            misses.append(f"{spec.label()} {field} score {score:.2g}")

    sweep()
    c.check(not misses, "; ".join(misses[:3]))

    for cutoff, theta0 in ((16, -math.pi), (64, -1.3), (128, 0.4)):
        dev = oracle.number_phase_commutator_deviation(cutoff, theta0)
        c.check(dev <= 1e-13, f"[n, phi] N={cutoff} dev {dev:.2e}")
    for kw in ({"k": "1/2"}, {"k": "1"}, {"k": "3/2"}, {"k": "2"}, {"sigma": 0}, {"sigma": 2}, {"sigma": 5}):
        rep = oracle.algebra_check(cutoff=64, **kw)
        worst = max(rep[key] for key in ("comm_3_plus", "comm_3_minus", "comm_minus_plus", "casimir"))
        c.check(worst <= 1e-12, f"algebra {kw} dev {worst:.2e}")
        if "sigma" in kw:
            c.check(abs(rep["casimir_value"] + 0.25) <= 1e-11, f"modified Casimir {rep['casimir_value']}")
    pairs = [(n, m) for n in range(9) for m in range(n, 9)]
    for family, kw in (("su11cs", {"k": "1"}), ("su11cs", {"k": "3/2"}), ("bg", {"k": "1/2"}), ("bg", {"k": "1"}),
                       ("bg", {"k": "2"}), ("pplus", {"sigma": 0}), ("pplus", {"sigma": 2})):
        res = oracle.identity_resolution_check(family, pairs, **kw)
        c.check(res.max_deviation <= 1e-6, f"identity {family} {kw} dev {res.max_deviation:.2e}")
    c.finish(report_line)


def test_criterion_8_monotonicity(report_line):
    c = Criterion(8, "monotonicity panels", 10.0)

    def var_phi(spec):
        return phase_moments(spec).var_phi

    ks = [Fraction(tk, 2) for tk in (1, 2, 3, 4)]
    for r in (0.3, 0.6, 0.9):
        v = [var_phi(StateSpec.su11cs(k, r)) for k in ks]
        c.check(all(a > b for a, b in zip(v, v[1:])), f"SU11CS |zeta|={r} not decreasing in k: {v}")
    for z in (0.5, 2.0, 6.0):
        v = [var_phi(StateSpec.bg(k, z)) for k in ks]
        c.check(all(a < b for a, b in zip(v, v[1:])), f"BG |z|={z} not increasing in k: {v}")
        v = [var_phi(StateSpec.pplus(z, s)) for s in (0, 1, 2, 3)]
        c.check(all(a < b for a, b in zip(v, v[1:])), f"plus |z|={z} not increasing in sigma: {v}")
    v = v_function(StateSpec.su11cs("1/2", 0.95))
    c.check(v > 10, f"V(0.95) {v}")
    c.finish(report_line)
