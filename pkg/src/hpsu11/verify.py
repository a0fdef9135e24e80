"""Invariant suites run by ``hpsu11 verify``.

Each suite returns a list of :class:`Check` records comparing a measured
deviation or value with a threshold.  The report produced by
:func:`verify_report` is plain JSON-serializable data with a top-level
``schema_version``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import oracle
from .contraction import contraction_report
from .phase import RANDOM_PHASE_VARIANCE, phase_moments, q_theta
from .states import StateSpec, amplitudes, parse_k
from .stats import photon_stats
from .uncertainty import r_functions, sigma_intelligence, u_function, v_function

__all__ = [
    "SCHEMA_VERSION",
    "SUITES",
    "Check",
    "oracle_equivalence",
    "run_suite",
    "verify_report",
]

SCHEMA_VERSION = 1
SUITES = ("algebra", "eigen", "identity", "phase", "uncertainty", "contraction")

# closed form vs brute force: relative, with this absolute floor
_REL_TOL = 1e-8
_ABS_TOL = 1e-10
# amplitudes for brute-force comparisons are cut where the neglected probability is this small
_ORACLE_TAIL = 1e-24


@dataclass(frozen=True)
class Check:
    """One verified property.

    ``passed`` is ``measured <= threshold`` for ``comparison == "<="`` and
    ``measured >= threshold`` for ``">="``.
    """

    suite: str
    name: str
    measured: float
    threshold: float
    comparison: str = "<="

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.measured):
            return False
        if self.comparison == "<=":
            return self.measured <= self.threshold
        return self.measured >= self.threshold

    def as_dict(self) -> dict:
        out = asdict(self)
        out["measured"] = float(self.measured)
        out["threshold"] = float(self.threshold)
        out["passed"] = bool(self.passed)
        return out


def _stats_fields(stats):
    return {"mean_n": stats.mean_n, "variance": stats.variance, "g2": stats.g2}


_PHASE_FIELDS = ("mean_phi", "var_phi", "mean_cos", "var_cos", "mean_sin", "var_sin", "m1", "m2", "boundary_gap")


def oracle_equivalence(spec: StateSpec, rel_tol: float = _REL_TOL, abs_tol: float = _ABS_TOL) -> tuple[float, str]:
    """Worst disagreement between closed forms and brute force for one state.

    Returns
    -------
    (score, field)
        ``score`` is the largest ``|closed - brute| / max(abs_tol, rel_tol |brute|)``
        over photon statistics and phase moments, so that ``score <= 1``
        means every field agrees to the relative tolerance or the absolute
        floor, whichever is looser; ``field`` names the worst one.
    """
    amps = amplitudes(spec, _ORACLE_TAIL)
    pairs = []
    closed, brute = _stats_fields(photon_stats(spec)), _stats_fields(oracle.fock_photon_stats(amps))
    pairs += [(name, closed[name], brute[name]) for name in closed]
    pm_closed = phase_moments(spec)
    pm_brute = oracle.fock_phase_moments(amps)
    pairs += [(name, getattr(pm_closed, name), getattr(pm_brute, name)) for name in _PHASE_FIELDS]
    worst, worst_name = 0.0, ""
    for name, a, b in pairs:
        if a is None or b is None:
            if a is b:
                continue
            return math.inf, name
        score = abs(a - b) / max(abs_tol, rel_tol * abs(b))
        if score > worst:
            worst, worst_name = score, name
    return worst, worst_name


def _algebra(cutoff: int, tol: float | None) -> list[Check]:
    checks = []
    exact = 1e-12
    for k in ("1/2", "1", "3/2", "2"):
        report = oracle.algebra_check(k=k, cutoff=cutoff)
        for key in ("comm_3_plus", "comm_3_minus", "comm_minus_plus", "casimir"):
            checks.append(Check("algebra", f"k={k} {key}", report[key], exact))
        twice = parse_k(k)
        expected = 0.25 * twice * (twice - 2)
        checks.append(Check("algebra", f"k={k} casimir value", abs(report["casimir_value"] - expected), exact))
    for sigma in (0, 2, 5):
        report = oracle.algebra_check(sigma=sigma, cutoff=cutoff)
        for key in ("comm_3_plus", "comm_3_minus", "comm_minus_plus", "casimir"):
            checks.append(Check("algebra", f"sigma={sigma} antinormal {key}", report[key], exact))
        checks.append(Check("algebra", f"sigma={sigma} casimir value", abs(report["casimir_value"] + 0.25), exact))
    for realization, kw in (
        ("disk", {"k": "1/2"}),
        ("disk", {"k": "2"}),
        ("circle", {}),
        ("plane", {"k": "1/2"}),
        ("plane", {"k": "3/2"}),
        ("modified_plane", {"sigma": 0}),
        ("modified_plane", {"sigma": 3}),
    ):
        report = oracle.analytic_generator_check(realization, 12, **kw)
        label = realization + "".join(f" {key}={val}" for key, val in kw.items())
        checks.append(Check("algebra", f"{label} generators", report["max_deviation"], 1e-13))
        if realization == "modified_plane":
            checks.append(Check("algebra", f"{label} vacuum condition", report["vacuum_residual"], 1e-13))
    return checks


def _eigen(cutoff: int, tol: float | None) -> list[Check]:
    checks = []
    tail = 1e-12
    for k, z in (("1/2", 1.5 - 0.5j), ("1", 2.0j), ("2", -3.0 + 1.0j)):
        amps = amplitudes(StateSpec.bg(k, z), tail)
        op = oracle.build_operator("K_minus", amps.cutoff, k=k)
        bound = 10.0 * math.sqrt(tail) * (amps.cutoff + parse_k(k))
        checks.append(Check("eigen", f"K_minus on BG k={k} z={z}", oracle.eigen_residual(op, amps, z), bound))
    for zeta in (0.3, 0.6j, -0.8):
        amps = amplitudes(StateSpec.su11cs("1/2", zeta), tail)
        op = oracle.build_operator("shift_lower", amps.cutoff)
        bound = 10.0 * math.sqrt(tail)
        checks.append(Check("eigen", f"shift_lower on SU11CS k=1/2 zeta={zeta}", oracle.eigen_residual(op, amps, zeta), bound))
    for sigma, z in ((0, 1.0), (-2, 0.5 + 0.5j), (-3, 4.0j)):
        amps = amplitudes(StateSpec.pminus(z, sigma), tail)
        number = oracle.build_operator("number", amps.cutoff).matrix
        raise_op = oracle.build_operator("shift_raise", amps.cutoff).matrix
        op = oracle.FockOperator(number - z * raise_op, amps.cutoff, "sigma_operator")
        bound = 10.0 * math.sqrt(tail) * (amps.cutoff + abs(z))
        checks.append(Check("eigen", f"n - z E^dagger on pminus sigma={sigma} z={z}", oracle.eigen_residual(op, amps, -sigma), bound))
    # number moments from the phase-state representation
    for spec in (StateSpec.bg("1", 1.0), StateSpec.pminus(0.8, -2), StateSpec.pplus(2.0, 1)):
        amps = amplitudes(spec, _ORACLE_TAIL)
        brute = oracle.fock_photon_stats(amps)
        for p, direct in ((1, brute.mean_n), (2, brute.mean_n2)):
            dev = abs(oracle.moments_via_theta(amps, p) - direct) / max(1.0, abs(direct))
            checks.append(Check("eigen", f"<n^{p}> via Theta {spec.label()}", dev, 1e-10))
    return checks


_IDENTITY_CASES = (
    ("su11cs", {"k": "1"}),
    ("su11cs", {"k": "3/2"}),
    ("bg", {"k": "1/2"}),
    ("bg", {"k": "1"}),
    ("bg", {"k": "2"}),
    ("pplus", {"sigma": 0}),
    ("pplus", {"sigma": 2}),
)


def _identity(cutoff: int, tol: float | None) -> list[Check]:
    pairs = [(a, b) for a in range(9) for b in range(a, 9)]
    checks = []
    for family, kw in _IDENTITY_CASES:
        result = oracle.identity_resolution_check(family, pairs, **kw)
        label = family + "".join(f" {key}={val}" for key, val in kw.items())
        measured = result.max_deviation if result.converged else math.inf
        checks.append(Check("identity", f"{label} n,n' <= 8", measured, 1e-6))
    return checks


def _phase(cutoff: int, tol: float | None) -> list[Check]:
    rel = tol if tol is not None else _REL_TOL
    checks = []
    for spec in oracle.standard_grid():
        score, field = oracle_equivalence(spec, rel, rel * _ABS_TOL / _REL_TOL)
        checks.append(Check("phase", f"closed vs brute force {spec.label()} (worst {field or 'none'})", score, 1.0))
    checks.append(Check("phase", f"[n, phi] matrix identity N={cutoff}", oracle.number_phase_commutator_deviation(cutoff), 1e-13))
    for a, b in (("cos", "sin"), ("phi", "cos"), ("phi", "phi2")):
        checks.append(Check("phase", f"antinormal [{a}, {b}] N={min(cutoff, 32)}", oracle.antinormal_commutator_deviation(a, b, min(cutoff, 32)), 1e-12))
    for spec in (StateSpec.su11cs("1/2", 0.6), StateSpec.bg("1", 2.0j)):
        _, anti = oracle.antinormal_unitarity_deviation(amplitudes(spec, _ORACLE_TAIL))
        checks.append(Check("phase", f"antinormal E^dagger E norm {spec.label()}", anti, 1e-12))
    vacuum = phase_moments(StateSpec.bg("1/2", 0))
    checks.append(Check("phase", "vacuum var_phi = pi^2/3", abs(vacuum.var_phi - RANDOM_PHASE_VARIANCE), 1e-9))
    checks.append(Check("phase", "vacuum var_cos = 1/2", abs(vacuum.var_cos - 0.5), 1e-9))
    worst = max(abs(phase_moments(StateSpec.su11cs("1/2", r)).var_cos - 0.5 * (1 - r * r)) for r in np.arange(1, 10) / 10)
    checks.append(Check("phase", "SU11CS k=1/2 var_cos = (1 - |zeta|^2)/2", worst, 1e-10))
    theta = np.linspace(-math.pi, math.pi, 257)
    worst = 0.0
    for z in (0.1, 1.0, 3.0 + 4.0j, 10.0):
        spec = StateSpec.bg("1/2", z)
        worst = max(worst, float(np.max(np.abs(q_theta(spec, theta, "closed") - q_theta(spec, theta, "series")))))
    checks.append(Check("phase", "BG k=1/2 von Mises Q vs M_n series", worst, 1e-9))
    for zeta in (0.3, -0.5j, 0.9):
        dev = oracle.boundary_reconstruction_check(amplitudes(StateSpec.su11cs("1/2", 0.5), _ORACLE_TAIL), zeta)
        checks.append(Check("phase", f"boundary reconstruction at zeta={zeta}", dev, 1e-8))
    return checks


def _uncertainty(cutoff: int, tol: float | None) -> list[Check]:
    checks = []
    target = math.pi**2 / 12
    checks.append(Check("uncertainty", "V(k=1/2, |zeta|=1e-3) near pi^2/12", abs(v_function(StateSpec.su11cs("1/2", 1e-3)) - target), 1e-2))
    checks.append(Check("uncertainty", "V(k=1/2, |z|=1e-3) near pi^2/12", abs(v_function(StateSpec.bg("1/2", 1e-3)) - target), 1e-2))
    r1, _ = r_functions(StateSpec.bg("1/2", 20j))
    expected = 0.25 * (1 + 1 / 40)
    checks.append(Check("uncertainty", "R1(k=1/2, z=20i) relative gap to (1 + 1/40)/4", abs(r1 - expected) / expected, 0.02))
    v_min, u_min = math.inf, math.inf
    for spec in oracle.standard_grid():
        v_min = min(v_min, v_function(spec))
        u_min = min(u_min, u_function(spec))
    checks.append(Check("uncertainty", "min V over standard grid", v_min, 0.25 - 1e-9, ">="))
    checks.append(Check("uncertainty", "min U over standard grid", u_min, 0.25 - 1e-9, ">="))
    checks.append(Check("uncertainty", "V(k=1/2, |zeta|=0.95)", v_function(StateSpec.su11cs("1/2", 0.95)), 10.0, ">="))
    for sigma in (0, -1, -3):
        for r in (0.5, 1.0, 5.0):
            var1, var2, half = sigma_intelligence(StateSpec.pminus(r, sigma))
            dev = abs(math.sqrt(var1 * var2) - half) / half
            checks.append(Check("uncertainty", f"intelligent equality sigma={sigma} |z|={r}", dev, 1e-9))
    return checks


def _contraction(cutoff: int, tol: float | None) -> list[Check]:
    reports = {s: contraction_report(s) for s in (5, 20, 30, 50, 100)}
    checks = [
        Check("contraction", "|g2 - 1| at sigma=20", reports[20].g2_gap, 1e-3),
        Check("contraction", "|<n>/sigma - 1| at sigma=50", abs(reports[50].mean_ratio - 1), 1e-2),
        Check("contraction", "|var/sigma - 1| at sigma=20", abs(reports[20].var_ratio - 1), 3e-5),
    ]
    gaps = [reports[s].g2_gap for s in (5, 20, 50, 100)]
    steps = max(b - a for a, b in zip(gaps, gaps[1:]))
    checks.append(Check("contraction", "g2 gap decreasing over sigma=5,20,50,100 (largest step)", steps, 0.0))
    for s in (30, 50, 100):
        checks.append(Check("contraction", f"fidelity with Glauber at sigma={s}", reports[s].fidelity, 0.999, ">="))
    return checks


_RUNNERS = {
    "algebra": _algebra,
    "eigen": _eigen,
    "identity": _identity,
    "phase": _phase,
    "uncertainty": _uncertainty,
    "contraction": _contraction,
}


def run_suite(name: str, cutoff: int = 64, tol: float | None = None) -> list[Check]:
    """Run one suite.

    Parameters
    ----------
    name : str
        One of :data:`SUITES`.
    cutoff : int
        Matrix size for the algebra and commutator checks.
    tol : float, optional
        Relative tolerance for closed-form vs brute-force comparisons
        (default ``1e-8``, with an absolute floor a hundred times smaller).
    """
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)} or all")
    if cutoff < 4:
        raise ValueError(f"cutoff must be at least 4, got {cutoff}")
    return _RUNNERS[name](cutoff, tol)


def verify_report(suite: str = "all", cutoff: int = 64, tol: float | None = None) -> dict:
    """Run ``suite`` (or every suite for ``"all"``) and collect a JSON-ready report."""
    names = SUITES if suite == "all" else (suite,)
    checks = []
    for name in names:
        checks += run_suite(name, cutoff, tol)
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "cutoff": cutoff,
        "tol": tol,
        "passed": all(c.passed for c in checks),
        "checks": [c.as_dict() for c in checks],
    }
