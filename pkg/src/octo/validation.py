"""
The thirteen acceptance checks, shared by the test suite and ``octo validate``.

Each check returns a :class:`CriterionResult`; none of them raises on a
failed tolerance. ``quick`` shrinks figure grids and nothing else, so the
tolerances are the same in both modes.
"""

from __future__ import annotations

import math
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fock
from .filters import FilterSpec, check_povm_normalization, phase_marginal
from .io import read_csv
from .phase_space import (EtaOrdering, NonexistentRepresentation, amplitude, phasor_eta_rep,
                          small_I_amplitudes, wigner_trig, wigner_trig2)
from .phasors import phasor_integral, phasor_trace, trig_from_phasors
from .quadratures import (ApparatusConfig, extended_oracle_moment, operational_moment, operational_spread,
                          sigma_pm)
from .sampler import (analytic_phase_cdf, empirical_phasor, empirical_quadrature, ks_critical_value,
                      ks_statistic, sample_outcomes)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    runtime: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number:2d} {self.name}: {self.detail} ({self.runtime:.1f} s)"

    def to_dict(self):
        return {"number": self.number, "name": self.name, "passed": self.passed, "detail": self.detail,
                "runtime": self.runtime}


def _timed(number, name):
    def wrap(fn):
        def run(quick=False):
            start = time.perf_counter()
            passed, detail = fn(quick)
            return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - start)
        run.number, run.criterion_name = number, name
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def moment_states():
    """Signal states used for the moment comparison."""
    return {
        "coherent(0.8+0.4j)": fock.coherent_state(0.8 + 0.4j, 20, max_tail=1e-14),
        "fock(2)": fock.fock_state(2, 2),
        "squeezed(0.3, 0.6)": fock.squeezed_vacuum_state(0.3, 0.6, 30, max_tail=1e-14),
    }


def trig_states():
    """Signal states used for the trigonometric identities."""
    return {
        "vacuum": fock.fock_state(0, 2),
        "coherent(1.2e^{0.7i})": fock.coherent_state(1.2 * np.exp(0.7j), 24, max_tail=1e-14),
        "fock(1)": fock.fock_state(1, 2),
        "thermal(0.5)": fock.thermal_state(0.5, 40, max_tail=1e-12),
    }


@_timed(1, "POVM completeness")
def povm_completeness(quick=False):
    details, ok = [], True
    for spec, N in ((FilterSpec.vacuum(), 30), (FilterSpec.squeezed(0.5, 0.0), 40)):
        start = time.perf_counter()
        res = check_povm_normalization(spec, N)
        elapsed = time.perf_counter() - start
        ok &= res < 1e-5 and elapsed < 10.0
        details.append(f"{spec.kind} N={N}: residual {res:.1e} in {elapsed:.2f} s")
    return ok, "; ".join(details)


@_timed(2, "sigma simplification at zero phases")
def sigma_simplification(quick=False):
    worst = 0.0
    for s in (0.1, 0.5, 1.0, 2.0):
        sp, sm = sigma_pm(s, 0.0, 0.0)
        worst = max(worst, abs(sp - math.exp(2 * s)) / math.exp(2 * s), abs(sm - math.exp(-2 * s)) / math.exp(-2 * s))
    return worst < 4 * np.finfo(float).eps, f"max relative error {worst:.1e}"


@_timed(3, "closed-form moments vs two-mode oracle")
def moments_vs_oracle(quick=False):
    start = time.perf_counter()
    worst, where = 0.0, ""
    for label, state in moment_states().items():
        for T in (0.2, 0.5, 0.8):
            for s, theta, phi in ((0.0, 0.0, 0.0), (0.4, 0.0, 0.0), (0.4, 0.9, 0.3)):
                config = ApparatusConfig(T, math.sqrt(2), theta, FilterSpec.squeezed(s, phi))
                for n in (1, 2, 3):
                    for i in (1, 2):
                        d = abs(operational_moment(n, i, config, state) - extended_oracle_moment(n, i, config, state))
                        if d > worst:
                            worst, where = d, f"{label} T={T} s={s} theta={theta} n={n} i={i}"
    elapsed = time.perf_counter() - start
    return worst < 1e-6 and elapsed < 60.0, f"max |diff| {worst:.1e} at {where}; {elapsed:.1f} s"


@_timed(4, "locked spread decomposition on vacuum")
def locked_spread(quick=False):
    """Compares the operational spread (which agrees with the two-mode oracle)
    to T e^{2s}/2 + (1-T) e^{-2s}/2 at the lock 2 theta + phi = 0."""
    vac = fock.fock_state(0, 4)
    worst, notes = 0.0, []
    for s in (0.0, 0.5, 1.0):
        for T in (0.3, 0.5):
            config = ApparatusConfig(T, math.sqrt(2), 0.0, FilterSpec.squeezed(s, 0.0))
            spread2 = operational_spread(1, config, vac) ** 2
            target = T * math.exp(2 * s) / 2 + (1 - T) * math.exp(-2 * s) / 2
            oracle = extended_oracle_moment(2, 1, config, vac) - extended_oracle_moment(1, 1, config, vac) ** 2
            worst = max(worst, abs(spread2 - target))
            if s == 0.5 and T == 0.5:
                notes.append(f"s=0.5 T=0.5: spread^2 {spread2:.6f} (oracle {oracle:.6f}) vs formula {target:.6f}")
    return worst < 1e-8, f"max |diff| {worst:.2e}; " + "; ".join(notes)


@_timed(5, "Pythagorean identity")
def pythagorean(quick=False):
    worst = 0.0
    for state in trig_states().values():
        for s, phi in ((0.0, 0.0), (0.5, 0.0), (0.5, 1.2), (1.0, math.pi)):
            e1 = phasor_integral(1, s, phi, state).value
            e2 = phasor_integral(2, s, phi, state).value
            b = trig_from_phasors(e1, e2)
            worst = max(worst, abs(b.s2 + b.c2 - 1.0))
    for s, phi in ((0.5, math.pi / 2), (1.5, 0.0), (2.0, math.pi)):
        I = np.linspace(0.0, 50.0, 21)[:, None] * np.ones((1, 24))
        th = np.ones((21, 1)) * (2 * np.pi * np.arange(24) / 24)[None, :]
        s2, _ = wigner_trig2("S2", I, th, s, phi)
        c2, _ = wigner_trig2("C2", I, th, s, phi)
        worst = max(worst, float(np.max(np.abs(s2 + c2 - 1.0))))
    return worst < 1e-9, f"max |s2 + c2 - 1| {worst:.1e} (expectations and Wigner grids)"


@_timed(6, "conjugation of phasors")
def conjugation(quick=False):
    worst = 0.0
    for state in trig_states().values():
        for s, phi in ((0.3, 0.4), (1.0, 2.0)):
            for k in (1, 2, 3, 4):
                plus = phasor_integral(k, s, phi, state).value
                minus = phasor_integral(-k, s, phi, state).value
                worst = max(worst, abs(minus - np.conj(plus)))
    return worst < 1e-10, f"max |E(-k) - conj E(k)| {worst:.1e}"


@_timed(7, "integral and trace phasors agree")
def two_paths(quick=False):
    worst, notes = 0.0, []
    cases = ((1.0, 0.3, 0.0), (1.5 * np.exp(0.6j), 0.5, 0.8))
    for beta, s, phi in cases:
        state = fock.coherent_state(beta, 16, max_tail=1e-7)
        a = phasor_integral(1, s, phi, state).value
        t = phasor_trace(1, s, phi, state, joint_cutoff=32)
        d = abs(a - t.value)
        worst = max(worst, d)
        notes.append(f"|beta|={abs(beta):g} s={s}: {d:.1e} (trace residual {t.residual:.1e})")
    return worst < 2e-3, "; ".join(notes)


@_timed(8, "classical limit at I = 100")
def classical_limit(quick=False):
    thetas = np.array([0.0, math.pi / 4, math.pi / 2, math.pi])
    I = np.full_like(thetas, 100.0)
    worst, gap = 0.0, 0.0
    curves = {}
    for s in (0.0, 1.0):
        c1, _ = wigner_trig("C1", I, thetas, s, 0.0)
        s1, _ = wigner_trig("S1", I, thetas, s, 0.0)
        curves[s] = (c1, s1)
        worst = max(worst, float(np.max(np.abs(c1 - np.cos(thetas)))), float(np.max(np.abs(s1 - np.sin(thetas)))))
    for j in (0, 1):
        gap = max(gap, float(np.max(np.abs(curves[0.0][j] - curves[1.0][j]))))
    return worst < 0.02 and gap < 0.01, f"max deviation from cos/sin {worst:.4f}; s=0 vs s=1 gap {gap:.4f}"


@_timed(9, "small-I limits of C2")
def small_I(quick=False):
    a, _ = wigner_trig2("C2", 1e-6, 0.0, 1.0, math.pi / 2)
    b, _ = wigner_trig2("C2", 1e-6, 0.0, 2.0, 0.0)
    c, _ = wigner_trig2("C2", 1e-6, 0.0, 2.0, math.pi)
    ok = abs(a - 0.5) < 1e-3 and b < 0.05 and c > 0.95
    return ok, f"C2(phi=pi/2, s=1) {a:.6f}; C2(phi=0, s=2) {b:.5f}; C2(phi=pi, s=2) {c:.5f}"


@_timed(10, "amplitude squeezing reversal")
def amplitude_reversal(quick=False):
    ap, am = small_I_amplitudes(1.0)
    worst = 0.0
    for s in (0.5, 1.0, 2.0):
        worst = max(worst, abs(amplitude(+1, s, 0.0)[0] - amplitude(-1, s, math.pi)[0]))
    return am < ap and worst < 1e-8, f"A+(1) {ap:.4f} > A-(1) {am:.4f}; max |A+(s,0) - A-(s,pi)| {worst:.1e}"


@_timed(11, "P symbol nonexistence")
def p_nonexistence(quick=False):
    raised = []
    for s in (0.1, 0.5, 1.0):
        try:
            phasor_eta_rep(1, s, 0.0, EtaOrdering.P(), 0.5)
            raised.append(False)
        except NonexistentRepresentation:
            raised.append(True)
    try:
        v = phasor_eta_rep(1, 0.0, 0.0, EtaOrdering.P(), 0.5)
        ok0 = bool(np.isfinite(v))
    except NonexistentRepresentation:
        ok0 = False
    return all(raised) and ok0, f"raised for s=0.1, 0.5, 1: {raised}; s=0 evaluates: {ok0}"


@_timed(12, "Monte Carlo concordance")
def monte_carlo(quick=False):
    start = time.perf_counter()
    s, phi = 0.3, 0.5
    spec = FilterSpec.squeezed(s, phi)
    state = fock.coherent_state(1.0 + 0.5j, 24, max_tail=1e-14)
    sample = sample_outcomes(state, spec, 100_000, seed=12345, streams=4, signal_label="coherent(1+0.5j)")
    bad = []
    for k in (1, 2):
        emp = empirical_phasor(sample, k)
        ref = phasor_integral(k, s, phi, state).value
        if not emp.within(ref, 4.0):
            bad.append(f"E{k}")
    for theta in (0.0, 0.9):
        config = ApparatusConfig(0.5, math.sqrt(2), theta, spec)
        for i in (1, 2):
            emp = empirical_quadrature(sample, theta, i, 1)
            if not emp.within(operational_moment(1, i, config, state), 4.0):
                bad.append(f"X{i}(theta={theta})")
    phis = 2 * np.pi * np.arange(1024) / 1024
    ks = ks_statistic(sample, analytic_phase_cdf(phis, phase_marginal(state, spec, phis)))
    crit = ks_critical_value(len(sample))
    elapsed = time.perf_counter() - start
    ok = not bad and ks < crit and elapsed < 30.0
    return ok, (f"outside 4 SE: {bad or 'none'}; KS {ks:.4f} < {crit:.4f}: {ks < crit}; "
                f"acceptance {sample.acceptance_rate:.2f}; {elapsed:.1f} s")


FIGURES = (
    ("S1", 2.0, math.pi / 2, "s1_s2_halfpi.csv"),
    ("C2", 0.5, math.pi / 2, "c2_s05_halfpi.csv"),
    ("C2", 1.5, 0.0, "c2_s15_zero.csv"),
)


def _grid_from_csv(path):
    _, columns, data = read_csv(path)
    I = np.unique(data[:, columns.index("I")])
    th = np.unique(data[:, columns.index("theta")])
    values = data[:, columns.index("value")].reshape(I.size, th.size)
    residuals = data[:, columns.index("residual")].reshape(I.size, th.size)
    return I, th, values, residuals


@_timed(13, "figure grids")
def figures(quick=False):
    from .cli import main

    sizes = ["--n-I", "40", "--n-theta", "60"] if quick else []
    notes, ok = [], True
    with tempfile.TemporaryDirectory() as tmp:
        for which, s, phi, name in FIGURES:
            out = str(Path(tmp) / name)
            status = main(["figure", "--which", which, "--s", repr(s), "--phi", repr(phi), "--out", out] + sizes)
            if status != 0:
                return False, f"figure {which} s={s} exited with {status}"
            I, th, values, residuals = _grid_from_csv(out)
            worst = float(residuals.max())
            ok &= worst < 1e-6
            if which == "S1":
                # S1(-theta) sits in column n - j on the periodic theta grid
                mirror = values[:, (-np.arange(th.size)) % th.size]
                defect = np.max(np.abs(values + mirror), axis=1) / np.maximum(np.max(np.abs(values), axis=1), 1e-300)
                upper = defect[I.size // 2:]
                odd = defect[-1] < 0.15 and np.all(np.diff(upper) <= 1e-12)
                ok &= bool(odd)
                notes.append(f"S1: residual {worst:.1e}, relative oddness defect {defect[-1]:.3f} at I={I[-1]:g}")
            elif phi != 0.0:
                c0 = float(np.mean(values[0]))
                ok &= abs(c0 - 0.5) < 0.01
                notes.append(f"C2(s=0.5): residual {worst:.1e}, I=0 value {c0:.4f}")
            else:
                c0 = float(np.mean(values[0]))
                ok &= c0 < 0.05
                notes.append(f"C2(s=1.5): residual {worst:.1e}, I=0 value {c0:.4f}")
    return ok, "; ".join(notes)


CRITERIA = (povm_completeness, sigma_simplification, moments_vs_oracle, locked_spread, pythagorean, conjugation,
            two_paths, classical_limit, small_I, amplitude_reversal, p_nonexistence, monte_carlo, figures)


def run_all(quick: bool = False) -> list[CriterionResult]:
    return [check(quick) for check in CRITERIA]
