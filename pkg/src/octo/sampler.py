"""
Monte Carlo draws of measurement outcomes alpha from the propensity Pr(alpha).

Outcomes have Lebesgue density Pr(alpha)/pi. They are drawn by rejection
against a Gaussian envelope centred at <b> whose per-component variance is

    kappa * (<b^dag b> - |<b>|^2 + (e^{2s} + 1)/4 + n_f/2),

which bounds the spread of signal plus port noise (kappa = 1.5). The bound
on density/envelope is measured on a grid and padded by 25%; a sampled
point that exceeds it aborts the pass and the envelope is widened (up to
three retries).

Random numbers come from Philox (counter based) keyed by
SeedSequence(seed, spawn_key=(stream,)); streams are concatenated in stream
order, so output depends only on (seed, streams, parameters).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .filters import FilterSpec, propensity_values, signal_photons
from .fock import QuantumState
from .io import with_version, write_csv

__all__ = [
    "OutcomeSample", "EmpiricalValue", "EnvelopeViolation", "sample_outcomes", "empirical_phasor",
    "empirical_trig", "empirical_quadrature", "analytic_phase_cdf", "ks_statistic", "ks_critical_value",
    "sample_from_marginal", "make_generator",
]

MAX_COUNT = 10 ** 7
KAPPA = 1.5
BOUND_PAD = 1.25


class EnvelopeViolation(RuntimeError):
    """The propensity exceeded the rejection envelope at a sampled point."""


@dataclass
class OutcomeSample:
    alphas: np.ndarray
    seed: int
    spec: FilterSpec
    signal: str
    acceptance_rate: float
    streams: int = 1
    envelope: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.alphas)

    def metadata(self) -> dict:
        return with_version({"seed": self.seed, "streams": self.streams, "filter": self.spec.to_dict(),
                             "signal": self.signal, "count": len(self), "acceptance_rate": self.acceptance_rate,
                             "envelope": self.envelope, "rng": "Philox/SeedSequence(seed, spawn_key=(stream,))"})

    def to_csv(self, path):
        return write_csv(path, ["re", "im"], zip(self.alphas.real, self.alphas.imag), self.metadata())


@dataclass(frozen=True)
class EmpiricalValue:
    """Sample mean with standard errors of its real and imaginary parts."""

    value: complex
    stderr_re: float
    stderr_im: float
    count: int

    def within(self, target: complex, n_sigma: float = 4.0, floor: float = 0.0) -> bool:
        d = complex(self.value) - complex(target)
        return (abs(d.real) <= n_sigma * self.stderr_re + floor
                and abs(d.imag) <= n_sigma * self.stderr_im + floor)

    def to_dict(self):
        return {"re": self.value.real, "im": self.value.imag, "stderr_re": self.stderr_re,
                "stderr_im": self.stderr_im, "count": self.count}


def make_generator(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,))))


def _envelope_variance(signal: QuantumState, spec: FilterSpec, kappa: float) -> float:
    mean = signal.mean_field()
    excess = max(signal_photons(signal) - abs(mean) ** 2, 0.0)
    s, _ = spec.squeeze_parameters
    n_f = spec.mean_photons if spec.kind in ("fock", "thermal") else 0.0
    return kappa * (excess + (math.exp(2 * abs(s)) + 1.0) / 4.0 + n_f / 2.0)


def _density(signal, spec, alphas):
    return np.maximum(propensity_values(signal, spec, alphas), 0.0) / np.pi


def _gauss(alphas, centre, var):
    return np.exp(-np.abs(alphas - centre) ** 2 / (2 * var)) / (2 * np.pi * var)


def _bound(signal, spec, centre, var, grid=161):
    half = 7.0 * math.sqrt(var)
    x = np.linspace(-half, half, grid)
    pts = centre + x[:, None] + 1j * x[None, :]
    return BOUND_PAD * float(np.max(_density(signal, spec, pts) / _gauss(pts, centre, var)))


def _sample_stream(signal, spec, count, rng, centre, var, bound, batch_cap=200_000):
    out = np.empty(count, dtype=complex)
    filled = 0
    proposed = 0
    sd = math.sqrt(var)
    while filled < count:
        need = count - filled
        batch = int(min(batch_cap, max(1024, math.ceil(1.2 * need * bound))))
        z = rng.standard_normal((batch, 2))
        u = rng.random(batch)
        pts = centre + sd * (z[:, 0] + 1j * z[:, 1])
        p = _density(signal, spec, pts)
        g = _gauss(pts, centre, var)
        ratio = p / (bound * g)
        if np.any(ratio > 1.0):
            raise EnvelopeViolation(f"propensity exceeds envelope by factor {ratio.max():.3f}")
        proposed += batch
        keep = pts[u < ratio][:need]
        out[filled:filled + keep.size] = keep
        filled += keep.size
    return out, proposed


def sample_outcomes(signal: QuantumState, spec: FilterSpec, count: int, seed: int, streams: int = 1,
                    signal_label: str = "custom", kappa: float = KAPPA, workers: int = 1) -> OutcomeSample:
    """Draw ``count`` outcomes from Pr(alpha) d^2 alpha / pi by rejection sampling."""
    if not 0 < count <= MAX_COUNT:
        raise ValueError(f"count must lie in [1, {MAX_COUNT}]")
    if streams < 1:
        raise ValueError("streams must be positive")
    centre = complex(signal.mean_field())
    var = _envelope_variance(signal, spec, kappa)
    shares = [count // streams + (1 if j < count % streams else 0) for j in range(streams)]
    last_error = None
    for attempt in range(4):
        bound = _bound(signal, spec, centre, var)

        def run(j):
            return _sample_stream(signal, spec, shares[j], make_generator(seed, j), centre, var, bound)

        try:
            if workers > 1:
                with ThreadPoolExecutor(workers) as pool:
                    parts = list(pool.map(run, range(streams)))
            else:
                parts = [run(j) for j in range(streams)]
        except EnvelopeViolation as exc:
            last_error = exc
            var *= 1.5
            continue
        alphas = np.concatenate([p[0] for p in parts])
        proposed = sum(p[1] for p in parts)
        envelope = {"centre": centre, "variance": var, "bound": bound, "retries": attempt}
        return OutcomeSample(alphas, seed, spec, signal_label, count / proposed, streams, envelope)
    raise EnvelopeViolation(f"envelope still violated after 3 inflations: {last_error}")


def _mean_with_errors(z: np.ndarray) -> EmpiricalValue:
    n = z.size
    if n == 0:
        raise ValueError("empty sample")
    mean = complex(np.mean(z))
    se_re = float(np.std(z.real, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    se_im = float(np.std(z.imag, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return EmpiricalValue(mean, se_re, se_im, n)


def empirical_phasor(sample: OutcomeSample, k: int) -> EmpiricalValue:
    """Sample mean of e^{ik arg alpha}."""
    if k == 0:
        return EmpiricalValue(1.0 + 0j, 0.0, 0.0, len(sample))
    return _mean_with_errors(np.exp(1j * k * np.angle(sample.alphas)))


def empirical_trig(sample: OutcomeSample) -> dict:
    """Sample means of sin, cos, sin^2 and cos^2 of the outcome phase."""
    ph = np.angle(sample.alphas)
    out = {}
    for name, vals in (("s1", np.sin(ph)), ("c1", np.cos(ph)), ("s2", np.sin(ph) ** 2), ("c2", np.cos(ph) ** 2)):
        out[name] = _mean_with_errors(vals.astype(complex))
    return out


def empirical_quadrature(sample: OutcomeSample, theta: float, i: int = 1, n: int = 1, lo_amp: float = math.sqrt(2)) -> EmpiricalValue:
    """Sample mean of the n-th power of the quadrature record at T = 1/2.

    With X_1 + i X_2 = alpha_lo^* (b + v^dag)/sqrt(2), an outcome alpha gives
    X_1 = (|alpha_lo|/sqrt 2) Re(e^{-i theta} alpha) and X_2 the imaginary part.
    """
    z = (lo_amp / math.sqrt(2)) * np.exp(-1j * theta) * sample.alphas
    rec = z.real if i == 1 else z.imag
    return _mean_with_errors((rec ** n).astype(complex))


def analytic_phase_cdf(phis, marginal):
    """CDF on [0, 2 pi) of a periodic phase density tabulated on the grid 2 pi j / n.

    ``marginal`` is normalised as int dphi/2pi Pr = 1. Integration uses the
    trapezoid rule with linear interpolation in between.
    """
    phis = np.asarray(phis, dtype=float)
    vals = np.asarray(marginal, dtype=float)
    order = np.argsort(phis)
    phis, vals = phis[order], vals[order]
    grid = np.concatenate([phis, [phis[0] + 2 * np.pi]])
    dens = np.concatenate([vals, [vals[0]]]) / (2 * np.pi)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))])
    cum /= cum[-1]

    def cdf(x):
        return np.interp(np.mod(x, 2 * np.pi), grid, cum, left=0.0, right=1.0)

    return cdf


def ks_statistic(sample_or_phases, analytic_cdf) -> float:
    """Kolmogorov-Smirnov distance between sample phases (mod 2 pi) and ``analytic_cdf``."""
    if isinstance(sample_or_phases, OutcomeSample):
        phases = np.angle(sample_or_phases.alphas)
    else:
        phases = np.asarray(sample_or_phases, dtype=float)
    phases = np.mod(phases, 2 * np.pi)
    return float(stats.kstest(phases, analytic_cdf).statistic)


def ks_critical_value(count: int, level: float = 0.01) -> float:
    """Critical KS distance for ``count`` samples at significance ``level``."""
    return float(stats.kstwo.ppf(1.0 - level, count))


def sample_from_marginal(phis, marginal, count: int, seed: int) -> np.ndarray:
    """Phases drawn by inverse-CDF sampling of a tabulated marginal (KS calibration)."""
    cdf = analytic_phase_cdf(phis, marginal)
    fine = np.linspace(0.0, 2 * np.pi, 20001)
    cum = cdf(fine)
    cum[-1] = 1.0
    u = make_generator(seed).random(count)
    return np.interp(u, cum, fine)
