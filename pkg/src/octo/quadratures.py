"""
Operational quadrature moments of the eight-port detector.

The two jointly measured quadratures live on signal (b) and port (v) modes:

    X_1 = [alpha (sqrt(T) b^dag + sqrt(1-T) v) + alpha^* (sqrt(T) b + sqrt(1-T) v^dag)] / 2
    X_2 = [i alpha (sqrt(1-T) b^dag + sqrt(T) v) - i alpha^* (sqrt(1-T) b + sqrt(T) v^dag)] / 2

Tracing out a squeezed port S(s, phi)|0> gives generating functions
``exp(xi a x) exp(xi^2 c)`` in the intrinsic quadrature ``x`` and hence the
Hermite-polynomial moments

    X^(n) = n! sum_j (a x)^(n-2j) / (n-2j)! * c^j / j!

with, for i = 1, ``a = sqrt(T) |alpha| / sqrt(2)``, ``c = (1-T) |alpha|^2 sigma_- / 8``
and x = x_theta. For i = 2 the roles of T and 1-T swap, sigma_- becomes sigma_+
and x becomes x_{theta+pi/2}. With |alpha| = sqrt(2) this is

    (sqrt(1-T) sqrt(sigma)/(2i))^n H_n(i sqrt(T/(1-T)) x / sqrt(sigma)).

``FilterSpec.phi`` is the phase of the physical port state. The noise
variance seen by X_1 is then ``sigma_pm(s, theta, -phi)[1] / 2``, so the lock
``2 theta + phi = 0`` gives sigma_pm = (e^{2s}, e^{-2s}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .filters import FilterSpec, filter_state
from .fock import QuantumState

__all__ = [
    "ApparatusConfig", "MomentResult", "sigma_pm", "noise_sigmas", "antinormal_transmittance",
    "operational_moment", "moment_result", "operational_spread", "locked_spread_squared",
    "generating_value", "moment_from_generating", "extended_oracle_moment",
    "lossy_homodyne_moment", "quadrature_commutator_norm", "joint_quadratures",
]

SQRT2 = math.sqrt(2.0)
MAX_JOINT_DIM = 6000


@dataclass(frozen=True)
class ApparatusConfig:
    """Beam-splitter transmittance, local-oscillator amplitude and phase, and port filter."""

    T: float = 0.5
    lo_amp: float = SQRT2
    theta: float = 0.0
    filter: FilterSpec = field(default_factory=FilterSpec.vacuum)

    def __post_init__(self):
        if not 0.0 <= self.T <= 1.0:
            raise ValueError(f"transmittance must lie in [0, 1], got {self.T}")
        if not (math.isfinite(self.lo_amp) and self.lo_amp > 0):
            raise ValueError("local-oscillator amplitude must be finite and positive")
        if not math.isfinite(self.theta):
            raise ValueError("local-oscillator phase must be finite")

    @property
    def scaled(self) -> bool:
        return math.isclose(self.lo_amp, SQRT2, rel_tol=0, abs_tol=1e-15)

    def to_dict(self):
        return {"T": self.T, "lo_amp": self.lo_amp, "theta": self.theta, "filter": self.filter.to_dict()}


@dataclass(frozen=True)
class MomentResult:
    n: int
    quadrature_index: int
    value: float
    sigma_plus: float
    sigma_minus: float
    scaled: bool

    def __float__(self):
        return float(self.value)


def sigma_pm(s: float, theta: float, phi: float) -> tuple[float, float]:
    """(cosh 2s + cos(2 theta - phi) sinh 2s, cosh 2s - cos(2 theta - phi) sinh 2s)."""
    c = math.cos(2 * theta - phi)
    up, down = math.exp(2 * s), math.exp(-2 * s)
    # written as a sum of two non-negative terms: no cancellation when sigma_- is small
    plus = 0.5 * (1 + c) * up + 0.5 * (1 - c) * down
    minus = 0.5 * (1 - c) * up + 0.5 * (1 + c) * down
    return plus, minus


def _squeezed_only(spec: FilterSpec) -> tuple[float, float]:
    if spec.kind not in ("vacuum", "squeezed"):
        raise ValueError(f"closed-form moments need a vacuum or squeezed-vacuum filter, not {spec.kind!r}")
    return spec.squeeze_parameters


def noise_sigmas(config: ApparatusConfig) -> tuple[float, float]:
    """sigma_+ and sigma_- as seen by the detector: twice the port variances of X_2 and X_1."""
    s, phi = _squeezed_only(config.filter)
    return sigma_pm(s, config.theta, -phi)


def antinormal_transmittance(s: float, theta: float, phi: float) -> tuple[float, float]:
    """Transmittances sigma/(1 + sigma) that make the generating function antinormally ordered."""
    sp, sm = sigma_pm(s, theta, phi)
    return sp / (1.0 + sp), sm / (1.0 + sm)


def _coefficients(i: int, config: ApparatusConfig):
    if i not in (1, 2):
        raise ValueError("quadrature index must be 1 or 2")
    sp, sm = noise_sigmas(config)
    lo2 = config.lo_amp ** 2
    if i == 1:
        a = math.sqrt(config.T) * config.lo_amp / SQRT2
        c = (1.0 - config.T) * lo2 * sm / 8.0
        angle = config.theta
    else:
        a = math.sqrt(1.0 - config.T) * config.lo_amp / SQRT2
        c = config.T * lo2 * sp / 8.0
        angle = config.theta + math.pi / 2
    return a, c, angle, sp, sm


def _quadrature_powers(state: QuantumState, angle: float, top: int) -> np.ndarray:
    """<x_angle^m> for m = 0..top, exact on the truncated state (padded by ``top``)."""
    padded = state.padded(state.cutoff + top + 1)
    x = fock.quadrature(angle, padded.cutoff).entries
    w, vecs = padded.ensemble()
    out = np.empty(top + 1)
    cur = vecs
    for m in range(top + 1):
        out[m] = float(np.real(np.sum(w * np.sum(np.conj(vecs) * cur, axis=0))))
        cur = x @ cur
    return out


def _closed_form(n: int, a: float, c: float, xpow: np.ndarray) -> float:
    total = 0.0
    for j in range(n // 2 + 1):
        total += (a ** (n - 2 * j) * xpow[n - 2 * j] * c ** j
                  / (math.factorial(n - 2 * j) * math.factorial(j)))
    return math.factorial(n) * total


def _hermite_over_sigma(n: int, i: int, config: ApparatusConfig, state: QuantumState) -> float:
    """Hermite form with argument x/sigma and prefactor sqrt(sigma), at |alpha| = sqrt(2).

    Kept to exhibit the discrepancy with the generating function; see README.
    """
    T = config.T if i == 1 else 1.0 - config.T
    if not 0.0 < T < 1.0:
        raise ValueError("the Hermite form needs 0 < T < 1")
    sp, sm = noise_sigmas(config)
    sigma = sm if i == 1 else sp
    angle = config.theta if i == 1 else config.theta + math.pi / 2
    padded = state.padded(state.cutoff + n + 1)
    x = fock.quadrature(angle, padded.cutoff).entries
    z = 1j * math.sqrt(T / (1.0 - T)) * x / sigma
    H = fock.hermite_operator(n, z)
    pref = (math.sqrt(1.0 - T) * math.sqrt(sigma) / 2j) ** n
    return float(np.real(pref * np.trace(H @ padded.density)))


def operational_moment(n: int, i: int, config: ApparatusConfig, state: QuantumState,
                       form: str = "generating") -> float:
    """<X^(n)_i> for a vacuum or squeezed-vacuum port.

    ``form="generating"`` (default) is the expansion of the generating
    function and agrees with the two-mode oracle. ``form="sigma_scaled"`` uses the
    Hermite argument x/sigma instead of x/sqrt(sigma) and is only provided for
    comparison.
    """
    if n < 1 or int(n) != n:
        raise ValueError("moment order must be a positive integer")
    if form == "sigma_scaled":
        return _hermite_over_sigma(n, i, config, state)
    if form != "generating":
        raise ValueError(f"unknown form {form!r}")
    a, c, angle, _, _ = _coefficients(i, config)
    xpow = _quadrature_powers(state, angle, n)
    return _closed_form(n, a, c, xpow)


def moment_result(n: int, i: int, config: ApparatusConfig, state: QuantumState) -> MomentResult:
    sp, sm = noise_sigmas(config)
    value = operational_moment(n, i, config, state)
    return MomentResult(n, i, value, sp, sm, config.scaled)


def operational_spread(i: int, config: ApparatusConfig, state: QuantumState, form: str = "generating") -> float:
    """sqrt(<X^(2)_i> - <X^(1)_i>^2)."""
    second = operational_moment(2, i, config, state, form)
    first = operational_moment(1, i, config, state, form)
    radicand = second - first ** 2
    if radicand < -1e-10:
        raise ArithmeticError(f"negative spread radicand {radicand:.3e}")
    return math.sqrt(max(radicand, 0.0))


def locked_spread_squared(i: int, T: float, s: float, intrinsic_variance: float) -> float:
    """Exponential decomposition of the squared spread at the phase lock:
    T e^{2s} dx^2 + (1-T) e^{-2s}/2 for i = 1 and (1-T) e^{-2s} dx^2 + T e^{2s}/2 for i = 2.
    """
    if i == 1:
        return T * math.exp(2 * s) * intrinsic_variance + (1 - T) * math.exp(-2 * s) / 2
    return (1 - T) * math.exp(-2 * s) * intrinsic_variance + T * math.exp(2 * s) / 2


def generating_value(i: int, xi: float, config: ApparatusConfig, state: QuantumState, pad: int = 60) -> float:
    """<Z_i(xi)> = <exp(xi a x)> exp(xi^2 c)."""
    if abs(xi) > 2:
        raise ValueError("generating function evaluated only for |xi| <= 2")
    a, c, angle, _, _ = _coefficients(i, config)
    padded = state.padded(state.cutoff + pad)
    x = fock.quadrature(angle, padded.cutoff).entries
    evals, evecs = np.linalg.eigh(x)
    rho = evecs.conj().T @ padded.density @ evecs
    inner = float(np.real(np.sum(np.exp(xi * a * evals) * np.diag(rho))))
    return inner * math.exp(xi ** 2 * c)


def _central_derivative(f, n: int, h: float) -> float:
    # n-th central difference with n+1 (even n) or n+1 half-offset points
    k = np.arange(n + 1)
    coeffs = np.array([(-1) ** j * math.comb(n, j) for j in k], dtype=float)
    points = (n / 2.0 - k) * h
    return float(sum(cf * f(p) for cf, p in zip(coeffs, points)) / h ** n)


def moment_from_generating(n: int, i: int, config: ApparatusConfig, state: QuantumState, h: float = 1e-3) -> float:
    """n-th derivative of the generating function at 0: central differences, one Richardson step."""
    f = lambda xi: generating_value(i, xi, config, state)  # noqa: E731
    coarse = _central_derivative(f, n, 2 * h)
    fine = _central_derivative(f, n, h)
    return (4 * fine - coarse) / 3


def joint_quadratures(config: ApparatusConfig, signal_cutoff: int, port_cutoff: int):
    """X_1 and X_2 as dense matrices on the truncated signal (x) port space."""
    dim = (signal_cutoff + 1) * (port_cutoff + 1)
    if dim > MAX_JOINT_DIM:
        raise fock.CutoffError(f"joint dimension {dim} exceeds cap {MAX_JOINT_DIM}")
    b = np.kron(fock.annihilation(signal_cutoff).entries, np.eye(port_cutoff + 1))
    v = np.kron(np.eye(signal_cutoff + 1), fock.annihilation(port_cutoff).entries)
    alpha = config.lo_amp * np.exp(1j * config.theta)
    rt, rr = math.sqrt(config.T), math.sqrt(1.0 - config.T)
    m1 = rt * b.conj().T + rr * v
    m2 = rr * b.conj().T + rt * v
    X1 = 0.5 * (alpha * m1 + np.conj(alpha) * m1.conj().T)
    X2 = 0.5 * (1j * alpha * m2 - 1j * np.conj(alpha) * m2.conj().T)
    return X1, X2


def _port_cutoff(spec: FilterSpec, tail: float = 1e-14) -> int:
    n = 4
    while True:
        try:
            state = filter_state(spec, n)
            if spec.kind == "squeezed":
                fock.squeezed_vacuum_state(spec.s, spec.phi, n, max_tail=tail)
            elif spec.kind == "thermal":
                fock.thermal_state(spec.nbar, n, max_tail=tail)
            return state.cutoff
        except fock.CutoffError:
            n += 2


def extended_oracle_moment(n: int, i: int, config: ApparatusConfig, signal: QuantumState,
                           port_cutoff: int | None = None) -> float:
    """Tr{X_i^n (rho (x) port)} computed directly on the two-mode space.

    Both marginals are padded by n levels so that X_i^n acts exactly on the
    state's support.
    """
    if not 1 <= n <= 4:
        raise ValueError("oracle moments are limited to 1 <= n <= 4")
    if port_cutoff is None:
        port_cutoff = _port_cutoff(config.filter)
    port = filter_state(config.filter, port_cutoff)
    ns, nv = signal.cutoff + n, port_cutoff + n
    X1, X2 = joint_quadratures(config, ns, nv)
    X = X1 if i == 1 else X2
    ws, vs = signal.padded(ns).ensemble()
    wp, vp = port.padded(nv).ensemble()
    total = 0.0
    for a, va in zip(ws, vs.T):
        for c, vc in zip(wp, vp.T):
            psi = np.kron(va, vc)
            # X is Hermitian: <psi|X^n|psi> = <X^(n//2) psi | X^(n - n//2) psi>
            left = psi
            for _ in range(n // 2):
                left = X @ left
            right = psi
            for _ in range(n - n // 2):
                right = X @ right
            total += a * c * np.real(np.vdot(left, right))
    return float(total)


def lossy_homodyne_moment(n: int, T: float, theta: float, signal: QuantumState, lo_amp: float = SQRT2) -> float:
    """n-th moment of (|alpha|/sqrt 2) x_theta(c) with c = sqrt(T) b + sqrt(1-T) v and v in vacuum:
    a single homodyne quadrature behind a beam splitter of transmittivity T."""
    ns, nv = signal.cutoff + n, n
    b = np.kron(fock.annihilation(ns).entries, np.eye(nv + 1))
    v = np.kron(np.eye(ns + 1), fock.annihilation(nv).entries)
    c = math.sqrt(T) * b + math.sqrt(1 - T) * v
    xc = (lo_amp / SQRT2) * (np.exp(1j * theta) * c.conj().T + np.exp(-1j * theta) * c) / SQRT2
    vac = np.zeros(nv + 1)
    vac[0] = 1.0
    ws, vs = signal.padded(ns).ensemble()
    total = 0.0
    for w, vec in zip(ws, vs.T):
        psi = np.kron(vec, vac)
        out = psi
        for _ in range(n):
            out = xc @ out
        total += w * np.real(np.vdot(psi, out))
    return float(total)


def quadrature_commutator_norm(config: ApparatusConfig, cutoff: int) -> float:
    """Spectral norm of [X_1, X_2] on basis states with both occupations below the cutoff."""
    X1, X2 = joint_quadratures(config, cutoff, cutoff)
    comm = X1 @ X2 - X2 @ X1
    nb, nv = np.meshgrid(np.arange(cutoff + 1), np.arange(cutoff + 1), indexing="ij")
    inner = np.nonzero(((nb < cutoff) & (nv < cutoff)).ravel())[0]
    return float(np.linalg.norm(comm[np.ix_(inner, inner)], 2))
