"""
Phasors E^(k) of a squeezed-vacuum port and the operational trigonometric operators.

Two independent evaluations are provided.

``phasor_integral``
    Polar quadrature of  int d^2 alpha/pi  e^{ik arg alpha} Pr(alpha)  with the
    displaced-squeezed POVM of :mod:`octo.filters`.
``phasor_trace``
    Builds M = b + v^dag on a truncated signal (x) port space, forms the unitary
    part U = M (M^dag M)^{-1/2} and evaluates Tr{U^k rho (x) port}.

The squeeze parameters (s, phi) are those of the state in the port, as in
:class:`~octo.filters.FilterSpec`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .filters import FilterSpec, default_radius, filter_state, phase_marginal, polar_rule, propensity_values, signal_photons
from .fock import QuantumState

__all__ = [
    "PhasorValue", "TrigBundle", "phasor_integral", "phasor_trace", "trig_expectations",
    "trig_from_phasors", "fourier_of_marginal", "phasor_unitary",
]

MAX_K_INTEGRAL = 6
MAX_K_TRACE = 3
FLOOR_FRACTION_LIMIT = 0.05


@dataclass(frozen=True)
class PhasorValue:
    k: int
    value: complex
    path: str
    squeeze: tuple[float, float]
    residual: float
    details: dict = field(default_factory=dict)

    def conj(self) -> PhasorValue:
        return PhasorValue(-self.k, complex(self.value).conjugate(), self.path, self.squeeze,
                           self.residual, dict(self.details))

    def to_dict(self):
        d = {"k": self.k, "s": self.squeeze[0], "phi": self.squeeze[1], "re": self.value.real,
             "im": self.value.imag, "path": self.path, "residual": self.residual}
        d.update(self.details)
        return d


@dataclass(frozen=True)
class TrigBundle:
    """Expectations of the operational sine, cosine, sine squared and cosine squared."""

    s1: float
    c1: float
    s2: float
    c2: float
    residual: float = 0.0

    def to_dict(self):
        return {"s1": self.s1, "c1": self.c1, "s2": self.s2, "c2": self.c2, "residual": self.residual}


def _polar_phasor(k, spec, signal, radial_nodes, angular_nodes, radius):
    alphas, weights, _, angles = polar_rule(radial_nodes, angular_nodes, radius)
    values = propensity_values(signal, spec, alphas)
    return complex(np.sum(weights * values * np.exp(1j * k * angles)[None, :]))


def phasor_integral(k: int, s: float, phi: float, signal: QuantumState, radial_nodes: int = 96,
                    angular_nodes: int = 96, radius: float | None = None) -> PhasorValue:
    """<E^(k)> by polar quadrature of the propensity.

    The residual is the change against a rule with half the nodes in each direction.
    """
    if radial_nodes < 32 or angular_nodes < 32:
        raise ValueError("phasor quadrature needs at least 32 nodes per direction")
    if abs(k) > MAX_K_INTEGRAL:
        raise ValueError(f"|k| must not exceed {MAX_K_INTEGRAL}")
    if k == 0:
        return PhasorValue(0, 1.0 + 0j, "integral", (s, phi), 0.0)
    spec = FilterSpec.squeezed(s, phi)
    if radius is None:
        radius = default_radius(signal_photons(signal), spec.mean_photons)
    value = _polar_phasor(k, spec, signal, radial_nodes, angular_nodes, radius)
    coarse = _polar_phasor(k, spec, signal, radial_nodes // 2, angular_nodes // 2, radius)
    details = {"radial_nodes": radial_nodes, "angular_nodes": angular_nodes, "radius": radius}
    return PhasorValue(k, value, "integral", (s, phi), abs(value - coarse), details)


def _sector_inverse_sqrt(H, nb, nv, floor_rel):
    """(M^dag M)^{-1/2} assembled from the blocks of fixed n_b - n_v (which M^dag M preserves).

    Eigenvalues below ``floor_rel`` times the largest one are raised to that floor.
    """
    diff = nb - nv
    blocks = []
    for d in np.unique(diff):
        idx = np.nonzero(diff == d)[0]
        w, V = np.linalg.eigh(H[np.ix_(idx, idx)])
        blocks.append((idx, w, V))
    floor = floor_rel * max(w.max() for _, w, _ in blocks)
    out = np.zeros_like(H)
    floored = 0
    for idx, w, V in blocks:
        low = w < floor
        floored += int(np.sum(low))
        w = np.where(low, floor, w)
        out[np.ix_(idx, idx)] = (V * w ** -0.5) @ V.conj().T
    return out, floored


def phasor_unitary(joint_cutoff: int, lo_phase: float = 0.0, floor_rel: float = 1e-12):
    """U = (X_1 + i X_2)/sqrt(X_1^2 + X_2^2) at T = 1/2, i.e. e^{-i lo_phase} M (M^dag M)^{-1/2}.

    Returns (U, number of floored eigenvalues, total eigenvalue count).
    """
    J = joint_cutoff
    b = np.kron(fock.annihilation(J).entries, np.eye(J + 1))
    v = np.kron(np.eye(J + 1), fock.annihilation(J).entries)
    M = b + v.conj().T
    H = M.conj().T @ M
    nb, nv = np.divmod(np.arange((J + 1) ** 2), J + 1)
    inv_sqrt, floored = _sector_inverse_sqrt(H, nb, nv, floor_rel)
    return np.exp(-1j * lo_phase) * (M @ inv_sqrt), floored, H.shape[0]


def _trace_value(k, s, phi, signal, J, lo_phase, floor_rel):
    U, floored, total = phasor_unitary(J, lo_phase, floor_rel)
    port = filter_state(FilterSpec.squeezed(s, phi), J)
    ws, vs = signal.padded(J).ensemble()
    value = 0j
    for w, vec in zip(ws, vs.T):
        psi = np.kron(vec, port.data)
        out = psi
        for _ in range(abs(k)):
            out = U @ out
        value += w * np.vdot(psi, out)
    # the local-oscillator prefactor (alpha/alpha^*)^{k/2}
    value *= np.exp(1j * abs(k) * lo_phase)
    if k < 0:
        value = np.conj(value)
    return complex(value), floored / total


def phasor_trace(k: int, s: float, phi: float, signal: QuantumState, joint_cutoff: int,
                 lo_phase: float = 0.0, floor_rel: float = 1e-12) -> PhasorValue:
    """<E^(k)> from the two-mode trace; the residual is the change at joint_cutoff + 8.

    ``details["low_confidence"]`` is set when more than 5% of the M^dag M spectrum hits the floor.
    """
    if abs(k) > MAX_K_TRACE:
        raise ValueError(f"|k| must not exceed {MAX_K_TRACE} on the trace path")
    if joint_cutoff < 2 * signal.cutoff:
        raise fock.CutoffError("joint cutoff must be at least twice the signal cutoff")
    if k == 0:
        return PhasorValue(0, 1.0 + 0j, "trace", (s, phi), 0.0)
    value, frac = _trace_value(k, s, phi, signal, joint_cutoff, lo_phase, floor_rel)
    bigger, _ = _trace_value(k, s, phi, signal, joint_cutoff + 8, lo_phase, floor_rel)
    details = {"joint_cutoff": joint_cutoff, "floored_fraction": frac,
               "low_confidence": frac > FLOOR_FRACTION_LIMIT}
    return PhasorValue(k, value, "trace", (s, phi), abs(bigger - value), details)


def trig_from_phasors(e1: complex, e2: complex, residual: float = 0.0) -> TrigBundle:
    s1 = (e1 - np.conj(e1)) / 2j
    c1 = (e1 + np.conj(e1)) / 2
    c2 = 0.5 + 0.25 * (e2 + np.conj(e2))
    s2 = 0.5 - 0.25 * (e2 + np.conj(e2))
    return TrigBundle(float(s1.real), float(c1.real), float(s2.real), float(c2.real), residual)


def trig_expectations(signal: QuantumState, s: float, phi: float, method: str = "integral", **options) -> TrigBundle:
    """S^(1), C^(1), S^(2), C^(2) expectations via ``method`` ("integral" or "trace")."""
    if method == "integral":
        p1 = phasor_integral(1, s, phi, signal, **options)
        p2 = phasor_integral(2, s, phi, signal, **options)
    elif method == "trace":
        p1 = phasor_trace(1, s, phi, signal, **options)
        p2 = phasor_trace(2, s, phi, signal, **options)
    else:
        raise ValueError(f"unknown method {method!r}")
    return trig_from_phasors(p1.value, p2.value, max(p1.residual, p2.residual))


def fourier_of_marginal(signal: QuantumState, spec: FilterSpec, k: int, angular_nodes: int = 96,
                        radial_nodes: int = 96, radius: float | None = None) -> complex:
    """int dphi/2pi e^{ik phi} Pr(phi) from the phase marginal (periodic trapezoid rule)."""
    if abs(k) > MAX_K_INTEGRAL:
        raise ValueError(f"|k| must not exceed {MAX_K_INTEGRAL}")
    phis = 2 * np.pi * np.arange(angular_nodes) / angular_nodes
    marginal = phase_marginal(signal, spec, phis, radial_nodes=radial_nodes, radius=radius)
    return complex(np.mean(marginal * np.exp(1j * k * phis)))
