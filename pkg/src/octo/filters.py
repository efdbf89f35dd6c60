"""
Noise filters in the unused port, their POVMs and the resulting propensities.

A :class:`FilterSpec` describes the state physically present in the unused
port. Measuring ``b + v^dag`` with that state in the port gives the POVM

    F(alpha) = D(alpha) P rho_port^T P D(alpha)^dag,      P = (-1)^{b^dag b},

i.e. the port state is transposed and parity-flipped before it is displaced
(the joint eigenstates of ``b + v^dag`` are displaced copies of
sum_n (-1)^n |n>|n>). For vacuum, number and thermal ports the kernel equals
the port state. For a squeezed vacuum S(s, phi)|0> it is S(s, -phi)|0>, so
the POVM elements are displaced squeezed vacua with squeeze phase ``-phi``.

All outcome integrals use the measure d^2 alpha / pi, under which
``sum_i w_i Pr(alpha_i)`` approximates 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from . import fock
from .fock import CutoffError, QuantumState, TruncatedOperator
from .io import with_version, write_csv, write_json

__all__ = [
    "FilterSpec", "PropensityGrid", "filter_state", "povm_kernel", "povm_element",
    "propensity", "propensity_values", "check_povm_normalization", "phase_marginal",
    "polar_rule", "default_radius", "propensity_grid", "MEASURE",
]

MEASURE = "d^2 alpha / pi (sum of weight * value approximates 1)"
FILTER_KINDS = ("vacuum", "squeezed", "fock", "thermal")
_MAX_TAIL = 1e-8


@dataclass(frozen=True)
class FilterSpec:
    """State of the noise mode leaking through the unused beam-splitter port."""

    kind: str = "vacuum"
    s: float = 0.0
    phi: float = 0.0
    n: int = 0
    nbar: float = 0.0

    def __post_init__(self):
        if self.kind not in FILTER_KINDS:
            raise ValueError(f"unknown filter kind {self.kind!r}; expected one of {FILTER_KINDS}")
        if not (math.isfinite(self.s) and math.isfinite(self.phi)):
            raise ValueError("squeeze parameters must be finite")
        if int(self.n) != self.n or self.n < 0:
            raise ValueError("number-state filter needs a non-negative integer n")
        if not (self.nbar >= 0 and math.isfinite(self.nbar)):
            raise ValueError("thermal filter needs finite nbar >= 0")

    @classmethod
    def vacuum(cls):
        return cls("vacuum")

    @classmethod
    def squeezed(cls, s: float, phi: float = 0.0):
        return cls("squeezed", s=float(s), phi=float(phi))

    @classmethod
    def fock(cls, n: int):
        return cls("fock", n=int(n))

    @classmethod
    def thermal(cls, nbar: float):
        return cls("thermal", nbar=float(nbar))

    @property
    def squeeze_parameters(self) -> tuple[float, float]:
        if self.kind == "squeezed":
            return self.s, self.phi
        return 0.0, 0.0

    @property
    def mean_photons(self) -> float:
        if self.kind == "squeezed":
            return math.sinh(self.s) ** 2
        if self.kind == "fock":
            return float(self.n)
        if self.kind == "thermal":
            return self.nbar
        return 0.0

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "squeezed":
            d.update(s=self.s, phi=self.phi)
        elif self.kind == "fock":
            d["n"] = self.n
        elif self.kind == "thermal":
            d["nbar"] = self.nbar
        return d

    @classmethod
    def from_dict(cls, d: dict):
        return cls(**d)


def filter_state(spec: FilterSpec, cutoff: int) -> QuantumState:
    """The port state on ``cutoff``; raises CutoffError if more than 1e-8 of it is cut off."""
    if spec.kind == "vacuum":
        return fock.fock_state(0, cutoff)
    if spec.kind == "squeezed":
        return fock.squeezed_vacuum_state(spec.s, spec.phi, cutoff, max_tail=_MAX_TAIL)
    if spec.kind == "fock":
        return fock.fock_state(spec.n, cutoff)
    return fock.thermal_state(spec.nbar, cutoff, max_tail=_MAX_TAIL)


def povm_kernel(spec: FilterSpec, cutoff: int) -> TruncatedOperator:
    """P rho^T P: the operator that is displaced to form F(alpha)."""
    rho = filter_state(spec, cutoff).density
    parity = (-1.0) ** np.arange(cutoff + 1)
    return TruncatedOperator(parity[:, None] * rho.T * parity[None, :])


def _kernel_vectors(spec: FilterSpec, alphas, cutoff: int):
    """Weights w_k and exact vectors phi_k(alpha) with F(alpha) = sum_k w_k |phi_k><phi_k|.

    Vectors have shape ``alphas.shape + (K, cutoff + 1)``.
    """
    alphas = np.asarray(alphas, dtype=complex)
    if spec.kind == "vacuum":
        return np.ones(1), fock.displaced_columns(alphas, cutoff, [0])
    if spec.kind == "squeezed":
        # squeezed vacua are parity even; the transpose flips the squeeze phase
        vec = fock.displaced_squeezed_vacuum(alphas, spec.s, -spec.phi, cutoff)
        return np.ones(1), vec[..., None, :]
    if spec.kind == "fock":
        # rows <= cutoff of D|n> are exact even for n > cutoff
        return np.ones(1), fock.displaced_columns(alphas, cutoff, [spec.n])
    # thermal: the port levels are not limited by the signal cutoff
    levels = _thermal_levels(spec.nbar)
    weights = np.real(np.diag(fock.thermal_state(spec.nbar, levels, max_tail=1e-14).data))
    keep = np.nonzero(weights > 1e-18)[0]
    return weights[keep], fock.displaced_columns(alphas, cutoff, keep)


def _thermal_levels(nbar: float) -> int:
    if nbar == 0:
        return 0
    ratio = nbar / (nbar + 1.0)
    return int(math.ceil(math.log(1e-15) / math.log(ratio))) + 1


def _series(c, q, length):
    """sqrt(p!) [x^p] exp(c x + q x^2) for p < length."""
    out = np.zeros(length, dtype=complex)
    out[0] = 1.0
    if length > 1:
        out[1] = c
    for p in range(1, length - 1):
        out[p + 1] = (c * out[p] + 2 * q * math.sqrt(p) * out[p - 1]) / math.sqrt(p + 1)
    return out


def _times_power(series, root, power):
    """sqrt(m!) [x^m] (x - root)^power E(x), given sqrt(p!)-scaled coefficients of E."""
    length = len(series)
    out = np.zeros(length, dtype=complex)
    log_binom = gammaln(power + 1) - gammaln(np.arange(power + 1) + 1) - gammaln(power - np.arange(power + 1) + 1)
    for m in range(length):
        for i in range(min(power, m) + 1):
            ratio = math.exp(0.5 * (gammaln(m + 1) - gammaln(m - i + 1)) + log_binom[i])
            out[m] += ratio * (-root) ** (power - i) * series[m - i]
    return out


def _normal_ordered_element(spec: FilterSpec, alpha: complex, cutoff: int) -> np.ndarray:
    """F(alpha) by substituting v^dag -> alpha^* - b^dag, v -> alpha - b in the
    normally ordered kernel and reading off number-basis coefficients.

    <m|:f(b^dag, b):|n> = sqrt(m! n!) [x^m y^n] f(x, y) exp(x y).
    """
    length = cutoff + 1
    a, ac = complex(alpha), complex(alpha).conjugate()
    kappa = 0.0
    if spec.kind == "thermal":
        kappa = spec.nbar / (spec.nbar + 1.0)
    scale = 1.0 - kappa
    c0 = -scale * abs(a) ** 2
    cx, qx, prefactor = scale * a, 0.0, scale
    if spec.kind == "squeezed":
        # transposed kernel: squeeze phase -phi
        t = math.tanh(spec.s)
        e = np.exp(-1j * spec.phi)
        cx = a + t * e * ac
        qx = -0.5 * t * e
        c0 = -abs(a) ** 2 - 0.5 * t * (e * ac ** 2 + np.conj(e) * a ** 2)
        prefactor = 1.0 / math.cosh(spec.s)
    x_series = _series(cx, qx, length)
    if spec.kind == "fock":
        x_series = _times_power(x_series, ac, spec.n)
        prefactor = math.exp(-gammaln(spec.n + 1))
    y_series = x_series.conj()
    if kappa == 0.0:
        return prefactor * np.exp(c0) * np.outer(x_series, y_series)
    out = np.zeros((length, length), dtype=complex)
    m = np.arange(length)
    lgm = gammaln(m + 1)
    for j in range(length):
        rows = m[j:]
        w = np.exp(0.5 * (lgm[rows] - gammaln(rows - j + 1)))
        block = np.outer(w * x_series[: length - j], w * y_series[: length - j])
        out[j:, j:] += kappa ** j / math.exp(gammaln(j + 1)) * block
    return prefactor * np.exp(c0) * out


def povm_element(spec: FilterSpec, alpha: complex, cutoff: int, route: str = "displaced") -> TruncatedOperator:
    """F(alpha) on the truncated basis.

    ``route="displaced"`` displaces the kernel state with exact displaced
    number-state columns; ``route="kernel"`` substitutes into the normally
    ordered form of the port density operator. Both raise CutoffError when the
    displaced kernel leaks more than 1e-8 of its weight past the cutoff.
    """
    pad = cutoff + 20
    weights, vecs = _kernel_vectors(spec, np.array([alpha]), pad)
    vecs = vecs[0]
    inside = np.sum(weights * np.sum(np.abs(vecs[:, : cutoff + 1]) ** 2, axis=1))
    leak = np.sum(weights) - inside
    if leak > _MAX_TAIL:
        raise CutoffError(f"POVM element at alpha={alpha} leaks {leak:.2e} past cutoff {cutoff}")
    if route == "displaced":
        v = vecs[:, : cutoff + 1]
        return TruncatedOperator((v.T * weights) @ v.conj())
    if route == "kernel":
        return TruncatedOperator(_normal_ordered_element(spec, alpha, cutoff))
    raise ValueError(f"unknown route {route!r}")


def propensity_values(signal: QuantumState, spec: FilterSpec, alphas) -> np.ndarray:
    """Pr(alpha) = Tr{F(alpha) rho} for an array of outcomes (vectorised)."""
    alphas = np.asarray(alphas, dtype=complex)
    weights, vecs = _kernel_vectors(spec, alphas, signal.cutoff)
    w_sig, v_sig = signal.ensemble()
    # overlaps[..., k, j] = <v_j | phi_k>
    overlaps = vecs @ v_sig.conj()
    return np.einsum("k,j,...kj->...", weights, w_sig, np.abs(overlaps) ** 2)


def propensity(signal: QuantumState, spec: FilterSpec, alpha: complex) -> float:
    return float(propensity_values(signal, spec, np.array([alpha]))[0])


def default_radius(signal_photons: float, filter_photons: float) -> float:
    """Outcome radius beyond which the propensity is negligible (< ~1e-20)."""
    return math.sqrt(max(signal_photons, 0.0)) + 7.0 * math.sqrt(1.0 + 2.0 * filter_photons) + 1.0


def _signal_photons(signal: QuantumState) -> float:
    return float(np.real(np.sum(np.arange(signal.cutoff + 1) * np.real(np.diag(signal.density)))))


def polar_rule(radial_nodes: int, angular_nodes: int, radius: float):
    """Nodes and weights for integrals over d^2 alpha / pi on the disc |alpha| <= radius.

    Gauss-Legendre in r (weight 2 r dr) and the periodic trapezoid rule in the
    angle. Returns (alphas of shape (nr, na), weights of the same shape, radii, angles).
    """
    x, w = np.polynomial.legendre.leggauss(radial_nodes)
    r = 0.5 * radius * (x + 1.0)
    wr = 0.5 * radius * w * 2.0 * r
    angles = 2.0 * np.pi * np.arange(angular_nodes) / angular_nodes
    alphas = r[:, None] * np.exp(1j * angles)[None, :]
    weights = np.outer(wr, np.full(angular_nodes, 1.0 / angular_nodes))
    return alphas, weights, r, angles


def check_povm_normalization(spec: FilterSpec, cutoff: int, radial_nodes: int = 64,
                             angular_nodes: int = 64, radius: float | None = None) -> float:
    """Operator-norm distance of sum_i w_i F(alpha_i) from the identity on rows/columns <= N/2."""
    if radial_nodes < 16 or angular_nodes < 16:
        raise ValueError("normalisation check needs at least 16 nodes per direction")
    half = cutoff // 2
    if radius is None:
        radius = default_radius(half, spec.mean_photons)
    alphas, weights, _, _ = polar_rule(radial_nodes, angular_nodes, radius)
    kw, vecs = _kernel_vectors(spec, alphas.ravel(), cutoff)
    v = vecs[..., : half + 1] * np.sqrt(weights.ravel())[:, None, None] * np.sqrt(kw)[None, :, None]
    v = v.reshape(-1, half + 1)
    total = v.T @ v.conj()
    return float(np.linalg.norm(total - np.eye(half + 1), 2))


def phase_marginal(signal: QuantumState, spec: FilterSpec, phis, radial_nodes: int = 64,
                   radius: float | None = None) -> np.ndarray:
    """Pr(phi) = int dI Pr(sqrt(I) e^{i phi}), normalised so that int dphi/2pi Pr(phi) = 1."""
    if radial_nodes < 32:
        raise ValueError("phase marginal needs at least 32 radial nodes")
    phis = np.asarray(phis, dtype=float)
    if radius is None:
        radius = default_radius(_signal_photons(signal), spec.mean_photons)
    x, w = np.polynomial.legendre.leggauss(radial_nodes)
    r = 0.5 * radius * (x + 1.0)
    wr = 0.5 * radius * w * 2.0 * r
    # reduce angles so that phi and phi + 2 pi hit identical sample points
    alphas = r[:, None] * np.exp(1j * np.mod(phis, 2 * np.pi).ravel())[None, :]
    values = propensity_values(signal, spec, alphas)
    return (wr @ values).reshape(phis.shape)


@dataclass
class PropensityGrid:
    """Propensity sampled at outcome points, with quadrature weights when available."""

    alphas: np.ndarray
    values: np.ndarray
    filter: FilterSpec
    cutoff: int
    weights: np.ndarray | None = None
    measure: str = MEASURE
    metadata: dict = field(default_factory=dict)

    @property
    def normalization(self) -> float | None:
        if self.weights is None:
            return None
        return float(np.sum(self.weights * self.values))

    @property
    def residual(self) -> float | None:
        norm = self.normalization
        return None if norm is None else abs(norm - 1.0)

    def _meta(self):
        meta = {"measure": self.measure, "filter": self.filter.to_dict(), "cutoff": self.cutoff,
                "normalization": self.normalization, "residual": self.residual}
        meta.update(self.metadata)
        return with_version(meta)

    def to_csv(self, path):
        a = np.ravel(self.alphas)
        rows = zip(a.real, a.imag, np.ravel(self.values))
        return write_csv(path, ["re_alpha", "im_alpha", "value"], rows, self._meta())

    def to_json(self, path):
        a = np.ravel(self.alphas)
        payload = {"metadata": self._meta(), "re_alpha": a.real, "im_alpha": a.imag,
                   "value": np.ravel(self.values)}
        if self.weights is not None:
            payload["weight"] = np.ravel(self.weights)
        return write_json(path, payload)


def propensity_grid(signal: QuantumState, spec: FilterSpec, radial_nodes: int = 64,
                    angular_nodes: int = 64, radius: float | None = None) -> PropensityGrid:
    """Propensity on the polar quadrature nodes; ``residual`` reports |sum w Pr - 1|."""
    if radius is None:
        radius = default_radius(_signal_photons(signal), spec.mean_photons)
    alphas, weights, _, _ = polar_rule(radial_nodes, angular_nodes, radius)
    values = propensity_values(signal, spec, alphas)
    return PropensityGrid(alphas, values, spec, signal.cutoff, weights,
                          metadata={"radial_nodes": radial_nodes, "angular_nodes": angular_nodes,
                                    "radius": radius})


def signal_photons(signal: QuantumState) -> float:
    """<b^dag b> of ``signal``."""
    return _signal_photons(signal)
