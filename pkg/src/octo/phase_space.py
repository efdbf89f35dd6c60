"""
eta-ordered phase-space functions of the squeezed phasors and of the
operational trigonometric operators.

For a port state S(s, phi)|0> (phi as in :class:`~octo.filters.FilterSpec`)
and ordering parameter eta, the symbol of E^(k) at beta is a one-dimensional
integral over lambda = |lambda_vec| >= 0,

    E^(k)(beta) = 2/Gamma(k/2) int_0^inf lambda^(k-1) Z(lambda) <alpha^k>_lambda d lambda,

where, with A = cosh 2s and B = sinh 2s,

    Omega  = 1 / [(1 + lambda^2 (e^{2s} - eta)/2) (1 + lambda^2 (e^{-2s} - eta)/2)]
    Sigma  = 1 + lambda^2 (A - eta)/2
    mu     = Omega (Sigma beta + lambda^2 B e^{-i phi} beta^*/2)
    p      = -B Omega e^{-i phi} / 2
    Z      = sqrt(Omega) exp(-lambda^2 Omega [Sigma |beta|^2 + lambda^2 B Re(e^{i phi} beta^2)/2])

and <alpha^k> is the k-th moment of a complex Gaussian with mean mu and
pseudo-covariance p (<alpha> = mu, <alpha^2> = mu^2 + p). For k = 1 and
eta = 0 this reduces to the one-dimensional sine/cosine integrals of
:func:`wigner_trig`. The representation exists only while Omega > 0 for all
lambda, that is iff e^{-2s} >= eta.

The lambda integrals decay algebraically, so they are done on geometric
Gauss-Legendre panels with a final panel mapping [lambda_1, inf) onto (0, 1].
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as gamma_fn

from .io import with_version, write_csv, write_json

__all__ = [
    "EtaOrdering", "OmegaSigma", "NonexistentRepresentation", "omega_sigma", "phasor_eta_rep",
    "wigner_trig", "wigner_trig2", "wigner_trig_any", "WignerGrid", "wigner_grid",
    "small_I_amplitudes", "amplitude", "c_function", "c_closed_form", "classical_limit_probe",
    "lambda_rule", "representation_exists",
]

EPS = np.finfo(float).eps
TRIG_KINDS = ("S1", "C1", "S2", "C2")


class NonexistentRepresentation(ValueError):
    """The eta-ordered symbol diverges (Omega <= 0 somewhere on the lambda axis)."""


@dataclass(frozen=True)
class EtaOrdering:
    eta: float

    def __post_init__(self):
        if not -1.0 <= self.eta <= 1.0:
            raise ValueError(f"ordering parameter must lie in [-1, 1], got {self.eta}")

    @classmethod
    def Q(cls):
        return cls(-1.0)

    @classmethod
    def W(cls):
        return cls(0.0)

    @classmethod
    def P(cls):
        return cls(1.0)

    @property
    def name(self) -> str:
        return {-1.0: "Q", 0.0: "W", 1.0: "P"}.get(self.eta, f"eta={self.eta}")


@dataclass(frozen=True)
class OmegaSigma:
    lam: float
    omega: float
    sigma_cap: float
    validity: bool


def _omega_sigma(lam, s, eta):
    l2 = np.asarray(lam, dtype=float) ** 2
    f1 = 1.0 + 0.5 * l2 * (math.exp(2 * s) - eta)
    f2 = 1.0 + 0.5 * l2 * (math.exp(-2 * s) - eta)
    prod = f1 * f2
    with np.errstate(divide="ignore"):
        omega = 1.0 / prod
    sigma = 1.0 + 0.5 * l2 * (math.cosh(2 * s) - eta)
    return omega, sigma, (f1 > 0) & (f2 > 0)


def omega_sigma(lam: float, s: float, ordering: EtaOrdering) -> OmegaSigma:
    """Omega and Sigma at one lambda; ``validity`` is Omega > 0 (so that sqrt(Omega) is real)."""
    omega, sigma, valid = _omega_sigma(lam, s, ordering.eta)
    return OmegaSigma(float(lam), float(omega), float(sigma), bool(valid))


def representation_exists(s: float, ordering: EtaOrdering) -> bool:
    """Omega stays positive for every lambda iff e^{-2|s|} >= eta."""
    return math.exp(-2 * abs(s)) >= ordering.eta


def lambda_rule(lambda_nodes: int, lam0: float, lam1: float):
    """Nodes and weights for int_0^inf f(lambda) d lambda.

    One panel on [0, lam0], geometric panels (ratio 2) up to lam1 and the
    mapped tail lambda = lam1 / t, each with ``lambda_nodes`` Gauss points.
    """
    x, w = np.polynomial.legendre.leggauss(lambda_nodes)
    edges = [0.0, lam0]
    while edges[-1] < lam1:
        edges.append(edges[-1] * 2.0)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * (x + 1) + a)
        weights.append(0.5 * (b - a) * w)
    top = edges[-1]
    t = 0.5 * (x + 1)
    nodes.append(top / t)
    weights.append(0.5 * w * top / t ** 2)
    return np.concatenate(nodes), np.concatenate(weights)


def _lambda_range(I_max: float, s: float):
    lam0 = min(0.25 / math.sqrt(1.0 + I_max), 0.1 * math.exp(-abs(s)))
    lam1 = 50.0 * math.exp(abs(s))
    return lam0, lam1


def _integrate(integrand, lambda_nodes, lam0, lam1):
    """Value and residual |Q(n) - Q(n/2)| + 10 eps sum|w f| of a vectorised integrand.

    ``integrand(lam)`` takes shape (L,) and returns shape (..., L).
    """
    lam, w = lambda_rule(lambda_nodes, lam0, lam1)
    vals = integrand(lam)
    fine = vals @ w
    lam_c, w_c = lambda_rule(max(lambda_nodes // 2, 2), lam0, lam1)
    coarse = integrand(lam_c) @ w_c
    roundoff = 10 * EPS * (np.abs(vals) @ w)
    return fine, np.abs(fine - coarse) + roundoff


def _eta_integrand(k, beta, s, phi, eta):
    """lambda -> lambda^(k-1) Z <alpha^k>, broadcasting beta (...) against lambda (L,)."""
    beta = np.asarray(beta, dtype=complex)[..., None]
    B = math.sinh(2 * s)
    e = np.exp(1j * phi)

    def f(lam):
        l2 = lam ** 2
        omega, sigma, valid = _omega_sigma(lam, s, eta)
        if not np.all(valid):
            raise NonexistentRepresentation(
                f"Omega <= 0 for eta={eta}, s={s}; the ordered symbol does not exist")
        mu = omega * (sigma * beta + 0.5 * l2 * B * np.conj(e) * np.conj(beta))
        expo = -l2 * omega * (sigma * np.abs(beta) ** 2 + 0.5 * l2 * B * np.real(e * beta ** 2))
        z = np.sqrt(omega) * np.exp(expo)
        p = -0.5 * B * omega * np.conj(e)
        moment = np.zeros(np.broadcast_shapes(mu.shape, np.shape(p)), dtype=complex)
        for j in range(k // 2 + 1):
            moment += math.comb(k, 2 * j) * _double_factorial(2 * j - 1) * p ** j * mu ** (k - 2 * j)
        return lam ** (k - 1) * z * moment

    return f


def _double_factorial(n):
    return 1 if n <= 0 else n * _double_factorial(n - 2)


def phasor_eta_rep(k: int, s: float, phi: float, ordering: EtaOrdering, beta, lambda_nodes: int = 64,
                   return_residual: bool = False):
    """eta-ordered symbol of E^(k) at ``beta`` (scalar or array), k in {+-1, +-2}.

    Raises NonexistentRepresentation when Omega is not positive on the whole lambda axis.
    """
    if abs(k) not in (1, 2):
        raise ValueError("only k = +-1 and +-2 are supported")
    if lambda_nodes < 16:
        raise ValueError("lambda_nodes must be at least 16")
    if not representation_exists(s, ordering):
        raise NonexistentRepresentation(
            f"{ordering.name}-symbol of the squeezed phasor does not exist for s={s} (needs e^(-2s) >= eta)")
    beta_arr = np.asarray(beta, dtype=complex)
    I_max = float(np.max(np.abs(beta_arr)) ** 2) if beta_arr.size else 0.0
    lam0, lam1 = _lambda_range(I_max, s)
    kk = abs(k)
    value, residual = _integrate(_eta_integrand(kk, beta_arr, s, phi, ordering.eta), lambda_nodes, lam0, lam1)
    scale = 2.0 / gamma_fn(kk / 2.0)
    value, residual = scale * value, scale * residual
    if k < 0:
        value = np.conj(value)
    if beta_arr.ndim == 0:
        value, residual = complex(value), float(residual)
    return (value, residual) if return_residual else value


def _trig_integrand(which, I, theta, s, phi):
    """The sine/cosine Wigner integrands (even in lambda), vectorised over I/theta."""
    I = np.asarray(I, dtype=float)[..., None]
    theta = np.asarray(theta, dtype=float)[..., None]
    ch2 = math.cosh(s) ** 2
    th = math.tanh(s)
    if which == "C1":
        trig, shifted = np.cos(theta), th * np.cos(phi + theta)
    else:
        trig, shifted = np.sin(theta), -th * np.sin(phi + theta)

    def f(lam):
        l2 = lam ** 2
        D = 0.25 * l2 ** 2 + l2 * (1 + 2 * math.sinh(s) ** 2) + 1
        expo = -l2 * I * (1 - 0.5 * l2 + l2 * ch2 * (1 + th * np.cos(phi + 2 * theta))) / D
        num = np.sqrt(I) * (trig - 0.5 * l2 * trig + l2 * ch2 * (trig + shifted))
        # doubled: the integral runs over the whole real line
        return 2.0 * np.exp(expo) * num / D ** 1.5 / math.sqrt(math.pi)

    return f


def wigner_trig(which: str, I, theta, s: float, phi: float, lambda_nodes: int = 64):
    """Wigner function of S^(1) or C^(1) at beta = sqrt(I) e^{i theta}: (value, residual)."""
    if which not in ("S1", "C1"):
        raise ValueError("which must be 'S1' or 'C1'")
    if lambda_nodes < 64:
        raise ValueError("lambda_nodes must be at least 64")
    I_arr = np.asarray(I, dtype=float)
    if np.any(I_arr < 0) or np.any(I_arr > 1e4):
        raise ValueError("intensity must lie in [0, 1e4]")
    lam0, lam1 = _lambda_range(float(np.max(I_arr)) if I_arr.size else 0.0, s)
    value, residual = _integrate(_trig_integrand(which, I_arr, theta, s, phi), lambda_nodes, lam0, lam1)
    if np.ndim(value) == 0:
        return float(value), float(residual)
    return value, residual


def wigner_trig2(which: str, I, theta, s: float, phi: float, lambda_nodes: int = 64):
    """Wigner function of S^(2) or C^(2): 1/2 -+ Re E^(2)_W / 2. Returns (value, residual)."""
    if which not in ("S2", "C2"):
        raise ValueError("which must be 'S2' or 'C2'")
    if lambda_nodes < 64:
        raise ValueError("lambda_nodes must be at least 64")
    I_arr = np.asarray(I, dtype=float)
    if np.any(I_arr < 0) or np.any(I_arr > 1e4):
        raise ValueError("intensity must lie in [0, 1e4]")
    beta = np.sqrt(I_arr) * np.exp(1j * np.asarray(theta, dtype=float))
    e2, residual = phasor_eta_rep(2, s, phi, EtaOrdering.W(), beta, lambda_nodes, return_residual=True)
    sign = 1.0 if which == "C2" else -1.0
    value = 0.5 + sign * 0.5 * np.real(e2)
    residual = 0.5 * np.asarray(residual)
    if np.ndim(value) == 0:
        return float(value), float(residual)
    return value, residual


def wigner_trig_any(which: str, I, theta, s: float, phi: float, lambda_nodes: int = 64):
    if which in ("S1", "C1"):
        return wigner_trig(which, I, theta, s, phi, lambda_nodes)
    return wigner_trig2(which, I, theta, s, phi, lambda_nodes)


def amplitude(sign: int, s: float, phi: float, lambda_nodes: int = 64):
    """Small-intensity amplitude A_+- (s, phi): (value, residual).

    C^(1)_W ~ sqrt(I) A_+ cos(theta) and S^(1)_W ~ sqrt(I) A_- sin(theta) as I -> 0
    (for phi = 0 and phi = pi).
    """
    A, B = math.cosh(2 * s), math.sinh(2 * s)
    c = math.cos(phi)

    def f(lam):
        l2 = lam ** 2
        D = 0.25 * l2 ** 2 + l2 * A + 1
        return 2.0 * (1 + 0.5 * l2 * A + sign * 0.5 * l2 * B * c) / D ** 1.5 / math.sqrt(math.pi)

    lam0, lam1 = _lambda_range(0.0, s)
    value, residual = _integrate(f, lambda_nodes, lam0, lam1)
    return float(value), float(residual)


def small_I_amplitudes(s: float, lambda_nodes: int = 64) -> tuple[float, float]:
    """(A_+(s, 0), A_-(s, 0))."""
    if lambda_nodes < 64:
        raise ValueError("lambda_nodes must be at least 64")
    return amplitude(+1, s, 0.0, lambda_nodes)[0], amplitude(-1, s, 0.0, lambda_nodes)[0]


def c_function(s: float, phi: float, lambda_nodes: int = 64) -> float:
    """The I-independent constant with C^(2)_W -> (1 - c)/2 as I -> 0.

    The two-dimensional lambda integral depends on |lambda| only and is done
    radially with measure 2 pi lambda d lambda / pi.
    """
    if lambda_nodes < 64:
        raise ValueError("lambda_nodes must be at least 64")
    B = math.sinh(2 * s)
    c = math.cos(phi)

    def f(lam):
        l2 = lam ** 2
        D = 0.25 * l2 ** 2 + l2 * (1 + 2 * math.sinh(s) ** 2) + 1
        return 2.0 * lam * 0.5 * D * B * c / D ** 2.5

    lam0, lam1 = _lambda_range(0.0, s)
    value, _ = _integrate(f, lambda_nodes, lam0, lam1)
    return float(value)


def c_closed_form(s: float, phi: float) -> float:
    """tanh(s) cos(phi), the exact value of :func:`c_function`."""
    return math.tanh(s) * math.cos(phi)


_CLASSICAL = {
    "S1": np.sin, "C1": np.cos,
    "S2": lambda t: np.sin(t) ** 2, "C2": lambda t: np.cos(t) ** 2,
}


def classical_limit_probe(which: str, theta: float, s: float, phi: float, I_list, lambda_nodes: int = 64):
    """|W(I, theta) - classical(theta)| for each I in ``I_list`` (ascending, max >= 50)."""
    I_list = np.asarray(I_list, dtype=float)
    if I_list.size == 0 or np.any(np.diff(I_list) < 0) or I_list.max() < 50:
        raise ValueError("I_list must be ascending and reach at least 50")
    values, _ = wigner_trig_any(which, I_list, np.full_like(I_list, theta), s, phi, lambda_nodes)
    return np.abs(np.asarray(values) - _CLASSICAL[which](theta)).tolist()


@dataclass
class WignerGrid:
    """Wigner function of a trigonometric operator on an (I, theta) grid.

    ``values[i, j]`` is at I_values[i], theta_values[j], with beta = sqrt(I) e^{i theta}.
    """

    which: str
    s: float
    phi: float
    I_values: np.ndarray
    theta_values: np.ndarray
    values: np.ndarray
    residuals: np.ndarray
    lambda_nodes: int = 64
    metadata: dict = field(default_factory=dict)

    def _meta(self):
        meta = {"which": self.which, "s": self.s, "phi": self.phi, "lambda_nodes": self.lambda_nodes,
                "shape": list(self.values.shape), "max_residual": float(np.max(self.residuals)),
                "axes": "beta = sqrt(I) exp(i theta)"}
        meta.update(self.metadata)
        return with_version(meta)

    def default_name(self, suffix: str = "csv") -> str:
        return f"wigner_{self.which}_s{self.s:g}_phi{self.phi:.6g}.{suffix}"

    def rows(self):
        II, TT = np.meshgrid(self.I_values, self.theta_values, indexing="ij")
        return zip(II.ravel(), TT.ravel(), self.values.ravel(), self.residuals.ravel())

    def to_csv(self, path):
        return write_csv(path, ["I", "theta", "value", "residual"], self.rows(), self._meta())

    def to_json(self, path):
        return write_json(path, {"metadata": self._meta(), "I": self.I_values, "theta": self.theta_values,
                                 "value": self.values, "residual": self.residuals})


def _thread_count(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("OCTO_THREADS")
    return max(1, int(env)) if env else 1


def wigner_grid(which: str, s: float, phi: float, I_values=None, theta_values=None, lambda_nodes: int = 64,
                I_max: float = 30.0, n_I: int = 80, n_theta: int = 120, workers: int | None = None,
                chunk: int = 256) -> WignerGrid:
    """Evaluate ``which`` on an (I, theta) grid; theta defaults to [0, 2 pi) and I to [0, I_max].

    Rows of the grid are evaluated in chunks, optionally on several threads
    (``workers`` or the OCTO_THREADS environment variable).
    """
    if which not in TRIG_KINDS:
        raise ValueError(f"which must be one of {TRIG_KINDS}")
    if I_values is None:
        I_values = np.linspace(0.0, I_max, n_I)
    if theta_values is None:
        theta_values = 2 * np.pi * np.arange(n_theta) / n_theta
    I_values = np.asarray(I_values, dtype=float)
    theta_values = np.asarray(theta_values, dtype=float)
    II, TT = np.meshgrid(I_values, theta_values, indexing="ij")
    flat_I, flat_T = II.ravel(), TT.ravel()
    # reduce angles so that theta and theta + 2 pi give identical columns
    flat_T_red = np.mod(flat_T, 2 * np.pi)
    pieces = [slice(i, min(i + chunk, flat_I.size)) for i in range(0, flat_I.size, chunk)]

    def work(sl):
        return wigner_trig_any(which, flat_I[sl], flat_T_red[sl], s, phi, lambda_nodes)

    n_threads = _thread_count(workers)
    if n_threads > 1:
        with ThreadPoolExecutor(n_threads) as pool:
            results = list(pool.map(work, pieces))
    else:
        results = [work(sl) for sl in pieces]
    values = np.concatenate([np.atleast_1d(r[0]) for r in results]).reshape(II.shape)
    residuals = np.concatenate([np.atleast_1d(r[1]) for r in results]).reshape(II.shape)
    return WignerGrid(which, s, phi, I_values, theta_values, values, residuals, lambda_nodes)
