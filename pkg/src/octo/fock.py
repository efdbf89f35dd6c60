"""
Single-mode linear algebra on a truncated number basis {|0>, ..., |N>}.

Operators and states are immutable wrappers around complex numpy arrays.
Matrix exponentials are taken of the truncated generators (scipy's
scaling-and-squaring Pade), so the top few rows of ``displacement`` and
``squeeze`` carry truncation error. Where exact matrix elements matter the
recurrences ``displaced_columns`` and ``displaced_squeezed_vacuum`` are used
instead; they reproduce the infinite-dimensional elements for every row and
column inside the cutoff.

Squeezing convention::

    S(s, phi) = exp( (s/2) (exp(-i phi) b^2 - exp(i phi) b^dag^2) )
    S^dag b S = b cosh s - b^dag exp(i phi) sinh s

so the squeezed vacuum has <x_theta^2> = (cosh 2s - cos(2 theta - phi) sinh 2s)/2
with x_theta = (exp(i theta) b^dag + exp(-i theta) b)/sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "CutoffError", "TruncatedOperator", "QuantumState",
    "annihilation", "creation", "number", "identity", "quadrature",
    "displacement", "squeeze", "expectation", "hermite", "hermite_operator",
    "fock_state", "coherent_state", "squeezed_vacuum_state", "thermal_state",
    "rotate", "tail_mass", "suggest_cutoff",
    "displaced_columns", "displaced_squeezed_vacuum",
]

HERMITE_MAX_ORDER = 64


class CutoffError(ValueError):
    """Raised when a truncated basis is too small or two cutoffs disagree."""


def _frozen(array):
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Complex (N+1) x (N+1) matrix in the number basis."""

    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"operator entries must be square, got {entries.shape}")
        object.__setattr__(self, "entries", entries)

    @property
    def cutoff(self) -> int:
        return self.entries.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dag(self) -> TruncatedOperator:
        return TruncatedOperator(self.entries.conj().T)

    def hermitian_part(self) -> TruncatedOperator:
        return TruncatedOperator(0.5 * (self.entries + self.entries.conj().T))

    def anti_hermitian_part(self) -> TruncatedOperator:
        """K with A = H + iK, both H and K Hermitian."""
        return TruncatedOperator(-0.5j * (self.entries - self.entries.conj().T))

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0) <= tol)

    def _check(self, other):
        if other.cutoff != self.cutoff:
            raise CutoffError(f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")

    def __matmul__(self, other):
        if isinstance(other, TruncatedOperator):
            self._check(other)
            return TruncatedOperator(self.entries @ other.entries)
        return self.entries @ np.asarray(other)

    def __add__(self, other):
        self._check(other)
        return TruncatedOperator(self.entries + other.entries)

    def __sub__(self, other):
        self._check(other)
        return TruncatedOperator(self.entries - other.entries)

    def __mul__(self, scalar):
        return TruncatedOperator(self.entries * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return TruncatedOperator(-self.entries)

    def __repr__(self):
        return f"TruncatedOperator(cutoff={self.cutoff})"


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Pure vector or density operator on a truncated number basis.

    Use the constructors :meth:`pure` and :meth:`mixed`; they check
    normalisation (1e-12), Hermiticity (1e-12) and positivity (-1e-10).
    """

    kind: str
    data: np.ndarray

    def __post_init__(self):
        if self.kind not in ("pure", "mixed"):
            raise ValueError(f"unknown state kind {self.kind!r}")
        data = _frozen(self.data)
        if self.kind == "pure" and data.ndim != 1:
            raise ValueError("pure state data must be a vector")
        if self.kind == "mixed" and (data.ndim != 2 or data.shape[0] != data.shape[1]):
            raise ValueError("mixed state data must be a square matrix")
        object.__setattr__(self, "data", data)

    @classmethod
    def pure(cls, amplitudes, normalize: bool = False) -> QuantumState:
        psi = np.asarray(amplitudes, dtype=complex)
        norm = np.vdot(psi, psi).real
        if normalize:
            psi = psi / math.sqrt(norm)
        elif abs(norm - 1.0) > 1e-12:
            raise ValueError(f"pure state norm {norm!r} differs from 1")
        return cls("pure", psi)

    @classmethod
    def mixed(cls, rho, normalize: bool = False) -> QuantumState:
        rho = np.asarray(rho, dtype=complex)
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > 1e-12:
            raise ValueError("density operator is not Hermitian")
        rho = 0.5 * (rho + rho.conj().T)
        tr = np.trace(rho).real
        if normalize:
            rho = rho / tr
        elif abs(tr - 1.0) > 1e-12:
            raise ValueError(f"density operator trace {tr!r} differs from 1")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("density operator has negative eigenvalues")
        return cls("mixed", rho)

    @property
    def cutoff(self) -> int:
        return self.data.shape[0] - 1

    @property
    def density(self) -> np.ndarray:
        if self.kind == "pure":
            return np.outer(self.data, self.data.conj())
        return self.data

    def ensemble(self):
        """Weights and orthonormal vectors (columns) with rho = sum w |v><v|."""
        if self.kind == "pure":
            return np.ones(1), self.data[:, None]
        w, v = np.linalg.eigh(self.data)
        keep = w > 1e-15
        return w[keep], v[:, keep]

    def padded(self, cutoff: int) -> QuantumState:
        """The same state embedded in a larger basis."""
        if cutoff < self.cutoff:
            raise CutoffError(f"cannot pad cutoff {self.cutoff} down to {cutoff}")
        extra = cutoff - self.cutoff
        if self.kind == "pure":
            return QuantumState("pure", np.pad(self.data, (0, extra)))
        return QuantumState("mixed", np.pad(self.data, ((0, extra), (0, extra))))

    def mean_field(self) -> complex:
        """<b>."""
        return expectation(annihilation(max(self.cutoff, 1)), self.padded(max(self.cutoff, 1)))

    def __repr__(self):
        return f"QuantumState(kind={self.kind!r}, cutoff={self.cutoff})"


def annihilation(cutoff: int) -> TruncatedOperator:
    if cutoff < 1:
        raise CutoffError("annihilation operator needs cutoff >= 1")
    return TruncatedOperator(np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1))


def creation(cutoff: int) -> TruncatedOperator:
    return annihilation(cutoff).dag()


def number(cutoff: int) -> TruncatedOperator:
    return TruncatedOperator(np.diag(np.arange(cutoff + 1)))


def identity(cutoff: int) -> TruncatedOperator:
    return TruncatedOperator(np.eye(cutoff + 1))


def quadrature(theta: float, cutoff: int) -> TruncatedOperator:
    """x_theta = (exp(i theta) b^dag + exp(-i theta) b) / sqrt(2)."""
    b = annihilation(cutoff).entries
    return TruncatedOperator((np.exp(1j * theta) * b.T + np.exp(-1j * theta) * b) / math.sqrt(2))


def displacement(alpha: complex, cutoff: int) -> TruncatedOperator:
    """exp(alpha b^dag - alpha^* b) on the truncated generator."""
    b = annihilation(cutoff).entries
    return TruncatedOperator(scipy.linalg.expm(alpha * b.T - np.conj(alpha) * b))


def squeeze(s: float, phi: float, cutoff: int) -> TruncatedOperator:
    if cutoff < 2:
        raise CutoffError("squeeze operator needs cutoff >= 2")
    b = annihilation(cutoff).entries
    b2 = b @ b
    gen = 0.5 * s * (np.exp(-1j * phi) * b2 - np.exp(1j * phi) * b2.T)
    return TruncatedOperator(scipy.linalg.expm(gen))


def expectation(op: TruncatedOperator, state: QuantumState) -> complex:
    """Tr{op rho}."""
    if op.cutoff != state.cutoff:
        raise CutoffError(f"cutoff mismatch: operator {op.cutoff}, state {state.cutoff}")
    if state.kind == "pure":
        return complex(np.vdot(state.data, op.entries @ state.data))
    return complex(np.sum(op.entries * state.data.T))


def hermite(n: int, z):
    """Physicists' Hermite polynomial H_n(z) for scalar or array ``z``.

    Evaluated with the three-term recurrence H_{m+1} = 2z H_m - 2m H_{m-1},
    which stays accurate for complex arguments where the explicit sum loses
    digits to cancellation.
    """
    if not 0 <= n <= HERMITE_MAX_ORDER:
        raise ValueError(f"Hermite order must lie in [0, {HERMITE_MAX_ORDER}], got {n}")
    z = np.asarray(z, dtype=complex)
    h_prev = np.ones_like(z)
    if n == 0:
        return h_prev[()] if h_prev.ndim == 0 else h_prev
    h = 2 * z
    for m in range(1, n):
        h_prev, h = h, 2 * z * h - 2 * m * h_prev
    return h[()] if h.ndim == 0 else h


def hermite_operator(n: int, z: np.ndarray) -> np.ndarray:
    """H_n evaluated at a square matrix argument (same recurrence, matrix products)."""
    if not 0 <= n <= HERMITE_MAX_ORDER:
        raise ValueError(f"Hermite order must lie in [0, {HERMITE_MAX_ORDER}], got {n}")
    z = np.asarray(z, dtype=complex)
    h_prev = np.eye(z.shape[0], dtype=complex)
    if n == 0:
        return h_prev
    h = 2 * z
    for m in range(1, n):
        h_prev, h = h, 2 * z @ h - 2 * m * h_prev
    return h


def fock_state(n: int, cutoff: int) -> QuantumState:
    if not 0 <= n <= cutoff:
        raise CutoffError(f"number state |{n}> does not fit cutoff {cutoff}")
    psi = np.zeros(cutoff + 1, dtype=complex)
    psi[n] = 1.0
    return QuantumState("pure", psi)


def _coherent_amplitudes(beta, cutoff):
    n = np.arange(cutoff + 1)
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[0] = 1.0
    for m in range(1, cutoff + 1):
        amps[m] = amps[m - 1] * beta / math.sqrt(m)
    return amps * math.exp(-abs(beta) ** 2 / 2), n


def coherent_state(beta: complex, cutoff: int, max_tail: float = 1e-8) -> QuantumState:
    """|beta> from its exact number-basis amplitudes, renormalised after truncation."""
    amps, _ = _coherent_amplitudes(complex(beta), cutoff)
    tail = 1.0 - np.vdot(amps, amps).real
    if tail > max_tail:
        raise CutoffError(f"coherent state |{beta}> loses {tail:.2e} of its norm at cutoff {cutoff}")
    return QuantumState.pure(amps, normalize=True)


def _squeezed_vacuum_amplitudes(s, phi, cutoff):
    amps = np.zeros(cutoff + 1, dtype=complex)
    ratio = -0.5 * np.exp(1j * phi) * math.tanh(s)
    amps[0] = 1.0 / math.sqrt(math.cosh(s))
    for m in range(2, cutoff + 1, 2):
        # c_m = c_{m-2} * ratio * sqrt(m (m-1)) / (m/2)
        amps[m] = amps[m - 2] * ratio * math.sqrt(m * (m - 1)) / (m // 2)
    return amps


def squeezed_vacuum_state(s: float, phi: float, cutoff: int, max_tail: float = 1e-8) -> QuantumState:
    """S(s, phi)|0> from the closed-form even amplitudes."""
    amps = _squeezed_vacuum_amplitudes(s, phi, cutoff)
    tail = 1.0 - np.vdot(amps, amps).real
    if tail > max_tail:
        raise CutoffError(f"squeezed vacuum (s={s}) loses {tail:.2e} of its norm at cutoff {cutoff}")
    return QuantumState.pure(amps, normalize=True)


def thermal_state(nbar: float, cutoff: int, max_tail: float = 1e-8) -> QuantumState:
    if nbar < 0:
        raise ValueError("mean photon number must be non-negative")
    m = np.arange(cutoff + 1)
    if nbar == 0:
        weights = (m == 0).astype(float)
    else:
        weights = np.exp(m * math.log(nbar / (nbar + 1))) / (nbar + 1)
    tail = 1.0 - weights.sum()
    if tail > max_tail:
        raise CutoffError(f"thermal state (nbar={nbar}) loses {tail:.2e} at cutoff {cutoff}")
    return QuantumState.mixed(np.diag(weights / weights.sum()))


def rotate(state: QuantumState, chi: float) -> QuantumState:
    """exp(i chi b^dag b) applied to ``state``."""
    phases = np.exp(1j * chi * np.arange(state.cutoff + 1))
    if state.kind == "pure":
        return QuantumState("pure", phases * state.data)
    return QuantumState("mixed", phases[:, None] * state.data * phases.conj()[None, :])


def tail_mass(vector, start: int) -> float:
    """Probability carried by number states with index >= ``start``."""
    vector = np.asarray(vector)
    return float(np.sum(np.abs(vector[start:]) ** 2))


def suggest_cutoff(alpha_abs: float = 0.0, s: float = 0.0) -> int:
    """Cutoff rule N >= 4 (|alpha| + e^|s|)^2 + 20."""
    return int(math.ceil(4 * (abs(alpha_abs) + math.exp(abs(s))) ** 2 + 20))


def displaced_columns(alphas, cutoff: int, columns=None) -> np.ndarray:
    """Exact number-basis columns D(alpha)|n> for many alphas at once.

    Returns an array of shape ``alphas.shape + (len(columns), cutoff + 1)``.
    Built from D(alpha)|n+1> = (b^dag - alpha^*) D(alpha)|n> / sqrt(n+1); each row
    m <= cutoff only needs rows m-1 and m of the previous column, so nothing is
    lost to truncation.
    """
    alphas = np.asarray(alphas, dtype=complex)
    if columns is None:
        columns = range(cutoff + 1)
    columns = list(columns)
    top = max(columns) if columns else 0
    sqrt_m = np.sqrt(np.arange(1, cutoff + 1))
    col = np.zeros(alphas.shape + (cutoff + 1,), dtype=complex)
    col[..., 0] = np.exp(-0.5 * np.abs(alphas) ** 2)
    for m in range(1, cutoff + 1):
        col[..., m] = col[..., m - 1] * alphas / sqrt_m[m - 1]
    out = np.empty(alphas.shape + (len(columns), cutoff + 1), dtype=complex)
    where = {c: i for i, c in enumerate(columns)}
    for n in range(top + 1):
        if n in where:
            out[..., where[n], :] = col
        if n == top:
            break
        nxt = -np.conj(alphas)[..., None] * col
        nxt[..., 1:] += sqrt_m * col[..., :-1]
        col = nxt / math.sqrt(n + 1)
    return out


def displaced_squeezed_vacuum(alphas, s: float, phi: float, cutoff: int) -> np.ndarray:
    """Exact amplitudes <m| D(alpha) S(s, phi) |0> for many alphas at once.

    The state is annihilated by (b - alpha) cosh s + (b^dag - alpha^*) e^{i phi} sinh s,
    which gives a three-term recurrence in m.
    """
    alphas = np.asarray(alphas, dtype=complex)
    ch, sh = math.cosh(s), math.sinh(s)
    e = np.exp(1j * phi)
    gamma = alphas * ch + np.conj(alphas) * e * sh
    amps = np.zeros(alphas.shape + (cutoff + 1,), dtype=complex)
    amps[..., 0] = np.exp(-0.5 * np.abs(alphas) ** 2 - 0.5 * e * math.tanh(s) * np.conj(alphas) ** 2) / math.sqrt(ch)
    for m in range(cutoff):
        prev = amps[..., m - 1] if m > 0 else 0.0
        amps[..., m + 1] = (gamma * amps[..., m] - e * sh * math.sqrt(m) * prev) / (ch * math.sqrt(m + 1))
    return amps

