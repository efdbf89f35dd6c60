import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_hermite

from octo import fock

amplitudes = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


def test_commutator_identity_below_cutoff():
    a = fock.annihilation(20).entries
    comm = a @ a.conj().T - a.conj().T @ a
    assert np.allclose(np.diag(comm)[:-1], 1.0)
    assert np.allclose(comm - np.diag(np.diag(comm)), 0.0)


@given(amplitudes)
@settings(max_examples=25, deadline=None)
def test_displacement_matches_coherent_state(beta):
    N = 60
    psi = fock.displacement(beta, N).entries[:, 0]
    ref = fock.coherent_state(beta, N).data
    assert np.max(np.abs(psi[:30] - ref[:30])) < 1e-10


@given(st.floats(-1.0, 1.0), st.floats(-math.pi, math.pi))
@settings(max_examples=20, deadline=None)
def test_squeeze_matches_closed_form(s, phi):
    N = 80
    psi = fock.squeeze(s, phi, N).entries[:, 0]
    ref = fock.squeezed_vacuum_state(s, phi, N, max_tail=1e-6).data
    assert np.max(np.abs(psi[:40] - ref[:40])) < 1e-9


@given(amplitudes)
@settings(max_examples=20, deadline=None)
def test_displaced_columns_match_matrix_exponential(alpha):
    N = 60
    cols = fock.displaced_columns(np.array([alpha]), 20, columns=[0, 3, 7])[0]
    D = fock.displacement(alpha, N).entries
    for row, n in zip(cols, (0, 3, 7)):
        assert np.max(np.abs(row - D[:21, n])) < 1e-10


@given(amplitudes, st.floats(-1.0, 1.0), st.floats(-math.pi, math.pi))
@settings(max_examples=20, deadline=None)
def test_displaced_squeezed_vacuum_recurrence(alpha, s, phi):
    N = 90
    ref = (fock.displacement(alpha, N).entries @ fock.squeeze(s, phi, N).entries)[:, 0]
    amps = fock.displaced_squeezed_vacuum(np.array([alpha]), s, phi, 25)[0]
    assert np.max(np.abs(amps - ref[:26])) < 1e-8


def test_hermite_real_axis_matches_scipy():
    x = np.linspace(-3, 3, 11)
    for n in range(8):
        assert np.allclose(fock.hermite(n, x).real, eval_hermite(n, x), rtol=1e-12, atol=1e-9)


def test_hermite_complex_argument_identity():
    z = 0.7 - 1.3j
    # H_n(z) = 2^n z^n + ... ; check parity H_n(-z) = (-1)^n H_n(z)
    for n in range(10):
        assert abs(fock.hermite(n, -z) - (-1) ** n * fock.hermite(n, z)) < 1e-9 * (1 + abs(fock.hermite(n, z)))


def test_hermite_operator_on_diagonal_matrix():
    x = np.diag([0.3, -1.1, 2.0])
    assert np.allclose(np.diag(fock.hermite_operator(5, x)), eval_hermite(5, np.diag(x)))


def test_quadrature_hermitian_and_mean():
    beta = 1.2 * np.exp(0.4j)
    state = fock.coherent_state(beta, 40, max_tail=1e-12)
    for theta in (0.0, 0.9):
        q = fock.quadrature(theta, 41).entries
        assert np.allclose(q, q.conj().T)
        mean = fock.expectation(fock.quadrature(theta, 40), state)
        assert abs(mean - math.sqrt(2) * (np.exp(-1j * theta) * beta).real) < 1e-10


def test_state_constructors():
    assert fock.coherent_state(0.5j, 20).mean_field() == pytest.approx(0.5j, abs=1e-10)
    th = fock.thermal_state(0.8, 120, max_tail=1e-10)
    assert fock.expectation(fock.number(120), th).real == pytest.approx(0.8, rel=1e-8)
    sq = fock.squeezed_vacuum_state(0.6, 0.0, 60, max_tail=1e-10)
    assert fock.expectation(fock.number(60), sq).real == pytest.approx(math.sinh(0.6) ** 2, rel=1e-8)


def test_cutoff_errors():
    with pytest.raises(fock.CutoffError):
        fock.fock_state(5, 3)
    with pytest.raises(fock.CutoffError):
        fock.coherent_state(3.0, 5)
    with pytest.raises(fock.CutoffError):
        fock.fock_state(0, 4).padded(2)


def test_mixed_state_validation():
    with pytest.raises(ValueError):
        fock.QuantumState.mixed(np.array([[0.5, 0.3], [0.0, 0.5]]))
    with pytest.raises(ValueError):
        fock.QuantumState.pure([1.0, 1.0])
    rho = fock.QuantumState.mixed(np.diag([2.0, 1.0]), normalize=True)
    w, _ = rho.ensemble()
    assert w.sum() == pytest.approx(1.0)


def test_rotate_multiplies_mean_field():
    state = fock.coherent_state(1.0 + 0.3j, 30, max_tail=1e-12)
    assert fock.rotate(state, 0.8).mean_field() == pytest.approx((1.0 + 0.3j) * np.exp(0.8j), abs=1e-10)
