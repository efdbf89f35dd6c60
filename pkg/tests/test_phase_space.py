import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from octo import fock
from octo.io import read_csv
from octo.phase_space import (EtaOrdering, NonexistentRepresentation, amplitude, c_closed_form, c_function,
                              classical_limit_probe, lambda_rule, omega_sigma, phasor_eta_rep,
                              representation_exists, small_I_amplitudes, wigner_grid, wigner_trig, wigner_trig2)
from octo.phasors import phasor_integral


@given(st.floats(0.0, 2.0), st.floats(-1.0, 1.0))
def test_existence_rule(s, eta):
    assert representation_exists(s, EtaOrdering(eta)) == (math.exp(-2 * s) >= eta)


def test_omega_positive_where_representation_exists():
    for lam in (0.1, 1.0, 3.0, 10.0):
        assert omega_sigma(lam, 0.7, EtaOrdering.W()).validity
    # P ordering at s > 0 fails for large lambda
    assert not omega_sigma(5.0, 0.5, EtaOrdering.P()).validity


def test_eta_ordering_bounds():
    with pytest.raises(ValueError):
        EtaOrdering(1.5)
    assert EtaOrdering.P().name == "P" and EtaOrdering(0.3).name == "eta=0.3"


@pytest.mark.parametrize("k", [1, 2, -1, -2])
def test_q_symbol_is_coherent_state_expectation(k):
    beta = 0.9 + 0.2j
    state = fock.coherent_state(beta, 24, max_tail=1e-14)
    q = phasor_eta_rep(k, 0.5, 0.3, EtaOrdering.Q(), beta)
    assert abs(q - phasor_integral(k, 0.5, 0.3, state).value) < 1e-9


@given(st.floats(0.0, 40.0), st.floats(0.0, 2 * math.pi), st.floats(0.0, 1.5), st.floats(-math.pi, math.pi))
@settings(max_examples=30, deadline=None)
def test_first_order_wigner_symbol_matches_trig_integrals(I, theta, s, phi):
    beta = math.sqrt(I) * np.exp(1j * theta)
    e1 = phasor_eta_rep(1, s, phi, EtaOrdering.W(), beta)
    c1, _ = wigner_trig("C1", I, theta, s, phi)
    s1, _ = wigner_trig("S1", I, theta, s, phi)
    assert abs(e1 - (c1 + 1j * s1)) < 1e-10


@given(st.floats(0.0, 100.0), st.floats(0.0, 2 * math.pi), st.floats(0.0, 2.5), st.floats(-math.pi, math.pi))
@settings(max_examples=30, deadline=None)
def test_pythagorean_pointwise(I, theta, s, phi):
    s2, _ = wigner_trig2("S2", I, theta, s, phi)
    c2, _ = wigner_trig2("C2", I, theta, s, phi)
    assert abs(s2 + c2 - 1) < 1e-12


def test_wigner_residuals_tiny():
    I = np.linspace(0, 100, 11)
    _, r = wigner_trig("S1", I, np.full_like(I, 0.4), 2.0, math.pi / 2)
    assert np.max(r) < 1e-8


@pytest.mark.parametrize("s, phi", [(0.5, 0.0), (1.0, 1.0), (2.0, math.pi)])
def test_c_function_closed_form(s, phi):
    assert c_function(s, phi) == pytest.approx(c_closed_form(s, phi), abs=1e-10)
    c2, _ = wigner_trig2("C2", 1e-10, 0.3, s, phi)
    assert c2 == pytest.approx((1 - c_closed_form(s, phi)) / 2, abs=1e-6)


def test_amplitudes():
    ap, am = small_I_amplitudes(0.0)
    assert ap == pytest.approx(am)
    ap, am = small_I_amplitudes(1.0)
    assert am < ap
    # small-I slope of C1 is A_+ cos theta
    I = 1e-8
    c1, _ = wigner_trig("C1", I, 0.0, 1.0, 0.0)
    assert c1 / math.sqrt(I) == pytest.approx(ap, rel=1e-6)
    s1, _ = wigner_trig("S1", I, math.pi / 2, 1.0, 0.0)
    assert s1 / math.sqrt(I) == pytest.approx(am, rel=1e-6)
    assert amplitude(+1, 0.7, 0.0)[0] == pytest.approx(amplitude(-1, 0.7, math.pi)[0], abs=1e-12)


def test_classical_limit_probe():
    dev = classical_limit_probe("C1", 0.3, 1.0, 0.0, [50, 100, 200])
    assert dev[-1] < dev[0] < 0.05
    with pytest.raises(ValueError):
        classical_limit_probe("C1", 0.3, 1.0, 0.0, [10, 20])


def test_p_symbol_nonexistence():
    with pytest.raises(NonexistentRepresentation):
        phasor_eta_rep(2, 0.2, 0.0, EtaOrdering.P(), 1.0)
    assert np.isfinite(phasor_eta_rep(2, 0.0, 0.0, EtaOrdering.P(), 1.0))


def test_lambda_rule_integrates_half_gaussian():
    x, w = lambda_rule(64, 0.1, 10.0)
    assert np.sum(w * np.exp(-x ** 2)) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)


def test_grid_threads_and_csv(tmp_path):
    a = wigner_grid("C2", 1.5, 0.0, I_max=20, n_I=7, n_theta=9, workers=1, chunk=10)
    b = wigner_grid("C2", 1.5, 0.0, I_max=20, n_I=7, n_theta=9, workers=3, chunk=10)
    assert np.array_equal(a.values, b.values)
    meta, cols, data = read_csv(a.to_csv(tmp_path / a.default_name()))
    assert cols == ["I", "theta", "value", "residual"]
    assert np.array_equal(data[:, 2], a.values.ravel())
    assert meta["which"] == "C2"


def test_invalid_inputs():
    with pytest.raises(ValueError):
        wigner_trig("C2", 1.0, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        wigner_trig("C1", -1.0, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        wigner_trig2("C2", 1.0, 0.0, 0.0, 0.0, lambda_nodes=32)
    with pytest.raises(ValueError):
        phasor_eta_rep(3, 0.0, 0.0, EtaOrdering.W(), 1.0)
