import math

import numpy as np
import pytest

from octo import fock
from octo.filters import FilterSpec
from octo.phasors import (fourier_of_marginal, phasor_integral, phasor_trace, phasor_unitary, trig_expectations,
                          trig_from_phasors)

COHERENT = fock.coherent_state(0.9 + 0.2j, 24, max_tail=1e-14)


def test_isotropic_vacuum_has_zero_phasors():
    vac = fock.fock_state(0, 2)
    for k in (1, 2, 3):
        assert abs(phasor_integral(k, 0.0, 0.0, vac).value) < 1e-12


def test_phasors_bounded_and_k0():
    for k in range(-6, 7):
        v = phasor_integral(k, 0.4, 0.3, COHERENT)
        assert abs(v.value) <= 1 + 1e-12
    assert phasor_integral(0, 0.4, 0.3, COHERENT).value == 1


def test_integral_matches_marginal_fourier():
    spec = FilterSpec.squeezed(0.5, 1.0)
    for k in (1, 2, 3):
        a = phasor_integral(k, 0.5, 1.0, COHERENT).value
        b = fourier_of_marginal(COHERENT, spec, k, angular_nodes=128, radial_nodes=96)
        assert abs(a - b) < 1e-10


def test_rotation_covariance():
    # rotating signal by chi and port phase by -2 chi rotates the outcome plane by chi
    chi, s, phi = 0.7, 0.5, 0.4
    rotated = fock.rotate(COHERENT, chi)
    for k in (1, 2):
        a = phasor_integral(k, s, phi - 2 * chi, rotated).value
        b = np.exp(1j * k * chi) * phasor_integral(k, s, phi, COHERENT).value
        assert abs(a - b) < 1e-10


def test_large_amplitude_approaches_classical_phase():
    state = fock.coherent_state(4 * np.exp(1j * math.pi / 4), 60, max_tail=1e-12)
    v = phasor_integral(1, 0.0, 0.0, state, radial_nodes=128, angular_nodes=128).value
    assert abs(np.angle(v) - math.pi / 4) < 1e-8
    assert 0.95 < abs(v) < 1.0


def test_residual_reported():
    v = phasor_integral(1, 0.3, 0.0, COHERENT)
    assert 0 <= v.residual < 1e-6
    with pytest.raises(ValueError):
        phasor_integral(1, 0.3, 0.0, COHERENT, radial_nodes=16)
    with pytest.raises(ValueError):
        phasor_integral(7, 0.3, 0.0, COHERENT)


def _low_column_deficit(J):
    U, floored, total = phasor_unitary(J)
    nb, nv = np.divmod(np.arange((J + 1) ** 2), J + 1)
    low = nb + nv <= 4
    return np.max(np.abs(np.linalg.norm(U[:, low], axis=0) - 1.0)), floored / total


def test_unitary_columns_converge_with_cutoff():
    # truncating the n_b - n_v ladders spoils unitarity near the edge; it recedes as J grows
    d12, f12 = _low_column_deficit(12)
    d24, f24 = _low_column_deficit(24)
    assert d24 < d12 and d24 < 0.05
    assert f24 < 0.05


def test_trace_path_agrees_with_integral():
    state = fock.coherent_state(1.0, 12, max_tail=1e-8)
    t = phasor_trace(1, 0.3, 0.0, state, joint_cutoff=24)
    a = phasor_integral(1, 0.3, 0.0, state).value
    assert abs(t.value - a) < 5e-3
    assert t.details["floored_fraction"] < 0.05 and not t.details["low_confidence"]
    assert phasor_trace(-1, 0.3, 0.0, state, joint_cutoff=24).value == pytest.approx(np.conj(t.value))


def test_trace_lo_phase_cancels():
    state = fock.coherent_state(0.8j, 10, max_tail=1e-8)
    a = phasor_trace(1, 0.2, 0.0, state, joint_cutoff=20).value
    b = phasor_trace(1, 0.2, 0.0, state, joint_cutoff=20, lo_phase=1.1).value
    assert abs(a - b) < 1e-12


def test_trace_requires_large_joint_cutoff():
    with pytest.raises(fock.CutoffError):
        phasor_trace(1, 0.0, 0.0, fock.fock_state(0, 12), joint_cutoff=16)
    with pytest.raises(ValueError):
        phasor_trace(4, 0.0, 0.0, fock.fock_state(0, 2), joint_cutoff=16)


def test_trig_bundle():
    b = trig_from_phasors(0.3 + 0.4j, -0.2 + 0.1j)
    assert (b.s1, b.c1) == pytest.approx((0.4, 0.3))
    assert b.s2 + b.c2 == pytest.approx(1.0)
    assert b.c2 == pytest.approx(0.5 + 0.5 * -0.2)
    t = trig_expectations(COHERENT, 0.2, 0.0)
    assert -1 <= t.c1 <= 1 and 0 <= t.c2 <= 1
    with pytest.raises(ValueError):
        trig_expectations(COHERENT, 0.2, 0.0, method="magic")
