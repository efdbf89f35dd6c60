import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from octo import fock
from octo.filters import FilterSpec
from octo.quadratures import (ApparatusConfig, extended_oracle_moment, generating_value, locked_spread_squared,
                              lossy_homodyne_moment, moment_from_generating, moment_result, noise_sigmas,
                              operational_moment, operational_spread, quadrature_commutator_norm, sigma_pm)

SIGNAL = fock.coherent_state(0.6 - 0.3j, 18, max_tail=1e-13)


@given(st.floats(-2.0, 2.0), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
def test_sigma_pm_properties(s, theta, phi):
    sp, sm = sigma_pm(s, theta, phi)
    assert sp > 0 and sm > 0
    assert sp + sm == pytest.approx(2 * math.cosh(2 * s), rel=1e-12)
    # sigma_+ sigma_- = cosh^2 2s - cos^2 sinh^2 2s >= 1
    assert sp * sm >= 1 - 1e-9


def test_sigma_pm_zero_phase_has_no_cancellation():
    for s in (0.1, 0.5, 1.0, 2.0, 3.0):
        sp, sm = sigma_pm(s, 0.0, 0.0)
        assert sm == math.exp(-2 * s) and sp == math.exp(2 * s)


def test_noise_sigmas_lock_condition():
    # the i = 1 noise is minimal when 2 theta + phi = 0 for the port phase phi
    s, phi = 0.7, 0.8
    config = ApparatusConfig(0.5, math.sqrt(2), -phi / 2, FilterSpec.squeezed(s, phi))
    assert noise_sigmas(config)[1] == pytest.approx(math.exp(-2 * s), rel=1e-12)


@pytest.mark.parametrize("T", [0.0, 0.3, 1.0])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vacuum_port_is_lossy_homodyne(T, n):
    config = ApparatusConfig(T, math.sqrt(2), 0.4, FilterSpec.vacuum())
    assert operational_moment(n, 1, config, SIGNAL) == pytest.approx(lossy_homodyne_moment(n, T, 0.4, SIGNAL),
                                                                      abs=1e-10)


@given(st.sampled_from([0.2, 0.5, 0.8]), st.floats(0.0, 0.5), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5),
       st.integers(1, 3), st.sampled_from([1, 2]))
@settings(max_examples=15, deadline=None)
def test_closed_form_matches_oracle(T, s, theta, phi, n, i):
    config = ApparatusConfig(T, math.sqrt(2), theta, FilterSpec.squeezed(s, phi))
    state = fock.fock_state(1, 1)
    assert abs(operational_moment(n, i, config, state) - extended_oracle_moment(n, i, config, state)) < 1e-8


def test_unscaled_local_oscillator():
    config = ApparatusConfig(0.5, 3.0, 0.2, FilterSpec.squeezed(0.3, 0.1))
    assert not config.scaled
    for n in (1, 2):
        assert operational_moment(n, 2, config, SIGNAL) == pytest.approx(
            extended_oracle_moment(n, 2, config, SIGNAL), abs=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_generating_function_derivatives(n):
    config = ApparatusConfig(0.4, math.sqrt(2), 0.3, FilterSpec.squeezed(0.3, 0.5))
    assert generating_value(1, 0.0, config, SIGNAL) == pytest.approx(1.0, abs=1e-12)
    assert moment_from_generating(n, 1, config, SIGNAL) == pytest.approx(operational_moment(n, 1, config, SIGNAL),
                                                                         abs=1e-6)


def test_spread_on_vacuum_at_lock():
    vac = fock.fock_state(0, 2)
    s, T = 0.5, 0.5
    config = ApparatusConfig(T, math.sqrt(2), 0.0, FilterSpec.squeezed(s, 0.0))
    # signal contributes T/2 and the port (1 - T) e^{-2s}/2
    assert operational_spread(1, config, vac) ** 2 == pytest.approx(T / 2 + (1 - T) * math.exp(-2 * s) / 2, rel=1e-12)
    assert operational_spread(2, config, vac) ** 2 == pytest.approx((1 - T) / 2 + T * math.exp(2 * s) / 2, rel=1e-12)


def test_exponential_decomposition_agrees_without_squeezing():
    vac = fock.fock_state(0, 2)
    config = ApparatusConfig(0.3, math.sqrt(2), 0.0, FilterSpec.vacuum())
    assert locked_spread_squared(1, 0.3, 0.0, 0.5) == pytest.approx(operational_spread(1, config, vac) ** 2)


def test_sigma_scaled_form_differs_from_oracle_when_squeezed():
    config = ApparatusConfig(0.5, math.sqrt(2), 0.0, FilterSpec.squeezed(0.6, 0.0))
    state = fock.fock_state(0, 2)
    scaled = operational_moment(2, 1, config, state, form="sigma_scaled")
    assert abs(scaled - extended_oracle_moment(2, 1, config, state)) > 1e-3


def test_moment_result_fields():
    config = ApparatusConfig(0.5, math.sqrt(2), 0.0, FilterSpec.squeezed(0.2, 0.0))
    r = moment_result(1, 1, config, SIGNAL)
    assert r.scaled and r.sigma_minus < 1 < r.sigma_plus
    assert float(r) == r.value


def test_quadratures_commute():
    config = ApparatusConfig(0.5, math.sqrt(2), 0.3, FilterSpec.vacuum())
    assert quadrature_commutator_norm(config, 10) < 1e-10


def test_config_validation():
    with pytest.raises(ValueError):
        ApparatusConfig(1.5)
    with pytest.raises(ValueError):
        ApparatusConfig(0.5, -1.0)
    with pytest.raises(ValueError):
        operational_moment(1, 1, ApparatusConfig(0.5, filter=FilterSpec.fock(1)), SIGNAL)
    with pytest.raises(ValueError):
        operational_moment(1, 3, ApparatusConfig(), SIGNAL)
