import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from octo import fock
from octo.filters import (FilterSpec, PropensityGrid, check_povm_normalization, phase_marginal, povm_element,
                          propensity, propensity_grid, propensity_values)
from octo.io import read_csv

points = st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False)
squeeze = st.floats(-0.6, 0.6)
phase = st.floats(-math.pi, math.pi)


def test_vacuum_filter_gives_husimi_of_coherent_state():
    beta = 0.7 - 0.4j
    state = fock.coherent_state(beta, 30, max_tail=1e-14)
    alphas = np.array([0.0, 1.0, -0.5 + 1j, beta])
    expected = np.exp(-np.abs(alphas - beta) ** 2)
    assert np.allclose(propensity_values(state, FilterSpec.vacuum(), alphas), expected, atol=1e-12)


@given(points, squeeze, phase)
@settings(max_examples=20, deadline=None)
def test_povm_routes_agree(alpha, s, phi):
    spec = FilterSpec.squeezed(s, phi)
    a = povm_element(spec, alpha, 40, route="displaced").entries
    b = povm_element(spec, alpha, 40, route="kernel").entries
    assert np.max(np.abs(a - b)) < 1e-9


@given(points, squeeze, phase)
@settings(max_examples=20, deadline=None)
def test_povm_elements_are_positive_semidefinite(alpha, s, phi):
    F = povm_element(FilterSpec.squeezed(s, phi), alpha, 40).entries
    assert np.allclose(F, F.conj().T)
    assert np.linalg.eigvalsh(F).min() > -1e-12


def test_povm_element_refuses_small_cutoff():
    with pytest.raises(fock.CutoffError):
        povm_element(FilterSpec.squeezed(0.5, 0.0), 0.0, 10)


@pytest.mark.parametrize("spec", [FilterSpec.fock(0), FilterSpec.thermal(0.0), FilterSpec.squeezed(0.0, 1.0)])
def test_trivial_filters_reduce_to_vacuum(spec):
    state = fock.coherent_state(0.5 + 0.5j, 20)
    alphas = np.linspace(-2, 2, 7) + 0.3j
    assert np.allclose(propensity_values(state, spec, alphas), propensity_values(state, FilterSpec.vacuum(), alphas),
                       atol=1e-13)


@pytest.mark.parametrize("spec, N", [(FilterSpec.vacuum(), 30), (FilterSpec.squeezed(0.5, 0.0), 40),
                                     (FilterSpec.squeezed(0.3, 1.1), 30), (FilterSpec.fock(1), 24),
                                     (FilterSpec.thermal(0.4), 24)])
def test_povm_resolves_identity(spec, N):
    assert check_povm_normalization(spec, N, radial_nodes=96, angular_nodes=96) < 1e-5


@pytest.mark.parametrize("spec", [FilterSpec.vacuum(), FilterSpec.squeezed(0.6, 0.4), FilterSpec.thermal(0.5)])
def test_propensity_grid_normalised(spec):
    state = fock.coherent_state(1.0 - 0.5j, 24, max_tail=1e-12)
    grid = propensity_grid(state, spec, 96, 96)
    assert grid.residual < 1e-8
    assert grid.values.min() > -1e-14


def test_phase_marginal_normalised_and_periodic():
    state = fock.coherent_state(1.3, 26, max_tail=1e-12)
    spec = FilterSpec.squeezed(0.5, 0.7)
    phis = 2 * np.pi * np.arange(256) / 256
    m = phase_marginal(state, spec, phis)
    assert np.mean(m) == pytest.approx(1.0, abs=1e-8)
    assert np.allclose(phase_marginal(state, spec, phis + 2 * np.pi), m, atol=0)


def test_propensity_scalar_matches_vector():
    state = fock.fock_state(2, 4)
    spec = FilterSpec.squeezed(0.4, 0.2)
    assert propensity(state, spec, 0.3 + 0.8j) == pytest.approx(propensity_values(state, spec, [0.3 + 0.8j])[0])


def test_csv_round_trip(tmp_path):
    grid = propensity_grid(fock.fock_state(1, 2), FilterSpec.vacuum(), 32, 32)
    path = grid.to_csv(tmp_path / "p.csv")
    meta, cols, data = read_csv(path)
    assert cols == ["re_alpha", "im_alpha", "value"]
    assert np.array_equal(data[:, 2], np.ravel(grid.values))
    assert meta["filter"] == {"kind": "vacuum"}
    assert isinstance(grid, PropensityGrid)


def test_filter_spec_validation_and_dict():
    with pytest.raises(ValueError):
        FilterSpec("laser")
    with pytest.raises(ValueError):
        FilterSpec.thermal(-1.0)
    spec = FilterSpec.squeezed(0.2, 0.1)
    assert FilterSpec.from_dict(spec.to_dict()) == spec
    assert spec.mean_photons == pytest.approx(math.sinh(0.2) ** 2)
