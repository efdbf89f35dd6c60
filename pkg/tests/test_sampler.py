import math

import numpy as np
import pytest

from octo import fock
from octo.filters import FilterSpec, phase_marginal
from octo.sampler import (EmpiricalValue, analytic_phase_cdf, empirical_phasor, empirical_quadrature, empirical_trig,
                          ks_critical_value, ks_statistic, make_generator, sample_from_marginal, sample_outcomes)

VAC = fock.fock_state(0, 2)


def test_same_seed_same_outcomes():
    a = sample_outcomes(VAC, FilterSpec.squeezed(0.3, 0.2), 2000, seed=5, streams=3)
    b = sample_outcomes(VAC, FilterSpec.squeezed(0.3, 0.2), 2000, seed=5, streams=3, workers=3)
    c = sample_outcomes(VAC, FilterSpec.squeezed(0.3, 0.2), 2000, seed=6, streams=3)
    assert np.array_equal(a.alphas, b.alphas)
    assert not np.array_equal(a.alphas, c.alphas)
    assert len(a) == 2000


def test_vacuum_outcomes_are_gaussian():
    # with both inputs in vacuum the outcome density is exp(-|alpha|^2)/pi
    sample = sample_outcomes(VAC, FilterSpec.vacuum(), 50_000, seed=1)
    assert np.var(sample.alphas.real) == pytest.approx(0.5, rel=0.03)
    se = math.sqrt(0.5 / len(sample))
    assert EmpiricalValue(complex(np.mean(sample.alphas)), se, se, len(sample)).within(0.0)
    assert empirical_phasor(sample, 1).within(0.0)


def test_empirical_trig_consistency():
    state = fock.coherent_state(1.0, 20, max_tail=1e-12)
    sample = sample_outcomes(state, FilterSpec.vacuum(), 20_000, seed=3)
    t = empirical_trig(sample)
    assert t["s2"].value.real + t["c2"].value.real == pytest.approx(1.0)
    e2 = empirical_phasor(sample, 2).value
    assert t["c2"].value.real == pytest.approx(0.5 + 0.5 * e2.real)


def test_quadrature_record_mean():
    beta = 1.2 + 0.4j
    state = fock.coherent_state(beta, 30, max_tail=1e-12)
    sample = sample_outcomes(state, FilterSpec.vacuum(), 40_000, seed=9)
    # at T = 1/2 with |alpha_lo| = sqrt 2 the record means are Re and Im of beta
    assert empirical_quadrature(sample, 0.0, 1).within(beta.real)
    assert empirical_quadrature(sample, 0.0, 2).within(beta.imag)
    rotated = empirical_quadrature(sample, 0.5, 1, lo_amp=2.0)
    assert rotated.within(math.sqrt(2) * (np.exp(-0.5j) * beta).real)


def test_ks_tools():
    phis = 2 * np.pi * np.arange(512) / 512
    state = fock.coherent_state(1.0, 20, max_tail=1e-12)
    good = phase_marginal(state, FilterSpec.squeezed(0.3, 0.0), phis)
    bad = phase_marginal(state, FilterSpec.squeezed(1.0, 0.0), phis)
    draws = sample_from_marginal(phis, good, 20_000, seed=2)
    crit = ks_critical_value(20_000)
    assert crit == pytest.approx(1.6276 / math.sqrt(20_000), rel=0.02)
    assert ks_statistic(draws, analytic_phase_cdf(phis, good)) < crit
    assert ks_statistic(draws, analytic_phase_cdf(phis, bad)) > crit


def test_cdf_is_monotone_and_periodic():
    phis = 2 * np.pi * np.arange(64) / 64
    cdf = analytic_phase_cdf(phis, 1 + 0.5 * np.cos(phis))
    x = np.linspace(0, 2 * np.pi - 1e-9, 200)
    assert np.all(np.diff(cdf(x)) >= 0)
    assert cdf(0.0) == 0.0 and cdf(np.pi) == pytest.approx(0.5, abs=1e-3)


def test_bounds_and_generators():
    with pytest.raises(ValueError):
        sample_outcomes(VAC, FilterSpec.vacuum(), 0, seed=1)
    with pytest.raises(ValueError):
        sample_outcomes(VAC, FilterSpec.vacuum(), 10, seed=1, streams=0)
    a = make_generator(4, 0).random(3)
    b = make_generator(4, 1).random(3)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, make_generator(4, 0).random(3))


def test_sample_csv(tmp_path):
    from octo.io import read_csv
    sample = sample_outcomes(VAC, FilterSpec.thermal(0.5), 500, seed=11)
    meta, cols, data = read_csv(sample.to_csv(tmp_path / "s.csv"))
    assert cols == ["re", "im"] and data.shape == (500, 2)
    assert meta["seed"] == 11 and meta["filter"]["kind"] == "thermal"
