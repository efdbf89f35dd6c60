"""One test per acceptance criterion, at the stated tolerances.

The checks live in :mod:`octo.validation` so that ``octo validate`` runs the
same code. Criterion 4 compares the operational spread against the exponential
locked-point decomposition T e^{2s}/2 + (1 - T) e^{-2s}/2; the spread itself is confirmed by the two-mode
oracle, and the decomposition disagrees with it for s > 0.
"""

from octo import validation


def test_criterion_01_povm_completeness(report):
    result = report(validation.povm_completeness())
    assert result.passed, result.detail


def test_criterion_02_sigma_simplification(report):
    result = report(validation.sigma_simplification())
    assert result.passed, result.detail


def test_criterion_03_moments_vs_oracle(report):
    result = report(validation.moments_vs_oracle())
    assert result.passed, result.detail


def test_criterion_04_locked_spread_decomposition(report):
    result = report(validation.locked_spread())
    assert result.passed, result.detail


def test_criterion_05_pythagorean_identity(report):
    result = report(validation.pythagorean())
    assert result.passed, result.detail


def test_criterion_06_conjugation(report):
    result = report(validation.conjugation())
    assert result.passed, result.detail


def test_criterion_07_two_path_phasors(report):
    result = report(validation.two_paths())
    assert result.passed, result.detail


def test_criterion_08_classical_limit(report):
    result = report(validation.classical_limit())
    assert result.passed, result.detail


def test_criterion_09_small_intensity_limits(report):
    assert report(validation.small_I()).passed


def test_criterion_10_amplitude_reversal(report):
    result = report(validation.amplitude_reversal())
    assert result.passed, result.detail


def test_criterion_11_p_symbol_nonexistence(report):
    result = report(validation.p_nonexistence())
    assert result.passed, result.detail


def test_criterion_12_monte_carlo(report):
    result = report(validation.monte_carlo())
    assert result.passed, result.detail


def test_criterion_13_figure_grids(report):
    result = report(validation.figures())
    assert result.passed, result.detail
