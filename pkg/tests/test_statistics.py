import numpy as np
import pytest
from scipy import stats

from services.statistics import TooFewSamplesError, wilcoxon_signed_rank, holm_bonferroni


def test_exact_test_on_three_values():
    result = wilcoxon_signed_rank([0.6, 0.7, 0.8], 0.5)
    assert result.statistic == 6
    assert result.p_value == pytest.approx(0.125)
    assert result.n == 3
    assert result.exact


def test_symmetric_sample():
    # W+ = 5 of a possible 10; P(W+ >= 5) over the 16 sign patterns is 10/16
    result = wilcoxon_signed_rank([0.4, 0.6, 0.45, 0.55], 0.5)
    assert result.statistic == 5
    assert result.p_value == pytest.approx(0.625)


def test_ties_with_the_null_median_are_dropped():
    result = wilcoxon_signed_rank([0.5, 0.6, 0.7, 0.8, 0.5], 0.5)
    assert result.n == 3
    assert result.p_value == pytest.approx(0.125)


def test_all_values_at_the_null_median():
    with pytest.raises(TooFewSamplesError):
        wilcoxon_signed_rank([0.5] * 10, 0.5)


def test_too_few_differences():
    with pytest.raises(TooFewSamplesError):
        wilcoxon_signed_rank([0.9, 0.1], 0.5)


def test_exact_p_value_matches_scipy():
    values = np.array([0.91, 0.22, 0.74, 0.63, 0.58, 0.97, 0.35, 0.81, 0.69, 0.12])
    ours = wilcoxon_signed_rank(values, 0.5)
    reference = stats.wilcoxon(values - 0.5, alternative='greater', method='exact')
    assert ours.exact
    assert ours.statistic == pytest.approx(reference.statistic)
    assert ours.p_value == pytest.approx(reference.pvalue)


def test_normal_approximation_matches_scipy():
    rng = np.random.default_rng(3)
    values = np.round(rng.uniform(0.2, 1.0, size=40), 2)
    ours = wilcoxon_signed_rank(values, 0.5)
    reference = stats.wilcoxon(np.round(values - 0.5, 12), alternative='greater', method='approx', correction=True)
    assert not ours.exact
    assert ours.statistic == pytest.approx(reference.statistic)
    assert ours.p_value == pytest.approx(reference.pvalue, rel=1e-6)


def test_values_above_the_median_are_significant():
    values = [0.6, 0.75, 1.0, 1.0, 0.8, 0.55, 1.0, 0.9, 0.7, 0.65, 0.4, 1.0]
    assert wilcoxon_signed_rank(values, 0.5).p_value < 0.05


def test_holm_bonferroni():
    assert holm_bonferroni([0.01, 0.04, 0.03]) == pytest.approx([0.03, 0.06, 0.06])
    assert holm_bonferroni([0.5, 0.9]) == pytest.approx([1.0, 1.0])
    assert holm_bonferroni([]) == []
