"""
Statistics - One-sided Wilcoxon signed-rank test and Holm-Bonferroni adjustment
"""

from dataclasses import dataclass

import numpy as np
from scipy import stats

from ontology.models import OntologyRepairError
from config.settings import config

# Differences closer than this to the null median count as ties
_DECIMALS = 12


class TooFewSamplesError(OntologyRepairError):
    """Fewer than three differences remain after dropping ties with the null median"""


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float
    p_value: float
    n: int
    exact: bool


def wilcoxon_signed_rank(values, mu0=0.5):
    """
    One-sided Wilcoxon signed-rank test for median > mu0

    Exact null distribution (all 2^n sign patterns) for n ≤ WILCOXON_EXACT_MAX_N,
    normal approximation with tie and continuity correction above.

    Args:
        values: Sample values
        mu0: Null median

    Returns:
        WilcoxonResult with W+ as statistic and P(W+ ≥ observed) as p-value
    """
    diffs = np.round(np.asarray(values, dtype=float) - mu0, _DECIMALS)
    diffs = diffs[diffs != 0]
    n = len(diffs)
    if n < 3:
        raise TooFewSamplesError(f"need at least 3 non-zero differences, got {n}")

    ranks = stats.rankdata(np.abs(diffs))
    w_plus = float(ranks[diffs > 0].sum())

    if n <= config.WILCOXON_EXACT_MAX_N:
        signs = (np.arange(2 ** n)[:, None] >> np.arange(n)) & 1
        null = signs @ ranks
        p_value = float(np.mean(null >= w_plus - 1e-9))
        return WilcoxonResult(w_plus, p_value, n, True)

    _, tie_counts = np.unique(ranks, return_counts=True)
    mean = n * (n + 1) / 4
    variance = n * (n + 1) * (2 * n + 1) / 24 - np.sum(tie_counts ** 3 - tie_counts) / 48
    z = (w_plus - mean - 0.5) / np.sqrt(variance)
    return WilcoxonResult(w_plus, float(stats.norm.sf(z)), n, False)


def holm_bonferroni(p_values):
    """
    Holm-Bonferroni adjusted p-values, in input order

    The i-th smallest of m p-values is multiplied by (m - i + 1); adjusted
    values are made monotone and capped at 1.
    """
    p = np.asarray(p_values, dtype=float)
    m = len(p)
    if m == 0:
        return []
    order = np.argsort(p, kind='stable')
    scaled = np.minimum(1.0, (m - np.arange(m)) * p[order])
    adjusted = np.empty(m)
    adjusted[order] = np.maximum.accumulate(scaled)
    return adjusted.tolist()
