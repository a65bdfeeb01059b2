"""Behavioral hypothesis tests on scored corpora: the placement test
(Welch two-sample t on first-half vs second-half sentiment) and the joint
F-test for word groups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import distributions as dist
from .errors import EstimationError, InputError
from .inference import post_lasso

ALTERNATIVES = ("two_sided", "less", "greater")


@dataclass
class WelchResult:
    mean_1: float
    mean_2: float
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    alternative: str
    n_1: int
    n_2: int


@dataclass
class JointFResult:
    f_statistic: float
    df_numerator: int
    df_denominator: int
    p_value: float
    tested_terms: list


def _p_from_t(t: float, df: float, alternative: str) -> float:
    if alternative == "two_sided":
        return dist.student_t_sf_two_sided(t, df)
    if alternative == "less":
        return dist.student_t_cdf(t, df)
    return 1.0 - dist.student_t_cdf(t, df)


def welch_t(sample_1, sample_2, alternative: str = "two_sided") -> WelchResult:
    """Welch's unequal-variance two-sample t-test.

    ``less`` tests against mean_1 < mean_2, ``greater`` against
    mean_1 > mean_2. Degenerate zero-variance inputs produce the documented
    sentinels (t = 0, p = 1 when the means agree; infinite t otherwise).
    """
    if alternative not in ALTERNATIVES:
        raise InputError(f"alternative must be one of {ALTERNATIVES}")
    a = np.asarray(sample_1, dtype=float).ravel()
    b = np.asarray(sample_2, dtype=float).ravel()
    if len(a) < 2 or len(b) < 2:
        raise InputError("both samples need at least 2 values")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InputError("samples contain non-finite values")
    n1, n2 = len(a), len(b)
    m1, m2 = float(a.mean()), float(b.mean())
    v1 = float(a.var(ddof=1))
    v2 = float(b.var(ddof=1))
    se2 = v1 / n1 + v2 / n2
    if se2 == 0.0:
        if m1 == m2:
            t = 0.0
            df = float(n1 + n2 - 2)
            p = 1.0 if alternative == "two_sided" else 0.5
        else:
            t = math.inf if m1 > m2 else -math.inf
            df = float(n1 + n2 - 2)
            p = _p_from_t(t, df, alternative)
        return WelchResult(m1, m2, t, df, p, alternative, n1, n2)
    t = (m1 - m2) / math.sqrt(se2)
    df = se2**2 / ((v1 / n1) ** 2 / (n1 - 1) + (v2 / n2) ** 2 / (n2 - 1))
    p = _p_from_t(t, df, alternative)
    return WelchResult(m1, m2, t, df, p, alternative, n1, n2)


def paired_t(sample_1, sample_2, alternative: str = "two_sided") -> WelchResult:
    """Paired-samples t-test on per-item differences, offered alongside the
    Welch variant for per-document half scores."""
    if alternative not in ALTERNATIVES:
        raise InputError(f"alternative must be one of {ALTERNATIVES}")
    a = np.asarray(sample_1, dtype=float).ravel()
    b = np.asarray(sample_2, dtype=float).ravel()
    if len(a) != len(b):
        raise InputError("paired samples must have equal length")
    if len(a) < 2:
        raise InputError("need at least 2 pairs")
    d = a - b
    n = len(d)
    sd = float(d.std(ddof=1))
    m = float(d.mean())
    if sd == 0.0:
        if m == 0.0:
            t, p = 0.0, 1.0 if alternative == "two_sided" else 0.5
        else:
            t = math.inf if m > 0 else -math.inf
            p = _p_from_t(t, n - 1, alternative)
        return WelchResult(float(a.mean()), float(b.mean()), t, float(n - 1), p, alternative, n, n)
    t = m / (sd / math.sqrt(n))
    df = float(n - 1)
    p = _p_from_t(t, df, alternative)
    return WelchResult(float(a.mean()), float(b.mean()), t, df, p, alternative, n, n)


def joint_f_test(X: np.ndarray, y: np.ndarray, full_support, tested_subset) -> JointFResult:
    """Nested-model F-test for the joint effect of ``tested_subset`` within
    the OLS model on ``full_support`` (plus intercept).

    F = [(RSS_restricted - RSS_full) / q] / [RSS_full / (n - p_full - 1)],
    where q adjusts for columns dropped in the rank screens.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    full_support = sorted(int(j) for j in full_support)
    tested = sorted(int(j) for j in tested_subset)
    if not tested:
        raise InputError("tested_subset is empty")
    if not set(tested) <= set(full_support):
        raise InputError("tested_subset must be contained in full_support")
    n = X.shape[0]

    full = post_lasso(X, y, full_support)
    p_full = len(full.support)
    rss_full = full.rss

    restricted_support = [j for j in full_support if j not in set(tested)]
    if restricted_support:
        restricted = post_lasso(X, y, restricted_support)
        p_restricted = len(restricted.support)
        rss_restricted = restricted.rss
    else:
        p_restricted = 0
        rss_restricted = float(np.sum((y - y.mean()) ** 2))

    q = p_full - p_restricted
    if q <= 0:
        raise InputError("tested subset adds no independent columns")
    df_den = n - p_full - 1
    if rss_full <= 0.0:
        return JointFResult(math.nan, q, df_den, math.nan, tested)
    f_stat = ((rss_restricted - rss_full) / q) / (rss_full / df_den)
    f_stat = max(f_stat, 0.0)
    p = dist.f_sf(f_stat, q, df_den)
    return JointFResult(float(f_stat), q, df_den, p, tested)


def partition_by_reference(dictionary, reference) -> tuple[set[str], set[str]]:
    """Split dictionary terms into those present in the reference word list
    (either polarity) and the rest."""
    ref_terms = set(reference.entries)
    informative = {e.term for e in dictionary.entries if e.term in ref_terms}
    non_informative = {e.term for e in dictionary.entries} - informative
    return informative, non_informative


_SUMMARY_STATS = (
    "mean", "min", "q25", "median", "q75", "max", "sd", "skewness", "kurtosis",
)


def summary_statistics(values) -> dict[str, float]:
    """The nine distribution statistics used in placement reports: mean,
    min, quartiles, median, max, sample sd, skewness, excess kurtosis."""
    x = np.asarray(values, dtype=float).ravel()
    if len(x) == 0:
        return {k: math.nan for k in _SUMMARY_STATS}
    m = float(x.mean())
    centered = x - m
    m2 = float(np.mean(centered**2))
    if m2 > 0:
        skew = float(np.mean(centered**3)) / m2**1.5
        kurt = float(np.mean(centered**4)) / m2**2 - 3.0
    else:
        skew = 0.0
        kurt = 0.0
    return {
        "mean": m,
        "min": float(x.min()),
        "q25": float(np.quantile(x, 0.25)),
        "median": float(np.median(x)),
        "q75": float(np.quantile(x, 0.75)),
        "max": float(x.max()),
        "sd": float(x.std(ddof=1)) if len(x) > 1 else 0.0,
        "skewness": skew,
        "kurtosis": kurt,
    }


def placement_report(
    mu1,
    mu2,
    mu,
    responses=None,
    positive_mask=None,
    alternative: str = "two_sided",
) -> dict:
    """Placement-of-information report: summary panels for the half scores
    and the Welch and paired tests of mu1 against mu2.

    Panels for positive/negative documents are included when either
    ``positive_mask`` or ``responses`` (split at the median) is given.
    """
    mu1 = np.asarray(mu1, dtype=float)
    mu2 = np.asarray(mu2, dtype=float)
    mu = np.asarray(mu, dtype=float)
    if not (len(mu1) == len(mu2) == len(mu)):
        raise InputError("mu1, mu2, mu must be aligned")
    if len(mu1) < 2:
        raise EstimationError("placement test needs at least 2 documents")

    if positive_mask is None and responses is not None:
        responses = np.asarray(responses, dtype=float)
        positive_mask = responses > np.median(responses)

    def panel(mask) -> dict:
        return {
            "mu1": summary_statistics(mu1[mask]),
            "mu2": summary_statistics(mu2[mask]),
            "mu": summary_statistics(mu[mask]),
        }

    all_mask = np.ones(len(mu1), dtype=bool)
    panels = {"all": panel(all_mask)}
    if positive_mask is not None:
        positive_mask = np.asarray(positive_mask, dtype=bool)
        panels["positive"] = panel(positive_mask)
        panels["negative"] = panel(~positive_mask)

    welch = welch_t(mu1, mu2, alternative)
    paired = paired_t(mu1, mu2, alternative)
    return {
        "panels": panels,
        "welch": {
            "mean_1": welch.mean_1,
            "mean_2": welch.mean_2,
            "t_statistic": welch.t_statistic,
            "degrees_of_freedom": welch.degrees_of_freedom,
            "p_value": welch.p_value,
            "alternative": welch.alternative,
            "n_1": welch.n_1,
            "n_2": welch.n_2,
        },
        "paired": {
            "t_statistic": paired.t_statistic,
            "degrees_of_freedom": paired.degrees_of_freedom,
            "p_value": paired.p_value,
            "alternative": paired.alternative,
        },
    }
