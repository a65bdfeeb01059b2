"""Post-selection OLS refit (standard errors, t-statistics, adjusted R^2)
and variance-inflation-factor diagnostics.

The refit regresses the response on the selected columns plus an intercept
via QR decomposition; standard errors are the classical homoskedastic ones,
sqrt(sigma2 * [(D^T D)^-1]_jj) with sigma2 = RSS / (n - |S| - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import InputError

# relative residual norm below which a column counts as linearly dependent
_RANK_TOL = 1e-10


@dataclass
class PostLassoResult:
    support: list[int]
    ols_coefficients: np.ndarray
    standard_errors: np.ndarray
    t_statistics: np.ndarray
    adjusted_r2: float
    r2: float
    residual_variance: float
    rss: float = 0.0
    dropped: list[int] = field(default_factory=list)


@dataclass
class VifReport:
    vif: np.ndarray
    terms: list[int]
    threshold: float
    count_exceeding_threshold: int


def _independent_columns(D: np.ndarray) -> list[int]:
    """Greedy rank screen keeping the lowest-index spanning set."""
    n, p = D.shape
    kept: list[int] = []
    basis = np.empty((n, 0))
    for j in range(p):
        col = D[:, j]
        norm = np.linalg.norm(col)
        if norm == 0.0:
            continue
        if basis.shape[1]:
            resid = col - basis @ (basis.T @ col)
            # re-orthogonalize once for numerical safety
            resid -= basis @ (basis.T @ resid)
        else:
            resid = col.copy()
        rnorm = np.linalg.norm(resid)
        if rnorm > _RANK_TOL * norm:
            kept.append(j)
            basis = np.column_stack([basis, resid / rnorm])
    return kept


def post_lasso(X: np.ndarray, y: np.ndarray, support) -> PostLassoResult:
    """OLS of y on the support columns plus intercept.

    Rank-deficient supports are handled by dropping dependent columns
    deterministically (lowest index kept); the dropped indices are reported.
    A zero standard error yields a signed infinity t-statistic.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    support = sorted(int(j) for j in support)
    if not support:
        raise InputError("support is empty")
    n = X.shape[0]
    if len(support) >= n:
        raise InputError(f"support size {len(support)} >= n={n}: OLS undefined")

    D = np.column_stack([np.ones(n), X[:, support]])
    kept_cols = _independent_columns(D)
    if 0 not in kept_cols:  # intercept is always first and never zero
        kept_cols = [0] + kept_cols
    dropped = [support[j - 1] for j in range(1, D.shape[1]) if j not in kept_cols]
    kept_support = [support[j - 1] for j in kept_cols if j != 0]
    D = D[:, kept_cols]
    k = D.shape[1]

    q_mat, r_mat = np.linalg.qr(D)
    coef = scipy.linalg.solve_triangular(r_mat, q_mat.T @ y)
    resid = y - D @ coef
    rss = float(resid @ resid)
    tss = float(np.sum((y - y.mean()) ** 2))

    dof = n - k
    sigma2 = rss / dof if dof > 0 else math.nan
    r_inv = scipy.linalg.solve_triangular(r_mat, np.eye(k))
    xtx_inv_diag = np.sum(r_inv**2, axis=1)
    se = np.sqrt(np.maximum(sigma2 * xtx_inv_diag, 0.0))

    r2 = 1.0 - rss / tss if tss > 0 else 1.0
    p_terms = k - 1
    adjusted_r2 = 1.0 - (1.0 - r2) * (n - 1) / (n - p_terms - 1)

    ols_coef = coef[1:]
    term_se = se[1:]
    t_stats = np.empty(p_terms)
    for i in range(p_terms):
        if term_se[i] > 0:
            t_stats[i] = ols_coef[i] / term_se[i]
        elif ols_coef[i] > 0:
            t_stats[i] = math.inf
        elif ols_coef[i] < 0:
            t_stats[i] = -math.inf
        else:
            t_stats[i] = 0.0

    return PostLassoResult(
        support=kept_support,
        ols_coefficients=ols_coef,
        standard_errors=term_se,
        t_statistics=t_stats,
        adjusted_r2=adjusted_r2,
        r2=r2,
        residual_variance=sigma2,
        rss=rss,
        dropped=dropped,
    )


def vif(X: np.ndarray, subset=None, threshold: float = 4.0) -> VifReport:
    """Variance inflation factors 1 / (1 - R_j^2) over standardized columns.

    Requires more observations than columns in scope; use ``subset`` to
    restrict the computation when the full model has p >= n. Exactly
    collinear columns receive an infinity sentinel.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    scope = list(range(X.shape[1])) if subset is None else sorted(int(j) for j in subset)
    p = len(scope)
    if p < 2:
        raise InputError("VIF needs at least 2 terms")
    if p >= n:
        raise InputError(
            f"VIF undefined for p={p} >= n={n}; pass a subset of terms instead"
        )
    sub = X[:, scope]
    sub = sub - sub.mean(axis=0)
    sds = sub.std(axis=0, ddof=1)
    if np.any(sds == 0.0):
        raise InputError("VIF undefined for zero-variance columns")
    corr = (sub / sds).T @ (sub / sds) / (n - 1)
    try:
        cho = scipy.linalg.cho_factor(corr)
        values = np.diag(scipy.linalg.cho_solve(cho, np.eye(p)))
    except scipy.linalg.LinAlgError:
        # singular correlation matrix: fall back to per-column regressions
        values = np.empty(p)
        for i in range(p):
            others = np.delete(sub, i, axis=1)
            target = sub[:, i]
            coef, *_ = np.linalg.lstsq(others, target, rcond=None)
            rss = float(np.sum((target - others @ coef) ** 2))
            tss = float(target @ target)
            r2_j = 1.0 - rss / tss
            values[i] = math.inf if r2_j >= 1.0 - 1e-12 else 1.0 / (1.0 - r2_j)
    values = np.asarray(values, dtype=float)
    # R_j^2 within rounding of 1 means exact collinearity
    values[values > 1e12] = math.inf
    exceed = int(np.sum(values > threshold))
    return VifReport(vif=values, terms=scope, threshold=threshold, count_exceeding_threshold=exceed)
