"""Univariate marginal CDFs and quantiles for the supported families.

Families: uniform, normal, t (Student-t with nu degrees of freedom), and the
absolute-value folds abs_normal and abs_t.  The t CDF goes through the
regularized incomplete beta function; t quantiles use monotone bracketing
plus bisection.
"""

from __future__ import annotations

import numpy as np
from scipy.special import betainc, ndtr, ndtri

FAMILIES = ("uniform", "normal", "t", "abs_normal", "abs_t")
_T_FAMILIES = ("t", "abs_t")

QUANTILE_TOL = 1e-10


class MissingNuError(ValueError):
    """A Student-t family was requested without degrees of freedom."""


def _require_nu(family: str, nu) -> float:
    if family in _T_FAMILIES:
        if nu is None:
            raise MissingNuError(f"family {family!r} requires degrees of freedom nu")
        if nu < 1:
            raise ValueError(f"degrees of freedom must be >= 1, got {nu}")
    return nu


def normal_cdf(x):
    return ndtr(x)


def normal_quantile(p):
    return ndtri(p)


def student_t_cdf(x, nu: float):
    """Student-t CDF via the regularized incomplete beta function.

    For x >= 0, F(x) = 1 - I_{nu/(nu+x^2)}(nu/2, 1/2) / 2; the x < 0 branch
    follows by symmetry.  Vectorized over x.
    """
    if nu < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {nu}")
    x = np.asarray(x, dtype=float)
    half_tail = 0.5 * betainc(nu / 2.0, 0.5, nu / (nu + x * x))
    out = np.where(x < 0, half_tail, 1.0 - half_tail)
    return out if out.ndim else float(out)


def student_t_quantile(p: float, nu: float) -> float:
    """Inverse Student-t CDF by bracket doubling and bisection to 1e-10."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"quantile argument must be in (0, 1), got {p}")
    if nu < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {nu}")
    if p == 0.5:
        return 0.0
    lo, hi = -10.0, 10.0
    while student_t_cdf(lo, nu) > p:
        lo *= 2.0
    while student_t_cdf(hi, nu) < p:
        hi *= 2.0
    while hi - lo > QUANTILE_TOL:
        mid = 0.5 * (lo + hi)
        if student_t_cdf(mid, nu) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cdf(x, family: str, nu: float | None = None):
    """Marginal CDF of the named family, vectorized over x."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    _require_nu(family, nu)
    x = np.asarray(x, dtype=float)
    if family == "uniform":
        out = np.clip(x, 0.0, 1.0)
    elif family == "normal":
        out = ndtr(x)
    elif family == "t":
        out = student_t_cdf(x, nu)
    elif family == "abs_normal":
        out = np.where(x < 0, 0.0, 2.0 * ndtr(np.abs(x)) - 1.0)
    else:  # abs_t
        out = np.where(x < 0, 0.0, 2.0 * np.asarray(student_t_cdf(np.abs(x), nu)) - 1.0)
    out = np.asarray(out)
    return out if out.ndim else float(out)


def quantile(p, family: str, nu: float | None = None):
    """Marginal quantile of the named family.

    Scalar for t-type families (bisection based); vectorized for the others.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    _require_nu(family, nu)
    if family == "uniform":
        p = np.asarray(p, dtype=float)
        if np.any((p < 0) | (p > 1)):
            raise ValueError("uniform quantile argument must be in [0, 1]")
        return p if p.ndim else float(p)
    if family == "normal":
        out = ndtri(p)
        out = np.asarray(out)
        return out if out.ndim else float(out)
    if family == "abs_normal":
        p = np.asarray(p, dtype=float)
        if np.any((p < 0) | (p >= 1)):
            raise ValueError("fold quantile argument must be in [0, 1)")
        out = np.asarray(ndtri((1.0 + p) / 2.0))
        return out if out.ndim else float(out)
    if family == "t":
        return student_t_quantile(float(p), nu)
    # abs_t
    p = float(p)
    if not 0.0 <= p < 1.0:
        raise ValueError("fold quantile argument must be in [0, 1)")
    if p == 0.0:
        return 0.0
    return student_t_quantile((1.0 + p) / 2.0, nu)
