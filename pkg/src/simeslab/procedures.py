"""Multiple testing procedures and critical-value solvers.

Covers the Simes global test, its order-k generalization on the statistic
scale, the Hochberg and Benjamini-Hochberg step-up procedures, and boundary
construction under the constancy conditions that make the corresponding
probability bounds sharp.  The exchangeable max/min-of-k curves for the
equicorrelated normal model are evaluated by Gauss-Hermite quadrature of the
one-factor representation.

Rejected indices in outcomes are 1-based, matching the hypothesis labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Callable

import numpy as np

from . import marginals
from .marginals import normal_cdf, normal_quantile, student_t_cdf, student_t_quantile
from .orderstats import Boundary, compute_rn

__all__ = [
    "TestOutcome",
    "MaxMinCdf",
    "simes_test",
    "generalized_simes_test",
    "hochberg",
    "benjamini_hochberg",
    "simes_critical_values",
    "upper_simes_critical_values",
    "generalized_critical_values",
    "generalized_upper_critical_values",
    "max_k_cdf_equicorrelated",
    "min_k_cdf_equicorrelated",
    "student_t_cdf",
    "student_t_quantile",
    "normal_cdf",
    "normal_quantile",
]

GH_BASE_NODES = 64
GH_MAX_NODES = 2048
GH_AGREEMENT = 1e-9
ROOT_TOL = 1e-10
_BRACKET_LIMIT = 1e9


class BracketingError(RuntimeError):
    """Root bracketing failed to enclose the requested quantile."""


@dataclass(frozen=True)
class TestOutcome:
    """Decision of one procedure run.

    rejected_indices is a subset of {1..n}; it stays empty for global-only
    tests and whenever reject_global is false.
    """

    procedure: str
    level: float | None
    n: int
    reject_global: bool
    rejected_indices: tuple[int, ...] = ()
    thresholds: tuple[float, ...] = ()

    def __post_init__(self):
        if not self.reject_global and self.rejected_indices:
            raise ValueError("rejected_indices must be empty without a global rejection")


def _validate_pvalues(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("p-values must form a nonempty 1-d sequence")
    if np.any((p < 0) | (p > 1)):
        bad = p[(p < 0) | (p > 1)][0]
        raise ValueError(f"p-values must lie in [0, 1], got {bad}")
    return p


def _validate_level(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"level must be in (0, 1), got {alpha}")


def simes_test(pvalues, alpha: float) -> TestOutcome:
    """Global intersection test: reject iff some p_(i) <= i*alpha/n."""
    p = _validate_pvalues(pvalues)
    _validate_level(alpha)
    n = p.size
    thresholds = np.arange(1, n + 1) * alpha / n
    reject = bool(np.any(np.sort(p, kind="stable") <= thresholds))
    return TestOutcome("simes", alpha, n, reject, (), tuple(thresholds))


def generalized_simes_test(x, boundary: Boundary) -> TestOutcome:
    """Order-k test on the statistic scale: reject iff R_n >= k.

    Equivalently x_{j:n} < a_j for some j in {k..n}; the unconstrained
    indices below k are extended with -inf.  Reduces to the Simes rule at
    k = 1 when the boundary holds marginal quantiles of i*alpha/n.
    """
    r = compute_rn(x, boundary.extended())
    reject = r >= boundary.k
    return TestOutcome("gsimes", None, boundary.n, bool(reject), (), boundary.constants)


def _step_up(p: np.ndarray, thresholds: np.ndarray) -> tuple[bool, tuple[int, ...]]:
    order = np.argsort(p, kind="stable")
    hits = np.nonzero(p[order] <= thresholds)[0]
    if hits.size == 0:
        return False, ()
    cut = int(hits[-1]) + 1
    return True, tuple(sorted(int(i) + 1 for i in order[:cut]))


def hochberg(pvalues, alpha: float) -> TestOutcome:
    """Step-up FWER procedure with thresholds alpha/(n-i+1)."""
    p = _validate_pvalues(pvalues)
    _validate_level(alpha)
    n = p.size
    thresholds = alpha / (n - np.arange(1, n + 1) + 1)
    reject, indices = _step_up(p, thresholds)
    return TestOutcome("hochberg", alpha, n, reject, indices, tuple(thresholds))


def benjamini_hochberg(pvalues, q: float) -> TestOutcome:
    """Step-up FDR procedure with thresholds i*q/n."""
    p = _validate_pvalues(pvalues)
    _validate_level(q)
    n = p.size
    thresholds = np.arange(1, n + 1) * q / n
    reject, indices = _step_up(p, thresholds)
    return TestOutcome("bh", q, n, reject, indices, tuple(thresholds))


def simes_critical_values(
    n: int, alpha: float, family: str, nu: float | None = None
) -> Boundary:
    """Boundary a_j = F^{-1}(j*alpha/n) so that F(a_j)/j is constant."""
    _validate_level(alpha)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    constants = tuple(
        float(marginals.quantile(j * alpha / n, family, nu)) for j in range(1, n + 1)
    )
    return Boundary(n, 1, constants)


def upper_simes_critical_values(
    n: int, alpha: float, family: str, nu: float | None = None
) -> tuple[float, ...]:
    """Upper boundary b_i = F^{-1}(1 - (n-i+1)*alpha/n), i = 1..n."""
    _validate_level(alpha)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return tuple(
        float(marginals.quantile(1.0 - (n - i + 1) * alpha / n, family, nu))
        for i in range(1, n + 1)
    )


@lru_cache(maxsize=None)
def _hermgauss(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.hermite.hermgauss(nodes)
    return t, w


def _one_factor_integral(transform, rho: float, k: int, x, nodes: int):
    """integral of phi(z) * g(Phi((x - sqrt(rho) z)/sqrt(1-rho)))^k dz by GH."""
    t, w = _hermgauss(nodes)
    x = np.asarray(x, dtype=float)
    z = np.sqrt(2.0) * t
    inner = normal_cdf((x[..., None] - np.sqrt(rho) * z) / np.sqrt(1.0 - rho))
    return np.sum(w * transform(inner) ** k, axis=-1) / np.sqrt(np.pi)


def _adaptive_curve(transform, rho: float, k: int, x):
    nodes = GH_BASE_NODES
    value = _one_factor_integral(transform, rho, k, x, nodes)
    while nodes < GH_MAX_NODES:
        nodes *= 2
        refined = _one_factor_integral(transform, rho, k, x, nodes)
        if np.max(np.abs(refined - value)) <= GH_AGREEMENT:
            return refined
        value = refined
    return value


def _validate_curve_args(k: int, rho: float) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")


def max_k_cdf_equicorrelated(k: int, rho: float, x):
    """CDF of the maximum of k coordinates of an equicorrelated normal.

    F_k(x) = integral of phi(z) * Phi((x - sqrt(rho) z)/sqrt(1-rho))^k dz,
    the one-factor representation, by Gauss-Hermite quadrature with node
    doubling until two evaluations agree to 1e-9.
    """
    _validate_curve_args(k, rho)
    out = np.asarray(_adaptive_curve(lambda u: u, rho, k, x))
    return out if out.ndim else float(out)


def min_k_cdf_equicorrelated(k: int, rho: float, x):
    """CDF of the minimum of k coordinates: G_k(x) = 1 - E[(1 - Phi(.))^k]."""
    _validate_curve_args(k, rho)
    out = np.asarray(1.0 - _adaptive_curve(lambda u: 1.0 - u, rho, k, x))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class MaxMinCdf:
    """Pluggable exchangeable max/min-of-k curve.

    The built-in model is the equicorrelated normal; pass a callable as
    `curve` to substitute any user-supplied cdf.  Evaluations are cached, so
    instances stay pure under concurrent use.
    """

    k: int
    kind: str
    rho: float = 0.0
    target_accuracy: float = GH_AGREEMENT
    curve: Callable[[float], float] | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("max", "min"):
            raise ValueError(f"kind must be 'max' or 'min', got {self.kind!r}")
        if self.curve is None:
            _validate_curve_args(self.k, self.rho)

    def __call__(self, x: float) -> float:
        key = float(x)
        if key not in self._cache:
            if self.curve is not None:
                value = float(self.curve(key))
            elif self.kind == "max":
                value = float(max_k_cdf_equicorrelated(self.k, self.rho, key))
            else:
                value = float(min_k_cdf_equicorrelated(self.k, self.rho, key))
            self._cache[key] = value
        return self._cache[key]

    def quantile(self, p: float) -> float:
        return _invert_cdf(self, p)


def _invert_cdf(cdf: Callable[[float], float], target: float) -> float:
    """Bracketed root of cdf(x) = target: doubling from [-10, 10], bisection."""
    if not 0.0 < target < 1.0:
        raise ValueError(f"quantile target must be in (0, 1), got {target}")
    lo, hi = -10.0, 10.0
    while cdf(lo) > target:
        lo *= 2.0
        if -lo > _BRACKET_LIMIT:
            raise BracketingError(f"no lower bracket for target {target}")
    while cdf(hi) < target:
        hi *= 2.0
        if hi > _BRACKET_LIMIT:
            raise BracketingError(f"no upper bracket for target {target}")
    while hi - lo > ROOT_TOL:
        mid = 0.5 * (lo + hi)
        if cdf(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def generalized_critical_values(
    n: int, k: int, alpha: float, fk: Callable[[float], float]
) -> Boundary:
    """Boundary a_j = F_k^{-1}(C(j,k)/C(n,k) * alpha) for j = k..n.

    fk is the cdf of the maximum of any k coordinates (a MaxMinCdf of kind
    "max" or any callable).  The construction makes C(j,k)^{-1} F_k(a_j)
    constant in j.
    """
    _validate_level(alpha)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be in [1, {n}]")
    total = comb(n, k)
    constants = []
    for j in range(k, n + 1):
        value = _invert_cdf(fk, comb(j, k) / total * alpha)
        if constants and value < constants[-1]:
            value = constants[-1]  # bisection noise guard, keeps monotone
        constants.append(value)
    return Boundary(n, k, tuple(constants))


def generalized_upper_critical_values(
    n: int, k: int, alpha: float, gk: Callable[[float], float]
) -> tuple[float, ...]:
    """Upper boundary b_i = G_k^{-1}(1 - C(n-i+1,k)/C(n,k) * alpha).

    gk is the cdf of the minimum of any k coordinates.  The construction
    makes C(j,k)^{-1} [1 - G_k(b_{n-j+1})] constant in j, with G_k(b_1)
    equal to 1 - alpha.
    """
    _validate_level(alpha)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be in [1, {n}]")
    total = comb(n, k)
    constants = []
    for i in range(1, n - k + 2):
        value = _invert_cdf(gk, 1.0 - comb(n - i + 1, k) / total * alpha)
        if constants and value < constants[-1]:
            value = constants[-1]
        constants.append(value)
    return tuple(constants)
