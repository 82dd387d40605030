"""Distribution-free two-sample test against a stochastically larger alternative.

The statistic T_n is the largest index i at which the i-th order statistic of
the first sample sits at or below the i-th order statistic of the second.
Under the null (both samples iid from one continuous distribution) every
interleaving of the pooled sample is equally likely, and T_n depends only on
the interleaving: the i-th comparison holds exactly when the i-th x precedes
the i-th y in pooled order.  The null pmf follows from counting lattice paths
with exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

MAX_EXACT_N = 200


class CrossPoolTieError(ValueError):
    """A value appears in both samples; the test assumes continuous data."""


@dataclass(frozen=True)
class TwoSampleData:
    """Paired samples of equal size; cross-pool ties are rejected.

    Within-pool ties are permitted.  A tie-breaking convention across pools
    would silently change the null distribution, so it is an error instead.
    """

    x: tuple[float, ...]
    y: tuple[float, ...]

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        y = tuple(float(v) for v in self.y)
        if len(x) != len(y):
            raise ValueError(f"samples must have equal length, got {len(x)} and {len(y)}")
        if len(x) < 1:
            raise ValueError("samples must be nonempty")
        shared = set(x) & set(y)
        if shared:
            raise CrossPoolTieError(
                f"cross-pool tie at value {sorted(shared)[0]!r}; "
                "the test assumes continuous populations"
            )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class NullDistribution:
    """Exact null pmf of T_n over {0..n}, stored as rationals."""

    n: int
    pmf: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.pmf) != self.n + 1:
            raise ValueError(f"pmf must have {self.n + 1} entries, got {len(self.pmf)}")
        if any(p < 0 for p in self.pmf):
            raise ValueError("pmf entries must be nonnegative")
        if sum(self.pmf) != 1:
            raise ValueError(f"pmf must sum to 1 exactly, got {sum(self.pmf)}")

    def probabilities(self) -> tuple[float, ...]:
        return tuple(float(p) for p in self.pmf)

    def tail(self, t: int) -> Fraction:
        """P(T_n >= t) as an exact rational."""
        if t <= 0:
            return Fraction(1)
        if t > self.n:
            return Fraction(0)
        return sum(self.pmf[t:], Fraction(0))

    def attainable_p_values(self) -> tuple[Fraction, ...]:
        """The exact set {P(T_n >= t) : t in support}, descending in t."""
        return tuple(self.tail(t) for t in range(self.n, -1, -1))


def tn_statistic(data: TwoSampleData) -> int:
    """Largest i with x_(i) <= y_(i); 0 when no index qualifies."""
    xs = sorted(data.x)
    ys = sorted(data.y)
    t = 0
    for i, (xv, yv) in enumerate(zip(xs, ys), start=1):
        if xv <= yv:
            t = i
    return t


def _paths_with_statistic_at_most(n: int, s: int) -> int:
    """Count lattice paths (0,0)->(n,n) whose statistic is <= s.

    A y-step into count b+1 certifies index b+1 when at least b+1 x's came
    first; forbidding that for all indices above s means: once b >= s, a
    y-step from (a, b) is allowed only if a <= b.
    """
    if s < 0:
        return 0
    dp = [[0] * (n + 1) for _ in range(n + 1)]
    dp[0][0] = 1
    for a in range(n + 1):
        for b in range(n + 1):
            if a == 0 and b == 0:
                continue
            total = 0
            if a >= 1:
                total += dp[a - 1][b]
            if b >= 1 and (b - 1 < s or a <= b - 1):
                total += dp[a][b - 1]
            dp[a][b] = total
    return dp[n][n]


@lru_cache(maxsize=None)
def tn_null_distribution(n: int) -> NullDistribution:
    """Exact pmf of T_n under the null, by the lattice-path count.

    Integer counting throughout; the division by C(2n, n) happens only at
    the end, in exact rational arithmetic.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > MAX_EXACT_N:
        raise ValueError(f"n={n} beyond the practical exact range (n <= {MAX_EXACT_N})")
    total = comb(2 * n, n)
    cumulative = [_paths_with_statistic_at_most(n, s) for s in range(n + 1)]
    counts = [cumulative[0]] + [cumulative[s] - cumulative[s - 1] for s in range(1, n + 1)]
    return NullDistribution(n, tuple(Fraction(c, total) for c in counts))


@dataclass(frozen=True)
class TwoSampleOutcome:
    statistic: int
    p_value: float
    reject: bool
    alpha: float
    n: int


def tn_test(data: TwoSampleData, alpha: float) -> TwoSampleOutcome:
    """Report T_n, the exact p-value P0(T_n >= observed), and the decision.

    Large T_n is evidence that the second population is stochastically
    larger than the first.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"level must be in (0, 1), got {alpha}")
    observed = tn_statistic(data)
    null = tn_null_distribution(data.n)
    p_value = null.tail(observed)
    return TwoSampleOutcome(
        statistic=observed,
        p_value=float(p_value),
        reject=bool(p_value <= alpha),
        alpha=alpha,
        n=data.n,
    )
