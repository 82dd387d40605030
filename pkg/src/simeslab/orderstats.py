"""Ordered-value machinery: boundary crossing statistics and exact probabilities.

The central statistic is R_n, the largest index i at which the i-th order
statistic falls at or below its critical constant (0 when no index qualifies).
For iid uniforms the probability that every order statistic stays above its
constant is computed exactly by a Noe-style recursion over the counts of
observations below each level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, fsum

import numpy as np

from . import marginals

RESIDUAL_SLACK = 1e-12


@dataclass(frozen=True)
class Boundary:
    """Nondecreasing critical constants a_k <= ... <= a_n for order statistics.

    k is the first constrained index (1-based); constants has length n-k+1.
    Upper-tail (b-type) boundaries are represented through the negation map
    x -> -x, b -> -a with the order reversed, see :func:`dual_lower_boundary`.
    """

    n: int
    k: int
    constants: tuple[float, ...]

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"start index k={self.k} must be in [1, {self.n}]")
        if len(self.constants) != self.n - self.k + 1:
            raise ValueError(
                f"expected {self.n - self.k + 1} constants for n={self.n}, "
                f"k={self.k}, got {len(self.constants)}"
            )
        arr = np.asarray(self.constants, dtype=float)
        if np.any(np.diff(arr) < 0):
            raise ValueError("boundary constants must be nondecreasing")
        object.__setattr__(self, "constants", tuple(float(v) for v in arr))

    @property
    def constants_array(self) -> np.ndarray:
        return np.asarray(self.constants, dtype=float)

    def extended_constants(self) -> np.ndarray:
        """Constants for indices 1..n, with -inf below the start index."""
        return np.concatenate([np.full(self.k - 1, -np.inf), self.constants_array])

    def extended(self) -> "Boundary":
        if self.k == 1:
            return self
        return Boundary(self.n, 1, tuple(self.extended_constants()))


def dual_lower_boundary(b_constants, n: int) -> Boundary:
    """Map an upper boundary b_1 <= ... <= b_{n-k+1} to its lower-tail dual.

    The event {X_{i:n} <= b_i, i = 1..n-k+1} equals the event
    {(-X)_{j:n} >= -b_{n-j+1}, j = k..n}, so the dual has start index
    k = n - len(b) + 1 and constants -b reversed.
    """
    b = np.asarray(b_constants, dtype=float)
    if np.any(np.diff(b) < 0):
        raise ValueError("upper boundary constants must be nondecreasing")
    k = n - len(b) + 1
    return Boundary(n, k, tuple(-b[::-1]))


def compute_rn(x, boundary: Boundary) -> int:
    """Largest index i with x_{i:n} <= a_i; 0 when no index qualifies.

    The boundary must cover indices 1..n (start index k=1); use
    Boundary.extended() for boundaries starting at k > 1.
    """
    if boundary.k != 1:
        raise ValueError("compute_rn requires a boundary covering indices 1..n")
    x = np.asarray(x, dtype=float)
    if x.shape != (boundary.n,):
        raise ValueError(f"expected {boundary.n} values, got shape {x.shape}")
    xs = np.sort(x, kind="stable")
    hits = np.nonzero(xs <= boundary.constants_array)[0]
    return int(hits[-1]) + 1 if hits.size else 0


def _pascal(n: int) -> np.ndarray:
    t = np.zeros((n + 1, n + 1))
    t[:, 0] = 1.0
    for i in range(1, n + 1):
        t[i, 1 : i + 1] = t[i - 1, : i] + t[i - 1, 1 : i + 1]
    return t


def _validate_levels(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or c.size < 1:
        raise ValueError("boundary must be a nonempty 1-d sequence")
    if np.any((c < 0) | (c > 1)):
        raise ValueError("boundary levels must lie in [0, 1]")
    if np.any(np.diff(c) < 0):
        raise ValueError("boundary levels must be nondecreasing")
    return c


def noncrossing_probability(c) -> float:
    """Exact P{U_{i:n} >= c_i, i = 1..n} for n iid uniform(0,1) variables.

    c must be nondecreasing with values in [0, 1].  The recursion tracks
    s_j(m), the probability that exactly m observations lie below level c_j
    with every constraint up to j satisfied, rescaled by (1-c_j)^{-(n-m)}.
    All terms are nonnegative so there is no cancellation; the final
    combination uses compensated summation, and if the result leaves
    [-1e-12, 1+1e-12] the computation is redone in exact rational arithmetic.
    """
    c = _validate_levels(c)
    n = c.size
    result = _noncrossing_float(c, n)
    if not -RESIDUAL_SLACK <= result <= 1.0 + RESIDUAL_SLACK:
        result = float(_noncrossing_exact(c, n))
    return min(max(result, 0.0), 1.0)


def _noncrossing_float(c: np.ndarray, n: int) -> float:
    table = _pascal(n)
    s = np.array([1.0])
    prev = 0.0
    for j in range(1, n + 1):
        d = c[j - 1] - prev
        m_new = np.arange(j)
        m_old = np.arange(s.size)
        diff = m_new[:, None] - m_old[None, :]
        valid = diff >= 0
        powers = np.where(valid, np.power(d, np.maximum(diff, 0)), 0.0)
        coef = np.where(valid, table[n - m_old[None, :].repeat(j, axis=0), np.maximum(diff, 0)], 0.0)
        s = (coef * powers) @ s
        prev = c[j - 1]
    tail = 1.0 - prev
    return fsum(s[m] * tail ** (n - m) for m in range(s.size))


def _noncrossing_exact(c: np.ndarray, n: int) -> Fraction:
    levels = [Fraction(v) for v in c]
    s = {0: Fraction(1)}
    prev = Fraction(0)
    for j in range(1, n + 1):
        d = levels[j - 1] - prev
        new = {}
        for mp in range(j):
            total = Fraction(0)
            for m, v in s.items():
                if m <= mp:
                    total += v * comb(n - m, mp - m) * d ** (mp - m)
            new[mp] = total
        s = new
        prev = levels[j - 1]
    tail = 1 - prev
    return sum((v * tail ** (n - m) for m, v in s.items()), Fraction(0))


def tail_event_probability_iid(
    boundary: Boundary, family: str, nu: float | None = None
) -> float:
    """Exact P{X_{k:n} >= a_k, ..., X_{n:n} >= a_n} under iid sampling.

    The boundary is mapped to the uniform scale through the marginal CDF and
    the unconstrained indices 1..k-1 get level 0.
    """
    a = boundary.constants_array
    levels = np.asarray(marginals.cdf(a, family, nu), dtype=float)
    c = np.concatenate([np.zeros(boundary.k - 1), levels])
    c = np.maximum.accumulate(c)  # guard monotone against marginal round-off
    return noncrossing_probability(c)


def tail_event_indicator(x, boundary: Boundary) -> bool:
    """Pointwise event {x_{j:n} >= a_j for all j = k..n}."""
    x = np.asarray(x, dtype=float)
    if x.shape != (boundary.n,):
        raise ValueError(f"expected {boundary.n} values, got shape {x.shape}")
    xs = np.sort(x, kind="stable")
    return bool(np.all(xs[boundary.k - 1 :] >= boundary.constants_array))


def check_factorial_identity(x, boundary: Boundary, k: int) -> bool:
    """Falling factorial of R_n vs k! times the count of qualifying subsets.

    With r = R_n >= k, checks r(r-1)...(r-k+1) == k! * #{size-k subsets whose
    maximum is <= a_r}.  Requires r >= k.
    """
    r = compute_rn(x, boundary)
    if r < k:
        raise ValueError(f"identity requires R_n >= k, got R_n={r}, k={k}")
    x = np.asarray(x, dtype=float)
    a_r = boundary.constants[r - 1]
    lhs = 1
    for i in range(k):
        lhs *= r - i
    count = sum(1 for subset in combinations(range(boundary.n), k) if max(x[i] for i in subset) <= a_r)
    rhs = 1
    for i in range(1, k + 1):
        rhs *= i
    return lhs == rhs * count


def check_decomposition_identity(x, boundary: Boundary, k: int) -> bool:
    """Pointwise decomposition of I(R_n >= k) over size-k subsets.

    Evaluates, in exact rational arithmetic,

        I(R_n >= k) == sum_S I(max_S <= a_k)
                       - sum_S sum_{r=k+1..n} I(R_{n-k}^{-S} >= r-k)
                         * [ C(r-1,k)^{-1} I(max_S <= a_{r-1})
                             - C(r,k)^{-1} I(max_S <= a_r) ]

    where R_{n-k}^{-S} ranks the values outside S against the shifted
    constants a_{k+1}, ..., a_n.  Cost grows like C(n,k); intended for
    n <= 12.
    """
    if boundary.k != 1:
        raise ValueError("identity check requires a boundary covering indices 1..n")
    n = boundary.n
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must be in [1, {n}]")
    x = np.asarray(x, dtype=float)
    if x.shape != (n,):
        raise ValueError(f"expected {n} values, got shape {x.shape}")
    a = boundary.constants
    lhs = 1 if compute_rn(x, boundary) >= k else 0

    rhs = Fraction(0)
    for subset in combinations(range(n), k):
        subset_max = max(x[i] for i in subset)
        if subset_max <= a[k - 1]:
            rhs += 1
        rest = np.sort(np.delete(x, subset), kind="stable")
        r_rest = 0
        for i in range(n - k):
            if rest[i] <= a[k + i]:
                r_rest = i + 1
        for r in range(k + 1, n + 1):
            if r_rest < r - k:
                continue
            term = Fraction(0)
            if subset_max <= a[r - 2]:
                term += Fraction(1, comb(r - 1, k))
            if subset_max <= a[r - 1]:
                term -= Fraction(1, comb(r, k))
            rhs -= term
    return rhs == lhs


def format_boundary(boundary: Boundary) -> str:
    """Text form: header line "n k", then one constant per line (17 digits)."""
    lines = [f"{boundary.n} {boundary.k}"]
    lines.extend(f"{v:.17g}" for v in boundary.constants)
    return "\n".join(lines) + "\n"


def parse_boundary(text: str) -> Boundary:
    rows = [line for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("empty boundary text")
    head = rows[0].split()
    if len(head) != 2:
        raise ValueError(f'boundary header must be "n k", got {rows[0]!r}')
    n, k = int(head[0]), int(head[1])
    constants = tuple(float(line) for line in rows[1:])
    return Boundary(n, k, constants)


def write_boundary(boundary: Boundary, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_boundary(boundary))


def read_boundary(path) -> Boundary:
    with open(path, "r", encoding="ascii") as fh:
        return parse_boundary(fh.read())
