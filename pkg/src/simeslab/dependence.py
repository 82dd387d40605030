"""Correlation structures and matrix sufficient conditions for MTP2 positive dependence.

A multivariate normal N(0, Sigma) is MTP2 exactly when the off-diagonals of
-Sigma^{-1} are nonnegative; the absolute-valued normal |N(0, Sigma)| is MTP2
when the off-diagonals of -D Sigma^{-1} D are nonnegative for some diagonal
sign matrix D.  This module decides both conditions from the precision matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

PSD_EIGENVALUE_FLOOR = -1e-10
CHOLESKY_PIVOT_FLOOR = 1e-12
DEFAULT_SIGN_TOL = 1e-10


class SingularMatrixError(ValueError):
    """Matrix is numerically singular: a Cholesky pivot fell below the floor."""


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric, unit-diagonal, positive-semidefinite matrix.

    Validated at construction: exact symmetry as stored, exact unit diagonal,
    and smallest eigenvalue >= -1e-10.  Rank-deficient matrices are accepted
    for storage but rejected by :func:`cholesky_factor` and
    :func:`precision_matrix`.  The entries array is frozen after validation.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"correlation matrix must be square, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("correlation matrix must be exactly symmetric as stored")
        if not np.all(np.diag(m) == 1.0):
            raise ValueError("correlation matrix must have an exact unit diagonal")
        smallest = float(np.linalg.eigvalsh(m)[0])
        if smallest < PSD_EIGENVALUE_FLOOR:
            raise ValueError(
                "correlation matrix is not positive semidefinite: smallest "
                f"eigenvalue {smallest:.6e} is below {PSD_EIGENVALUE_FLOOR:.0e}"
            )
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SignatureMatrix:
    """Diagonal sign matrix D, stored as its +/-1 diagonal."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if not all(s in (1, -1) for s in self.signs):
            raise ValueError(f"signature entries must be +1 or -1, got {self.signs}")

    def as_array(self) -> np.ndarray:
        return np.array(self.signs, dtype=float)


def equicorrelated(n: int, rho: float) -> CorrelationMatrix:
    """Matrix with unit diagonal and common off-diagonal correlation rho.

    rho must lie in the positive-semidefinite range [-1/(n-1), 1]; for n = 1
    rho is ignored.
    """
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if n == 1:
        return CorrelationMatrix(np.ones((1, 1)))
    lo = -1.0 / (n - 1)
    if not lo <= rho <= 1.0:
        raise ValueError(
            f"rho={rho} outside the positive-semidefinite range "
            f"[{lo:.17g}, 1] for n={n}"
        )
    m = np.full((n, n), float(rho))
    np.fill_diagonal(m, 1.0)
    return CorrelationMatrix(m)


def cholesky_factor(sigma: CorrelationMatrix) -> np.ndarray:
    """Lower-triangular L with L @ L.T == Sigma.

    Raises SingularMatrixError when a pivot falls below 1e-12, which rejects
    rank-deficient (merely PSD) matrices.
    """
    a = sigma.entries
    n = sigma.n
    low = np.zeros((n, n))
    for j in range(n):
        pivot = a[j, j] - low[j, :j] @ low[j, :j]
        if pivot < CHOLESKY_PIVOT_FLOOR:
            raise SingularMatrixError(
                f"Cholesky pivot {pivot:.6e} at column {j} below "
                f"{CHOLESKY_PIVOT_FLOOR:.0e}: matrix is not strictly positive definite"
            )
        low[j, j] = np.sqrt(pivot)
        if j + 1 < n:
            low[j + 1 :, j] = (a[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j]) / low[j, j]
    return low


def precision_matrix(sigma: CorrelationMatrix) -> np.ndarray:
    """Sigma^{-1} by Cholesky-based triangular solves, symmetrized."""
    low = cholesky_factor(sigma)
    eye = np.eye(sigma.n)
    # Sigma^{-1} = L^{-T} L^{-1}
    linv = solve_triangular(low, eye, lower=True)
    prec = linv.T @ linv
    return (prec + prec.T) / 2.0


def mtp2_normal_check(sigma: CorrelationMatrix, tol: float = DEFAULT_SIGN_TOL) -> bool:
    """True iff every off-diagonal of Sigma^{-1} is <= tol.

    Equivalently the off-diagonals of -Sigma^{-1} are >= -tol, the MTP2
    condition for N(0, Sigma).  Entries within tol of zero count as zero.
    """
    prec = precision_matrix(sigma)
    off = prec[~np.eye(sigma.n, dtype=bool)]
    return bool(np.all(off <= tol))


def sign_balance_check(
    sigma: CorrelationMatrix, tol: float = DEFAULT_SIGN_TOL
) -> SignatureMatrix | None:
    """Search for D with the off-diagonals of -D Sigma^{-1} D nonnegative.

    Builds a graph with an edge (i, j) wherever |Sigma^{-1}[i, j]| > tol; the
    edge demands signs[i]*signs[j] == -sign(Sigma^{-1}[i, j]).  Signs are
    propagated over each connected component (two-coloring with parity
    constraints); a contradicted cycle means no D exists and None is returned.
    Nodes never touched by an edge default to +1, as does each component root,
    so the result is deterministic.
    """
    prec = precision_matrix(sigma)
    n = sigma.n
    required = {}
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if abs(prec[i, j]) > tol:
                required[(i, j)] = -1 if prec[i, j] > 0 else 1
                adjacency[i].append(j)
                adjacency[j].append(i)

    signs = [0] * n
    for root in range(n):
        if signs[root] != 0:
            continue
        signs[root] = 1
        queue = [root]
        while queue:
            i = queue.pop(0)
            for j in adjacency[i]:
                want = signs[i] * required[(min(i, j), max(i, j))]
                if signs[j] == 0:
                    signs[j] = want
                    queue.append(j)
                elif signs[j] != want:
                    return None
    return SignatureMatrix(tuple(signs))


def format_matrix(sigma: CorrelationMatrix) -> str:
    """Text form: first line n, then n rows of space-separated decimals.

    Entries use 17 significant digits, enough to round-trip float64 exactly.
    """
    lines = [str(sigma.n)]
    for row in sigma.entries:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> CorrelationMatrix:
    """Inverse of :func:`format_matrix`; validates through CorrelationMatrix."""
    rows = [line for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("empty correlation matrix text")
    try:
        n = int(rows[0])
    except ValueError:
        raise ValueError(f"first line must be the dimension, got {rows[0]!r}") from None
    if len(rows) != n + 1:
        raise ValueError(f"expected {n} matrix rows after the header, got {len(rows) - 1}")
    entries = []
    for line in rows[1:]:
        values = [float(tok) for tok in line.split()]
        if len(values) != n:
            raise ValueError(f"expected {n} values per row, got {len(values)}")
        entries.append(values)
    return CorrelationMatrix(np.array(entries))


def write_matrix(sigma: CorrelationMatrix, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_matrix(sigma))


def read_matrix(path) -> CorrelationMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return parse_matrix(fh.read())
