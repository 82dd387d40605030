"""Seeded multivariate sampling: normal, Student-t, and absolute-value variants.

Stream-splitting rule: replication r draws from counter-based Philox streams
keyed by (seed, r).  Substream 0 supplies the gaussian coordinates and
substream 1 the chi divisor, selected through the high counter word, so the
same (model, seed, reps) triple reproduces a batch bit-for-bit regardless of
how replications are partitioned across workers, and a t batch equals the
matching normal batch divided elementwise by an independent chi stream.

The t construction divides all coordinates of a replication by one draw of
chi_nu/sqrt(nu); each T_i then has the univariate Student-t(nu) marginal.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import marginals
from .dependence import CorrelationMatrix, cholesky_factor, format_matrix, parse_matrix

FAMILIES = ("normal", "t", "abs_normal", "abs_t")
_T_FAMILIES = ("t", "abs_t")

GAUSS_SUBSTREAM = 0
CHI_SUBSTREAM = 1

# chi-square draws: sum of squared normals up to this nu, gamma sampling above
CHI_DIRECT_SUM_MAX_NU = 32

_SEED_LIMIT = 2**64


class InvalidModelError(ValueError):
    """Model specification cannot be sampled as given."""


@dataclass(frozen=True)
class ModelSpec:
    """Named multivariate model: family, correlation matrix, optional nu."""

    family: str
    sigma: CorrelationMatrix
    nu: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidModelError(
                f"unknown family {self.family!r}; expected one of {FAMILIES}"
            )
        if self.family in _T_FAMILIES and self.nu is None:
            raise InvalidModelError(f"family {self.family!r} requires nu")
        if self.nu is not None and self.nu < 1:
            raise InvalidModelError(f"degrees of freedom must be >= 1, got {self.nu}")

    @property
    def n(self) -> int:
        return self.sigma.n

    @property
    def marginal_family(self) -> str:
        """Family id of the univariate marginal (matches :mod:`marginals`)."""
        return self.family


@dataclass(frozen=True)
class SampleBatch:
    """Seeded, immutable matrix of replicated draws (reps rows, n columns)."""

    model: ModelSpec
    seed: int
    reps: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.reps, self.model.n):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"(reps={self.reps}, n={self.model.n})"
            )
        self.values.setflags(write=False)


def replication_stream(seed: int, rep: int, substream: int) -> np.random.Generator:
    """Philox generator for one replication substream.

    Key is (seed, rep); the substream selects the highest counter word, which
    numpy increments last, so distinct substreams are 2^192 blocks apart.
    """
    if not 0 <= seed < _SEED_LIMIT:
        raise ValueError(f"seed must be a 64-bit value, got {seed}")
    key = np.array([seed, rep], dtype=np.uint64)
    counter = np.array([0, 0, 0, substream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def chi_over_sqrt_nu(nu: int, stream: np.random.Generator) -> float:
    """One draw of sqrt(chi-square(nu)/nu).

    For nu <= 32 the chi-square is the sum of nu squared standard normals;
    above that it is 2 * Gamma(nu/2) via numpy's rejection sampler.  The
    boundary only trades speed, not distribution.
    """
    if nu < 1:
        raise ValueError(f"degrees of freedom must be >= 1, got {nu}")
    if nu <= CHI_DIRECT_SUM_MAX_NU:
        g = stream.standard_normal(nu)
        chi2 = float(g @ g)
    else:
        chi2 = 2.0 * float(stream.standard_gamma(nu / 2.0))
    return float(np.sqrt(chi2 / nu))


def _rows(model: ModelSpec, low: np.ndarray, seed: int, start: int, stop: int) -> np.ndarray:
    n = model.n
    out = np.empty((stop - start, n))
    absolute = model.family.startswith("abs_")
    studentized = model.family in _T_FAMILIES
    for rep in range(start, stop):
        g = replication_stream(seed, rep, GAUSS_SUBSTREAM).standard_normal(n)
        row = low @ g
        if studentized:
            z = chi_over_sqrt_nu(model.nu, replication_stream(seed, rep, CHI_SUBSTREAM))
            row = row / z
        out[rep - start] = np.abs(row) if absolute else row
    return out


def sample(model: ModelSpec, reps: int, seed: int, workers: int = 1) -> SampleBatch:
    """Draw a reps x n batch from the model.

    Replications are independent streams, so the worker count only splits the
    index range and cannot change the values.
    """
    if reps < 1:
        raise ValueError(f"replication count must be >= 1, got {reps}")
    low = cholesky_factor(model.sigma)
    if workers <= 1:
        values = _rows(model, low, seed, 0, reps)
    else:
        bounds = np.linspace(0, reps, workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(
                pool.map(lambda se: _rows(model, low, seed, se[0], se[1]), zip(bounds[:-1], bounds[1:]))
            )
        values = np.vstack(chunks)
    return SampleBatch(model=model, seed=seed, reps=reps, values=values)


def prob_transform(values, family: str, nu: float | None = None):
    """Entrywise marginal CDF, mapping draws to the uniform scale."""
    return marginals.cdf(values, family, nu)


def format_batch(batch: SampleBatch) -> str:
    """Audit text format: one header line, then one row per replication."""
    model = batch.model
    nu = "-" if model.nu is None else str(model.nu)
    header = f"{model.family} n={model.n} nu={nu} seed={batch.seed} reps={batch.reps}"
    lines = [header, format_matrix(model.sigma).rstrip("\n")]
    for row in batch.values:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def parse_batch(text: str) -> SampleBatch:
    lines = [line for line in text.splitlines() if line.strip()]
    head = dict(tok.split("=") for tok in lines[0].split()[1:])
    family = lines[0].split()[0]
    n = int(head["n"])
    nu = None if head["nu"] == "-" else int(head["nu"])
    seed, reps = int(head["seed"]), int(head["reps"])
    sigma = parse_matrix("\n".join(lines[1 : n + 2]))
    values = np.array([[float(v) for v in line.split()] for line in lines[n + 2 :]])
    return SampleBatch(ModelSpec(family, sigma, nu), seed, reps, values)


def write_batch(batch: SampleBatch, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_batch(batch))


def read_batch(path) -> SampleBatch:
    with open(path, "r", encoding="ascii") as fh:
        return parse_batch(fh.read())
