"""Pydantic request/response schemas for the HTTP API.

These mirror the core domain types onto the wire.  Correlation matrices
travel in the text format of :func:`simeslab.dependence.format_matrix` so a
request body stays plain JSON.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator

PROCEDURES = ("simes", "hochberg", "bh", "gsimes")
MARGINALS = ("uniform", "normal", "t", "abs_normal", "abs_t")


class CriticalValuesRequest(BaseModel):
    n: int = Field(ge=1)
    alpha: float = Field(gt=0, lt=1)
    k: int = Field(default=1, ge=1)
    marginal: str = "uniform"
    nu: int | None = Field(default=None, ge=1)
    rho: float = Field(default=0.0, ge=0.0, lt=1.0)
    side: str = "lower_tail_a"

    @model_validator(mode="after")
    def _check(self):
        if self.marginal not in MARGINALS:
            raise ValueError(f"marginal must be one of {MARGINALS}")
        if self.side not in ("lower_tail_a", "upper_tail_b"):
            raise ValueError("side must be 'lower_tail_a' or 'upper_tail_b'")
        if self.k > self.n:
            raise ValueError(f"k={self.k} exceeds n={self.n}")
        return self


class CriticalValuesResponse(BaseModel):
    n: int
    k: int
    alpha: float
    marginal: str
    nu: int | None
    rho: float
    side: str
    constants: list[float]


class NoncrossRequest(BaseModel):
    """Either explicit uniform-scale constants or a Simes boundary (n, alpha)."""

    constants: list[float] | None = None
    n: int | None = Field(default=None, ge=1)
    alpha: float | None = Field(default=None, gt=0, lt=1)

    @model_validator(mode="after")
    def _check(self):
        if self.constants is None and (self.n is None or self.alpha is None):
            raise ValueError("provide constants, or n and alpha for the Simes boundary")
        return self


class NoncrossResponse(BaseModel):
    n: int
    constants: list[float]
    probability: float


class TestRequest(BaseModel):
    pvalues: list[float]
    procedure: str = "simes"
    level: float = Field(default=0.05, gt=0, lt=1)
    k: int = Field(default=1, ge=1)
    marginal: str = "normal"
    nu: int | None = Field(default=None, ge=1)
    rho: float = Field(default=0.0, ge=0.0, lt=1.0)

    @model_validator(mode="after")
    def _check(self):
        if self.procedure not in PROCEDURES:
            raise ValueError(f"procedure must be one of {PROCEDURES}")
        if not self.pvalues:
            raise ValueError("pvalues must be nonempty")
        return self


class TestResponse(BaseModel):
    procedure: str
    level: float | None
    n: int
    reject_global: bool
    rejected_indices: list[int]
    thresholds: list[float]


class TwoSampleRequest(BaseModel):
    x: list[float]
    y: list[float]
    alpha: float = Field(default=0.05, gt=0, lt=1)
    include_pmf: bool = False


class TwoSampleResponse(BaseModel):
    n: int
    statistic: int
    p_value: float
    reject: bool
    alpha: float
    pmf: list[float] | None = None


class VerifyRequest(BaseModel):
    """Flat mirror of an experiment config.

    Dependence comes from `rho` (equicorrelated) or `sigma` (matrix text
    format); t families route to the studentized verification for k = 1 and
    to the exploratory path for k >= 2.
    """

    family: str
    n: int = Field(ge=1)
    alpha: float = Field(gt=0, lt=1)
    seed: int = Field(ge=0)
    k: int = Field(default=1, ge=1)
    rho: float | None = None
    sigma: str | None = None
    nu: int | None = Field(default=None, ge=1)
    reps: int = Field(default=100_000, ge=1)
    side: str = "lower_tail_a"
    mode: str = "simes"
    tol: float = 1e-10
    boundary: list[float] | None = None
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check(self):
        if self.family not in ("normal", "t", "abs_normal", "abs_t"):
            raise ValueError("family must be one of normal, t, abs_normal, abs_t")
        if self.rho is not None and self.sigma is not None:
            raise ValueError("give rho or sigma, not both")
        return self


class VerifyResponse(BaseModel):
    estimate: float
    bound: float
    std_error: float
    z_margin: float | None
    passed: bool
    exploratory: bool
    wall_time: float
    boundary: list[float]
    config: dict


class HealthResponse(BaseModel):
    status: str
    version: str
