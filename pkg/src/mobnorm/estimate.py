"""Estimators over paired parent/child income observations.

Raw incomes live in money units and must be strictly positive so the
natural log is defined; log-incomes carry no sign restriction.  Estimation
is deliberately standard: sample moments with the n-1 denominator, Pearson
correlation, and ordinary least squares of child log-income on parent
log-income.  The moment route and the OLS route are algebraically the same
slope (beta = r * s_c / s_p), and the tests hold the two code paths to
1e-12 relative agreement rather than collapsing them into one.

Summation happens through numpy reductions, so results are deterministic
for a given input array and numpy build, but permuting the observations may
move the last couple of bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    InsufficientDataError,
    InvalidParamsError,
    NonPositiveIncomeError,
    ZeroVarianceError,
)
from .model import ModelParams

__all__ = [
    "IncomeSample",
    "LogIncomeSample",
    "RegressionFit",
    "log_transform",
    "to_money",
    "fit_params",
    "ols_fit",
    "empirical_absolute_mobility",
]


def _paired_arrays(parent: object, child: object) -> tuple[np.ndarray, np.ndarray]:
    p = np.array(parent, dtype=np.float64, copy=True)
    c = np.array(child, dtype=np.float64, copy=True)
    if p.ndim != 1 or c.ndim != 1:
        raise InvalidParamsError(
            f"parent and child must be one-dimensional, got shapes {p.shape} and {c.shape}"
        )
    if p.shape != c.shape:
        raise InvalidParamsError(
            f"parent and child must pair up, got lengths {p.size} and {c.size}"
        )
    if p.size < 1:
        raise InsufficientDataError("a sample needs at least one pair")
    if not np.all(np.isfinite(p)) or not np.all(np.isfinite(c)):
        raise InvalidParamsError("incomes must be finite")
    p.setflags(write=False)
    c.setflags(write=False)
    return p, c


@dataclass(frozen=True)
class IncomeSample:
    """Paired raw incomes in money units; every value strictly positive."""

    parent: np.ndarray
    child: np.ndarray

    def __post_init__(self) -> None:
        p, c = _paired_arrays(self.parent, self.child)
        bad = np.flatnonzero(~((p > 0.0) & (c > 0.0)))
        if bad.size:
            row = int(bad[0])
            raise NonPositiveIncomeError(
                f"income pair {row} is not strictly positive "
                f"(parent={p[row]!r}, child={c[row]!r})",
                row=row,
            )
        object.__setattr__(self, "parent", p)
        object.__setattr__(self, "child", c)

    @property
    def n(self) -> int:
        return int(self.parent.size)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "IncomeSample":
        rows = list(pairs)
        return cls(
            parent=np.array([r[0] for r in rows], dtype=np.float64),
            child=np.array([r[1] for r in rows], dtype=np.float64),
        )


@dataclass(frozen=True)
class LogIncomeSample:
    """Paired natural-log incomes; any finite values."""

    parent: np.ndarray
    child: np.ndarray

    def __post_init__(self) -> None:
        p, c = _paired_arrays(self.parent, self.child)
        object.__setattr__(self, "parent", p)
        object.__setattr__(self, "child", c)

    @property
    def n(self) -> int:
        return int(self.parent.size)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "LogIncomeSample":
        rows = list(pairs)
        return cls(
            parent=np.array([r[0] for r in rows], dtype=np.float64),
            child=np.array([r[1] for r in rows], dtype=np.float64),
        )


AnySample = Union[IncomeSample, LogIncomeSample]


@dataclass(frozen=True)
class RegressionFit:
    """Ordinary least squares fit of child log-income on parent log-income."""

    alpha: float
    beta: float
    n: int
    residual_variance: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "residual_variance"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise InvalidParamsError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "n", int(self.n))
        if self.n < 2:
            raise InvalidParamsError(f"a regression fit needs n >= 2, got n={self.n}")
        if self.residual_variance < 0.0:
            raise InvalidParamsError(
                f"residual_variance must be >= 0, got {self.residual_variance}"
            )

    def predict(self, parent_log_income: float) -> float:
        return self.alpha + self.beta * float(parent_log_income)


def log_transform(sample: IncomeSample) -> LogIncomeSample:
    """Natural log of every income.

    Positivity is guaranteed by IncomeSample, and log is strictly
    increasing, so within-pair order (including exact ties) is preserved.
    """
    return LogIncomeSample(parent=np.log(sample.parent), child=np.log(sample.child))


def to_money(sample: LogIncomeSample) -> IncomeSample:
    """Inverse of :func:`log_transform`: exponentiate back to money units."""
    return IncomeSample(parent=np.exp(sample.parent), child=np.exp(sample.child))


def _centered_moments(sample: LogIncomeSample) -> tuple[float, float, float, float, float]:
    if sample.n < 2:
        raise InsufficientDataError(
            f"moment and slope estimates need at least 2 pairs, got {sample.n}"
        )
    x = sample.parent
    y = sample.child
    mean_x = float(np.mean(x))
    mean_y = float(np.mean(y))
    dx = x - mean_x
    dy = y - mean_y
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    sxy = float(np.dot(dx, dy))
    return mean_x, mean_y, sxx, syy, sxy


def fit_params(sample: LogIncomeSample) -> ModelParams:
    """Moment estimates of the five model parameters.

    Means are sample means, standard deviations use the n-1 denominator,
    and the correlation is the Pearson coefficient, clamped to [-1, 1] in
    case rounding pushes it a bit over.  Either margin being constant makes
    the correlation undefined and raises ZeroVarianceError.
    """
    mean_x, mean_y, sxx, syy, sxy = _centered_moments(sample)
    if sxx == 0.0:
        raise ZeroVarianceError("parent log-incomes are constant; correlation undefined")
    if syy == 0.0:
        raise ZeroVarianceError("child log-incomes are constant; correlation undefined")
    r = sxy / np.sqrt(sxx * syy)
    r = float(min(1.0, max(-1.0, r)))
    denom = sample.n - 1
    return ModelParams(
        mu_p=mean_x,
        sigma_p=float(np.sqrt(sxx / denom)),
        mu_c=mean_y,
        sigma_c=float(np.sqrt(syy / denom)),
        rho=r,
    )


def ols_fit(sample: LogIncomeSample) -> RegressionFit:
    """Least squares of child log-income on parent log-income.

    beta = Sxy / Sxx over centered sums, alpha = mean_y - beta * mean_x.
    ``residual_variance`` is the mean squared residual (n denominator).
    Constant parent values leave the slope undefined and raise
    ZeroVarianceError.
    """
    mean_x, mean_y, sxx, _syy, sxy = _centered_moments(sample)
    if sxx == 0.0:
        raise ZeroVarianceError("parent log-incomes are constant; slope undefined")
    beta = sxy / sxx
    alpha = mean_y - beta * mean_x
    resid = sample.child - (alpha + beta * sample.parent)
    return RegressionFit(
        alpha=float(alpha),
        beta=float(beta),
        n=sample.n,
        residual_variance=float(np.mean(resid * resid)),
    )


def empirical_absolute_mobility(sample: AnySample) -> float:
    """Fraction of pairs in which the child strictly out-earns the parent.

    Ties count as not out-earning.  The comparison is order-based, so it
    gives the same answer on raw incomes and on their logs.
    """
    return float(np.count_nonzero(sample.child > sample.parent)) / sample.n
