"""Seeded sampling from the joint log-income model.

Reproducibility contract, frozen for the life of this package:

* Bit generator: numpy PCG64 seeded through ``SeedSequence``.
* The draw stream is chunked.  Chunk ``i`` covers pairs
  ``[i * CHUNK_DRAWS, min((i + 1) * CHUNK_DRAWS, n))`` and uses its own
  generator seeded with ``SeedSequence(seed, spawn_key=(i,))``.
* Within a chunk of m pairs, the first m variates from
  ``Generator.standard_normal`` are the parent shocks z1 and the next m are
  the child shocks z2.
* A pair is assembled as::

      xp = mu_p + sigma_p * z1
      xc = mu_c + (rho * sigma_c) * z1 + (sigma_c * sqrt(1 - rho^2)) * z2

  with exactly this association and left-to-right addition; the two
  coefficients are formed first, so the byte-level contract is unambiguous
  (floating point multiplication does not associate).

Chunk boundaries depend only on n, and chunk streams only on (seed, chunk
index), so output is byte-identical no matter how chunks are scheduled;
sampling can be parallelized freely without changing a single draw.  At
rho = +/-1 the child shock reduces to exactly +/-z1 (the sqrt term is
exactly zero), so perfect correlation is exact, not approximate.

The concrete draw values additionally depend on numpy's standard_normal
stream (ziggurat); golden values in the test-suite pin it, with a regen
script for the day numpy changes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InvalidParamsError
from .estimate import LogIncomeSample, RegressionFit, empirical_absolute_mobility, ols_fit
from .model import ModelParams

__all__ = [
    "CHUNK_DRAWS",
    "SimConfig",
    "MonteCarloEstimate",
    "sample_pairs",
    "mc_absolute_mobility",
    "mc_regression",
    "mc_report_values",
]

CHUNK_DRAWS = 1 << 17

_MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class SimConfig:
    """Everything a simulation run depends on: parameters, size, seed."""

    params: ModelParams
    n_draws: int
    seed: int

    def __post_init__(self) -> None:
        if not isinstance(self.params, ModelParams):
            raise InvalidParamsError(f"params must be ModelParams, got {type(self.params).__name__}")
        n = self.n_draws
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise InvalidParamsError(f"n_draws must be an integer, got {n!r}")
        object.__setattr__(self, "n_draws", int(n))
        if self.n_draws < 1:
            raise InvalidParamsError(f"n_draws must be >= 1, got {self.n_draws}")
        seed = self.seed
        if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
            raise InvalidParamsError(f"seed must be an integer, got {seed!r}")
        object.__setattr__(self, "seed", int(seed))
        if not 0 <= self.seed <= _MAX_SEED:
            raise InvalidParamsError(f"seed must lie in [0, 2**64 - 1], got {self.seed}")


@dataclass(frozen=True)
class MonteCarloEstimate:
    """A simulated estimate with its seed and binomial-style uncertainty."""

    value: float
    std_error: float
    n_draws: int
    seed: int

    def __post_init__(self) -> None:
        for name in ("value", "std_error"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise InvalidParamsError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        if self.std_error < 0.0:
            raise InvalidParamsError(f"std_error must be >= 0, got {self.std_error}")


def _iter_chunks(config: SimConfig) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    p = config.params
    cross = p.rho * p.sigma_c
    resid = p.sigma_c * math.sqrt(max(0.0, 1.0 - p.rho * p.rho))
    n_chunks = (config.n_draws + CHUNK_DRAWS - 1) // CHUNK_DRAWS
    for i in range(n_chunks):
        m = min(CHUNK_DRAWS, config.n_draws - i * CHUNK_DRAWS)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed, spawn_key=(i,))))
        z1 = rng.standard_normal(m)
        z2 = rng.standard_normal(m)
        xp = p.mu_p + p.sigma_p * z1
        xc = p.mu_c + cross * z1 + resid * z2
        yield xp, xc


def sample_pairs(config: SimConfig) -> LogIncomeSample:
    """Draw the full sample of correlated log-income pairs into memory.

    For n_draws at the memory limit, prefer the streaming estimators below;
    they see the identical draws without materializing them all at once.
    """
    parents = np.empty(config.n_draws, dtype=np.float64)
    children = np.empty(config.n_draws, dtype=np.float64)
    pos = 0
    for xp, xc in _iter_chunks(config):
        parents[pos : pos + xp.size] = xp
        children[pos : pos + xc.size] = xc
        pos += xp.size
    return LogIncomeSample(parent=parents, child=children)


def mc_absolute_mobility(config: SimConfig) -> MonteCarloEstimate:
    """Monte Carlo estimate of P(child out-earns parent).

    Streams over chunks counting strict inequalities xc > xp (a simulated
    child exactly matching the parent is not counted).  The standard error
    is the binomial sqrt(a (1 - a) / n).
    """
    wins = 0
    for xp, xc in _iter_chunks(config):
        wins += int(np.count_nonzero(xc > xp))
    a = wins / config.n_draws
    return MonteCarloEstimate(
        value=a,
        std_error=math.sqrt(a * (1.0 - a) / config.n_draws),
        n_draws=config.n_draws,
        seed=config.seed,
    )


def mc_regression(config: SimConfig) -> RegressionFit:
    """OLS fit on one simulated sample (needs n_draws >= 2)."""
    return ols_fit(sample_pairs(config))


def mc_report_values(config: SimConfig) -> tuple[LogIncomeSample, RegressionFit, MonteCarloEstimate]:
    """One materialized sample with its OLS fit and out-earning estimate.

    The estimate equals what :func:`mc_absolute_mobility` computes for the
    same config (identical draws, identical strict-inequality count); this
    variant just hands back the sample too instead of streaming it away.
    """
    sample = sample_pairs(config)
    fit = ols_fit(sample)
    a = empirical_absolute_mobility(sample)
    est = MonteCarloEstimate(
        value=a,
        std_error=math.sqrt(a * (1.0 - a) / config.n_draws),
        n_draws=config.n_draws,
        seed=config.seed,
    )
    return sample, fit, est
