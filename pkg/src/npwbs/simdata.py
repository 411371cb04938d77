"""Benchmark data generators: piecewise location/scale models plus noise.

Five sequence models (four fixed, one randomly drawn per replicate) crossed
with three noise families. Every family is standardized to mean 0, variance 1
before scaling, so a segment's (mean, sd) parameters mean the same thing
regardless of the noise shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DataModelSpec",
    "NOISE_FAMILIES",
    "FIXED_MODEL_NAMES",
    "MODEL_NAMES",
    "fixed_model",
    "sample_kfe_spec",
    "noise_epsilon",
    "generate_sequence",
]

NOISE_FAMILIES = ("normal", "student_t3", "lognormal_1_half")

FIXED_MODEL_NAMES = ("fms", "mix", "dhk", "interval")
MODEL_NAMES = FIXED_MODEL_NAMES + ("kfe",)


@dataclass(frozen=True)
class DataModelSpec:
    """Piecewise-constant mean/sd model: segment j covers (tau_{j-1}, tau_j]."""

    n: int
    tau: tuple[int, ...]
    segment_means: tuple[float, ...]
    segment_sds: tuple[float, ...]

    def __post_init__(self) -> None:
        k = len(self.tau)
        if len(self.segment_means) != k + 1 or len(self.segment_sds) != k + 1:
            raise ValueError(
                f"{k} change points require {k + 1} means and sds, got "
                f"{len(self.segment_means)} and {len(self.segment_sds)}"
            )
        bounds = (0,) + self.tau + (self.n,)
        if any(b <= a for a, b in zip(bounds, bounds[1:])):
            raise ValueError(f"change points must satisfy 1 <= tau_1 < ... < tau_K < n={self.n}")
        if any(s <= 0 for s in self.segment_sds):
            raise ValueError("segment sds must be positive")

    @property
    def k(self) -> int:
        return len(self.tau)

    def segment_lengths(self) -> tuple[int, ...]:
        bounds = (0,) + self.tau + (self.n,)
        return tuple(b - a for a, b in zip(bounds, bounds[1:]))


_FIXED_MODELS = {
    # Short noisy segments with small mean shifts.
    "fms": DataModelSpec(
        n=497,
        tau=(39, 226, 243, 300, 309, 333),
        segment_means=(0.18, 0.08, 1.07, -0.53, 0.16, -0.69, -0.16),
        segment_sds=(0.3,) * 7,
    ),
    # Alternating mean signs with shrinking magnitude and growing spacing.
    "mix": DataModelSpec(
        n=560,
        tau=(11, 21, 41, 61, 91, 121, 161, 201, 251, 301, 361, 421, 491),
        segment_means=(7, -7, 6, -6, 5, -5, 4, -4, 3, -3, 2, -2, 1, -1),
        segment_sds=(4.0,) * 14,
    ),
    # Pure scale changes: constant mean, alternating sd.
    "dhk": DataModelSpec(
        n=1000,
        tau=tuple(range(100, 901, 100)),
        segment_means=(0.0,) * 10,
        segment_sds=(2.5, 1.0) * 5,
    ),
    # One short elevated interval: the classic masking shape.
    "interval": DataModelSpec(
        n=1000,
        tau=(490, 510),
        segment_means=(0.0, 2.0, 0.0),
        segment_sds=(1.0,) * 3,
    ),
}


def fixed_model(name: str) -> DataModelSpec:
    """One of the four fixed benchmark models by name."""
    try:
        return _FIXED_MODELS[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; expected one of {FIXED_MODEL_NAMES}") from None


_KFE_MAX_ATTEMPTS = 10**6


def sample_kfe_spec(rng: np.random.Generator) -> DataModelSpec:
    """Random 5-change-point model: n=1000, mean 0, random sds.

    Change points are 5 integers drawn uniformly from [30, 970] and kept only
    when all six segments (including both boundary segments) have at least 30
    observations. Segment sds are i.i.d. lognormal with log-mean 0 and
    log-sd log(5). Draw order is fixed: change points first, then sds.
    """
    n, k, gap = 1000, 5, 30
    for _ in range(_KFE_MAX_ATTEMPTS):
        tau = np.sort(rng.integers(gap, n - gap + 1, size=k))
        bounds = np.concatenate(([0], tau, [n]))
        if np.diff(bounds).min() >= gap:
            sds = rng.lognormal(mean=0.0, sigma=math.log(5.0), size=k + 1)
            return DataModelSpec(
                n=n,
                tau=tuple(int(t) for t in tau),
                segment_means=(0.0,) * (k + 1),
                segment_sds=tuple(float(s) for s in sds),
            )
    raise ValueError(f"no valid change-point draw in {_KFE_MAX_ATTEMPTS} attempts")


# Standardizing constants for the lognormal family: subtract the mean
# exp(mu + sigma^2/2), divide by sd sqrt((exp(sigma^2) - 1) exp(2 mu + sigma^2))
# with mu = 1, sigma = 1/2.
_LN_MU, _LN_SIGMA = 1.0, 0.5
_LN_MEAN = math.exp(_LN_MU + _LN_SIGMA**2 / 2.0)
_LN_SD = math.sqrt((math.exp(_LN_SIGMA**2) - 1.0) * math.exp(2.0 * _LN_MU + _LN_SIGMA**2))


def noise_epsilon(family: str, rng: np.random.Generator, n: int) -> np.ndarray:
    """n i.i.d. draws from the named family, standardized to mean 0, var 1."""
    if family == "normal":
        return rng.standard_normal(n)
    if family == "student_t3":
        return rng.standard_t(3, size=n) / math.sqrt(3.0)  # Var(t_3) = 3
    if family == "lognormal_1_half":
        return (rng.lognormal(_LN_MU, _LN_SIGMA, size=n) - _LN_MEAN) / _LN_SD
    raise ValueError(f"unknown noise family {family!r}; expected one of {NOISE_FAMILIES}")


def generate_sequence(spec: DataModelSpec, noise: str, rng: np.random.Generator) -> np.ndarray:
    """One sequence: y_i = mean(segment of i) + sd(segment of i) * epsilon_i."""
    lengths = np.asarray(spec.segment_lengths())
    means = np.repeat(np.asarray(spec.segment_means, dtype=np.float64), lengths)
    sds = np.repeat(np.asarray(spec.segment_sds, dtype=np.float64), lengths)
    return means + sds * noise_epsilon(noise, rng, spec.n)
