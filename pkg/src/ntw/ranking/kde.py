"""Smoothed probability mass functions over non-negative integers."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import EmptySample

FLOOR = 1e-6


def silverman_bandwidth(samples) -> float:
    x = np.asarray(samples, dtype=float)
    sigma = float(np.std(x, ddof=1)) if len(x) > 1 else 0.0
    return max(1.0, 1.06 * sigma * len(x) ** (-1 / 5))


@dataclass(frozen=True)
class FeatureModel:
    """Gaussian-kernel mass table over ``lo..lo+len(mass)-1``; ``FLOOR`` elsewhere."""

    name: str
    samples: tuple
    bandwidth: float
    lo: int
    mass: tuple

    def pmf(self, value: int) -> float:
        i = int(value) - self.lo
        if 0 <= i < len(self.mass):
            return self.mass[i]
        return FLOOR

    def logpmf(self, value: int) -> float:
        return math.log(self.pmf(value))

    @property
    def support(self) -> range:
        return range(self.lo, self.lo + len(self.mass))

    def to_json(self) -> dict:
        return {"name": self.name, "samples": list(self.samples), "bandwidth": self.bandwidth,
                "lo": self.lo, "mass": list(self.mass)}

    @classmethod
    def from_json(cls, data: dict) -> "FeatureModel":
        return cls(data["name"], tuple(data["samples"]), float(data["bandwidth"]),
                   int(data["lo"]), tuple(float(m) for m in data["mass"]))


def fit_feature_model(samples, name: str = "") -> FeatureModel:
    """Kernel density over integers with Silverman bandwidth, floored and renormalized."""
    samples = [int(s) for s in samples]
    if not samples:
        raise EmptySample(f"no samples to fit feature model {name!r}")
    h = silverman_bandwidth(samples)
    lo = max(0, math.floor(min(samples) - 3 * h))
    hi = math.ceil(max(samples) + 3 * h)
    grid = np.arange(lo, hi + 1, dtype=float)
    x = np.asarray(samples, dtype=float)
    dens = np.exp(-0.5 * ((grid[:, None] - x[None, :]) / h) ** 2).sum(axis=1)
    dens = np.maximum(dens / dens.sum(), FLOOR)
    dens /= dens.sum()
    return FeatureModel(name, tuple(samples), h, lo, tuple(float(v) for v in dens))
