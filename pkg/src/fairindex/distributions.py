"""Coefficient of fairness for non-negative distributions.

The coefficient of fairness is ``E[x]^2 / E[x^2]``, the distributional
counterpart of the fairness index. Five families are supported, with analytic
moments and a seeded Monte Carlo estimator for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import InvalidParameter

FAMILIES = ("constant", "exponential", "erlang", "uniform", "lognormal")

_PARAM_NAMES = {
    "constant": ("a",),
    "exponential": ("lambda",),
    "erlang": ("c", "lambda"),
    "uniform": ("a", "b"),
    "lognormal": ("m", "sigma"),
}

# Erlang variates are summed in blocks to bound memory for large stage counts.
_MC_BLOCK = 1 << 18


def _positive(params, name):
    v = params[name]
    if not (math.isfinite(v) and v > 0):
        raise InvalidParameter(f"{name} must be > 0, got {v!r}")


@dataclass(frozen=True)
class DistributionSpec:
    family: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in _PARAM_NAMES:
            raise InvalidParameter(
                f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}"
            )
        expected = _PARAM_NAMES[self.family]
        missing = [p for p in expected if p not in self.params]
        extra = [p for p in self.params if p not in expected]
        if missing or extra:
            raise InvalidParameter(
                f"{self.family} takes parameters ({', '.join(expected)});"
                f" missing {missing or 'none'}, unexpected {extra or 'none'}"
            )
        params = {k: float(self.params[k]) for k in expected}
        if self.family == "constant":
            _positive(params, "a")
        elif self.family == "exponential":
            _positive(params, "lambda")
        elif self.family == "erlang":
            c = params["c"]
            if not (math.isfinite(c) and c >= 1 and c == int(c)):
                raise InvalidParameter(f"c must be a positive integer, got {self.params['c']!r}")
            params["c"] = int(c)
            _positive(params, "lambda")
        elif self.family == "uniform":
            a, b = params["a"], params["b"]
            if not (math.isfinite(a) and a >= 0):
                raise InvalidParameter(f"a must be >= 0 (non-negative support), got {a!r}")
            if not (math.isfinite(b) and b > a):
                raise InvalidParameter(f"b must be > a, got b={b!r}, a={a!r}")
        elif self.family == "lognormal":
            _positive(params, "m")
            _positive(params, "sigma")
        object.__setattr__(self, "params", MappingProxyType(params))

    @classmethod
    def constant(cls, a: float) -> "DistributionSpec":
        return cls("constant", {"a": a})

    @classmethod
    def exponential(cls, rate: float) -> "DistributionSpec":
        return cls("exponential", {"lambda": rate})

    @classmethod
    def erlang(cls, c: int, rate: float) -> "DistributionSpec":
        return cls("erlang", {"c": c, "lambda": rate})

    @classmethod
    def uniform(cls, a: float, b: float) -> "DistributionSpec":
        return cls("uniform", {"a": a, "b": b})

    @classmethod
    def lognormal(cls, m: float, sigma: float) -> "DistributionSpec":
        return cls("lognormal", {"m": m, "sigma": sigma})

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"DistributionSpec.{self.family}({args})"


def analytic_moments(dist: DistributionSpec) -> tuple[float, float]:
    """``(E[x], E[x^2])`` in closed form.

    The lognormal scale ``m`` is the median, so ``E[x] = m exp(sigma^2 / 2)``.
    """
    p = dist.params
    if dist.family == "constant":
        a = p["a"]
        return a, a * a
    if dist.family == "exponential":
        lam = p["lambda"]
        return 1.0 / lam, 2.0 / (lam * lam)
    if dist.family == "erlang":
        c, lam = p["c"], p["lambda"]
        return c / lam, c * (c + 1) / (lam * lam)
    if dist.family == "uniform":
        a, b = p["a"], p["b"]
        return (a + b) / 2.0, (a * a + a * b + b * b) / 3.0
    m, s = p["m"], p["sigma"]
    return m * math.exp(s * s / 2.0), m * m * math.exp(2.0 * s * s)


def coefficient_of_fairness(dist: DistributionSpec) -> float:
    """``E[x]^2 / E[x^2]``, always in ``(0, 1]``.

    For the uniform family this is ``3(a+b)^2 / (4(a^2+ab+b^2))``; tables that
    print the reciprocal give values above 1, which no fairness can reach.
    """
    m1, m2 = analytic_moments(dist)
    return m1 * m1 / m2


def sample(dist: DistributionSpec, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` variates from ``dist`` using ``rng``."""
    p = dist.params
    if dist.family == "constant":
        return np.full(size, p["a"])
    if dist.family == "exponential":
        return rng.exponential(1.0 / p["lambda"], size)
    if dist.family == "erlang":
        # sum of c exponential stages
        c, scale = p["c"], 1.0 / p["lambda"]
        out = np.empty(size)
        rows = max(1, _MC_BLOCK // c)
        for start in range(0, size, rows):
            stop = min(size, start + rows)
            out[start:stop] = rng.exponential(scale, (stop - start, c)).sum(axis=1)
        return out
    if dist.family == "uniform":
        return rng.uniform(p["a"], p["b"], size)
    return p["m"] * np.exp(p["sigma"] * rng.standard_normal(size))


def monte_carlo_cof(dist: DistributionSpec, samples: int, seed: int) -> tuple[float, float]:
    """Estimate the coefficient of fairness from ``samples`` seeded draws.

    Returns ``(estimate, std_error)``. The estimate is the fairness index of the
    sample; the standard error comes from the delta method applied to the
    sample means of ``x`` and ``x^2``. The same seed reproduces the same result
    bit for bit.
    """
    if samples < 100:
        raise InvalidParameter(f"samples must be >= 100, got {samples!r}")
    rng = np.random.default_rng(seed)
    x = sample(dist, samples, rng)
    # rescale so a constant sample is all ones and the ratio is exactly 1
    u = x / x.max()
    u2 = u * u
    m1 = u.mean()
    m2 = u2.mean()
    estimate = min(1.0, float(m1 * m1 / m2))
    d1 = u - m1
    d2 = u2 - m2
    var1 = float(np.mean(d1 * d1))
    var2 = float(np.mean(d2 * d2))
    cov12 = float(np.mean(d1 * d2))
    g1 = 2.0 * m1 / m2
    g2 = -(m1 * m1) / (m2 * m2)
    var = (g1 * g1 * var1 + 2.0 * g1 * g2 * cov12 + g2 * g2 * var2) / samples
    return estimate, float(math.sqrt(max(var, 0.0)))
