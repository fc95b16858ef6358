"""Predictive consequences of the fairness index under changes to an allocation.

Covers resource exchange between two users, uniform and single-user
increments, the single-user maximizer, and bounded allocations where every
user receives between ``x_min`` and ``x_max = K * x_min``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .core import TIE_TOLERANCE, Allocation, as_allocation, fair_mark, fairness_index
from .errors import DegenerateRemainder, InvalidParameter, InvalidTransfer


class Direction(str, enum.Enum):
    INCREASE = "increase"
    UNCHANGED = "unchanged"
    DECREASE = "decrease"
    STATIONARY = "stationary"


@dataclass(frozen=True)
class ExchangeOutcome:
    predicted_direction: Direction
    new_fairness: float
    old_fairness: float
    new_allocation: Allocation = field(repr=False)


@dataclass(frozen=True)
class BoundScenario:
    """A population split between the two allocation bounds.

    ``gamma`` is the fraction of users held at ``x_min``; the rest sit at
    ``x_max``. The mirror convention (fraction at the maximum) gives the same
    fairness with ``gamma`` replaced by ``1 - gamma``.
    """

    x_min: float
    x_max: float
    gamma: float

    def __post_init__(self):
        if not self.x_min > 0:
            raise InvalidParameter(f"x_min must be > 0, got {self.x_min!r}")
        if not self.x_max >= self.x_min:
            raise InvalidParameter(f"x_max must be >= x_min, got {self.x_max!r} < {self.x_min!r}")
        if not 0.0 <= self.gamma <= 1.0:
            raise InvalidParameter(f"gamma must lie in [0, 1], got {self.gamma!r}")

    @classmethod
    def from_ratio(cls, K: float, gamma: float, x_min: float = 1.0) -> "BoundScenario":
        if not K >= 1:
            raise InvalidParameter(f"K must be >= 1, got {K!r}")
        return cls(x_min=x_min, x_max=K * x_min, gamma=gamma)

    @property
    def K(self) -> float:
        return self.x_max / self.x_min


def _check_index(alloc: Allocation, j: int, name: str = "j") -> None:
    if not 0 <= j < alloc.n:
        raise IndexError(f"user index {name}={j} out of range for {alloc.n} users")


def exchange_effect(alloc, j: int, k: int, delta: float) -> ExchangeOutcome:
    """Move ``delta`` of resource from user ``k`` to user ``j``.

    Fairness rises iff ``delta < x_k - x_j``, is unchanged at equality (the two
    users swap), and falls otherwise.
    """
    alloc = as_allocation(alloc)
    _check_index(alloc, j, "j")
    _check_index(alloc, k, "k")
    if j == k:
        raise InvalidTransfer("giver and receiver must be different users")
    if not delta > 0:
        raise InvalidTransfer(f"transfer amount must be > 0, got {delta!r}")
    x = list(alloc.values)
    if x[k] - delta < 0:
        raise InvalidTransfer(
            f"user {k} holds {x[k]!r}, cannot give away {delta!r}"
        )
    gap = x[k] - x[j]
    if math.isclose(delta, gap, rel_tol=1e-12, abs_tol=0.0):
        direction = Direction.UNCHANGED
    elif delta < gap:
        direction = Direction.INCREASE
    else:
        direction = Direction.DECREASE
    x[j] += delta
    x[k] -= delta
    new = Allocation(tuple(x), metric_label=alloc.metric_label)
    return ExchangeOutcome(direction, fairness_index(new), fairness_index(alloc), new)


def uniform_increment(alloc, c: float) -> float:
    """Fairness after every user receives an extra ``c``; never below the original."""
    if not c > 0:
        raise InvalidParameter(f"increment c must be > 0, got {c!r}")
    alloc = as_allocation(alloc)
    return fairness_index([v + c for v in alloc.values])


def marginal_direction(alloc, j: int) -> Direction:
    """Effect on fairness of giving user ``j`` a small extra amount.

    Compares ``x_j`` to the fair mark of the whole allocation: discriminated
    users raise fairness, favored users lower it, a user on the mark (within
    the tie tolerance) leaves it stationary to first order.
    """
    alloc = as_allocation(alloc)
    if alloc.n < 2:
        raise InvalidParameter("marginal direction needs at least two users")
    _check_index(alloc, j)
    mark = fair_mark(alloc)
    xj = alloc.values[j]
    if abs(xj - mark) <= TIE_TOLERANCE * mark:
        return Direction.STATIONARY
    return Direction.INCREASE if xj < mark else Direction.DECREASE


def maximizing_value(alloc, j: int) -> float:
    """Allocation for user ``j`` that maximizes fairness with the others held fixed.

    This is the fair mark of the remaining ``n - 1`` users,
    ``sum_{i != j} x_i^2 / sum_{i != j} x_i``. The current value of ``x_j`` is
    ignored.
    """
    alloc = as_allocation(alloc)
    if alloc.n < 2:
        raise InvalidParameter("maximizing value needs at least two users")
    _check_index(alloc, j)
    others = alloc.values[:j] + alloc.values[j + 1:]
    if max(others) == 0.0:
        raise DegenerateRemainder(
            "all other users have zero allocation; their fair mark is undefined"
        )
    return fair_mark(others)


def bounded_fairness(scenario: BoundScenario) -> float:
    """Fairness when a fraction ``gamma`` of users is at ``x_min`` and the rest at ``x_max``.

    ``{g + (1-g) K}^2 / (g + (1-g) K^2)``, independent of population size.
    """
    g, K = scenario.gamma, scenario.K
    num = g + (1.0 - g) * K
    return num * num / (g + (1.0 - g) * K * K)


def min_fairness_bound(K: float) -> tuple[float, float]:
    """Worst split and worst fairness for allocations confined to ``[x_min, K x_min]``.

    Returns ``(K/(K+1), 4K/(K+1)^2)``.
    """
    if not K >= 1 or not math.isfinite(K):
        raise InvalidParameter(f"K must be a finite number >= 1, got {K!r}")
    return K / (K + 1.0), 4.0 * K / ((K + 1.0) * (K + 1.0))


def sweep_gamma(K: float, steps: int) -> list[tuple[float, float]]:
    """Evaluate :func:`bounded_fairness` on ``steps`` evenly spaced points of ``[0, 1]``."""
    if not K >= 1 or not math.isfinite(K):
        raise InvalidParameter(f"K must be a finite number >= 1, got {K!r}")
    if steps < 2:
        raise InvalidParameter(f"steps must be >= 2, got {steps!r}")
    out = []
    for i in range(steps):
        g = i / (steps - 1)
        out.append((g, bounded_fairness(BoundScenario.from_ratio(K, g))))
    return out


def two_point_allocation(n: int, at_min: int, x_min: float, x_max: float) -> Allocation:
    """``at_min`` users at ``x_min`` followed by ``n - at_min`` users at ``x_max``."""
    if not 0 <= at_min <= n or n < 1:
        raise InvalidParameter(f"need 0 <= at_min <= n and n >= 1, got at_min={at_min}, n={n}")
    return Allocation((float(x_min),) * at_min + (float(x_max),) * (n - at_min))


def discrete_min_fairness(n: int, K: float, x_min: float = 1.0) -> tuple[int, float]:
    """Worst two-point split for a finite population of ``n`` users.

    ``gamma * n`` is generally fractional, so both neighbouring integer counts
    are tried and the lower fairness kept. Returns ``(users_at_min, fairness)``.
    """
    gamma_star, _ = min_fairness_bound(K)
    lo = math.floor(gamma_star * n)
    candidates = sorted({min(max(m, 0), n) for m in (lo, lo + 1)})
    best = None
    for m in candidates:
        f = fairness_index(two_point_allocation(n, m, x_min, K * x_min))
        if best is None or f < best[1]:
            best = (m, f)
    return best
