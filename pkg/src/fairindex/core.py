"""Fairness index, discrimination index and moment statistics of an allocation.

All sums go through :func:`math.fsum`, which is exactly rounded, so every index
is independent of the order of the values. Index computations first rescale by
the power of two nearest the largest value. That scaling is exact in binary
floating point and keeps ``x**2`` away from overflow and underflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import InvalidAllocation, InvalidDemand, InvalidExponent

#: Relative tolerance used to decide that a value sits exactly on the fair mark.
TIE_TOLERANCE = 1e-9


class UserClass(str, enum.Enum):
    FAVORED = "favored"
    DISCRIMINATED = "discriminated"
    AT_MARK = "at-mark"


@dataclass(frozen=True)
class Allocation:
    """Non-negative per-user allocation values, measured in a single metric."""

    values: tuple[float, ...]
    metric_label: str = field(default="allocation", compare=False)

    def __post_init__(self):
        try:
            values = tuple(float(v) for v in self.values)
        except (TypeError, ValueError) as exc:
            raise InvalidAllocation(f"allocation values must be numbers: {exc}") from None
        if not values:
            raise InvalidAllocation("allocation must contain at least one value")
        for i, v in enumerate(values):
            if not math.isfinite(v):
                raise InvalidAllocation(f"value {i} is not finite: {v!r}")
            if v < 0:
                raise InvalidAllocation(f"value {i} is negative: {v!r}")
        if max(values) == 0.0:
            raise InvalidAllocation("all-zero allocation has no defined fairness")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n(self) -> int:
        return len(self.values)


def as_allocation(alloc: Allocation | Sequence[float]) -> Allocation:
    if isinstance(alloc, Allocation):
        return alloc
    return Allocation(tuple(alloc))


@dataclass(frozen=True)
class MomentSummary:
    n: int
    b1: float
    b2: float
    variance_pop: float
    variance_sample: float | None
    cov_pop: float

    @property
    def total(self) -> float:
        """Sum of the values, ``n * b1``."""
        return self.n * self.b1

    @property
    def total_squares(self) -> float:
        """Sum of squared values, ``n * b2``."""
        return self.n * self.b2


class PerUser(NamedTuple):
    value: float
    perceived_fairness: float
    user_class: UserClass


@dataclass(frozen=True)
class FairnessReport:
    fairness: float
    discrimination: float
    fair_mark: float
    mean: float
    per_user: tuple[PerUser, ...]

    @property
    def favored(self) -> list[int]:
        return [i for i, u in enumerate(self.per_user) if u.user_class is UserClass.FAVORED]

    @property
    def discriminated(self) -> list[int]:
        return [i for i, u in enumerate(self.per_user) if u.user_class is UserClass.DISCRIMINATED]


class LegacyIndices(NamedTuple):
    variance_sample: float | None
    cov_pop: float
    min_max_ratio: float


def _scaled(values: Sequence[float]) -> tuple[int, list[float]]:
    _, e = math.frexp(max(values))
    return e, [math.ldexp(v, -e) for v in values]


def _moment_ratio(values: Sequence[float], r: float) -> float:
    # (mean)^r / mean(x^r), clamped into its mathematical range [n^(1-r), 1]
    if min(values) == max(values):
        return 1.0
    n = len(values)
    _, u = _scaled(values)
    b1 = math.fsum(u) / n
    if r == 2:
        br = math.fsum(x * x for x in u) / n
        ratio = b1 * b1 / br
        floor = 1.0 / n
    else:
        br = math.fsum(x**r for x in u) / n
        ratio = b1**r / br
        floor = float(n) ** (1.0 - r)
    return min(1.0, max(floor, ratio))


def moments(alloc: Allocation | Sequence[float]) -> MomentSummary:
    """First two moments about the origin plus variance and coefficient of variation.

    Variances use a two-pass sum of squared deviations rather than
    ``b2 - b1**2``, which cancels badly for nearly equal values. The
    coefficient of variation is formed on rescaled values so it stays
    accurate when squares of the raw values would under- or overflow.
    """
    alloc = as_allocation(alloc)
    x = alloc.values
    n = len(x)
    b1 = math.fsum(x) / n
    b2 = math.fsum(v * v for v in x) / n
    ss = math.fsum((v - b1) ** 2 for v in x)
    _, u = _scaled(x)
    u1 = math.fsum(u) / n
    cov_pop = math.sqrt(math.fsum((v - u1) ** 2 for v in u) / n) / u1
    return MomentSummary(
        n=n,
        b1=b1,
        b2=b2,
        variance_pop=ss / n,
        variance_sample=ss / (n - 1) if n > 1 else None,
        cov_pop=cov_pop,
    )


def fairness_index(alloc: Allocation | Sequence[float]) -> float:
    """Return ``(sum x)^2 / (n * sum x^2)``, a value in ``[1/n, 1]``.

    >>> fairness_index([0.0, 1.0])
    0.5
    >>> fairness_index([1, 3, 5])
    0.7714285714285715
    """
    return _moment_ratio(as_allocation(alloc).values, 2)


def fairness_from_cov(cov_pop: float) -> float:
    """Fairness implied by a population coefficient of variation: ``1 / (1 + cov^2)``."""
    if cov_pop < 0:
        raise ValueError(f"coefficient of variation must be >= 0, got {cov_pop!r}")
    return 1.0 / (1.0 + cov_pop * cov_pop)


def generalized_index(alloc: Allocation | Sequence[float], r: float) -> float:
    """Ratio of the r-th power of the mean to the r-th raw moment.

    Requires ``r > 1``. With ``r == 2`` this is the plain fairness index and the
    two functions return identical floats. Favoring ``k`` of ``n`` users yields
    ``(k/n) ** (r - 1)``.
    """
    if not (isinstance(r, (int, float)) and math.isfinite(r)) or r <= 1:
        raise InvalidExponent(f"exponent r must be a finite number > 1, got {r!r}")
    return _moment_ratio(as_allocation(alloc).values, r)


def _classify(value: float, mark: float) -> UserClass:
    if abs(value - mark) <= TIE_TOLERANCE * mark:
        return UserClass.AT_MARK
    return UserClass.FAVORED if value > mark else UserClass.DISCRIMINATED


def fair_mark(alloc: Allocation | Sequence[float]) -> float:
    """Fair allocation mark ``sum x^2 / sum x``; it is never below the mean."""
    e, u = _scaled(as_allocation(alloc).values)
    return math.ldexp(math.fsum(v * v for v in u) / math.fsum(u), e)


def fairness_report(alloc: Allocation | Sequence[float]) -> FairnessReport:
    """Full fairness breakdown: index, discrimination, fair mark and per-user view.

    Users above the fair mark are favored, users below it discriminated; the
    perceived fairness of user ``i`` is ``x_i / fair_mark`` and these average to
    the fairness index.
    """
    alloc = as_allocation(alloc)
    x = alloc.values
    f = fairness_index(alloc)
    mark = fair_mark(alloc)
    per_user = tuple(PerUser(v, v / mark, _classify(v, mark)) for v in x)
    return FairnessReport(
        fairness=f,
        discrimination=1.0 - f,
        fair_mark=mark,
        mean=math.fsum(x) / len(x),
        per_user=per_user,
    )


def legacy_indices(alloc: Allocation | Sequence[float]) -> LegacyIndices:
    """Older measures kept for comparison: sample variance, COV and min/max ratio.

    Variance uses the ``n - 1`` divisor and is ``None`` for a single user. The
    COV returned here is the population standard deviation over the mean. Some
    older literature instead divides the variance by the mean (giving 1.33 for
    allocations 1, 3, 5); that form is not dimensionless and is not offered.
    """
    alloc = as_allocation(alloc)
    m = moments(alloc)
    return LegacyIndices(
        variance_sample=m.variance_sample,
        cov_pop=m.cov_pop,
        min_max_ratio=min(alloc.values) / max(alloc.values),
    )


def demand_normalize(
    allocations: Sequence[float],
    demands: Sequence[float],
    cap: bool = True,
    metric_label: str = "fraction-of-demand",
) -> Allocation:
    """Express each allocation as a fraction of that user's demand.

    With ``cap`` set, receiving more than the demand counts as full
    satisfaction (``min(a/d, 1)``). Without it the raw ratio is kept, which is
    the right form when ``demands`` are entitlements rather than needs.
    """
    allocations = list(allocations)
    demands = list(demands)
    if len(allocations) != len(demands):
        raise InvalidDemand(
            f"got {len(allocations)} allocations but {len(demands)} demands"
        )
    for i, d in enumerate(demands):
        if not math.isfinite(d) or d <= 0:
            raise InvalidDemand(f"demand {i} must be a finite number > 0, got {d!r}")
    for i, a in enumerate(allocations):
        if a < 0:
            raise InvalidAllocation(f"value {i} is negative: {a!r}")
    ratios = [a / d for a, d in zip(allocations, demands)]
    if cap:
        ratios = [min(r, 1.0) for r in ratios]
    return Allocation(tuple(ratios), metric_label=metric_label)
