"""Window flow control on a shared multi-hop path.

``n`` virtual circuits share an ``h``-hop path and circuit ``i`` keeps at most
``c_i`` packets outstanding. With unit-mean exponential service at each hop
and at the acknowledging sink, the path is a cyclic closed network of
``h + 1`` identical servers carrying ``C = sum c_i`` packets. Exact mean value
analysis for this balanced network gives a total response time of ``h + C``.
Circuits share the chain throughput in proportion to their window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import fairness_index
from .errors import InvalidParameter

METRICS = ("response", "throughput", "power", "window")


@dataclass(frozen=True)
class WindowScenario:
    hops: int
    windows: tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.hops, bool) or not isinstance(self.hops, int) or self.hops < 1:
            raise InvalidParameter(f"hops must be a positive integer, got {self.hops!r}")
        windows = tuple(self.windows)
        if not windows:
            raise InvalidParameter("at least one virtual circuit is required")
        for i, c in enumerate(windows):
            if isinstance(c, bool) or not isinstance(c, int) or c < 1:
                raise InvalidParameter(f"window {i} must be a positive integer, got {c!r}")
        object.__setattr__(self, "windows", windows)

    @property
    def total_window(self) -> int:
        return sum(self.windows)

    @property
    def n(self) -> int:
        return len(self.windows)


@dataclass(frozen=True)
class UserMetrics:
    throughput: float
    response: float

    @property
    def power(self) -> float:
        return self.throughput / self.response


@dataclass(frozen=True)
class MvaSolution:
    population: int
    per_queue_lengths: tuple[float, ...]
    per_queue_response: tuple[float, ...]
    network_response: float
    network_throughput: float


def mva_solve(servers: int, population: int) -> MvaSolution:
    """Exact MVA for a cyclic network of identical unit-rate exponential servers.

    Iterates population 1..N: the response at each queue is one service time
    plus the mean queue length seen with one fewer customer, throughput follows
    from the total response, and Little's law updates the queue lengths.
    """
    if servers < 1:
        raise InvalidParameter(f"servers must be >= 1, got {servers!r}")
    if population < 1:
        raise InvalidParameter(f"population must be >= 1, got {population!r}")
    q = [0.0] * servers
    resp = [0.0] * servers
    total = 0.0
    x = 0.0
    for k in range(1, population + 1):
        resp = [1.0 + qi for qi in q]
        total = math.fsum(resp)
        x = k / total
        q = [x * r for r in resp]
    return MvaSolution(
        population=population,
        per_queue_lengths=tuple(q),
        per_queue_response=tuple(resp),
        network_response=total,
        network_throughput=x,
    )


def user_metrics(scenario: WindowScenario) -> list[UserMetrics]:
    """Per-circuit throughput, response time and power.

    Throughput ``c_i / (h + C)``, response ``h + C``, power ``c_i / (h + C)^2``,
    all in units of one service time.
    """
    C = scenario.total_window
    sol = mva_solve(scenario.hops + 1, C)
    return [
        UserMetrics(throughput=c / C * sol.network_throughput, response=sol.network_response)
        for c in scenario.windows
    ]


def metric_fairness(scenario: WindowScenario, metric: str) -> float:
    """Fairness index of the chosen per-circuit metric.

    Response time is the same for every circuit, so its fairness is 1. The
    other three metrics are all proportional to the window and share
    its fairness.
    """
    if metric not in METRICS:
        raise InvalidParameter(f"metric must be one of {', '.join(METRICS)}, got {metric!r}")
    if metric == "window":
        return fairness_index(scenario.windows)
    users = user_metrics(scenario)
    if metric == "response":
        return fairness_index([u.response for u in users])
    if metric == "throughput":
        return fairness_index([u.throughput for u in users])
    return fairness_index([u.power for u in users])


def sna_scenario(hops: int, at_min: int, at_max: int, ratio: int = 3) -> WindowScenario:
    """Windows pinned at the SNA bounds: ``at_min`` circuits at ``h``, ``at_max`` at ``ratio * h``."""
    if at_min < 0 or at_max < 0 or at_min + at_max < 1:
        raise InvalidParameter(
            f"need at least one circuit, got at_min={at_min!r}, at_max={at_max!r}"
        )
    if ratio < 1:
        raise InvalidParameter(f"ratio must be >= 1, got {ratio!r}")
    return WindowScenario(hops, (hops,) * at_min + (ratio * hops,) * at_max)

