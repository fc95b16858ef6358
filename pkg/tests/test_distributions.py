import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairindex import (
    DistributionSpec,
    InvalidParameter,
    analytic_moments,
    coefficient_of_fairness,
    fairness_index,
    monte_carlo_cof,
)
from oracles import quad_moments


def _pdf(dist):
    p = dist.params
    if dist.family == "exponential":
        lam = p["lambda"]
        return (lambda x: lam * math.exp(-lam * x)), 0.0, math.inf
    if dist.family == "erlang":
        c, lam = p["c"], p["lambda"]
        return (lambda x: (lam * x) ** (c - 1) * lam * math.exp(-lam * x) / math.factorial(c - 1)), 0.0, math.inf
    if dist.family == "uniform":
        a, b = p["a"], p["b"]
        return (lambda x: 1.0 / (b - a)), a, b
    m, s = p["m"], p["sigma"]
    return (
        lambda x: math.exp(-((math.log(x / m)) ** 2) / (2 * s * s)) / (x * s * math.sqrt(2 * math.pi)) if x > 0 else 0.0
    ), 0.0, math.inf


QUAD_CASES = [
    DistributionSpec.exponential(1.7),
    DistributionSpec.erlang(3, 0.5),
    DistributionSpec.erlang(1, 2.0),
    DistributionSpec.uniform(0.0, 1.0),
    DistributionSpec.uniform(2.0, 5.0),
    DistributionSpec.lognormal(1.0, 0.5),
    DistributionSpec.lognormal(2.5, 1.0),
]


class TestSpec:
    @pytest.mark.parametrize(
        "family, params, needle",
        [
            ("normal", {}, "unknown family"),
            ("exponential", {"lambda": 0.0}, "lambda must be > 0"),
            ("exponential", {}, "missing"),
            ("exponential", {"lambda": 1.0, "c": 2}, "unexpected"),
            ("erlang", {"c": 2.5, "lambda": 1.0}, "c must be a positive integer"),
            ("erlang", {"c": 0, "lambda": 1.0}, "c must be a positive integer"),
            ("uniform", {"a": -1.0, "b": 1.0}, "a must be >= 0"),
            ("uniform", {"a": 2.0, "b": 2.0}, "b must be > a"),
            ("lognormal", {"m": 1.0, "sigma": 0.0}, "sigma must be > 0"),
            ("constant", {"a": 0.0}, "a must be > 0"),
        ],
    )
    def test_invalid_parameters_named(self, family, params, needle):
        with pytest.raises(InvalidParameter, match=needle):
            DistributionSpec(family, params)

    def test_params_frozen(self):
        d = DistributionSpec.erlang(4, 2)
        assert d.params["c"] == 4 and isinstance(d.params["c"], int)
        with pytest.raises(TypeError):
            d.params["c"] = 5


class TestAnalytic:
    def test_exponential_moments(self):
        assert analytic_moments(DistributionSpec.exponential(2.0)) == (0.5, 0.5)

    def test_erlang_moments(self):
        assert analytic_moments(DistributionSpec.erlang(3, 2.0)) == (1.5, 3.0)

    def test_constant(self):
        assert analytic_moments(DistributionSpec.constant(7.0)) == (7.0, 49.0)
        assert coefficient_of_fairness(DistributionSpec.constant(7.0)) == 1.0

    @pytest.mark.parametrize("lam", [0.1, 1.0, 3.0, 250.0])
    def test_exponential_half(self, lam):
        assert coefficient_of_fairness(DistributionSpec.exponential(lam)) == pytest.approx(0.5, abs=1e-15)

    def test_erlang_four(self):
        assert coefficient_of_fairness(DistributionSpec.erlang(4, 0.3)) == pytest.approx(0.8, abs=1e-15)

    def test_lognormal_sigma_one(self):
        assert coefficient_of_fairness(DistributionSpec.lognormal(3.0, 1.0)) == pytest.approx(math.exp(-1), abs=1e-15)

    def test_uniform_unit(self):
        m1, m2 = quad_moments(lambda x: 1.0, 0.0, 1.0)
        assert m1 * m1 / m2 == pytest.approx(0.75, abs=1e-12)
        assert coefficient_of_fairness(DistributionSpec.uniform(0.0, 1.0)) == pytest.approx(0.75, abs=1e-15)

    def test_uniform_printed_cell_is_reciprocal(self):
        a, b = 0.0, 1.0
        printed = 4 * (a * a + a * b + b * b) / (3 * (a + b) ** 2)
        assert printed > 1
        assert coefficient_of_fairness(DistributionSpec.uniform(a, b)) == pytest.approx(1 / printed, abs=1e-15)

    @pytest.mark.parametrize("dist", QUAD_CASES, ids=repr)
    def test_moments_match_quadrature(self, dist):
        pdf, lo, hi = _pdf(dist)
        q1, q2 = quad_moments(pdf, lo, hi)
        m1, m2 = analytic_moments(dist)
        assert m1 == pytest.approx(q1, rel=1e-7)
        assert m2 == pytest.approx(q2, rel=1e-7)

    @given(st.floats(0.01, 100), st.floats(0.01, 100))
    def test_scale_invariance(self, base, c):
        pairs = [
            (DistributionSpec.exponential(base), DistributionSpec.exponential(c * base)),
            (DistributionSpec.erlang(5, base), DistributionSpec.erlang(5, c * base)),
            (DistributionSpec.uniform(base, 2 * base), DistributionSpec.uniform(c * base, 2 * c * base)),
            (DistributionSpec.lognormal(base, 0.7), DistributionSpec.lognormal(c * base, 0.7)),
        ]
        for d1, d2 in pairs:
            assert coefficient_of_fairness(d1) == pytest.approx(coefficient_of_fairness(d2), abs=1e-12)

    @given(st.sampled_from(["exponential", "erlang", "uniform", "lognormal"]), st.data())
    def test_cof_is_moment_ratio_in_unit_interval(self, family, data):
        pos = st.floats(0.01, 50)
        if family == "exponential":
            d = DistributionSpec.exponential(data.draw(pos))
        elif family == "erlang":
            d = DistributionSpec.erlang(data.draw(st.integers(1, 500)), data.draw(pos))
        elif family == "uniform":
            a = data.draw(st.floats(0, 50))
            d = DistributionSpec.uniform(a, a + data.draw(pos))
        else:
            d = DistributionSpec.lognormal(data.draw(pos), data.draw(st.floats(0.01, 3)))
        m1, m2 = analytic_moments(d)
        cof = coefficient_of_fairness(d)
        assert cof == m1 * m1 / m2
        assert 0 < cof <= 1.0

    def test_erlang_limit(self):
        cs = [1, 2, 5, 10, 100, 1000, 10_000]
        vals = [coefficient_of_fairness(DistributionSpec.erlang(c, 1.0)) for c in cs]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert vals[-1] == pytest.approx(1.0, abs=1e-4)


class TestMonteCarlo:
    def test_constant_exact(self):
        assert monte_carlo_cof(DistributionSpec.constant(3.3), 1000, 5) == (1.0, 0.0)

    def test_reproducible(self):
        d = DistributionSpec.erlang(3, 1.0)
        assert monte_carlo_cof(d, 5000, 11) == monte_carlo_cof(d, 5000, 11)
        assert monte_carlo_cof(d, 5000, 11) != monte_carlo_cof(d, 5000, 12)

    def test_too_few_samples(self):
        with pytest.raises(InvalidParameter):
            monte_carlo_cof(DistributionSpec.exponential(1.0), 99, 0)

    def test_erlang_blocks_match_single_draw_count(self):
        # block boundaries do not change the number of variates
        d = DistributionSpec.erlang(7, 1.0)
        rng = np.random.default_rng(3)
        from fairindex.distributions import sample

        assert sample(d, 300_001, rng).shape == (300_001,)

    def test_exponential(self):
        est, se = monte_carlo_cof(DistributionSpec.exponential(1.0), 10**6, 1)
        assert abs(est - 0.5) <= 3 * se

    def test_erlang_two(self):
        est, se = monte_carlo_cof(DistributionSpec.erlang(2, 1.0), 10**6, 2)
        assert abs(est - 2 / 3) <= 3 * se

    def test_std_error_tracks_spread(self):
        # over repeated seeds the estimates scatter by roughly the reported error
        d = DistributionSpec.uniform(0.0, 1.0)
        runs = [monte_carlo_cof(d, 2000, s) for s in range(200)]
        ests = np.array([e for e, _ in runs])
        ses = np.array([s for _, s in runs])
        assert ests.std() == pytest.approx(ses.mean(), rel=0.25)

    @settings(max_examples=10, deadline=None)
    @given(st.sampled_from(["exponential", "erlang", "uniform", "lognormal"]), st.data())
    def test_random_parameters_within_four_se(self, family, data):
        pos = st.floats(0.1, 10)
        if family == "exponential":
            d = DistributionSpec.exponential(data.draw(pos))
        elif family == "erlang":
            d = DistributionSpec.erlang(data.draw(st.integers(1, 6)), data.draw(pos))
        elif family == "uniform":
            a = data.draw(st.floats(0, 10))
            d = DistributionSpec.uniform(a, a + data.draw(pos))
        else:
            d = DistributionSpec.lognormal(data.draw(pos), data.draw(st.floats(0.1, 1.0)))
        est, se = monte_carlo_cof(d, 10**6, data.draw(st.integers(0, 2**31)))
        assert abs(est - coefficient_of_fairness(d)) <= 4 * se

    def test_sample_fairness_index_matches(self):
        from fairindex.distributions import sample

        d = DistributionSpec.erlang(3, 2.0)
        x = sample(d, 200_000, np.random.default_rng(9))
        assert fairness_index(x) == pytest.approx(0.75, abs=5e-3)
