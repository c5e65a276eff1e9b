import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from paretonav import (
    ConfigError,
    ConstraintRule,
    CriterionConfig,
    DataError,
    ObjectiveSpec,
    PiecewiseRule,
    ahp_scores,
    build_population,
    mew_scores,
    piecewise_criterion,
    principal_eigenvector,
    saw_scores,
    scaled_pnorm,
    weighted_pnorm,
)

W_75_25 = CriterionConfig(p=1, weights=[0.75, 0.25])


def cfg(p, *weights):
    return CriterionConfig(p=p, weights=list(weights))


class TestScaledPnorm:
    def test_p1_example(self):
        assert scaled_pnorm([0.2, 0.8], cfg(1, 0.75, 0.25)) == pytest.approx(0.35, abs=1e-15)

    def test_tchebycheff_example(self):
        assert scaled_pnorm([0.2, 0.8], cfg(math.inf, 0.75, 0.25)) == 0.2

    def test_origin_is_zero_for_any_config(self):
        for p in (1, 2, 8, 64, math.inf):
            assert scaled_pnorm([0.0, 0.0, 0.0], cfg(p, 0.2, 0.3, 0.5)) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ConfigError):
            scaled_pnorm([0.1], cfg(2, 0.5, 0.5))

    def test_non_finite_input(self):
        with pytest.raises(DataError):
            scaled_pnorm([float("nan"), 0.1], cfg(2, 0.5, 0.5))

    def test_no_underflow_at_large_p(self):
        # naive |w*u|^p underflows to 0 here; the rescaled form must not
        value = scaled_pnorm([1e-4, 2e-4], cfg(256, 0.5, 0.5))
        assert value == pytest.approx(1e-4, rel=1e-6)

    @given(
        st.lists(st.floats(min_value=0, max_value=1), min_size=1, max_size=6),
        st.floats(min_value=0.01, max_value=50),
        st.sampled_from([1.0, 2.0, 8.0, math.inf]),
    )
    def test_absolute_homogeneity(self, u, c, p):
        config = CriterionConfig(p=p, weights=np.full(len(u), 1.0 / len(u)))
        lhs = scaled_pnorm([c * v for v in u], config)
        rhs = c * scaled_pnorm(u, config)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            k = int(rng.integers(1, 6))
            config = CriterionConfig(p=rng.choice([1.0, 2.0, 4.0, math.inf]),
                                     weights=rng.dirichlet(np.ones(k)))
            a, b = rng.uniform(-1, 1, size=(2, k))
            assert scaled_pnorm(a + b, config) <= (
                scaled_pnorm(a, config) + scaled_pnorm(b, config) + 1e-12
            )

    def test_monotone_in_each_component(self):
        rng = np.random.default_rng(4)
        config = cfg(4, 0.3, 0.3, 0.4)
        for _ in range(100):
            u = rng.uniform(0, 1, size=3)
            j = rng.integers(3)
            bigger = u.copy()
            bigger[j] += 0.1
            assert scaled_pnorm(bigger, config) >= scaled_pnorm(u, config)

    def test_p64_close_to_infinity(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            k = int(rng.integers(1, 9))
            u = rng.uniform(0, 1, size=k)
            w = rng.dirichlet(np.ones(k))
            v64 = scaled_pnorm(u, CriterionConfig(p=64, weights=w))
            vinf = scaled_pnorm(u, CriterionConfig(p=math.inf, weights=w))
            assert v64 == pytest.approx(vinf, rel=1e-2)

    def test_weight_ratio_semantics(self):
        # with weights (0.75, 0.25), u2 = 3*u1 contributes exactly as much
        for u1 in (0.25, 0.125, 0.0625):
            u2 = 3 * u1
            assert 0.75 * u1 == 0.25 * u2
            config = cfg(math.inf, 0.75, 0.25)
            assert scaled_pnorm([u1, u2], config) == 0.75 * u1


class TestWeightedPnorm:
    def test_p2_example(self):
        got = weighted_pnorm([0.2, 0.8], cfg(2, 0.5, 0.5))
        assert got == pytest.approx(math.sqrt(0.34), rel=1e-12)
        assert got == pytest.approx(0.58310, abs=5e-6)

    def test_infinity_ignores_weights(self):
        rng = np.random.default_rng(1)
        u = [0.3, 0.9, 0.1]
        for _ in range(50):
            w = rng.dirichlet(np.ones(3))
            assert weighted_pnorm(u, CriterionConfig(p=math.inf, weights=w)) == 0.9

    def test_single_component(self):
        for p in (1, 2, 7, math.inf):
            assert weighted_pnorm([0.3], cfg(p, 1.0)) == pytest.approx(0.3, rel=1e-12)


class TestPrincipalEigenvector:
    def test_identity_returns_uniform(self):
        v = principal_eigenvector(np.eye(3))
        assert v.tolist() == [1 / 3, 1 / 3, 1 / 3]

    def test_reciprocal_2x2(self):
        v = principal_eigenvector([[1.0, 1 / 9], [9.0, 1.0]])
        assert v == pytest.approx([0.1, 0.9], abs=1e-9)

    def test_matches_dense_solver_on_random_positive(self):
        rng = np.random.default_rng(12)
        for _ in range(30):
            a = rng.uniform(0.1, 10.0, size=(4, 4))
            v = principal_eigenvector(a)
            lam, vecs = np.linalg.eig(a)
            dom = np.argmax(lam.real)
            ref = np.abs(vecs[:, dom].real)
            ref = ref / ref.sum()
            assert np.abs(v - ref).max() < 1e-6
            assert v.min() >= 0 and v.sum() == pytest.approx(1.0, abs=1e-12)

    def test_budget_exhaustion_reports_last_step(self):
        # nearly-equal eigenvalues converge too slowly for a tiny budget
        with pytest.raises(DataError, match="did not converge"):
            principal_eigenvector([[1.0, 0.001], [0.002, 1.0]], max_iter=50)

    def test_rejects_negative_and_non_square(self):
        with pytest.raises(ConfigError):
            principal_eigenvector([[1.0, -2.0], [1.0, 1.0]])
        with pytest.raises(ConfigError):
            principal_eigenvector([[1.0, 2.0, 3.0]])


def two_maximize_pop():
    return build_population(
        ["m1", "m2"],
        [ObjectiveSpec("s1", "maximize"), ObjectiveSpec("s2", "maximize")],
        [[10.0, 1.0], [5.0, 3.0]],
    )


class TestSaw:
    def test_worked_example(self):
        scores = saw_scores(two_maximize_pop(), [0.5, 0.5])
        assert scores.tolist() == [2.0, 1.5]
        assert int(np.argmin(scores)) == 1

    def test_identical_rows_tie(self):
        pop = build_population(
            ["a", "b"], [ObjectiveSpec("s", "maximize")], [[2.0], [2.0]]
        )
        scores = saw_scores(pop, [1.0])
        assert scores[0] == scores[1]

    def test_one_hot_reduces_to_single_objective(self):
        pop = build_population(
            ["a", "b"],
            [ObjectiveSpec("s", "maximize"), ObjectiveSpec("t", "maximize")],
            [[10.0, 1.0], [5.0, 100.0]],
        )
        scores = saw_scores(pop, [1.0, 0.0])
        assert scores.tolist() == [1.0, 2.0]
        assert int(np.argmin(scores)) == 0

    def test_propagates_maxnorm_errors(self):
        pop = build_population(["a"], [ObjectiveSpec("s")], [[-1.0]])
        with pytest.raises(DataError):
            saw_scores(pop, [1.0])


class TestAhp:
    def test_single_objective_two_models(self):
        pop = build_population(
            ["good", "bad"], [ObjectiveSpec("z", "maximize")], [[2.0], [1.0]]
        )
        # maxnorm gives z = [1, 2]; comparison matrix [[1, 1/9], [9, 1]]
        scores = ahp_scores(pop, [1.0])
        assert scores == pytest.approx([0.1, 0.9], abs=1e-9)
        assert int(np.argmin(scores)) == 0

    def test_constant_column_uniform(self):
        pop = build_population(
            ["a", "b", "c", "d"], [ObjectiveSpec("z")], [[3.0]] * 4
        )
        assert ahp_scores(pop, [1.0]) == pytest.approx([0.25] * 4)

    def test_single_model(self):
        pop = build_population(["a"], [ObjectiveSpec("z")], [[5.0]])
        assert ahp_scores(pop, [1.0]).tolist() == [1.0]

    def test_scores_sum_to_one_and_non_negative(self):
        rng = np.random.default_rng(21)
        for _ in range(10):
            n, k = int(rng.integers(2, 9)), int(rng.integers(1, 4))
            pop = build_population(
                [f"m{i}" for i in range(n)],
                [ObjectiveSpec(f"o{j}") for j in range(k)],
                rng.uniform(0.5, 5.0, size=(n, k)),
            )
            scores = ahp_scores(pop, rng.dirichlet(np.ones(k)))
            assert scores.min() >= 0
            assert scores.sum() == pytest.approx(1.0, abs=1e-9)


class TestMew:
    def test_worked_example(self):
        scores = mew_scores(two_maximize_pop(), [0.5, 0.5])
        assert scores == pytest.approx([math.sqrt(3.0), math.sqrt(2.0)], rel=1e-12)
        assert int(np.argmin(scores)) == 1

    def test_one_hot_is_that_column(self):
        pop = two_maximize_pop()
        scores = mew_scores(pop, [0.0, 1.0])
        assert scores == pytest.approx([3.0, 1.0], rel=1e-12)

    def test_identical_rows_tie(self):
        pop = build_population(
            ["a", "b"], [ObjectiveSpec("s")], [[2.0], [2.0]]
        )
        scores = mew_scores(pop, [1.0])
        assert scores[0] == scores[1]


class TestPiecewise:
    def low_co2_rules(self):
        light = cfg(8, 0.99, 0.01)
        heavy = cfg(8, 0.01, 0.99)
        return [
            PiecewiseRule(config=light, guard=ConstraintRule("co2", "<", 0.5)),
            PiecewiseRule(config=heavy),
        ]

    def test_first_matching_guard_wins(self):
        rules = self.low_co2_rules()
        u, raw = [0.4, 0.6], [0.9, 0.3]  # co2 = 0.3 < 0.5
        got = piecewise_criterion(u, raw, rules, ["perf", "co2"])
        assert got == scaled_pnorm(u, rules[0].config)

    def test_strict_boundary_falls_through(self):
        rules = self.low_co2_rules()
        u, raw = [0.4, 0.6], [0.9, 0.5]  # co2 exactly at the strict bound
        got = piecewise_criterion(u, raw, rules, ["perf", "co2"])
        assert got == scaled_pnorm(u, rules[1].config)

    def test_single_default_rule_equals_plain_norm(self):
        config = cfg(2, 0.5, 0.5)
        u = [0.2, 0.7]
        got = piecewise_criterion(u, [1.0, 1.0], [PiecewiseRule(config=config)], ["a", "b"])
        assert got == scaled_pnorm(u, config)

    def test_no_match_without_default_raises(self):
        rules = [PiecewiseRule(config=cfg(1, 1.0, 0.0), guard=ConstraintRule("b", "<", 0.0))]
        with pytest.raises(ConfigError, match="no piecewise rule"):
            piecewise_criterion([0.1, 0.2], [1.0, 1.0], rules, ["a", "b"])

    def test_unknown_guard_objective(self):
        rules = [PiecewiseRule(config=cfg(1, 0.5, 0.5), guard=ConstraintRule("zz", "<", 0.0))]
        with pytest.raises(ConfigError, match="zz"):
            piecewise_criterion([0.1, 0.2], [1.0, 1.0], rules, ["a", "b"])
