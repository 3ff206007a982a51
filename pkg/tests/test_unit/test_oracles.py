"""Unit tests for the brute-force counting oracles."""
import numpy as np
import pytest

from nesyverify.logic import (
    And,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    VariablePool,
    count_models,
    emajsat_brute,
    parse_formula,
    random_formula,
    restricted_counts,
    variables,
    wmc_brute,
    wmc_partial,
)
from nesyverify.utils.errors import EnumerationGuardError, PartitionError


def _xy(text, n, m):
    pool = VariablePool([f"x{i}" for i in range(n)] + [f"y{j}" for j in range(m)])
    f = parse_formula(text, pool)
    return f, pool.variables[:n], pool.variables[n:]


def _rename(f, mapping):
    if isinstance(f, Var):
        return Var(mapping[f.var])
    if isinstance(f, Not):
        return Not(_rename(f.child, mapping))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_rename(c, mapping) for c in f.children))
    if isinstance(f, (Implies, Iff)):
        return type(f)(_rename(f.left, mapping), _rename(f.right, mapping))
    return f


class TestCountModels:
    def test_driving(self, driving):
        f, _ = driving
        assert count_models(f) == 5

    def test_partial_assignment(self, driving):
        f, pool = driving
        assert count_models(f, {pool["b"]: True}) == 4
        assert count_models(f, {pool["a"]: True}) == 1
        assert count_models(f, {pool["a"]: True, pool["b"]: True}) == 0

    def test_unmentioned_variables_are_free(self, driving):
        f, pool = driving
        pool.add("z")
        assert count_models(f, over=pool.variables) == 10

    def test_over_must_cover_formula(self, driving):
        f, pool = driving
        with pytest.raises(ValueError, match="outside the enumeration set"):
            count_models(f, over=[pool["a"], pool["b"]])

    def test_guard(self, driving):
        f, _ = driving
        with pytest.raises(EnumerationGuardError):
            count_models(f, max_vars=3)

    def test_spans_several_blocks(self):
        pool = VariablePool([f"v{i}" for i in range(17)])
        f = Or(tuple(Var(v) for v in pool))
        assert count_models(f) == (1 << 17) - 1


class TestWmcBrute:
    def test_driving_golden(self, driving, driving_weights):
        f, _ = driving
        assert wmc_brute(f, driving_weights) == pytest.approx(0.4972, abs=1e-12)

    def test_uniform_weights_give_fraction_of_models(self, driving):
        f, pool = driving
        assert wmc_brute(f, {v: 0.5 for v in pool}) == pytest.approx(0.3125, abs=1e-15)

    def test_weight_out_of_range(self, driving, driving_weights):
        f, pool = driving
        with pytest.raises(ValueError, match="must lie in"):
            wmc_brute(f, {**driving_weights, pool["a"]: 1.5})

    def test_missing_weight(self, driving, driving_weights):
        f, pool = driving
        weights = dict(driving_weights)
        del weights[pool["r"]]
        with pytest.raises(ValueError, match="Missing weights for: r"):
            wmc_brute(f, weights)


class TestRestrictedCounts:
    def test_counts_per_x(self):
        f, xs, ys = _xy("x0 | y0", 1, 2)
        assert restricted_counts(f, xs, ys).tolist() == [2, 4]

    def test_x_bits_order(self):
        f, xs, ys = _xy("x0 & !x1 & y0", 2, 1)
        # entry r assigns bit j of r to x_j
        assert restricted_counts(f, xs, ys).tolist() == [0, 1, 0, 0]

    def test_partition_overlap(self):
        f, xs, ys = _xy("x0 | y0", 1, 1)
        with pytest.raises(PartitionError, match="both lists"):
            restricted_counts(f, xs, xs + ys)

    def test_partition_must_cover(self):
        f, xs, ys = _xy("x0 | y0", 1, 1)
        with pytest.raises(PartitionError, match="not covered"):
            restricted_counts(f, xs, [])

    def test_partition_duplicates(self):
        f, xs, ys = _xy("x0 | y0", 1, 1)
        with pytest.raises(PartitionError, match="duplicates"):
            restricted_counts(f, xs + xs, ys)

    def test_guard(self):
        f, xs, ys = _xy("x0 | y0", 1, 1)
        with pytest.raises(EnumerationGuardError):
            restricted_counts(f, xs, ys, max_vars=1)


class TestEmajsatBrute:
    def test_exactly_half_is_inclusive(self):
        f, xs, ys = _xy("x0 & y0", 1, 1)
        assert emajsat_brute(f, xs, ys) is True

    def test_below_half(self):
        f, xs, ys = _xy("x0 & y0 & y1", 1, 2)
        assert emajsat_brute(f, xs, ys) is False

    def test_no_counting_variables(self):
        f, xs, ys = _xy("x0 & !x1", 2, 0)
        assert emajsat_brute(f, xs, ys) is True
        f, xs, ys = _xy("x0 & !x0", 1, 0)
        assert emajsat_brute(f, xs, ys) is False

    def test_no_existential_variables(self):
        f, xs, ys = _xy("y0 | y1", 0, 2)
        assert emajsat_brute(f, xs, ys) is True


class TestWmcPartial:
    def test_matches_brute_force(self, rng):
        pool = VariablePool(["x0", "x1", "x2", "y0", "y1", "y2"])
        xs, ys = pool.variables[:3], pool.variables[3:]
        for _ in range(25):
            f = random_formula(rng, pool.variables, depth=3, use_all=True)
            w = {v: float(rng.uniform()) for v in pool}
            assert wmc_partial(f, w, xs, ys) == pytest.approx(wmc_brute(f, w), abs=1e-12)

    def test_half_weights_are_scaled_counts(self, rng):
        pool = VariablePool(["x0", "x1", "y0", "y1", "y2"])
        xs, ys = pool.variables[:2], pool.variables[2:]
        f = random_formula(rng, pool.variables, depth=3, use_all=True)
        w = {v: float(rng.uniform()) for v in xs}
        w.update({v: 0.5 for v in ys})
        counts = restricted_counts(f, xs, ys)
        expected = 0.0
        for r, count in enumerate(counts):
            p = 1.0
            for j, v in enumerate(xs):
                p *= w[v] if (r >> j) & 1 else 1.0 - w[v]
            expected += p * count / 2 ** len(ys)
        assert wmc_partial(f, w, xs, ys) == pytest.approx(expected, abs=1e-12)


class TestRandomFormula:
    def test_use_all_mentions_every_variable(self, rng):
        pool = VariablePool([f"v{i}" for i in range(6)])
        for _ in range(20):
            f = random_formula(rng, pool.variables, depth=2, use_all=True)
            assert set(variables(f)) == set(pool.variables)

    def test_deterministic_for_seed(self):
        pool = VariablePool(["a", "b", "c"])
        f1 = random_formula(np.random.default_rng(7), pool.variables)
        f2 = random_formula(np.random.default_rng(7), pool.variables)
        assert f1 == f2


# ── Properties over random formulas ───────────────────────────────────

class TestOracleProperties:
    @pytest.fixture
    def pool(self):
        return VariablePool([f"v{i}" for i in range(6)])

    def test_formula_and_negation_sum_to_one(self, pool):
        rng = np.random.default_rng(21)
        for _ in range(40):
            f = random_formula(rng, pool.variables, depth=3)
            w = {v: float(rng.uniform()) for v in pool}
            total = wmc_brute(f, w, over=pool.variables) + wmc_brute(Not(f), w, over=pool.variables)
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_conjunction_never_gains_models(self, pool):
        rng = np.random.default_rng(22)
        for _ in range(40):
            f = random_formula(rng, pool.variables, depth=3)
            g = random_formula(rng, pool.variables, depth=3)
            both = count_models(And((f, g)), over=pool.variables)
            assert both <= count_models(f, over=pool.variables)
            assert both <= count_models(g, over=pool.variables)

    def test_emajsat_invariant_under_renaming(self):
        rng = np.random.default_rng(23)
        pool = VariablePool(["x0", "x1", "x2", "y0", "y1", "y2"])
        xs, ys = pool.variables[:3], pool.variables[3:]
        for _ in range(40):
            f = random_formula(rng, pool.variables, depth=3, use_all=True)
            order = rng.permutation(len(pool))
            renamed = VariablePool([f"u{k}" for k in range(len(pool))])
            mapping = {v: renamed[int(order[v.index])] for v in pool}
            g = _rename(f, mapping)
            expected = emajsat_brute(f, xs, ys)
            assert emajsat_brute(g, [mapping[v] for v in xs], [mapping[v] for v in ys]) == expected

    def test_emajsat_invariant_under_partition_order(self):
        rng = np.random.default_rng(24)
        pool = VariablePool(["x0", "x1", "y0", "y1", "y2"])
        xs, ys = pool.variables[:2], pool.variables[2:]
        for _ in range(40):
            f = random_formula(rng, pool.variables, depth=3, use_all=True)
            expected = emajsat_brute(f, xs, ys)
            shuffled_x = [xs[int(i)] for i in rng.permutation(len(xs))]
            shuffled_y = [ys[int(i)] for i in rng.permutation(len(ys))]
            assert emajsat_brute(f, shuffled_x, shuffled_y) == expected
