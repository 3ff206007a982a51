"""Unit tests for decision-DNNF compilation and the arithmetic-circuit translation."""
import itertools
import logging

import numpy as np
import pytest

from nesyverify.circuit import evaluate
from nesyverify.compiler import (
    Compiler,
    DnnfGraph,
    DnnfKind,
    build_sum_circuit,
    compile_formula,
    compile_text,
    compile_to_circuit,
    driving_formula,
    smooth,
    sum_formula,
    to_arith_circuit,
)
from nesyverify.logic import (
    And,
    VariablePool,
    count_models,
    evaluate as evaluate_formula,
    parse_formula,
    random_formula,
    wmc_brute,
)
from nesyverify.utils.errors import CompileError, EnumerationGuardError


# ── Decision-DNNF ─────────────────────────────────────────────────────

class TestCompileFormula:
    def test_driving_model_count(self, driving):
        f, _ = driving
        assert compile_formula(f).model_count(4) == 5

    def test_driving_wmc(self, driving, driving_weights):
        f, _ = driving
        weights = {v.index: p for v, p in driving_weights.items()}
        assert compile_formula(f).wmc(weights) == pytest.approx(0.4972, abs=1e-12)

    def test_order_does_not_change_counts(self, driving):
        f, pool = driving
        d = compile_formula(f, order=[pool[n] for n in "abcr"])
        assert d.model_count(4) == 5

    def test_order_must_be_permutation(self, driving):
        f, pool = driving
        with pytest.raises(CompileError, match="permutation"):
            compile_formula(f, order=[pool["a"], pool["b"]])

    def test_guard(self, driving):
        f, _ = driving
        with pytest.raises(EnumerationGuardError):
            compile_formula(f, max_vars=3)

    def test_contradiction_compiles_to_false(self):
        d = compile_formula(parse_formula("a & !a"))
        assert d.is_false()
        assert d.model_count(1) == 0

    def test_tautology_keeps_its_variable(self):
        d = compile_formula(parse_formula("a | !a"))
        assert d.model_count(1) == 2
        assert d.wmc({0: 0.3}) == pytest.approx(1.0)

    def test_independent_parts_become_conjunction(self):
        d = compile_formula(parse_formula("(a | b) & (c | d)"))
        assert d.node.kind is DnnfKind.AND
        assert d.model_count(4) == 9

    def test_shared_compiler_reuses_cache(self, driving):
        f, pool = driving
        compiler = Compiler(pool.variables)
        first = compile_formula(f, compiler=compiler)
        hits = compiler.cache.hits
        second = compile_formula(f, compiler=compiler)
        assert first.root == second.root
        assert compiler.cache.hits > hits

    def test_random_formulas_match_brute_force(self, rng):
        pool = VariablePool([f"v{i}" for i in range(5)])
        for _ in range(40):
            f = random_formula(rng, pool.variables, depth=3, use_all=True)
            d = compile_formula(f)
            assert d.model_count(5) == count_models(f, over=pool.variables)
            w = {v: float(rng.uniform()) for v in pool}
            assert d.wmc({v.index: p for v, p in w.items()}) == pytest.approx(
                wmc_brute(f, w), abs=1e-12
            )


class TestDnnfGraph:
    def test_conj_rejects_shared_variables(self):
        g = DnnfGraph()
        with pytest.raises(CompileError, match="decomposable"):
            g.conj([g.literal(0, True), g.literal(0, False)])

    def test_decision_rejects_own_variable(self):
        g = DnnfGraph()
        with pytest.raises(CompileError, match="must not mention"):
            g.decision(0, g.literal(0, True), g.true)

    def test_structural_hashing(self):
        g = DnnfGraph()
        assert g.literal(3, True) == g.literal(3, True)
        assert g.conj([]) == g.true
        assert g.conj([g.false, g.literal(1, True)]) == g.false
        assert g.decision(2, g.false, g.false) == g.false


class TestSmooth:
    def test_smoothing_preserves_semantics(self, rng):
        pool = VariablePool([f"v{i}" for i in range(5)])
        for _ in range(30):
            f = random_formula(rng, pool.variables, depth=3, use_all=True)
            d = compile_formula(f)
            s = smooth(d)
            assert s.is_smooth()
            assert s.model_count(5) == d.model_count(5)

    def test_unsmooth_input_is_rejected_by_translation(self):
        d = compile_formula(parse_formula("a | b"))
        assert not d.is_smooth()
        with pytest.raises(CompileError, match="smoothed"):
            to_arith_circuit(d)

    def test_smooth_is_idempotent(self, driving):
        f, _ = driving
        s = smooth(compile_formula(f))
        assert smooth(s).root == s.root


# ── Arithmetic circuit translation ────────────────────────────────────

class TestArithTranslation:
    def test_driving_golden(self, driving, driving_weights):
        f, pool = driving
        c = compile_to_circuit(f, num_leaves=len(pool))
        leaves = [driving_weights[v] for v in pool]
        assert evaluate(c, leaves)[0] == pytest.approx(0.4972, abs=1e-12)

    def test_random_formulas_match_brute_force(self, rng):
        pool = VariablePool([f"v{i}" for i in range(6)])
        for _ in range(30):
            f = random_formula(rng, pool.variables, depth=3, use_all=True)
            c = compile_to_circuit(f, num_leaves=len(pool))
            c.ensure_valid()
            w = {v: float(rng.uniform()) for v in pool}
            got = evaluate(c, [w[v] for v in pool])[0]
            assert got == pytest.approx(wmc_brute(f, w), abs=1e-12)

    def test_default_leaf_count(self):
        c = compile_to_circuit(parse_formula("a <-> b"))
        assert c.num_leaves == 2
        assert evaluate(c, [1.0, 1.0]) == [1.0]
        assert evaluate(c, [1.0, 0.0]) == [0.0]


class TestCompileText:
    def test_self_check(self):
        result = compile_text("((r | c) -> b) & (a <-> !b)")
        assert result.pool.names == ["r", "c", "b", "a"]
        assert result.self_check_ok is True
        assert result.self_check[0] == pytest.approx(0.3125, abs=1e-15)
        assert not result.unsatisfiable

    def test_explicit_order(self):
        result = compile_text("a & (b | c)", order=["c", "b", "a"])
        assert result.dnnf.model_count(3) == 3

    def test_unknown_order_name(self):
        with pytest.raises(CompileError, match="unknown variables: z"):
            compile_text("a & b", order=["a", "z"])

    def test_dimacs_unused_variable_keeps_leaf(self):
        result = compile_text("p cnf 3 1\n1 2 0\n")
        assert result.circuit.num_leaves == 3
        assert result.self_check_ok is True

    def test_unsatisfiable_warns(self, caplog):
        with caplog.at_level(logging.WARNING):
            result = compile_text("a & !a")
        assert result.unsatisfiable
        assert evaluate(result.circuit, [0.5]) == [0.0]
        assert "unsatisfiable" in caplog.text

    def test_self_check_skipped_above_limit(self):
        result = compile_text("a | b | c", check_max_vars=2)
        assert result.self_check is None
        assert result.self_check_ok is None


# ── Benchmark task circuits ───────────────────────────────────────────

class TestSumCircuit:
    def test_matches_convolution(self, rng):
        c = build_sum_circuit(2, 4)
        assert len(c.outputs) == 7
        p = rng.dirichlet(np.ones(4), size=2)
        got = evaluate(c, list(p.reshape(-1)))
        assert got == pytest.approx(list(np.convolve(p[0], p[1])), abs=1e-12)

    def test_three_digits_sum_to_one(self, rng):
        c = build_sum_circuit(3, 3)
        p = rng.dirichlet(np.ones(3), size=3)
        assert sum(evaluate(c, list(p.reshape(-1)))) == pytest.approx(1.0, abs=1e-12)

    def test_single_digit_is_identity(self):
        c = build_sum_circuit(1, 3)
        assert evaluate(c, [0.2, 0.3, 0.5]) == [0.2, 0.3, 0.5]

    def test_guard_and_arguments(self):
        with pytest.raises(EnumerationGuardError):
            build_sum_circuit(5, 10, max_digits=4)
        with pytest.raises(ValueError):
            build_sum_circuit(0, 10)
        with pytest.raises(ValueError):
            build_sum_circuit(2, 1)

    def test_agrees_with_boolean_encoding(self):
        pool = VariablePool()
        exactly_one, sums = sum_formula(2, 3, pool)
        assert pool.names == ["d0_0", "d0_1", "d0_2", "d1_0", "d1_1", "d1_2"]
        counts = [count_models(And((exactly_one, s)), over=pool.variables) for s in sums]
        assert counts == [1, 2, 3, 2, 1]
        c = build_sum_circuit(2, 3)
        for d0, d1 in itertools.product(range(3), repeat=2):
            leaves = [0.0] * 6
            leaves[d0] = leaves[3 + d1] = 1.0
            truth = {i: bool(v) for i, v in enumerate(leaves)}
            expected = [1.0 if evaluate_formula(s, truth) else 0.0 for s in sums]
            assert evaluate(c, leaves) == expected

    def test_compiled_encoding_matches_on_one_hot(self):
        pool = VariablePool()
        exactly_one, sums = sum_formula(2, 2, pool)
        sum_circuit = build_sum_circuit(2, 2)
        for s, target in enumerate(sums):
            compiled = compile_to_circuit(And((exactly_one, target)), num_leaves=4)
            for d0, d1 in itertools.product(range(2), repeat=2):
                leaves = [0.0] * 4
                leaves[d0] = leaves[2 + d1] = 1.0
                assert evaluate(compiled, leaves)[0] == evaluate(sum_circuit, leaves)[s]


class TestDrivingFormula:
    def test_named_constraints(self):
        pool = VariablePool()
        f = driving_formula(pool)
        assert pool.names == ["red_light", "car_in_front", "brake", "accelerate"]
        assert count_models(f) == 5
