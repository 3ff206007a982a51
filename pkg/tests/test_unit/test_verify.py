"""Unit tests for per-sample and per-dataset verification and reports."""
import json

import numpy as np
import pytest

from nesyverify.compiler import compile_to_circuit
from nesyverify.intervals import Interval
from nesyverify.logic import parse_formula
from nesyverify.nn import Dense, Network, Sigmoid, Softmax, epsilon_ball
from nesyverify.utils.errors import EnumerationGuardError, QueryError
from nesyverify.verifier import (
    Argmax,
    ConstantLeaf,
    Dataset,
    LeafBinding,
    NeSySystem,
    OutputBinding,
    SampleResult,
    Threshold,
    VerificationQuery,
    VerificationReport,
    build_sum_system,
    decide,
    leaf_bounds,
    predict,
    report_csv,
    verify_dataset,
    verify_sample,
    verify_sample_exact_symbolic,
    write_report_csv,
    write_report_json,
)
from nesyverify.verifier.report import CSV_COLUMNS

ZERO = np.array([1.0, 0.0])
ONE = np.array([0.0, 1.0])


@pytest.fixture
def sum_system():
    net = Network([Dense(np.array([[4.0, -4.0], [-4.0, 4.0]]), np.zeros(2)), Softmax()], (2,))
    return build_sum_system(net, 2, 2)


@pytest.fixture
def sum_dataset():
    rng = np.random.default_rng(7)
    bits = rng.integers(0, 2, size=(12, 2))
    onehot = np.stack([np.where(bits == 0, 1.0, 0.0), np.where(bits == 1, 1.0, 0.0)], axis=-1)
    return Dataset((onehot[:, 0], onehot[:, 1]), bits.sum(axis=1))


@pytest.fixture
def gated_system():
    """P(a & b) with a = sigmoid(x) and b fixed at 0.5."""
    gate = Network([Dense(np.array([[8.0]]), np.array([-4.0])), Sigmoid()], (1,))
    return NeSySystem(
        networks=(gate,),
        inputs=(0,),
        binding=LeafBinding((OutputBinding(0, 0, 0),), (ConstantLeaf(1, 0.5),)),
        circuit=compile_to_circuit(parse_formula("a & b")),
    )


# ── Decision rules ────────────────────────────────────────────────────

class TestDecide:
    def test_argmax_is_strict(self):
        bounds = [Interval(0.5, 0.6), Interval(0.2, 0.5)]
        assert decide(Argmax(0), bounds) == "unknown"
        assert decide(Argmax(0), [Interval(0.5, 0.6), Interval(0.2, 0.49)]) == "robust"

    def test_threshold_is_inclusive(self):
        assert decide(Threshold(0, 0.4), [Interval(0.4, 0.9)]) == "robust"
        assert decide(Threshold(0, 0.41), [Interval(0.4, 0.9)]) == "unknown"

    def test_single_output_argmax_is_vacuous(self):
        assert decide(Argmax(0), [Interval(0.0, 1.0)]) == "robust"


class TestVerificationQuery:
    def test_negative_eps(self):
        with pytest.raises(QueryError, match="eps"):
            VerificationQuery(Argmax(0), -1e-3, (ZERO,))

    def test_output_out_of_range(self, sum_system):
        with pytest.raises(QueryError, match="out of range"):
            verify_sample(sum_system, VerificationQuery(Argmax(3), 0.0, (ZERO, ONE)))


class TestLeafBounds:
    def test_point_at_zero_eps(self, sum_system):
        bounds = leaf_bounds(sum_system, [ZERO, ONE], 0.0)
        assert len(bounds) == 4
        assert bounds[0].lo == pytest.approx(bounds[0].hi, abs=1e-12)
        assert bounds[0].lo > 0.99 and bounds[3].lo > 0.99

    def test_constant_leaf_and_clipping(self, gated_system):
        bounds = leaf_bounds(gated_system, [np.array([0.5])], 0.5)
        assert bounds[1] == Interval.point(0.5)
        assert 0.0 <= bounds[0].lo <= bounds[0].hi <= 1.0

    def test_input_outside_domain(self, gated_system):
        with pytest.raises(ValueError, match="outside the domain"):
            leaf_bounds(gated_system, [np.array([1.5])], 0.1)


# ── Single samples ────────────────────────────────────────────────────

class TestVerifySample:
    def test_zero_eps_matches_prediction(self, sum_system):
        result = verify_sample(sum_system, VerificationQuery(Argmax(1), 0.0, (ZERO, ONE)))
        expected = predict(sum_system, [ZERO, ONE])
        assert result.status == "robust"
        assert result.lower == pytest.approx(expected, abs=1e-12)
        assert result.upper == pytest.approx(expected, abs=1e-12)
        assert result.correct_output == 1
        assert result.runtime_s >= 0.0

    def test_large_eps_is_unknown(self, sum_system):
        query = VerificationQuery(Argmax(1), 0.5, (ZERO, ONE))
        assert verify_sample(sum_system, query).status == "unknown"
        assert verify_sample_exact_symbolic(sum_system, query).status == "unknown"

    def test_exact_inside_relaxed(self, sum_system):
        for eps in (0.01, 0.1, 0.3):
            query = VerificationQuery(Argmax(1), eps, (ZERO, np.array([0.2, 0.7])))
            relaxed = verify_sample(sum_system, query)
            exact = verify_sample_exact_symbolic(sum_system, query)
            for r, e in zip(relaxed.intervals, exact.intervals):
                assert e.subset_of(r, tol=1e-12)

    @pytest.mark.parametrize(
        "system_name, label, x, eps",
        [
            ("sum_system", Argmax(1), (ZERO, np.array([0.2, 0.7])), 0.1),
            ("sum_system", Argmax(2), (np.array([0.3, 0.6]), ONE), 0.25),
            ("gated_system", Threshold(0, 0.45), (np.array([0.55]),), 0.05),
            ("gated_system", Threshold(0, 0.45), (np.array([0.5]),), 0.3),
        ],
    )
    def test_perturbed_predictions_stay_inside_bounds(self, request, system_name, label, x, eps):
        system = request.getfixturevalue(system_name)
        query = VerificationQuery(label, eps, x)
        relaxed = verify_sample(system, query)
        exact = verify_sample_exact_symbolic(system, query)
        boxes = [epsilon_ball(xi, eps, system.domain) for xi in x]
        rng = np.random.default_rng(31)
        for _ in range(1000):
            perturbed = [rng.uniform(box.lower, box.upper) for box in boxes]
            for value, r, e in zip(predict(system, perturbed), relaxed.intervals, exact.intervals):
                assert r.lo - 1e-12 <= value <= r.hi + 1e-12
                assert e.lo - 1e-12 <= value <= e.hi + 1e-12

    def test_bounds_grow_with_eps(self, sum_system):
        small = verify_sample(sum_system, VerificationQuery(Argmax(1), 0.01, (ZERO, ONE)))
        large = verify_sample(sum_system, VerificationQuery(Argmax(1), 0.1, (ZERO, ONE)))
        for s, l in zip(small.intervals, large.intervals):
            assert s.subset_of(l, tol=1e-12)

    def test_threshold_query(self, gated_system):
        high = VerificationQuery(Threshold(0, 0.45), 0.05, (np.array([1.0]),))
        assert verify_sample(gated_system, high).status == "robust"
        low = VerificationQuery(Threshold(0, 0.45), 0.05, (np.array([0.0]),))
        assert verify_sample(gated_system, low).status == "unknown"

    def test_exact_guard(self, sum_system):
        query = VerificationQuery(Argmax(1), 0.1, (ZERO, ONE))
        with pytest.raises(EnumerationGuardError):
            verify_sample_exact_symbolic(sum_system, query, max_leaves=2)


# ── Datasets ──────────────────────────────────────────────────────────

class TestVerifyDataset:
    def test_report(self, sum_system, sum_dataset):
        report = verify_dataset(sum_system, sum_dataset, 0.0)
        assert report.total == 12
        assert report.robustness == 1.0
        assert report.mode == "argmax"
        assert [s.sample_id for s in report.samples] == list(range(12))
        assert [s.correct_output for s in report.samples] == sum_dataset.labels.tolist()

    def test_threads_preserve_order_and_results(self, sum_system, sum_dataset):
        serial = verify_dataset(sum_system, sum_dataset, 0.1, threads=1)
        pooled = verify_dataset(sum_system, sum_dataset, 0.1, threads=4)
        assert [s.sample_id for s in pooled.samples] == list(range(12))
        assert [(s.status, s.lower, s.upper) for s in pooled.samples] == [
            (s.status, s.lower, s.upper) for s in serial.samples
        ]

    def test_robustness_non_increasing(self, sum_system, sum_dataset):
        values = [verify_dataset(sum_system, sum_dataset, eps).robustness for eps in (0.0, 0.1, 0.3, 0.5)]
        assert values == sorted(values, reverse=True)

    def test_threshold_mode(self, gated_system):
        ds = Dataset((np.array([[1.0], [0.0], [0.9]]),))
        report = verify_dataset(gated_system, ds, 0.01, mode=Threshold(0, 0.45))
        assert [s.status for s in report.samples] == ["robust", "unknown", "robust"]
        assert report.mode == "threshold(output=0, T=0.45)"

    def test_sample_errors_are_recorded(self, gated_system):
        ds = Dataset((np.array([[0.5], [2.0]]),))
        report = verify_dataset(gated_system, ds, 0.1, mode=Threshold(0, 0.1))
        assert report.errors == 1
        failed = report.samples[1]
        assert failed.status == "unknown"
        assert failed.error.startswith("ValueError")
        assert report.samples[0].error is None

    def test_guard_failures_are_recorded(self, sum_system, sum_dataset):
        report = verify_dataset(sum_system, sum_dataset, 0.1, method="exact", max_leaves=2)
        assert report.errors == report.total == 12
        assert report.robustness == 0.0
        assert report.mean_lower is None

    def test_empty_dataset(self, sum_system):
        empty = Dataset((np.zeros((0, 2)), np.zeros((0, 2))), np.zeros(0))
        with pytest.raises(QueryError, match="empty"):
            verify_dataset(sum_system, empty, 0.1)

    def test_argmax_needs_labels(self, sum_system, sum_dataset):
        unlabeled = Dataset(sum_dataset.inputs)
        with pytest.raises(QueryError, match="labels"):
            verify_dataset(sum_system, unlabeled, 0.1)

    def test_unknown_mode(self, sum_system, sum_dataset):
        with pytest.raises(QueryError, match="unknown mode"):
            verify_dataset(sum_system, sum_dataset, 0.1, mode="majority")


# ── Reports ───────────────────────────────────────────────────────────

class TestReport:
    @pytest.fixture
    def report(self):
        return VerificationReport(
            method="relaxed",
            eps=0.01,
            mode="argmax",
            samples=[
                SampleResult(sample_id=0, status="robust", correct_output=1, lower=[0.1, 0.8], upper=[0.2, 0.9], runtime_s=0.5),
                SampleResult(sample_id=1, status="unknown", correct_output=0, lower=[0.4, 0.3], upper=[0.6, 0.5], runtime_s=1.5),
                SampleResult(sample_id=2, status="unknown", correct_output=0, runtime_s=0.25, error="ValueError: bad input"),
            ],
        )

    def test_computed_fields(self, report):
        assert report.total == 3
        assert report.robust_count == 1
        assert report.robustness == pytest.approx(1 / 3)
        assert report.errors == 1
        assert report.mean_lower == pytest.approx(0.6)
        assert report.mean_upper == pytest.approx(0.75)
        assert report.mean_runtime_s == pytest.approx(1.0)

    def test_correct_bounds(self, report):
        assert report.samples[0].lower_correct == 0.8
        assert report.samples[0].upper_correct == 0.9
        assert report.samples[2].lower_correct is None

    def test_csv(self, report):
        lines = report_csv(report).splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert lines[1] == "0,robust,0.8,0.9,0.500000"
        assert lines[3] == "2,unknown,,,0.250000"

    def test_json_includes_summary(self, report, tmp_path):
        path = tmp_path / "report.json"
        write_report_json(report, path)
        data = json.loads(path.read_text())
        assert data["robust_count"] == 1
        assert data["errors"] == 1
        assert data["samples"][2]["error"] == "ValueError: bad input"

    def test_csv_file(self, report, tmp_path):
        path = tmp_path / "report.csv"
        write_report_csv(report, path)
        assert path.read_text() == report_csv(report)
