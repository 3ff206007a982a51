"""Unit tests for system manifests: parsing, validation and file round trips."""
import json

import numpy as np
import pytest

from nesyverify.circuit import write_circuit
from nesyverify.compiler import compile_to_circuit
from nesyverify.logic import parse_formula
from nesyverify.nn import Dense, Network, Sigmoid, Softmax, save_weights
from nesyverify.utils.errors import ManifestError
from nesyverify.verifier import (
    ConstantLeaf,
    LeafBinding,
    NeSySystem,
    OutputBinding,
    QuerySpec,
    Threshold,
    build_sum_system,
    load_system,
    manifest_for,
    parse_manifest,
    predict,
    save_manifest,
)


def _doc(**overrides):
    doc = {
        "format": "nesy-system/1",
        "inputs": ["x"],
        "networks": [{"name": "gate", "weights": "gate.json", "input": "x"}],
        "circuit": "and.ac",
        "bindings": [{"network": "gate", "output": 0, "leaf": 0}],
        "constants": [{"leaf": 1, "value": 0.5}],
        "query": {"mode": "threshold", "output": 0, "threshold": 0.4},
    }
    doc.update(overrides)
    return doc


@pytest.fixture
def gated_system():
    gate = Network([Dense(np.array([[8.0]]), np.array([-4.0])), Sigmoid()], (1,))
    return NeSySystem(
        networks=(gate,),
        inputs=(0,),
        binding=LeafBinding((OutputBinding(0, 0, 0),), (ConstantLeaf(1, 0.5),)),
        circuit=compile_to_circuit(parse_formula("a & b")),
        input_names=("x",),
    )


def _save(tmp_path, system, query=None, shared=False):
    files = []
    for k, net in enumerate(system.networks):
        name = "net.json" if shared else f"net{k}.json"
        save_weights(net, tmp_path / name)
        files.append(name)
    write_circuit(system.circuit, tmp_path / "system.ac")
    path = tmp_path / "system.json"
    save_manifest(manifest_for(system, files, "system.ac", query), path)
    return path


# ── Parsing ───────────────────────────────────────────────────────────

class TestParseManifest:
    def test_valid(self):
        m = parse_manifest(json.dumps(_doc()))
        assert m.inputs == ["x"]
        assert m.domain == (0.0, 1.0)
        assert m.query.to_mode() == Threshold(0, 0.4)

    def test_defaults(self):
        doc = _doc()
        del doc["constants"], doc["query"], doc["format"]
        m = parse_manifest(json.dumps(doc))
        assert m.constants == []
        assert m.query.to_mode() == "argmax"

    def test_malformed_json(self):
        with pytest.raises(ManifestError, match="malformed JSON at byte"):
            parse_manifest('{"inputs": [')

    def test_missing_field_names_location(self):
        doc = _doc()
        del doc["circuit"]
        with pytest.raises(ManifestError, match="^circuit: "):
            parse_manifest(json.dumps(doc))

    def test_wrong_format(self):
        with pytest.raises(ManifestError, match="format"):
            parse_manifest(json.dumps(_doc(format="nesy-system/2")))

    @pytest.mark.parametrize(
        "overrides, fragment",
        [
            ({"inputs": ["x", "x"]}, "input names must be unique"),
            (
                {
                    "networks": [
                        {"name": "gate", "weights": "a.json", "input": "x"},
                        {"name": "gate", "weights": "b.json", "input": "x"},
                    ]
                },
                "network names must be unique",
            ),
            ({"networks": [{"name": "gate", "weights": "g.json", "input": "y"}]}, "unknown input 'y'"),
            ({"bindings": [{"network": "other", "output": 0, "leaf": 0}]}, "unknown network 'other'"),
            ({"query": {"mode": "threshold"}}, "threshold mode needs a threshold"),
            ({"domain": [1.0, 0.0]}, "empty input domain"),
            ({"constants": [{"leaf": 1, "value": 1.5}]}, "constants.0.value"),
            ({"bindings": [{"network": "gate", "output": -1, "leaf": 0}]}, "bindings.0.output"),
        ],
    )
    def test_validation_errors(self, overrides, fragment):
        with pytest.raises(ManifestError, match=fragment):
            parse_manifest(json.dumps(_doc(**overrides)))


class TestQuerySpec:
    def test_argmax(self):
        assert QuerySpec().to_mode() == "argmax"

    def test_threshold(self):
        assert QuerySpec(mode="threshold", output=2, threshold=0.9).to_mode() == Threshold(2, 0.9)


# ── Files ─────────────────────────────────────────────────────────────

class TestLoadSystem:
    def test_round_trip_with_constants(self, tmp_path, gated_system):
        path = _save(tmp_path, gated_system, QuerySpec(mode="threshold", threshold=0.3))
        loaded, query = load_system(path)
        assert query.to_mode() == Threshold(0, 0.3)
        assert loaded.input_names == ("x",)
        assert loaded.binding == gated_system.binding
        for x in (0.0, 0.3, 1.0):
            assert predict(loaded, [np.array([x])]) == pytest.approx(
                predict(gated_system, [np.array([x])]), abs=1e-15
            )

    def test_round_trip_shared_weights(self, tmp_path, rng):
        digit = Network([Dense(rng.normal(size=(3, 4)), rng.normal(size=3)), Softmax()], (4,))
        system = build_sum_system(digit, 2, 3)
        loaded, query = load_system(_save(tmp_path, system, shared=True))
        assert query.mode == "argmax"
        assert loaded.networks[0] is loaded.networks[1]
        assert loaded.input_names == ("digit0", "digit1")
        inputs = [rng.uniform(size=4), rng.uniform(size=4)]
        assert predict(loaded, inputs) == pytest.approx(predict(system, inputs), abs=1e-12)

    def test_relative_paths_resolve_against_manifest(self, tmp_path, gated_system, monkeypatch):
        path = _save(tmp_path, gated_system)
        monkeypatch.chdir(tmp_path.parent)
        loaded, _ = load_system(path)
        assert loaded.num_outputs == 1

    def test_bad_weight_file_names_network(self, tmp_path, gated_system):
        path = _save(tmp_path, gated_system)
        (tmp_path / "net0.json").write_text('{"layers": 3}')
        with pytest.raises(ManifestError, match="network 'net0'"):
            load_system(path)

    def test_missing_weight_file(self, tmp_path, gated_system):
        path = _save(tmp_path, gated_system)
        (tmp_path / "net0.json").unlink()
        with pytest.raises(FileNotFoundError):
            load_system(path)

    def test_manifest_for_checks_file_count(self, gated_system):
        with pytest.raises(ManifestError, match="weight files"):
            manifest_for(gated_system, [], "c.ac")
