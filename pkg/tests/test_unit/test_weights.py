"""Unit tests for weight file persistence."""
import json

import numpy as np
import pytest

from nesyverify.nn import (
    Conv2d,
    Dense,
    Flatten,
    MaxPool2d,
    Network,
    Relu,
    Sigmoid,
    dumps_weights,
    forward,
    load_weights,
    loads_weights,
    save_weights,
)
from nesyverify.nn.weights import WEIGHTS_FORMAT
from nesyverify.utils.errors import WeightFileError


@pytest.fixture
def lenet_like(rng):
    return Network(
        [
            Conv2d(rng.normal(size=(2, 1, 3, 3)), rng.normal(size=2), stride=1, padding=1),
            Relu(),
            MaxPool2d(2, 2, 2),
            Flatten(),
            Dense(rng.normal(size=(2, 18)), rng.normal(size=2)),
            Sigmoid(),
        ],
        (1, 6, 6),
    )


class TestWeightRoundTrip:
    def test_exact_round_trip(self, lenet_like, rng, tmp_path):
        path = tmp_path / "net.weights.json"
        save_weights(lenet_like, path)
        loaded = load_weights(path)
        assert [l.kind for l in loaded.layers] == [l.kind for l in lenet_like.layers]
        assert loaded.input_shape == (1, 6, 6)
        for a, b in zip(lenet_like.layers, loaded.layers):
            if hasattr(a, "weight"):
                assert np.array_equal(a.weight, b.weight)
                assert np.array_equal(a.bias, b.bias)
        x = rng.uniform(size=(1, 6, 6))
        assert np.array_equal(forward(loaded, x), forward(lenet_like, x))

    def test_document_layout(self, lenet_like):
        doc = json.loads(dumps_weights(lenet_like))
        assert doc["format"] == WEIGHTS_FORMAT
        assert doc["input_shape"] == [1, 6, 6]
        conv = doc["layers"][0]
        assert conv["kind"] == "conv2d"
        assert conv["weight"]["shape"] == [2, 1, 3, 3]
        assert len(conv["weight"]["data"]) == 18
        assert conv["padding"] == 1
        assert doc["layers"][2] == {"kind": "maxpool2d", "stride": 2, "kernel": [2, 2]}
        assert doc["layers"][1] == {"kind": "relu"}


class TestWeightFileErrors:
    def test_malformed_json_reports_offset(self):
        with pytest.raises(WeightFileError) as exc:
            loads_weights('{"format": "nesy-weights/1", "input_shape": [2],')
        assert exc.value.offset is not None
        assert "byte offset" in str(exc.value)

    def test_offset_counts_bytes(self):
        text = '{"input_shape": [2], "layers": [{"kind": "dense", "note": "éé"},'
        with pytest.raises(WeightFileError) as exc:
            loads_weights(text)
        assert exc.value.offset == len(text.encode("utf-8"))
        with pytest.raises(WeightFileError) as exc:
            loads_weights(text.encode("utf-8"))
        assert exc.value.offset == len(text.encode("utf-8"))

    def test_invalid_utf8(self):
        with pytest.raises(WeightFileError, match="UTF-8") as exc:
            loads_weights(b'{"input_shape": [2], \xff}')
        assert exc.value.offset == 21

    @pytest.mark.parametrize(
        "weight, bias, where",
        [
            ("NaN", "0.0", "layers.0.weight.data.0"),
            ("1.0", "Infinity", "layers.0.bias.data.0"),
            ("-Infinity", "0.0", "layers.0.weight.data.0"),
        ],
    )
    def test_non_finite_parameters(self, weight, bias, where):
        text = (
            '{"format": "nesy-weights/1", "input_shape": [1], "layers": [{"kind": "dense", '
            f'"weight": {{"shape": [1, 1], "data": [{weight}]}}, '
            f'"bias": {{"shape": [1], "data": [{bias}]}}}}]}}'
        )
        with pytest.raises(WeightFileError, match=where.replace(".", r"\.")) as exc:
            loads_weights(text)
        assert "finite" in str(exc.value)

    def test_wrong_format_tag(self):
        text = json.dumps({"format": "other/2", "input_shape": [2], "layers": []})
        with pytest.raises(WeightFileError, match="format"):
            loads_weights(text)

    def test_unknown_layer_kind(self):
        text = json.dumps({"input_shape": [2], "layers": [{"kind": "lstm"}]})
        with pytest.raises(WeightFileError, match="layers.0.kind"):
            loads_weights(text)

    def test_data_length_must_match_shape(self):
        layer = {"kind": "dense", "weight": {"shape": [2, 2], "data": [1.0, 2.0, 3.0]}, "bias": {"shape": [2], "data": [0.0, 0.0]}}
        with pytest.raises(WeightFileError, match="needs 4 values"):
            loads_weights(json.dumps({"input_shape": [2], "layers": [layer]}))

    def test_dense_needs_parameters(self):
        with pytest.raises(WeightFileError, match="weight and bias"):
            loads_weights(json.dumps({"input_shape": [2], "layers": [{"kind": "dense"}]}))

    def test_inconsistent_layer_chain(self):
        net = Network([Dense(np.eye(3), np.zeros(3))], (3,))
        doc = json.loads(dumps_weights(net))
        doc["input_shape"] = [4]
        with pytest.raises(WeightFileError, match="inconsistent weight file"):
            loads_weights(json.dumps(doc))

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_weights(tmp_path / "absent.json")
