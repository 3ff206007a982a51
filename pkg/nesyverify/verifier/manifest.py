"""System manifests (``nesy-system/1``).

A manifest is a JSON document naming the system's inputs, its networks
(weight file plus the input each reads), the circuit file, the leaf
binding, the verification mode and the input domain. Relative paths are
resolved against the manifest's directory.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from nesyverify.circuit.io import read_circuit
from nesyverify.nn.network import Network
from nesyverify.nn.weights import load_weights
from nesyverify.utils.errors import ManifestError, NesyError
from nesyverify.verifier.system import ConstantLeaf, LeafBinding, NeSySystem, OutputBinding
from nesyverify.verifier.verify import Threshold

logger = logging.getLogger(__name__)

MANIFEST_FORMAT = "nesy-system/1"


class NetworkEntry(BaseModel):
    model_config = ConfigDict(str_strip_whitespace=True)

    name: str = Field(..., min_length=1)
    weights: str = Field(..., min_length=1, description="Weight file, relative to the manifest")
    input: str = Field(..., min_length=1, description="Name of the input tensor this network reads")


class BindingEntry(BaseModel):
    network: str
    output: int = Field(..., ge=0)
    leaf: int = Field(..., ge=0)


class ConstantEntry(BaseModel):
    leaf: int = Field(..., ge=0)
    value: float = Field(..., ge=0.0, le=1.0)


class QuerySpec(BaseModel):
    mode: Literal["argmax", "threshold"] = "argmax"
    output: int = Field(default=0, ge=0)
    threshold: Optional[float] = None

    @model_validator(mode="after")
    def _threshold_given(self):
        if self.mode == "threshold" and self.threshold is None:
            raise ValueError("threshold mode needs a threshold")
        return self

    def to_mode(self) -> Union[Literal["argmax"], Threshold]:
        if self.mode == "threshold":
            return Threshold(self.output, self.threshold)
        return "argmax"


class SystemManifest(BaseModel):
    format: Literal["nesy-system/1"] = MANIFEST_FORMAT
    inputs: list[str] = Field(..., min_length=1)
    networks: list[NetworkEntry]
    circuit: str
    bindings: list[BindingEntry]
    constants: list[ConstantEntry] = Field(default_factory=list)
    query: QuerySpec = Field(default_factory=QuerySpec)
    domain: tuple[float, float] = (0.0, 1.0)

    @field_validator("inputs")
    @classmethod
    def _unique_inputs(cls, v: list[str]) -> list[str]:
        if len(set(v)) != len(v):
            raise ValueError("input names must be unique")
        return v

    @model_validator(mode="after")
    def _references(self):
        names = [n.name for n in self.networks]
        if len(set(names)) != len(names):
            raise ValueError("network names must be unique")
        for n in self.networks:
            if n.input not in self.inputs:
                raise ValueError(f"network {n.name!r} reads unknown input {n.input!r}")
        for b in self.bindings:
            if b.network not in names:
                raise ValueError(f"binding refers to unknown network {b.network!r}")
        if self.domain[0] > self.domain[1]:
            raise ValueError(f"empty input domain {self.domain}")
        return self


def parse_manifest(text: Union[str, bytes]) -> SystemManifest:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ManifestError(f"malformed JSON at byte {e.pos}: {e.msg}") from None
    try:
        return SystemManifest.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "document"
        raise ManifestError(f"{where}: {first['msg']}") from None


def build_system(manifest: SystemManifest, base_dir: Union[str, Path] = ".") -> NeSySystem:
    """Load the files a manifest names and assemble the system."""
    base = Path(base_dir)
    loaded: dict[Path, Network] = {}
    networks = []
    for entry in manifest.networks:
        path = (base / entry.weights).resolve()
        if path not in loaded:
            try:
                loaded[path] = load_weights(path)
            except NesyError as e:
                raise ManifestError(f"network {entry.name!r}: {e}") from None
        networks.append(loaded[path])
    circuit = read_circuit(base / manifest.circuit)
    index = {n.name: k for k, n in enumerate(manifest.networks)}
    binding = LeafBinding(
        tuple(OutputBinding(index[b.network], b.output, b.leaf) for b in manifest.bindings),
        tuple(ConstantLeaf(c.leaf, c.value) for c in manifest.constants),
    )
    return NeSySystem(
        networks=tuple(networks),
        inputs=tuple(manifest.inputs.index(n.input) for n in manifest.networks),
        binding=binding,
        circuit=circuit,
        input_names=tuple(manifest.inputs),
        domain=tuple(manifest.domain),
    )


def load_system(path: Union[str, Path]) -> tuple[NeSySystem, QuerySpec]:
    path = Path(path)
    manifest = parse_manifest(path.read_bytes())
    sys = build_system(manifest, path.parent)
    logger.info(
        f"Loaded system from {path}: {len(sys.networks)} networks, "
        f"{sys.circuit.num_leaves} leaves, {sys.num_outputs} outputs"
    )
    return sys, manifest.query


def manifest_for(
    sys: NeSySystem,
    weight_files: Sequence[str],
    circuit_file: str,
    query: Optional[QuerySpec] = None,
) -> SystemManifest:
    """Describe an in-memory system whose parts were saved to the given files."""
    if len(weight_files) != len(sys.networks):
        raise ManifestError(f"{len(sys.networks)} networks but {len(weight_files)} weight files")
    names = [f"net{k}" for k in range(len(sys.networks))]
    return SystemManifest(
        inputs=list(sys.input_names),
        networks=[
            NetworkEntry(name=names[k], weights=weight_files[k], input=sys.input_names[sys.inputs[k]])
            for k in range(len(sys.networks))
        ],
        circuit=circuit_file,
        bindings=[BindingEntry(network=names[e.network], output=e.output, leaf=e.leaf) for e in sys.binding.entries],
        constants=[ConstantEntry(leaf=c.leaf, value=c.value) for c in sys.binding.constants],
        query=query or QuerySpec(),
        domain=sys.domain,
    )


def save_manifest(manifest: SystemManifest, path: Union[str, Path]) -> None:
    Path(path).write_text(manifest.model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Wrote system manifest to {path}")
