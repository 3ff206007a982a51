"""NeSy systems: networks whose outputs feed the leaves of one circuit."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from nesyverify.circuit.evaluate import evaluate
from nesyverify.circuit.model import Circuit
from nesyverify.compiler import build_sum_circuit, compile_to_circuit
from nesyverify.compiler.tasks import driving_formula
from nesyverify.config import config
from nesyverify.logic.formula import VariablePool, variables
from nesyverify.nn.layers import Tensor
from nesyverify.nn.network import Network, forward
from nesyverify.utils.errors import BindingError, ShapeError


@dataclass(frozen=True)
class OutputBinding:
    """Output ``output`` of network ``network`` feeds circuit leaf ``leaf``."""

    network: int
    output: int
    leaf: int


@dataclass(frozen=True)
class ConstantLeaf:
    leaf: int
    value: float


@dataclass(frozen=True)
class LeafBinding:
    entries: tuple[OutputBinding, ...]
    constants: tuple[ConstantLeaf, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "constants", tuple(self.constants))

    @property
    def leaves(self) -> list[int]:
        return [e.leaf for e in self.entries] + [c.leaf for c in self.constants]

    @property
    def networks(self) -> list[int]:
        """Indices of the networks that feed at least one leaf, ascending."""
        return sorted({e.network for e in self.entries})


@dataclass(eq=False)
class NeSySystem:
    """Networks, the input each one reads, a leaf binding and a circuit.

    ``inputs[k]`` is the index of the input tensor network ``k`` reads;
    several networks may share one input.
    """

    networks: tuple[Network, ...]
    inputs: tuple[int, ...]
    binding: LeafBinding
    circuit: Circuit
    input_names: Optional[tuple[str, ...]] = None
    domain: Optional[tuple[float, float]] = None

    def __post_init__(self):
        self.networks = tuple(self.networks)
        self.inputs = tuple(self.inputs)
        if self.domain is None:
            self.domain = (config.input_lo, config.input_hi)
        if self.domain[0] > self.domain[1]:
            raise ValueError(f"empty input domain {self.domain}")
        self.circuit.ensure_valid()
        if len(self.inputs) != len(self.networks):
            raise BindingError(f"{len(self.networks)} networks but {len(self.inputs)} input assignments")
        num_inputs = max(self.inputs, default=-1) + 1
        if sorted(set(self.inputs)) != list(range(num_inputs)):
            raise BindingError(f"input indices {self.inputs} must cover 0..{num_inputs - 1}")
        if self.input_names is None:
            self.input_names = tuple(f"x{i}" for i in range(num_inputs))
        self.input_names = tuple(self.input_names)
        if len(self.input_names) != num_inputs:
            raise BindingError(f"{num_inputs} inputs but {len(self.input_names)} input names")
        for i in range(num_inputs):
            shapes = {self.networks[k].input_shape for k, j in enumerate(self.inputs) if j == i}
            if len(shapes) > 1:
                raise BindingError(f"networks sharing input {i} disagree on its shape: {sorted(shapes)}")
        self._check_binding()

    def _check_binding(self) -> None:
        leaves = self.binding.leaves
        if len(leaves) != len(set(leaves)):
            dup = sorted({l for l in leaves if leaves.count(l) > 1})
            raise BindingError(f"leaves bound more than once: {dup}")
        if sorted(leaves) != list(range(self.circuit.num_leaves)):
            missing = sorted(set(range(self.circuit.num_leaves)) - set(leaves))
            extra = sorted(set(leaves) - set(range(self.circuit.num_leaves)))
            raise BindingError(
                f"binding must cover leaves 0..{self.circuit.num_leaves - 1} exactly "
                f"(unbound: {missing}, out of range: {extra})"
            )
        for e in self.binding.entries:
            if not 0 <= e.network < len(self.networks):
                raise BindingError(f"binding refers to unknown network {e.network}")
            net = self.networks[e.network]
            if not 0 <= e.output < net.output_size:
                raise BindingError(
                    f"network {e.network} has {net.output_size} outputs, binding uses output {e.output}"
                )
            if net.head is None:
                raise BindingError(
                    f"network {e.network} outputs raw logits; bound networks need a softmax or sigmoid head"
                )
        for c in self.binding.constants:
            if not 0.0 <= c.value <= 1.0:
                raise BindingError(f"constant leaf {c.leaf} value {c.value} outside [0, 1]")

    @property
    def num_inputs(self) -> int:
        return len(self.input_names)

    def input_shape(self, i: int) -> tuple[int, ...]:
        for k, j in enumerate(self.inputs):
            if j == i:
                return self.networks[k].input_shape
        raise BindingError(f"no network reads input {i}")

    @property
    def num_outputs(self) -> int:
        return len(self.circuit.outputs)

    def check_inputs(self, inputs: Sequence[Tensor]) -> list[np.ndarray]:
        if len(inputs) != self.num_inputs:
            raise ShapeError(f"system takes {self.num_inputs} inputs, got {len(inputs)}")
        arrays = [np.asarray(x, dtype=np.float64) for x in inputs]
        for i, x in enumerate(arrays):
            if x.shape != self.input_shape(i):
                raise ShapeError(f"input {self.input_names[i]} has shape {x.shape}, expected {self.input_shape(i)}")
        return arrays


def scatter_leaves(sys: NeSySystem, outputs: dict[int, np.ndarray]) -> list[float]:
    """Leaf value vector from per-network outputs, clipped into [0, 1]."""
    leaf = [0.0] * sys.circuit.num_leaves
    for e in sys.binding.entries:
        leaf[e.leaf] = min(max(float(outputs[e.network][e.output]), 0.0), 1.0)
    for c in sys.binding.constants:
        leaf[c.leaf] = c.value
    return leaf


def predict(sys: NeSySystem, inputs: Sequence[Tensor]) -> list[float]:
    """Concrete end-to-end inference: every circuit output for one sample."""
    arrays = sys.check_inputs(inputs)
    outputs = {k: forward(sys.networks[k], arrays[sys.inputs[k]]) for k in sys.binding.networks}
    return evaluate(sys.circuit, scatter_leaves(sys, outputs))


def build_sum_system(
    digit_net: Network,
    num_digits: int,
    num_classes: int,
    max_digits: Optional[int] = None,
) -> NeSySystem:
    """Multi-digit addition: one copy of ``digit_net`` per digit image.

    Output ``s`` is P(sum of digits = s).
    """
    if digit_net.output_size != num_classes:
        raise BindingError(f"digit network has {digit_net.output_size} outputs, expected {num_classes}")
    circuit = build_sum_circuit(num_digits, num_classes, max_digits=max_digits)
    entries = tuple(
        OutputBinding(network=d, output=c, leaf=d * num_classes + c)
        for d in range(num_digits)
        for c in range(num_classes)
    )
    return NeSySystem(
        networks=(digit_net,) * num_digits,
        inputs=tuple(range(num_digits)),
        binding=LeafBinding(entries),
        circuit=circuit,
        input_names=tuple(f"digit{d}" for d in range(num_digits)),
    )


def build_driving_system(detector: Network, action: Network) -> NeSySystem:
    """Two heads on one frame: the detector predicts (red_light, car_in_front),
    the action head (brake, accelerate). Single output: P(constraints hold).
    """
    for name, net in (("detector", detector), ("action", action)):
        if net.output_size != 2:
            raise BindingError(f"{name} network must have 2 outputs, has {net.output_size}")
    pool = VariablePool()
    phi = driving_formula(pool)
    order = variables(phi)
    circuit = compile_to_circuit(phi, order=order, num_leaves=len(pool))
    slots = {
        "red_light": (0, 0),
        "car_in_front": (0, 1),
        "brake": (1, 0),
        "accelerate": (1, 1),
    }
    entries = tuple(
        OutputBinding(network=slots[name][0], output=slots[name][1], leaf=pool[name].index)
        for name in slots
    )
    return NeSySystem(
        networks=(detector, action),
        inputs=(0, 0),
        binding=LeafBinding(entries),
        circuit=circuit,
        input_names=("frame",),
    )
