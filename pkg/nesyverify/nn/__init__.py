"""Neural inference with interval bound propagation."""
from nesyverify.nn.layers import (
    BoundedTensor,
    Conv2d,
    Dense,
    Flatten,
    Layer,
    MaxPool2d,
    Relu,
    Sigmoid,
    Softmax,
    Tensor,
    softmax_bounds,
)
from nesyverify.nn.network import (
    Network,
    accuracy,
    epsilon_ball,
    forward,
    forward_ibp,
    forward_ibp_trace,
)
from nesyverify.nn.train import TrainingParams, init_dense_network, train_dense
from nesyverify.nn.weights import dumps_weights, load_weights, loads_weights, save_weights
