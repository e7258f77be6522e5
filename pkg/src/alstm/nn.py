"""Dense building blocks: activations, two-layer nets, parameter storage,
Glorot initialisation and finite-difference gradient checking.

Tensors are plain ``float64`` numpy arrays. Column vectors of the
mathematical notation are stored as 1-D arrays, and a batch of vectors as
a ``(batch, n)`` array; weight matrices are ``(out, in)``.
"""

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from .exceptions import NumericError, ShapeError

DTYPE = np.float64


def make_rng(seed):
    """Deterministic generator used for every random draw in the package.

    PCG64 has a fixed, platform-independent output stream for a given seed.
    """
    return np.random.Generator(np.random.PCG64(int(seed)))


def check_finite(arr, what="tensor"):
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"non-finite values in {what}")
    return arr


def sigmoid(a):
    # split on sign so exp never overflows
    out = np.empty_like(a)
    pos = a >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-a[pos]))
    ea = np.exp(a[~pos])
    out[~pos] = ea / (1.0 + ea)
    return out


def _identity(a):
    return a


# derivative expressed through the activation output y
ACTIVATIONS = {
    "tanh": (np.tanh, lambda y: 1.0 - y * y),
    "sigmoid": (sigmoid, lambda y: y * (1.0 - y)),
    "identity": (_identity, lambda y: np.ones_like(y)),
}


def init_glorot(shape, rng):
    """Glorot-uniform matrix of ``shape = (fan_out, fan_in)``."""
    rows, cols = shape
    if rows < 1 or cols < 1:
        raise ShapeError(f"cannot initialise zero-sized tensor of shape {shape}")
    r = np.sqrt(6.0 / (rows + cols))
    return rng.uniform(-r, r, size=(rows, cols)).astype(DTYPE)


@dataclass(frozen=True)
class TwoLayerNet:
    """``out_act(W2 @ hidden_act(W1 @ x + b1) + b2)``.

    The arrays are shared with whatever container built the net (usually a
    :class:`ParamSet`), nothing is copied.
    """

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    hidden_act: str = "tanh"
    out_act: str = "identity"
    name: str = "net"

    def __post_init__(self):
        if self.W1.shape[0] != self.b1.shape[0]:
            raise ShapeError(f"{self.name}: W1 {self.W1.shape} vs b1 {self.b1.shape}")
        if self.W2.shape[1] != self.W1.shape[0]:
            raise ShapeError(f"{self.name}: W2 {self.W2.shape} vs W1 {self.W1.shape}")
        if self.W2.shape[0] != self.b2.shape[0]:
            raise ShapeError(f"{self.name}: W2 {self.W2.shape} vs b2 {self.b2.shape}")
        for act in (self.hidden_act, self.out_act):
            if act not in ACTIVATIONS:
                raise ValueError(f"unknown activation {act!r}")

    @property
    def n_in(self):
        return self.W1.shape[1]

    @property
    def n_out(self):
        return self.W2.shape[0]

    def forward_cached(self, x):
        """Forward pass on ``(batch, n_in)`` input, returning ``(out, cache)``."""
        if x.shape[-1] != self.n_in:
            raise ShapeError(
                f"{self.name}: input of width {x.shape[-1]} does not match W1 {self.W1.shape}"
            )
        h = ACTIVATIONS[self.hidden_act][0](x @ self.W1.T + self.b1)
        y = ACTIVATIONS[self.out_act][0](h @ self.W2.T + self.b2)
        return y, (x, h, y)

    def backward(self, dy, cache):
        """Return ``(dx, dW1, db1, dW2, db2)`` for upstream gradient ``dy``."""
        x, h, y = cache
        da2 = dy * ACTIVATIONS[self.out_act][1](y)
        dW2 = da2.T @ h
        db2 = da2.sum(axis=0)
        da1 = (da2 @ self.W2) * ACTIVATIONS[self.hidden_act][1](h)
        dW1 = da1.T @ x
        db1 = da1.sum(axis=0)
        dx = da1 @ self.W1
        return dx, dW1, db1, dW2, db2


def two_layer_forward(net, x):
    """Evaluate ``net`` on a single vector or a ``(batch, n)`` array."""
    x = np.asarray(x, dtype=DTYPE)
    single = x.ndim == 1
    y, _ = net.forward_cached(x[None, :] if single else x)
    check_finite(y, f"{net.name} output")
    return y[0] if single else y


class ParamSet:
    """Ordered name -> array map with a gradient buffer per entry."""

    def __init__(self, items=()):
        self.values = OrderedDict()
        self.grads = OrderedDict()
        for name, value in items:
            self.add(name, value)

    def add(self, name, value):
        if name in self.values:
            raise KeyError(f"duplicate parameter {name!r}")
        value = np.array(value, dtype=DTYPE)
        self.values[name] = value
        self.grads[name] = np.zeros_like(value)
        return value

    def __getitem__(self, name):
        return self.values[name]

    def __contains__(self, name):
        return name in self.values

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def items(self):
        return self.values.items()

    def zero_grad(self):
        for g in self.grads.values():
            g.fill(0.0)

    def n_scalars(self):
        return int(sum(v.size for v in self.values.values()))

    def copy(self):
        out = ParamSet()
        for name, value in self.values.items():
            out.add(name, value.copy())
        return out


def grad_check(loss_fn, params, epsilon=1e-5):
    """Largest relative gap between ``params.grads`` and central differences.

    ``loss_fn()`` must read the current values in ``params`` (which are
    perturbed in place and restored). The relative error per scalar is
    ``|g_analytic - g_numeric| / max(1, |g_numeric|)``.
    """
    if not 1e-7 <= epsilon <= 1e-3:
        raise ValueError(f"epsilon {epsilon} outside [1e-7, 1e-3]")
    worst = 0.0
    for name, value in params.items():
        analytic = params.grads[name]
        if analytic.shape != value.shape:
            raise ShapeError(f"gradient of {name} has shape {analytic.shape}, expected {value.shape}")
        flat = value.reshape(-1)
        gflat = analytic.reshape(-1)
        for k in range(flat.size):
            orig = flat[k]
            flat[k] = orig + epsilon
            up = loss_fn()
            flat[k] = orig - epsilon
            down = loss_fn()
            flat[k] = orig
            if not (np.isfinite(up) and np.isfinite(down)):
                raise NumericError(f"non-finite loss while perturbing {name}[{k}]")
            numeric = (up - down) / (2.0 * epsilon)
            worst = max(worst, abs(gflat[k] - numeric) / max(1.0, abs(numeric)))
    return worst

