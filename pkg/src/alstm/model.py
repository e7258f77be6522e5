"""Augmented LSTM: an LSTM whose gate input and output decoder are
conditioned on autoencoder features of the current observation.

Per step ``t`` of a window (``m`` is the hidden output of the previous step)::

    f_x   = feat_x(x_t)
    z_t   = encoder([f_x, m])            # sigmoid latent
    f_z   = feat_z(z_t)
    y_t   = decoder([f_z, m])            # sigmoid prediction, H * d_in values
    (c,m) = lstm([f_x, f_z], (c, m))

The prediction of a window is ``y_T``. In ``lstm_baseline`` mode the
feature nets and encoder are dropped, the gates read ``x_t`` directly and
``y_t = decoder(m_t)``.

Gradients are computed by hand-written backpropagation through time over a
whole mini-batch at once.
"""

from dataclasses import asdict, dataclass, fields
from typing import NamedTuple

import numpy as np

from .exceptions import ConfigError, ShapeError, StateError
from .nn import DTYPE, ParamSet, TwoLayerNet, check_finite, init_glorot, make_rng, sigmoid

CELL_VARIANTS = ("standard", "paper_literal")
MODES = ("alstm", "lstm_baseline")
GATES = ("i", "s", "f", "o")


@dataclass(frozen=True)
class ModelConfig:
    d_in: int = 1
    d_fx: int = 16
    d_z: int = 8
    d_fz: int = 16
    n_h: int = 32
    d_mlp: int = 16  # hidden width of every two-layer net
    horizon: int = 1
    beta: float = 1e-4
    cell_variant: str = "standard"
    mode: str = "alstm"
    loss_over_all_steps: bool = False

    def __post_init__(self):
        for name in ("d_in", "d_fx", "d_z", "d_fz", "n_h", "d_mlp", "horizon"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if not self.beta >= 0:
            raise ConfigError(f"beta must be >= 0, got {self.beta!r}")
        if self.cell_variant not in CELL_VARIANTS:
            raise ConfigError(f"unknown cell_variant {self.cell_variant!r}")
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")

    @property
    def d_out(self):
        return self.horizon * self.d_in

    @property
    def gate_input_dim(self):
        return self.d_fx + self.d_fz if self.mode == "alstm" else self.d_in

    def as_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        """Build from string or typed values, ignoring unknown keys."""
        kwargs = {}
        for f in fields(cls):
            if f.name not in data:
                continue
            value = data[f.name]
            if isinstance(value, str):
                if f.type is bool or f.type == "bool":
                    if value.strip().lower() not in ("true", "false", "1", "0", "yes", "no"):
                        raise ConfigError(f"{f.name}: expected a boolean, got {value!r}")
                    value = value.strip().lower() in ("true", "1", "yes")
                elif f.type is int or f.type == "int":
                    value = int(value)
                elif f.type is float or f.type == "float":
                    value = float(value)
                else:
                    value = value.strip()
            kwargs[f.name] = value
        return cls(**kwargs)


class HiddenState(NamedTuple):
    c: np.ndarray
    m: np.ndarray


# (name, input dim, output dim, output activation) for every two-layer net
def _net_layout(config):
    if config.mode == "lstm_baseline":
        return [("decoder", config.n_h, config.d_out, "sigmoid")]
    return [
        ("feat_x", config.d_in, config.d_fx, "tanh"),
        ("encoder", config.d_fx + config.n_h, config.d_z, "sigmoid"),
        ("feat_z", config.d_z, config.d_fz, "tanh"),
        ("decoder", config.d_fz + config.n_h, config.d_out, "sigmoid"),
    ]


def param_shapes(config):
    """Ordered ``(name, shape)`` list of every trainable tensor."""
    shapes = []
    n_h, d_x = config.n_h, config.gate_input_dim
    for g in GATES:
        shapes += [(f"lstm.W_{g}", (n_h, d_x)), (f"lstm.U_{g}", (n_h, n_h)), (f"lstm.b_{g}", (n_h,))]
    for name, n_in, n_out, _ in _net_layout(config):
        shapes += [
            (f"{name}.W1", (config.d_mlp, n_in)),
            (f"{name}.b1", (config.d_mlp,)),
            (f"{name}.W2", (n_out, config.d_mlp)),
            (f"{name}.b2", (n_out,)),
        ]
    return shapes


def is_weight_matrix(name):
    """True for regularised tensors (all matrices, never biases)."""
    return ".W" in name or ".U" in name


def init_params(config, seed=0):
    """Glorot weights, zero biases, forget-gate bias 1."""
    rng = make_rng(seed)
    params = ParamSet()
    for name, shape in param_shapes(config):
        if len(shape) == 2:
            params.add(name, init_glorot(shape, rng))
        elif name == "lstm.b_f":
            params.add(name, np.ones(shape, dtype=DTYPE))
        else:
            params.add(name, np.zeros(shape, dtype=DTYPE))
    return params


def _as_batch(x, width, what):
    x = np.asarray(x, dtype=DTYPE)
    single = x.ndim == 1
    if single:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != width:
        raise ShapeError(f"{what}: expected width {width}, got array of shape {x.shape}")
    return x, single


class Trace:
    """Forward-pass record consumed once by :meth:`Alstm.backward`."""

    def __init__(self, steps, c0, m0):
        self.steps = steps
        self.c0 = c0
        self.m0 = m0
        self.consumed = False

    @property
    def predictions(self):
        return [s["y"] for s in self.steps]


class Alstm:
    """A model configuration bound to a parameter set.

    Single-vector methods accept 1-D arrays; the same methods also accept a
    ``(batch, n)`` array and return batched output.
    """

    def __init__(self, config, params=None, seed=0):
        self.config = config
        self.params = init_params(config, seed) if params is None else params
        expected = param_shapes(config)
        if [n for n, _ in expected] != list(self.params):
            raise ShapeError("parameter names do not match the model configuration")
        for name, shape in expected:
            if self.params[name].shape != shape:
                raise ShapeError(f"{name}: shape {self.params[name].shape}, expected {shape}")

    # -- building blocks -------------------------------------------------

    def net(self, name):
        act = {n: a for n, _, _, a in _net_layout(self.config)}
        if name not in act:
            raise KeyError(f"model in mode {self.config.mode!r} has no net {name!r}")
        p = self.params
        return TwoLayerNet(
            p[f"{name}.W1"], p[f"{name}.b1"], p[f"{name}.W2"], p[f"{name}.b2"],
            hidden_act="tanh", out_act=act[name], name=name,
        )

    def _apply(self, name, x):
        net = self.net(name)
        xb, single = _as_batch(x, net.n_in, name)
        y, _ = net.forward_cached(xb)
        check_finite(y, f"{name} output")
        return y[0] if single else y

    def feat_x(self, x):
        return self._apply("feat_x", x)

    def feat_z(self, z):
        return self._apply("feat_z", z)

    def encode(self, f_x, m_prev):
        return self._apply("encoder", np.concatenate([f_x, m_prev], axis=-1))

    def decode(self, f_z, m_prev):
        return self._apply("decoder", np.concatenate([f_z, m_prev], axis=-1))

    def initial_state(self, batch=None):
        shape = (self.config.n_h,) if batch is None else (batch, self.config.n_h)
        return HiddenState(np.zeros(shape, dtype=DTYPE), np.zeros(shape, dtype=DTYPE))

    def _stacked_gates(self):
        p = self.params
        W = np.concatenate([p[f"lstm.W_{g}"] for g in GATES], axis=0)
        U = np.concatenate([p[f"lstm.U_{g}"] for g in GATES], axis=0)
        b = np.concatenate([p[f"lstm.b_{g}"] for g in GATES])
        return W, U, b

    def _cell(self, x_gate, c, m, stacked):
        W, U, b = stacked
        n = self.config.n_h
        pre = x_gate @ W.T + m @ U.T + b
        i = sigmoid(pre[:, :n])
        s = np.tanh(pre[:, n:2 * n])
        f = sigmoid(pre[:, 2 * n:3 * n])
        o = sigmoid(pre[:, 3 * n:])
        c_new = c * f + s * i
        if self.config.cell_variant == "standard":
            tc = np.tanh(c_new)
            m_new = o * tc
        else:
            tc = None
            m_new = s * o
        return c_new, m_new, (x_gate, c, m, i, s, f, o, tc)

    def cell_step(self, f_x, f_z, state):
        """One LSTM transition on the gate input ``[f_x, f_z]``.

        In ``lstm_baseline`` mode pass the raw observation as ``f_x`` and
        ``None`` for ``f_z``.
        """
        if self.config.cell_variant not in CELL_VARIANTS:
            raise ConfigError(f"unknown cell_variant {self.config.cell_variant!r}")
        x_gate = f_x if f_z is None else np.concatenate([f_x, f_z], axis=-1)
        xb, single = _as_batch(x_gate, self.config.gate_input_dim, "cell input")
        c, _ = _as_batch(state.c, self.config.n_h, "cell state")
        m, _ = _as_batch(state.m, self.config.n_h, "hidden state")
        c_new, m_new, _ = self._cell(xb, c, m, self._stacked_gates())
        check_finite(c_new, "cell state")
        if single:
            return HiddenState(c_new[0], m_new[0])
        return HiddenState(c_new, m_new)

    # -- whole windows ---------------------------------------------------

    def _inputs(self, X):
        X = np.asarray(X, dtype=DTYPE)
        if X.ndim == 2 and self.config.d_in == 1:
            X = X[:, :, None]
        if X.ndim != 3 or X.shape[2] != self.config.d_in:
            raise ShapeError(
                f"windows must have shape (n, T, {self.config.d_in}), got {X.shape}"
            )
        if X.shape[0] == 0 or X.shape[1] == 0:
            raise ShapeError(f"empty batch or window: {X.shape}")
        return X

    def forward_trace(self, X):
        """Run every window of ``X`` (shape ``(n, T, d_in)``) and keep caches."""
        X = self._inputs(X)
        n, T, _ = X.shape
        cfg = self.config
        stacked = self._stacked_gates()
        c, m = self.initial_state(n)
        c0, m0 = c, m
        steps = []
        if cfg.mode == "alstm":
            fx_net, enc, fz_net, dec = (self.net(k) for k in ("feat_x", "encoder", "feat_z", "decoder"))
            for t in range(T):
                f_x, fx_cache = fx_net.forward_cached(X[:, t, :])
                z, enc_cache = enc.forward_cached(np.concatenate([f_x, m], axis=1))
                f_z, fz_cache = fz_net.forward_cached(z)
                y, dec_cache = dec.forward_cached(np.concatenate([f_z, m], axis=1))
                c, m, cell_cache = self._cell(np.concatenate([f_x, f_z], axis=1), c, m, stacked)
                steps.append(dict(y=y, fx=fx_cache, enc=enc_cache, fz=fz_cache,
                                  dec=dec_cache, cell=cell_cache))
        else:
            dec = self.net("decoder")
            for t in range(T):
                c, m, cell_cache = self._cell(X[:, t, :], c, m, stacked)
                y, dec_cache = dec.forward_cached(m)
                steps.append(dict(y=y, dec=dec_cache, cell=cell_cache))
        check_finite(steps[-1]["y"], "window prediction")
        return Trace(steps, c0, m0)

    def forward_window(self, window):
        """Prediction (``H * d_in`` values) for one window of shape ``(T, d_in)``."""
        window = np.asarray(window, dtype=DTYPE)
        if window.ndim == 1:
            window = window[:, None]
        if window.shape[0] == 0:
            raise ShapeError("empty window")
        return self.forward_trace(window[None]).predictions[-1][0]

    def predict(self, X):
        return self.forward_trace(X).predictions[-1]

    def backward(self, trace, dys):
        """Accumulate parameter gradients for upstream gradients ``dys``.

        ``dys`` maps step index to ``d loss / d y_t`` of shape ``(n, d_out)``.
        Gradients are summed into ``params.grads`` (not cleared first).
        """
        if trace is None or not isinstance(trace, Trace):
            raise StateError("backward called without a recorded forward pass")
        if trace.consumed:
            raise StateError("trace already consumed by a previous backward call")
        trace.consumed = True
        cfg = self.config
        n_h, n_fx = cfg.n_h, cfg.d_fx
        grads = self.params.grads
        W, U, _ = self._stacked_gates()
        dW = np.zeros_like(W)
        dU = np.zeros_like(U)
        db = np.zeros(4 * n_h)
        nets = {k: self.net(k) for k, *_ in _net_layout(cfg)}

        def net_backward(key, dy, cache):
            dx, dW1, db1, dW2, db2 = nets[key].backward(dy, cache)
            grads[f"{key}.W1"] += dW1
            grads[f"{key}.b1"] += db1
            grads[f"{key}.W2"] += dW2
            grads[f"{key}.b2"] += db2
            return dx

        n = trace.steps[0]["y"].shape[0]
        dm = np.zeros((n, n_h))  # d loss / d m_t flowing back from step t+1
        dc = np.zeros((n, n_h))
        for t in reversed(range(len(trace.steps))):
            step = trace.steps[t]
            dy = dys.get(t)
            if cfg.mode == "lstm_baseline" and dy is not None:
                dm = dm + net_backward("decoder", dy, step["dec"])
            x_gate, c_prev, m_prev, i, s, f, o, tc = step["cell"]
            if cfg.cell_variant == "standard":
                do = dm * tc
                dc = dc + dm * o * (1.0 - tc * tc)
                ds = dc * i
            else:
                do = dm * s
                ds = dc * i + dm * o
            di = dc * s
            df = dc * c_prev
            dc = dc * f
            dpre = np.concatenate(
                [di * i * (1.0 - i), ds * (1.0 - s * s), df * f * (1.0 - f), do * o * (1.0 - o)],
                axis=1,
            )
            dW += dpre.T @ x_gate
            dU += dpre.T @ m_prev
            db += dpre.sum(axis=0)
            dx_gate = dpre @ W
            dm = dpre @ U
            if cfg.mode == "alstm":
                g_fx = dx_gate[:, :n_fx]
                g_fz = dx_gate[:, n_fx:]
                if dy is not None:
                    dv = net_backward("decoder", dy, step["dec"])
                    g_fz = g_fz + dv[:, :cfg.d_fz]
                    dm = dm + dv[:, cfg.d_fz:]
                dz = net_backward("feat_z", g_fz, step["fz"])
                du = net_backward("encoder", dz, step["enc"])
                g_fx = g_fx + du[:, :n_fx]
                dm = dm + du[:, n_fx:]
                net_backward("feat_x", g_fx, step["fx"])
        d_x = cfg.gate_input_dim
        for k, g in enumerate(GATES):
            rows = slice(k * n_h, (k + 1) * n_h)
            grads[f"lstm.W_{g}"] += dW[rows, :d_x]
            grads[f"lstm.U_{g}"] += dU[rows]
            grads[f"lstm.b_{g}"] += db[rows]

    # -- objective -------------------------------------------------------

    def regularizer(self):
        return float(sum(np.sum(v * v) for k, v in self.params.items() if is_weight_matrix(k)))

    def _targets(self, Y, n):
        Y = np.asarray(Y, dtype=DTYPE)
        if Y.ndim == 1:
            Y = Y[:, None]
        if Y.shape != (n, self.config.d_out):
            raise ShapeError(f"targets must have shape ({n}, {self.config.d_out}), got {Y.shape}")
        return Y

    def _loss_steps(self, T):
        return range(T) if self.config.loss_over_all_steps else [T - 1]

    def batch_loss(self, X, Y):
        """Mean squared-norm prediction error plus ``beta`` times the sum of
        squared weight-matrix entries."""
        trace = self.forward_trace(X)
        n = trace.steps[0]["y"].shape[0]
        Y = self._targets(Y, n)
        err = sum(np.sum((trace.steps[t]["y"] - Y) ** 2) for t in self._loss_steps(len(trace.steps)))
        return float(err / n + self.config.beta * self.regularizer())

    def loss_and_grad(self, X, Y):
        """Loss as in :meth:`batch_loss`; gradients written to ``params.grads``."""
        self.params.zero_grad()
        trace = self.forward_trace(X)
        n = trace.steps[0]["y"].shape[0]
        Y = self._targets(Y, n)
        err = 0.0
        dys = {}
        for t in self._loss_steps(len(trace.steps)):
            r = trace.steps[t]["y"] - Y
            err += np.sum(r * r)
            dys[t] = (2.0 / n) * r
        self.backward(trace, dys)
        beta = self.config.beta
        if beta:
            for k, v in self.params.items():
                if is_weight_matrix(k):
                    self.params.grads[k] += 2.0 * beta * v
        return float(err / n + beta * self.regularizer())
