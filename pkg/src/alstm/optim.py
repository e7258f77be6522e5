"""Adam and the mini-batch training loop."""

import csv
import logging
from dataclasses import asdict, dataclass, fields

import numpy as np

from .exceptions import ConfigError, NumericError, ShapeError, TrainingDivergedError
from .model import Alstm
from .nn import make_rng

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 500
    batch_size: int = 32
    seed: int = 0
    alpha: float = 0.0005
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    patience: int = 25
    min_delta: float = 1e-7

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ConfigError("beta1 and beta2 must lie in [0, 1)")
        if not (self.eps > 0 and self.alpha > 0):
            raise ConfigError("alpha and eps must be > 0")
        if self.patience < 1:
            raise ConfigError(f"patience must be >= 1, got {self.patience}")

    def as_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        kwargs = {}
        for f in fields(cls):
            if f.name in data:
                value = data[f.name]
                kwargs[f.name] = f.type(value) if isinstance(value, str) else value
        return cls(**kwargs)


class AdamState:
    def __init__(self, params, alpha=0.0005, beta1=0.9, beta2=0.999, eps=1e-8):
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self.t = 0
        self.alpha = alpha
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps


def adam_step(params, grads, state):
    """Bias-corrected Adam update applied to ``params`` in place."""
    for k, g in grads.items():
        if g.shape != params[k].shape:
            raise ShapeError(f"gradient for {k} has shape {g.shape}, parameter {params[k].shape}")
        if not np.all(np.isfinite(g)):
            raise NumericError(f"non-finite gradient for parameter {k}")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1 ** state.t
    c2 = 1.0 - b2 ** state.t
    for k, g in grads.items():
        m = state.m[k]
        v = state.v[k]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        params[k] -= state.alpha * (m / c1) / (np.sqrt(v / c2) + state.eps)
    return params, state


def _as_xy(dataset):
    return dataset.inputs, dataset.targets


def train_model(config, tconfig, train_set, callback=None):
    """Train a fresh model; returns ``(Alstm, loss_history)``.

    ``loss_history[k]`` is the sample-weighted mean of the mini-batch losses
    seen during epoch ``k + 1`` (before each batch's update).
    """
    X, Y = _as_xy(train_set)
    n = len(X)
    if n == 0:
        raise ValueError("empty training set")
    if tconfig.batch_size > n:
        raise ConfigError(f"batch_size {tconfig.batch_size} exceeds dataset size {n}")
    model = Alstm(config, seed=tconfig.seed)
    rng = make_rng(tconfig.seed + 1)
    state = AdamState(model.params, tconfig.alpha, tconfig.beta1, tconfig.beta2, tconfig.eps)
    history = []
    best = np.inf
    stale = 0
    for epoch in range(1, tconfig.epochs + 1):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, tconfig.batch_size):
            idx = order[start:start + tconfig.batch_size]
            try:
                loss = model.loss_and_grad(X[idx], Y[idx])
                if not np.isfinite(loss):
                    raise TrainingDivergedError(epoch, loss)
                adam_step(model.params.values, model.params.grads, state)
            except TrainingDivergedError:
                raise
            except NumericError as exc:
                raise TrainingDivergedError(epoch, float("nan")) from exc
            total += loss * len(idx)
        epoch_loss = total / n
        history.append(epoch_loss)
        if callback is not None:
            callback(epoch, epoch_loss)
        if epoch_loss < best - tconfig.min_delta:
            best = epoch_loss
            stale = 0
        else:
            stale += 1
            if stale >= tconfig.patience:
                log.info("early stop at epoch %d (loss %.3e)", epoch, epoch_loss)
                break
    return model, history


def write_loss_history(path, history):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["epoch", "loss"])
        for k, loss in enumerate(history, start=1):
            w.writerow([k, repr(float(loss))])
