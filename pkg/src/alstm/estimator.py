"""scikit-learn compatible wrappers.

``ALSTMRegressor`` trains on windows ``X`` of shape ``(n, T)`` (scalar
series) or ``(n, T, d_in)`` with targets ``y`` of shape ``(n,)`` or
``(n, H * d_in)``. ``UnitScaler`` and ``SlidingWindows`` turn a raw series
into such arrays.
"""

from types import SimpleNamespace

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .datagen import WindowSpec, make_windows, scale_unit
from .model import ModelConfig
from .optim import TrainConfig, train_model
from .serialize import dumps, loads


class ALSTMRegressor(RegressorMixin, BaseEstimator):
    """Augmented LSTM forecaster with the fit/predict protocol."""

    def __init__(
        self,
        d_fx=16,
        d_z=8,
        d_fz=16,
        n_h=32,
        d_mlp=16,
        beta=1e-6,
        cell_variant="standard",
        mode="alstm",
        loss_over_all_steps=False,
        epochs=500,
        batch_size=32,
        learning_rate=0.0005,
        beta1=0.9,
        beta2=0.999,
        eps=1e-8,
        patience=25,
        random_state=0,
    ):
        self.d_fx = d_fx
        self.d_z = d_z
        self.d_fz = d_fz
        self.n_h = n_h
        self.d_mlp = d_mlp
        self.beta = beta
        self.cell_variant = cell_variant
        self.mode = mode
        self.loss_over_all_steps = loss_over_all_steps
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.patience = patience
        self.random_state = random_state

    def _check_X(self, X):
        X = check_array(X, allow_nd=True, dtype=np.float64, ensure_min_features=1)
        if X.ndim == 2:
            X = X[:, :, None]
        if X.ndim != 3:
            raise ValueError(f"X must be 2-D or 3-D, got {X.ndim} dimensions")
        return X

    def fit(self, X, y):
        X = self._check_X(X)
        y = np.asarray(y, dtype=np.float64)
        self._y_1d = y.ndim == 1
        y2 = check_array(y[:, None] if self._y_1d else y, dtype=np.float64)
        if len(y2) != len(X):
            raise ValueError(f"X has {len(X)} windows but y has {len(y2)} rows")
        d_in = X.shape[2]
        if y2.shape[1] % d_in:
            raise ValueError(f"target width {y2.shape[1]} is not a multiple of d_in={d_in}")
        self.d_in_ = d_in
        self.n_steps_in_ = X.shape[1]
        self.config_ = ModelConfig(
            d_in=d_in, d_fx=self.d_fx, d_z=self.d_z, d_fz=self.d_fz, n_h=self.n_h,
            d_mlp=self.d_mlp, horizon=y2.shape[1] // d_in, beta=self.beta,
            cell_variant=self.cell_variant, mode=self.mode,
            loss_over_all_steps=self.loss_over_all_steps,
        )
        tconfig = TrainConfig(
            epochs=self.epochs, batch_size=min(self.batch_size, len(X)),
            seed=int(self.random_state or 0), alpha=self.learning_rate, beta1=self.beta1,
            beta2=self.beta2, eps=self.eps, patience=self.patience,
        )
        self.model_, self.loss_history_ = train_model(self.config_, tconfig, SimpleNamespace(inputs=X, targets=y2))
        return self

    def predict(self, X):
        check_is_fitted(self, "model_")
        X = self._check_X(X)
        if X.shape[2] != self.d_in_:
            raise ValueError(f"X has {X.shape[2]} features per step, model expects {self.d_in_}")
        out = self.model_.predict(X)
        return out[:, 0] if self._y_1d else out

    def __getstate__(self):
        state = dict(self.__dict__)
        if "model_" in state:
            state["model_"] = dumps(state["model_"])
        return state

    def __setstate__(self, state):
        if isinstance(state.get("model_"), str):
            state["model_"] = loads(state["model_"])
        self.__dict__.update(state)


class UnitScaler(TransformerMixin, BaseEstimator):
    """Min-max scaling of a 1-D series to [0, 1], fitted on the first
    ``n_fit`` points (all points when ``None``). No clipping."""

    def __init__(self, n_fit=None):
        self.n_fit = n_fit

    def fit(self, X, y=None):
        values = np.asarray(X, dtype=np.float64).reshape(-1)
        stop = len(values) if self.n_fit is None else self.n_fit
        fitted = scale_unit(values, (0, stop))
        self.min_, self.max_ = fitted.scale_min, fitted.scale_max
        return self

    def transform(self, X):
        check_is_fitted(self, "min_")
        return (np.asarray(X, dtype=np.float64) - self.min_) / (self.max_ - self.min_)

    def inverse_transform(self, X):
        check_is_fitted(self, "min_")
        return np.asarray(X, dtype=np.float64) * (self.max_ - self.min_) + self.min_


class SlidingWindows(BaseEstimator):
    """Stateless windowing: ``transform(series) -> (X, y)``."""

    def __init__(self, n_samples=5, stride=6, horizon=1):
        self.n_samples = n_samples
        self.stride = stride
        self.horizon = horizon

    def fit(self, X=None, y=None):
        return self

    def transform(self, X):
        ds = make_windows(np.asarray(X, dtype=np.float64).reshape(-1),
                          WindowSpec(self.n_samples, self.stride, self.horizon))
        return ds.inputs, ds.targets
