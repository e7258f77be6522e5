"""Augmented LSTM forecasting: autoencoder features of each observation
condition both the LSTM transition and the output decoder."""

from .datagen import SeriesSpec, WindowSpec, generate, make_windows, scale_unit, split_train_test
from .estimator import ALSTMRegressor, SlidingWindows, UnitScaler
from .evaluation import PredictionSet, per_step_rmse, residual_variance, rmse
from .model import Alstm, HiddenState, ModelConfig
from .optim import AdamState, TrainConfig, adam_step, train_model
from .serialize import load_model, save_model

__version__ = "0.1.0"
