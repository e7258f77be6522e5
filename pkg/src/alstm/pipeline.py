"""generate -> train -> evaluate stages shared by the CLI and the bench."""

import logging
import os

import numpy as np

from .config import load_raw_series, prepare_data
from .datagen import SeriesSpec, make_windows
from .evaluation import PredictionSet, confidence_band, metric_rows, write_metrics_csv
from .exceptions import ShapeError
from .ingest import write_series_csv
from .optim import train_model, write_loss_history
from .serialize import save_model

log = logging.getLogger(__name__)


def _describe(dataset):
    if isinstance(dataset, SeriesSpec):
        return dataset.describe()
    return (
        f"csv path={os.path.basename(dataset.path)} column={dataset.column} "
        f"delimiter={dataset.delimiter!r} missing={dataset.missing!r} downsample={dataset.downsample}"
    )


def run_generate(exp, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    series = load_raw_series(exp.dataset)
    path = os.path.join(out_dir, "series.csv")
    write_series_csv(path, series, header_comment=_describe(exp.dataset))
    return path, series


def windows(exp):
    scaled, train, test = prepare_data(exp)
    return scaled, make_windows(train, exp.window), make_windows(test, exp.window)


def run_train(exp, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    _, train_set, _ = windows(exp)
    model, history = train_model(exp.model, exp.training, train_set)
    save_model(os.path.join(out_dir, "model.alstm"), model)
    write_loss_history(os.path.join(out_dir, "loss_history.csv"), history)
    return model, history


def check_compatible(model, exp):
    cfg = model.config
    if cfg.horizon != exp.window.horizon or cfg.d_in != 1:
        raise ShapeError(
            f"model emits horizon {cfg.horizon} with d_in {cfg.d_in}, "
            f"dataset windows have horizon {exp.window.horizon} and d_in 1"
        )


def run_evaluate(exp, model, out_dir, inverse=False, split="test"):
    """Write ``predictions.csv`` and ``metrics.csv``; returns ``(pset, rows)``."""
    check_compatible(model, exp)
    os.makedirs(out_dir, exist_ok=True)
    scaled, train_set, test_set = windows(exp)
    data, offset = (test_set, exp.n_train) if split == "test" else (train_set, 0)
    pset = PredictionSet(model.predict(data.inputs), data.targets)
    rows = metric_rows(pset)
    write_metrics_csv(os.path.join(out_dir, "metrics.csv"), rows)
    low, high = confidence_band(pset)
    H = pset.horizon
    cols = ["index"] + (["step"] if H > 1 else []) + ["target", "prediction", "low", "high"]
    if inverse:
        cols += ["target_raw", "prediction_raw"]
    with open(os.path.join(out_dir, "predictions.csv"), "w") as fh:
        fh.write(",".join(cols) + "\n")
        for k, anchor in enumerate(data.anchors):
            for j in range(H):
                vals = [pset.targets[k, j], pset.predictions[k, j], low[k, j], high[k, j]]
                if inverse:
                    vals += list(scaled.inverse(np.array(vals[:2])))
                head = [str(offset + anchor + j + 1)] + ([str(j + 1)] if H > 1 else [])
                fh.write(",".join(head + [format(float(v), ".10g") for v in vals]) + "\n")
    return pset, rows
