"""Forecast metrics computed in the scaled domain."""

from dataclasses import dataclass
from statistics import NormalDist

import numpy as np


@dataclass
class PredictionSet:
    predictions: np.ndarray  # (n_windows, H)
    targets: np.ndarray

    def __post_init__(self):
        self.predictions = np.atleast_2d(np.asarray(self.predictions, dtype=np.float64))
        self.targets = np.atleast_2d(np.asarray(self.targets, dtype=np.float64))
        if self.predictions.shape != self.targets.shape:
            raise ValueError(
                f"predictions {self.predictions.shape} and targets {self.targets.shape} differ"
            )
        if self.predictions.size == 0:
            raise ValueError("empty prediction set")

    @property
    def horizon(self):
        return self.predictions.shape[1]

    @property
    def residuals(self):
        return self.targets - self.predictions


def rmse(predictions, targets):
    p = np.asarray(predictions, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    if p.shape != y.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {y.shape}")
    if p.size == 0:
        raise ValueError("rmse of empty input")
    return float(np.sqrt(np.mean((y - p) ** 2)))


def per_step_rmse(pset):
    return np.sqrt(np.mean(pset.residuals ** 2, axis=0))


def residual_variance(pset):
    r = pset.residuals.reshape(-1)
    if r.size < 2:
        raise ValueError("variance needs at least 2 residuals")
    return float(np.var(r, ddof=1))


def per_step_variance(pset):
    if len(pset.residuals) < 2:
        raise ValueError("variance needs at least 2 windows")
    return np.var(pset.residuals, axis=0, ddof=1)


def confidence_band(pset, level=0.95):
    """Symmetric band ``prediction +/- z * sd(residuals)``, z the normal quantile."""
    if not 0 < level < 1:
        raise ValueError(f"level must be in (0, 1), got {level}")
    z = NormalDist().inv_cdf(0.5 + level / 2)
    half = z * np.sqrt(residual_variance(pset))
    return pset.predictions - half, pset.predictions + half


def band_coverage(pset, level=0.95):
    low, high = confidence_band(pset, level)
    return float(np.mean((pset.targets >= low) & (pset.targets <= high)))


def metric_rows(pset):
    """``(metric, step, value)`` rows; step ``all`` covers every output."""
    rows = [("rmse", "all", rmse(pset.predictions, pset.targets))]
    rows += [("rmse", str(j + 1), float(v)) for j, v in enumerate(per_step_rmse(pset))]
    rows.append(("variance", "all", residual_variance(pset)))
    if len(pset.predictions) >= 2:
        rows += [("variance", str(j + 1), float(v)) for j, v in enumerate(per_step_variance(pset))]
    return rows


def write_metrics_csv(path, rows):
    with open(path, "w") as fh:
        fh.write("metric,step,value\n")
        for metric, step, value in rows:
            fh.write(f"{metric},{step},{value:.12g}\n")


def format_table(header, rows):
    """Plain-text table with right-aligned columns."""
    cells = [list(map(str, header))] + [[_fmt(c) for c in row] for row in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = []
    for n, r in enumerate(cells):
        lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _fmt(c):
    if isinstance(c, float):
        return f"{c:.6f}"
    return "-" if c is None else str(c)
