"""Chaotic benchmark series, [0, 1] scaling, sliding windows and splits."""

from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import ConfigError

SYSTEMS = ("mackey_glass", "lorenz", "rossler")

DEFAULT_PARAMS = {
    "mackey_glass": {"alpha": 0.2, "beta": -0.1, "delta": 17.0},
    "lorenz": {"sigma": 10.0, "rho": 28.0, "beta": 8.0 / 3.0},
    "rossler": {"a": 0.2, "b": 0.2, "c": 4.6},
}
DEFAULT_DT = {"mackey_glass": 0.1, "lorenz": 0.01, "rossler": 0.1}
DEFAULT_INIT = {"mackey_glass": (1.2,), "lorenz": (1.0, 1.0, 1.0), "rossler": (1.0, 1.0, 1.0)}


@dataclass(frozen=True)
class SeriesSpec:
    """Declarative description of a generated series.

    ``init`` is the constant history value for Mackey-Glass and the initial
    ``(x, y, z)`` state for the 3-D systems.
    """

    system: str = "mackey_glass"
    params: dict = field(default_factory=dict)
    dt: float = None
    n_points: int = 1500
    transient: int = 1000
    init: tuple = None
    component: str = "x"

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise ConfigError(f"unknown system {self.system!r}; expected one of {SYSTEMS}")
        merged = dict(DEFAULT_PARAMS[self.system])
        unknown = set(self.params) - set(merged)
        if unknown:
            raise ConfigError(f"unknown {self.system} parameters: {sorted(unknown)}")
        merged.update({k: float(v) for k, v in self.params.items()})
        object.__setattr__(self, "params", merged)
        if self.dt is None:
            object.__setattr__(self, "dt", DEFAULT_DT[self.system])
        if self.init is None:
            object.__setattr__(self, "init", DEFAULT_INIT[self.system])
        object.__setattr__(self, "init", tuple(float(v) for v in self.init))
        if not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if self.n_points < 1:
            raise ConfigError(f"n_points must be >= 1, got {self.n_points}")
        if self.transient < 0:
            raise ConfigError(f"transient must be >= 0, got {self.transient}")
        want = 1 if self.system == "mackey_glass" else 3
        if len(self.init) != want:
            raise ConfigError(f"{self.system} needs {want} initial value(s), got {self.init}")
        if self.component not in ("x", "y", "z"):
            raise ConfigError(f"component must be x, y or z, got {self.component!r}")

    def describe(self):
        params = " ".join(f"{k}={v!r}" for k, v in self.params.items())
        init = ",".join(repr(v) for v in self.init)
        return (
            f"system={self.system} {params} dt={self.dt!r} n_points={self.n_points} "
            f"transient={self.transient} init={init} component={self.component}"
        )


@dataclass
class Series:
    values: np.ndarray
    scale_min: float = None
    scale_max: float = None

    def __len__(self):
        return len(self.values)

    @property
    def is_scaled(self):
        return self.scale_min is not None

    def inverse(self, values):
        """Map scaled values back to the original units."""
        if not self.is_scaled:
            raise ValueError("series carries no scaling metadata")
        return np.asarray(values) * (self.scale_max - self.scale_min) + self.scale_min


# -- generators -----------------------------------------------------------

def mackey_glass_rhs(x, x_delayed, alpha=0.2, beta=-0.1):
    return beta * x + alpha * x_delayed / (1.0 + x_delayed ** 10)


def gen_mackey_glass(spec):
    """Explicit-midpoint (RK2) integration of the Mackey-Glass delay equation.

    The delayed term at the half step is the mean of the two buffered
    samples around ``t + dt/2 - delta``.
    """
    p = spec.params
    ratio = p["delta"] / spec.dt
    lag = int(round(ratio))
    if lag < 1 or abs(ratio - lag) > 1e-9:
        raise ConfigError(f"delta/dt = {ratio!r} is not a positive integer")
    alpha, beta, dt = p["alpha"], p["beta"], spec.dt
    total = spec.transient + spec.n_points
    # buf[k] holds x at step k - lag; index lag is the current value
    buf = np.full(total + lag, spec.init[0], dtype=np.float64)
    for n in range(lag, lag + total - 1):
        x = buf[n]
        d0 = buf[n - lag]
        d_half = 0.5 * (buf[n - lag] + buf[n - lag + 1])
        k1 = mackey_glass_rhs(x, d0, alpha, beta)
        k2 = mackey_glass_rhs(x + 0.5 * dt * k1, d_half, alpha, beta)
        buf[n + 1] = x + dt * k2
    return Series(buf[lag + spec.transient:].copy())


def lorenz_rhs(state, sigma=10.0, rho=28.0, beta=8.0 / 3.0):
    x, y, z = state
    return np.array([sigma * (y - x), rho * x - y - x * z, x * y - beta * z])


def rossler_rhs(state, a=0.2, b=0.2, c=4.6):
    x, y, z = state
    return np.array([-z - y, x + a * y, b + z * (x - c)])


def rk4_step(rhs, state, dt):
    k1 = rhs(state)
    k2 = rhs(state + 0.5 * dt * k1)
    k3 = rhs(state + 0.5 * dt * k2)
    k4 = rhs(state + dt * k3)
    return state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _integrate_ode(rhs, spec):
    state = np.array(spec.init, dtype=np.float64)
    col = "xyz".index(spec.component)
    out = np.empty(spec.n_points)
    for _ in range(spec.transient):
        state = rk4_step(rhs, state, spec.dt)
    for k in range(spec.n_points):
        out[k] = state[col]
        state = rk4_step(rhs, state, spec.dt)
    return Series(out)


def gen_lorenz(spec):
    p = spec.params
    return _integrate_ode(lambda s: lorenz_rhs(s, p["sigma"], p["rho"], p["beta"]), spec)


def gen_rossler(spec):
    p = spec.params
    return _integrate_ode(lambda s: rossler_rhs(s, p["a"], p["b"], p["c"]), spec)


def generate(spec):
    return {"mackey_glass": gen_mackey_glass, "lorenz": gen_lorenz, "rossler": gen_rossler}[
        spec.system
    ](spec)


# -- scaling, splitting, windowing ----------------------------------------

def scale_unit(series, fit_range=None):
    """Min-max scale with bounds taken from ``values[fit_range]`` only.

    Values outside the fitted range are not clipped.
    """
    values = np.asarray(series.values if isinstance(series, Series) else series, dtype=np.float64)
    start, stop = (0, len(values)) if fit_range is None else fit_range
    ref = values[start:stop]
    if len(ref) == 0:
        raise ValueError(f"empty fit range {fit_range}")
    lo, hi = float(ref.min()), float(ref.max())
    if not hi > lo:
        raise ValueError(f"degenerate scale: series is constant ({lo!r}) over the fit range")
    return Series((values - lo) / (hi - lo), scale_min=lo, scale_max=hi)


def split_train_test(series, n_train):
    """Contiguous prefix/suffix split; both parts keep the scaling metadata."""
    n = len(series)
    if not 0 < n_train < n:
        raise ValueError(f"n_train must be in (0, {n}), got {n_train}")
    return (
        replace(series, values=series.values[:n_train].copy()),
        replace(series, values=series.values[n_train:].copy()),
    )


@dataclass(frozen=True)
class WindowSpec:
    n_samples: int = 5
    stride: int = 6
    horizon: int = 1

    def __post_init__(self):
        for name in ("n_samples", "stride", "horizon"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")

    @property
    def span(self):
        """Index distance between the oldest input and the anchor."""
        return (self.n_samples - 1) * self.stride

    @property
    def min_length(self):
        return self.span + 1 + self.horizon


@dataclass
class WindowedDataset:
    """``inputs[k]`` are the lagged samples ending at ``anchors[k]``;
    ``targets[k]`` the ``horizon`` values right after the anchor."""

    inputs: np.ndarray
    targets: np.ndarray
    anchors: np.ndarray
    spec: WindowSpec

    def __len__(self):
        return len(self.inputs)

    def subset(self, idx):
        return WindowedDataset(self.inputs[idx], self.targets[idx], self.anchors[idx], self.spec)


def make_windows(series, spec):
    values = np.asarray(series.values if isinstance(series, Series) else series, dtype=np.float64)
    if len(values) < spec.min_length:
        raise ConfigError(
            f"series of length {len(values)} is too short for {spec}; "
            f"need at least {spec.min_length} points"
        )
    anchors = np.arange(spec.span, len(values) - spec.horizon)
    lags = np.arange(-spec.span, 1, spec.stride)
    steps = np.arange(1, spec.horizon + 1)
    return WindowedDataset(
        inputs=values[anchors[:, None] + lags[None, :]],
        targets=values[anchors[:, None] + steps[None, :]],
        anchors=anchors,
        spec=spec,
    )


def n_windows(length, spec):
    return max(0, length - spec.span - spec.horizon)

