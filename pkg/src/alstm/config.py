"""Experiment configuration files.

``key = value`` lines grouped under ``[dataset]``, ``[window]``, ``[model]``,
``[training]`` and ``[output]``. A dataset is either generated
(``source = generate``) or read from CSV (``source = csv``). CSV paths are
resolved relative to the config file; ``builtin:<name>`` refers to a file
shipped in the package's ``data`` directory.
"""

import configparser
import os
from dataclasses import dataclass, replace
from importlib import resources

from .datagen import DEFAULT_PARAMS, SeriesSpec, WindowSpec, generate, scale_unit, split_train_test
from .exceptions import ConfigError
from .ingest import CsvSpec, load_series
from .model import ModelConfig
from .optim import TrainConfig

SECTIONS = ("dataset", "window", "model", "training", "output")
_SERIES_KEYS = {"system", "dt", "n_points", "transient", "init", "component"}
_CSV_KEYS = {"path", "delimiter", "column", "missing", "downsample", "max_rows", "header"}


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    dataset: object  # SeriesSpec or CsvSpec
    n_train: int
    window: WindowSpec
    model: ModelConfig
    training: TrainConfig
    output_dir: str = "runs"

    @property
    def seed(self):
        return self.training.seed

    def with_seed(self, seed):
        return replace(self, training=replace(self.training, seed=int(seed)))

    def with_overrides(self, model=None, training=None, output_dir=None, name=None):
        return replace(
            self,
            model=replace(self.model, **(model or {})),
            training=replace(self.training, **(training or {})),
            output_dir=self.output_dir if output_dir is None else output_dir,
            name=self.name if name is None else name,
        )


def _resolve_path(path, base_dir):
    if path.startswith("builtin:"):
        return str(resources.files("alstm").joinpath("data", path[len("builtin:"):]))
    return path if os.path.isabs(path) else os.path.normpath(os.path.join(base_dir, path))


def _int(section, key, value):
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected an integer, got {value!r}") from None


def _dataset(sec, base_dir):
    sec = dict(sec)
    source = sec.pop("source", "generate").strip()
    if "n_train" not in sec:
        raise ConfigError("[dataset] n_train is required")
    n_train = _int("dataset", "n_train", sec.pop("n_train"))
    if source == "generate":
        system = sec.get("system", "mackey_glass").strip()
        if system not in DEFAULT_PARAMS:
            raise ConfigError(f"[dataset] unknown system {system!r}")
        kwargs, params = {"system": system}, {}
        for key, value in sec.items():
            if key in ("system",):
                continue
            if key in DEFAULT_PARAMS[system]:
                params[key] = float(value)
            elif key == "dt":
                kwargs["dt"] = float(value)
            elif key in ("n_points", "transient"):
                kwargs[key] = _int("dataset", key, value)
            elif key == "init":
                kwargs["init"] = tuple(float(v) for v in value.split(","))
            elif key == "component":
                kwargs["component"] = value.strip()
            else:
                raise ConfigError(f"[dataset] unknown key {key!r} for system {system}")
        return SeriesSpec(params=params, **kwargs), n_train
    if source == "csv":
        unknown = set(sec) - _CSV_KEYS
        if unknown:
            raise ConfigError(f"[dataset] unknown csv keys {sorted(unknown)}")
        if "path" not in sec:
            raise ConfigError("[dataset] csv source needs a path")
        kwargs = {"path": _resolve_path(sec["path"].strip(), base_dir)}
        if "delimiter" in sec:
            kwargs["delimiter"] = sec["delimiter"].strip() or ","
        if "column" in sec:
            kwargs["column"] = sec["column"].strip()
        if "missing" in sec:
            kwargs["missing"] = sec["missing"].strip()
        if "downsample" in sec:
            kwargs["downsample"] = _int("dataset", "downsample", sec["downsample"])
        if "max_rows" in sec:
            kwargs["max_rows"] = _int("dataset", "max_rows", sec["max_rows"])
        if "header" in sec:
            kwargs["header"] = sec["header"].strip().lower() in ("true", "1", "yes")
        return CsvSpec(**kwargs), n_train
    raise ConfigError(f"[dataset] unknown source {source!r}")


def parse_config(text, base_dir=".", name="experiment"):
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    unknown = set(parser.sections()) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown sections {sorted(unknown)}")
    if not parser.has_section("dataset"):
        raise ConfigError("config lacks a [dataset] section")
    get = lambda s: dict(parser.items(s)) if parser.has_section(s) else {}
    try:
        dataset, n_train = _dataset(get("dataset"), base_dir)
        w = get("window")
        window = WindowSpec(**{k: _int("window", k, v) for k, v in w.items()})
        m = get("model")
        if "horizon" in m and _int("model", "horizon", m["horizon"]) != window.horizon:
            raise ConfigError(
                f"[model] horizon {m['horizon']} does not match [window] horizon {window.horizon}"
            )
        m["horizon"] = window.horizon
        _check_keys("model", m, ModelConfig)
        model = ModelConfig.from_dict(m)
        t = get("training")
        _check_keys("training", t, TrainConfig)
        training = TrainConfig.from_dict(t)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
    out = get("output").get("dir", os.path.join("runs", name))
    return ExperimentConfig(name, dataset, n_train, window, model, training, out)


def _check_keys(section, data, cls):
    allowed = set(cls.__dataclass_fields__)
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"[{section}] unknown keys {sorted(unknown)}")


def load_config(path):
    with open(path) as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(path))[0]
    return parse_config(text, base_dir=os.path.dirname(os.path.abspath(path)), name=name)


def canned_config_path(name):
    return str(resources.files("alstm").joinpath("configs", f"{name}.cfg"))


def load_raw_series(dataset):
    """Unscaled series for a dataset block."""
    if isinstance(dataset, SeriesSpec):
        return generate(dataset)
    return load_series(dataset)


def prepare_data(exp):
    """Scale on the training prefix and split. Returns ``(scaled, train, test)``."""
    raw = load_raw_series(exp.dataset)
    if not 0 < exp.n_train < len(raw):
        raise ConfigError(f"n_train={exp.n_train} is out of range for a series of length {len(raw)}")
    scaled = scale_unit(raw, (0, exp.n_train))
    train, test = split_train_test(scaled, exp.n_train)
    return scaled, train, test

