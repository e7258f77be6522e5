"""Version-tagged text format for trained models.

::

    ALSTM v1
    tensor lstm.W_i 32 32
    <row-major values, one row per line, 17 significant digits>
    ...
    config
    d_in = 1
    ...

Vectors are written as ``n x 1`` tensors.
"""

import numpy as np

from .exceptions import ConfigError
from .model import Alstm, ModelConfig, param_shapes
from .nn import ParamSet

MAGIC = "ALSTM v1"


def _fmt(v):
    return format(float(v), ".17g")


def dumps(model):
    lines = [MAGIC]
    for name, value in model.params.items():
        mat = value.reshape(value.shape[0], -1) if value.ndim == 2 else value[:, None]
        lines.append(f"tensor {name} {mat.shape[0]} {mat.shape[1]}")
        lines.extend(" ".join(_fmt(v) for v in row) for row in mat)
    lines.append("config")
    for key, value in model.config.as_dict().items():
        lines.append(f"{key} = {str(value).lower() if isinstance(value, bool) else value}")
    return "\n".join(lines) + "\n"


def loads(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise ConfigError(f"not an {MAGIC!r} model file")
    tensors = {}
    k = 1
    while k < len(lines) and lines[k].strip() != "config":
        head = lines[k].split()
        if len(head) != 4 or head[0] != "tensor":
            raise ConfigError(f"line {k + 1}: expected 'tensor <name> <rows> <cols>'")
        name, rows, cols = head[1], int(head[2]), int(head[3])
        body = lines[k + 1:k + 1 + rows]
        if len(body) != rows:
            raise ConfigError(f"tensor {name}: truncated data")
        mat = np.array([[float(v) for v in row.split()] for row in body], dtype=np.float64)
        if mat.shape != (rows, cols):
            raise ConfigError(f"tensor {name}: expected {rows}x{cols} values")
        tensors[name] = mat
        k += 1 + rows
    if k >= len(lines):
        raise ConfigError("missing config block")
    cfg = {}
    for line in lines[k + 1:]:
        if line.strip():
            key, _, value = line.partition("=")
            cfg[key.strip()] = value.strip()
    config = ModelConfig.from_dict(cfg)
    params = ParamSet()
    for name, shape in param_shapes(config):
        if name not in tensors:
            raise ConfigError(f"model file lacks tensor {name}")
        mat = tensors.pop(name)
        if mat.size != int(np.prod(shape)):
            raise ConfigError(f"tensor {name}: size {mat.shape} does not fit {shape}")
        params.add(name, mat.reshape(shape))
    if tensors:
        raise ConfigError(f"unexpected tensors in model file: {sorted(tensors)}")
    return Alstm(config, params)


def save_model(path, model):
    with open(path, "w") as fh:
        fh.write(dumps(model))


def load_model(path):
    with open(path) as fh:
        return loads(fh.read())
