import numpy as np
import pytest

from alstm.model import Alstm, ModelConfig
from alstm.nn import make_rng


def tiny_config(**kw):
    base = dict(d_in=1, d_fx=2, d_z=2, d_fz=2, n_h=2, d_mlp=2, horizon=1, beta=0.01)
    base.update(kw)
    return ModelConfig(**base)


def perturbed_model(config, seed=0, scale=0.3):
    """Model with nonzero biases so no gradient is trivially zero."""
    model = Alstm(config, seed=seed)
    rng = make_rng(seed + 100)
    for v in model.params.values.values():
        v += rng.normal(0.0, scale, v.shape)
    return model


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    acc = sys.modules.get("test_acceptance")
    if acc is not None and acc.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(acc.RESULTS, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
