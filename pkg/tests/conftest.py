import pytest

from divbang import ModelParams, SimConfig

#: parameter set of the worked numerical example used across the suite
EXAMPLE = dict(c1=2.0, c2=4.0, b1=0.25, b2=0.75, lam=1.0, gamma=0.25, q=0.05)


@pytest.fixture
def params() -> ModelParams:
    return ModelParams(**EXAMPLE)


@pytest.fixture
def fast_cfg() -> SimConfig:
    # looser tail budget keeps censored paths short in unit tests
    return SimConfig(horizon_epsilon=1e-3)
