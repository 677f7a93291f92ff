import pytest

from windbench.config import BenchConfig, default_config
from windbench.turbine import TurbineParams


@pytest.fixture(scope="session")
def turbine() -> TurbineParams:
    return TurbineParams()


@pytest.fixture(scope="session")
def config() -> BenchConfig:
    return default_config()
