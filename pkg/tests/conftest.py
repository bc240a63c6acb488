import numpy as np
import pytest

from kpzsim import _kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # pay JIT compilation before any timed test
    _kernels.warmup()


@pytest.fixture()
def rng():
    return np.random.Generator(np.random.Philox(12345))
