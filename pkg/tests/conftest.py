import numpy as np
import pytest

from bell_tradeoff import validate_input
from bell_tradeoff._kernels import warmup


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # keep JIT compile time out of individual tests' timing
    warmup()


@pytest.fixture
def two_lambda_input():
    return validate_input(np.array([[0.1, 0.2, 0.3, 0.4], [0.9, 0.8, 0.7, 0.6]]))


@pytest.fixture
def three_lambda_input():
    # columns p(.|1) = (0.5, 0.3, 0.2), p(.|2) = (0.2, 0.5, 0.3),
    #         p(.|3) = (0.3, 0.3, 0.4), p(.|4) = (0.25, 0.25, 0.5)
    table = np.array(
        [
            [0.5, 0.2, 0.3, 0.25],
            [0.3, 0.5, 0.3, 0.25],
            [0.2, 0.3, 0.4, 0.5],
        ]
    )
    return validate_input(table)


@pytest.fixture
def point_input():
    return validate_input(np.ones((1, 4)))
