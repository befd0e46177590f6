import numpy as np
import pytest

import unigof

# keep pytest from trying to collect the result dataclass as a test class
unigof.TestOutcome.__test__ = False


@pytest.fixture
def rng():
    """Fresh fixed-seed generator per test."""
    return np.random.default_rng(20260816)


def random_unit_matrix(rng: np.random.Generator, rows: int, n: int) -> np.ndarray:
    return rng.random((rows, n))
