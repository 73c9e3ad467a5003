import numpy as np
import pytest

from racbem.blockenc import BlockEncoding
from racbem.tasks import generate_instance


def random_ua(n: int, seed: int, depth: int | None = None) -> BlockEncoding:
    return generate_instance(n, seed, depth=depth)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
