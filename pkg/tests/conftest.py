import numpy as np
import pytest

from odnsparse import OdnMatrix


def random_odn(rng: np.random.Generator, n: int, density: float = 0.5,
               diag_low: float = -1.0, diag_high: float = 2.0) -> OdnMatrix:
    """Random ODN matrix: uniform(0,1] weights, arbitrary-sign diagonal."""
    i, j = np.triu_indices(n, k=1)
    keep = rng.random(len(i)) < density
    i, j = i[keep], j[keep]
    weights = 1.0 - rng.random(len(i))
    diag = rng.uniform(diag_low, diag_high, size=n)
    return OdnMatrix(n, i, j, weights, diag)


def random_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2.0


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)
