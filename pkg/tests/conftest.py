import numpy as np
import pytest

from graphex.graph import graph_from_pairs


@pytest.fixture
def triangle():
    return graph_from_pairs([(0, 1), (1, 2), (0, 2)])


def regular_graph(n, k):
    """Circulant k-regular loopless graph on n vertices (n > k, n*k even)."""
    pairs = set()
    for i in range(n):
        for j in range(1, k // 2 + 1):
            pairs.add(tuple(sorted((i, (i + j) % n))))
        if k % 2:
            pairs.add(tuple(sorted((i, (i + n // 2) % n))))
    return graph_from_pairs(sorted(pairs))


def mean_se(values):
    values = np.asarray(values, float)
    return values.mean(), values.std(ddof=1) / np.sqrt(len(values))
