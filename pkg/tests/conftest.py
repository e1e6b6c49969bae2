import numpy as np
import pytest

from corerank.graph import SimilarityGraph


def random_graph(rng: np.random.Generator, n: int, p: float) -> SimilarityGraph:
    """Erdos-Renyi G(n, p) as a SimilarityGraph."""
    upper = rng.random((n, n)) < p
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if upper[u, v]]
    return SimilarityGraph.from_edges(n, edges)


def random_embeddings(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    rows = rng.normal(size=(n, dim))
    # zero-norm rows are invalid input; nudge any that appear
    zero = ~rows.any(axis=1)
    rows[zero, 0] = 1.0
    return rows


@pytest.fixture
def triangle():
    return SimilarityGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path5():
    return SimilarityGraph.from_edges(
        5, [(0, 1), (1, 2), (2, 3), (3, 4)], node_ids=("a", "b", "c", "d", "e")
    )


@pytest.fixture
def star():
    return SimilarityGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def triangle_plus_isolate():
    return SimilarityGraph.from_edges(4, [(0, 1), (1, 2), (0, 2)])
