"""Thresholded cosine-similarity graphs over embedding rows.

An edge joins two samples exactly when their cosine similarity is
*strictly* greater than the threshold; ties at the threshold are
excluded.  The result is simple, undirected, and stored in compressed
sorted-adjacency form.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embeddings import EmbeddingMatrix, partition_by_label
from .errors import ConfigurationError, ValidationError


@dataclass(frozen=True)
class BuildConfig:
    """Threshold selection: an absolute value or a percentile of the
    observed off-diagonal similarities.  Exactly one must be set."""

    epsilon: float | None = None
    percentile: float | None = None

    def __post_init__(self):
        if (self.epsilon is None) == (self.percentile is None):
            raise ConfigurationError("set exactly one of epsilon / percentile")
        if self.epsilon is not None and not -1.0 <= self.epsilon <= 1.0:
            raise ConfigurationError(f"epsilon must be in [-1, 1], got {self.epsilon}")
        if self.percentile is not None and not 0.0 < self.percentile < 100.0:
            raise ConfigurationError(
                f"percentile must be in (0, 100), got {self.percentile}"
            )


@dataclass(frozen=True)
class SimilarityGraph:
    """Simple undirected graph in CSR form; neighbor lists sorted ascending."""

    indptr: np.ndarray
    indices: np.ndarray
    node_ids: tuple[str, ...]
    labels: tuple[str, ...]

    @property
    def node_count(self) -> int:
        return len(self.node_ids)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, n: int) -> np.ndarray:
        return self.indices[self.indptr[n] : self.indptr[n + 1]]

    def degree(self, n: int) -> int:
        return int(self.indptr[n + 1] - self.indptr[n])

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> list[tuple[int, int]]:
        """Each undirected edge once, as (u, v) with u < v, sorted."""
        out = []
        for u in range(self.node_count):
            for v in self.neighbors(u):
                if u < v:
                    out.append((u, int(v)))
        return out

    def check(self) -> None:
        """Assert the structural invariants; used by tests and loaders."""
        n = self.node_count
        if len(self.indptr) != n + 1 or self.indptr[0] != 0:
            raise ValidationError("malformed indptr")
        edge_set = set()
        for u in range(n):
            nbrs = self.neighbors(u)
            if len(nbrs) and (np.diff(nbrs) <= 0).any():
                raise ValidationError(f"neighbor list of node {u} not strictly ascending")
            if u in nbrs:
                raise ValidationError(f"self-loop at node {u}")
            for v in nbrs:
                edge_set.add((u, int(v)))
        for u, v in edge_set:
            if (v, u) not in edge_set:
                raise ValidationError(f"asymmetric edge ({u}, {v})")

    @classmethod
    def from_edges(cls, node_count, edges, node_ids=None, labels=None) -> "SimilarityGraph":
        """Build from an iterable of undirected (u, v) pairs; duplicates and
        self-loops are rejected."""
        adj: list[set[int]] = [set() for _ in range(node_count)]
        for u, v in edges:
            if u == v:
                raise ValidationError(f"self-loop at node {u}")
            adj[u].add(v)
            adj[v].add(u)
        indptr = np.zeros(node_count + 1, dtype=np.int64)
        indices = []
        for n, nbrs in enumerate(adj):
            ordered = sorted(nbrs)
            indices.extend(ordered)
            indptr[n + 1] = indptr[n] + len(ordered)
        if node_ids is None:
            node_ids = tuple(str(i) for i in range(node_count))
        if labels is None:
            labels = ("0",) * node_count
        return cls(indptr, np.array(indices, dtype=np.int64), tuple(node_ids), tuple(labels))


def cosine_similarity(u, v) -> float:
    """Dot product over the product of L2 norms; inputs must be nonzero."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValidationError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValidationError("cosine similarity undefined for zero-norm vector")
    return float(np.dot(u, v) / (nu * nv))


def _similarity_matrix(rows: np.ndarray) -> np.ndarray:
    normed = rows / np.linalg.norm(rows, axis=1, keepdims=True)
    sim = normed @ normed.T
    # enforce exact symmetry so edge membership never depends on pair order
    return np.triu(sim, 1) + np.triu(sim, 1).T


def resolve_epsilon(embeddings: EmbeddingMatrix, config: BuildConfig) -> float:
    """The effective threshold: the configured value, or the requested
    percentile of all off-diagonal pairwise similarities."""
    if config.epsilon is not None:
        return config.epsilon
    n = embeddings.samples
    if n < 2:
        raise ConfigurationError("percentile threshold needs at least 2 samples")
    sim = _similarity_matrix(embeddings.rows)
    offdiag = sim[np.triu_indices(n, k=1)]
    return float(np.percentile(offdiag, config.percentile))


def build_graph(embeddings: EmbeddingMatrix, config: BuildConfig) -> SimilarityGraph:
    """Edge (n, m) present iff similarity(n, m) > threshold, n != m."""
    eps = resolve_epsilon(embeddings, config)
    sim = _similarity_matrix(embeddings.rows)
    mask = sim > eps
    np.fill_diagonal(mask, False)
    indptr = np.zeros(embeddings.samples + 1, dtype=np.int64)
    np.cumsum(mask.sum(axis=1), out=indptr[1:])
    indices = np.nonzero(mask)[1].astype(np.int64)
    return SimilarityGraph(indptr, indices, embeddings.sample_ids, embeddings.labels)


def build_per_class(
    embeddings: EmbeddingMatrix, config: BuildConfig
) -> dict[str, SimilarityGraph]:
    """One graph per class label, each built over that class's rows only."""
    return {
        label: build_graph(part, config)
        for label, part in partition_by_label(embeddings).items()
    }


def save_edge_list(graph: SimilarityGraph, path: str | Path) -> None:
    """Text interchange: one ``u v`` line per edge, u < v, node indices."""
    lines = [f"{u} {v}" for u, v in graph.edges()]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def graph_to_json_dict(graph: SimilarityGraph) -> dict:
    return {
        "node_ids": list(graph.node_ids),
        "labels": list(graph.labels),
        "adjacency": [[int(v) for v in graph.neighbors(n)] for n in range(graph.node_count)],
    }


def graph_from_json_dict(data: dict) -> SimilarityGraph:
    n = len(data["node_ids"])
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = []
    for i, nbrs in enumerate(data["adjacency"]):
        indices.extend(nbrs)
        indptr[i + 1] = indptr[i] + len(nbrs)
    graph = SimilarityGraph(
        indptr,
        np.array(indices, dtype=np.int64),
        tuple(data["node_ids"]),
        tuple(data["labels"]),
    )
    graph.check()
    return graph


def save_graph_json(graph: SimilarityGraph, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(graph_to_json_dict(graph), indent=2) + "\n", encoding="utf-8"
    )


def load_graph_json(path: str | Path) -> SimilarityGraph:
    return graph_from_json_dict(json.loads(Path(path).read_text(encoding="utf-8")))
