"""Round-tracking coreness decomposition and the classic core-number oracle.

``decompose`` peels the graph in rounds: starting from K=1, every round
removes the current set of nodes whose remaining degree is at most K,
records that K as their coreness and the round index as their peeling
round, then raises K to the minimum surviving degree once it exceeds K.
The round counter advances every iteration, including ones that peel
nothing, so round values may have gaps.

Each node's ``rd`` score is its own peeling round plus the sum of the
peeling rounds of its original neighbors, which breaks most of the ties a
bare coreness ranking leaves behind.

``core_numbers`` is the textbook peeling computation (maximum k such that
the node survives in the k-core) kept as an independent cross-check.  The
two disagree only on degree-0 nodes: ``decompose`` starts at K=1 and so
assigns them coreness 1 where the classic definition gives 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import FormatError, ValidationError
from .graph import SimilarityGraph


@dataclass(frozen=True)
class DecompositionResult:
    """Per-node coreness, peeling round, and rd score, aligned with the
    graph's node order."""

    node_ids: tuple[str, ...]
    labels: tuple[str, ...]
    coreness: np.ndarray
    round: np.ndarray
    rd: np.ndarray

    def __post_init__(self):
        n = len(self.node_ids)
        for name in ("coreness", "round", "rd"):
            arr = np.asarray(getattr(self, name), dtype=np.int64)
            if arr.shape != (n,):
                raise ValidationError(f"{name} must have one value per node")
            object.__setattr__(self, name, arr)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DecompositionResult):
            return NotImplemented
        return (
            self.node_ids == other.node_ids
            and self.labels == other.labels
            and bool((self.coreness == other.coreness).all())
            and bool((self.round == other.round).all())
            and bool((self.rd == other.rd).all())
        )


def decompose(graph: SimilarityGraph) -> DecompositionResult:
    """Round-tracking peeling over a simple undirected graph.

    Deterministic; nodes within a round are processed in ascending index
    order, though the result does not depend on it.  Runs in O(N + E)
    using per-degree buckets.
    """
    n = graph.node_count
    degree = graph.degrees.astype(np.int64).copy()
    coreness = np.zeros(n, dtype=np.int64)
    rnd = np.zeros(n, dtype=np.int64)
    alive = np.ones(n, dtype=bool)

    # buckets[d] holds alive nodes with current degree d (sorted sets are
    # unnecessary: we sort the per-round worklist once)
    buckets: list[set[int]] = [set() for _ in range(int(degree.max(initial=0)) + 1)]
    for v in range(n):
        buckets[degree[v]].add(v)

    k = 1
    round_no = 1
    remaining = n
    while remaining:
        peel = sorted(v for d in range(min(k, len(buckets) - 1) + 1) for v in buckets[d])
        for v in peel:
            coreness[v] = k
            rnd[v] = round_no
            for w in graph.neighbors(v):
                if alive[w]:
                    buckets[degree[w]].discard(w)
                    degree[w] -= 1
                    buckets[degree[w]].add(w)
            alive[v] = False
            buckets[degree[v]].discard(v)
            remaining -= 1
        round_no += 1
        if remaining:
            min_deg = int(degree[alive].min())
            if min_deg >= k + 1:
                k = min_deg

    rd = rnd.copy()
    for v in range(n):
        rd[v] += rnd[graph.neighbors(v)].sum()

    return DecompositionResult(graph.node_ids, graph.labels, coreness, rnd, rd)


def core_numbers(graph: SimilarityGraph) -> np.ndarray:
    """Classic core number per node via bucket peeling (O(N + E))."""
    n = graph.node_count
    degree = graph.degrees.astype(np.int64).copy()
    core = np.zeros(n, dtype=np.int64)
    removed = np.zeros(n, dtype=bool)
    buckets: list[set[int]] = [set() for _ in range(int(degree.max(initial=0)) + 1)]
    for v in range(n):
        buckets[degree[v]].add(v)
    k = 0
    for _ in range(n):
        d = next(d for d in range(len(buckets)) if buckets[d])
        k = max(k, d)
        v = min(buckets[d])
        buckets[d].discard(v)
        core[v] = k
        removed[v] = True
        for w in graph.neighbors(v):
            if not removed[w] and degree[w] > d:
                buckets[degree[w]].discard(w)
                degree[w] -= 1
                buckets[degree[w]].add(w)
    return core


def save_decomposition_csv(result: DecompositionResult, path: str | Path) -> None:
    lines = ["id,label,coreness,round,rd"]
    for i, (sid, label) in enumerate(zip(result.node_ids, result.labels)):
        lines.append(
            f"{sid},{label},{result.coreness[i]},{result.round[i]},{result.rd[i]}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_decomposition_csv(path: str | Path) -> DecompositionResult:
    path = Path(path)
    text = path.read_text(encoding="utf-8").splitlines()
    if not text or text[0] != "id,label,coreness,round,rd":
        raise FormatError(f"{path}: line 1: expected header 'id,label,coreness,round,rd'")
    ids, labels, coreness, rnd, rd = [], [], [], [], []
    for lineno, line in enumerate(text[1:], start=2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise FormatError(f"{path}: line {lineno}: expected 5 fields, got {len(parts)}")
        ids.append(parts[0])
        labels.append(parts[1])
        try:
            coreness.append(int(parts[2]))
            rnd.append(int(parts[3]))
            rd.append(int(parts[4]))
        except ValueError as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from exc
    return DecompositionResult(tuple(ids), tuple(labels), coreness, rnd, rd)


def decomposition_to_json_dict(result: DecompositionResult) -> dict:
    return {
        "nodes": [
            {
                "id": sid,
                "label": label,
                "coreness": int(result.coreness[i]),
                "round": int(result.round[i]),
                "rd": int(result.rd[i]),
            }
            for i, (sid, label) in enumerate(zip(result.node_ids, result.labels))
        ]
    }


def save_decomposition_json(result: DecompositionResult, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(decomposition_to_json_dict(result), indent=2) + "\n", encoding="utf-8"
    )


def load_decomposition_json(path: str | Path) -> DecompositionResult:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    nodes = data["nodes"]
    return DecompositionResult(
        tuple(n["id"] for n in nodes),
        tuple(n["label"] for n in nodes),
        [n["coreness"] for n in nodes],
        [n["round"] for n in nodes],
        [n["rd"] for n in nodes],
    )
