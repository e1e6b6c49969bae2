"""Acceptance suite: one test per release criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line
per criterion.
"""

import statistics
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import spearmanr

from conftest import random_embeddings, random_graph

from corerank.cli import main as cli_main
from corerank.decomposition import core_numbers, decompose, save_decomposition_csv
from corerank.embeddings import EmbeddingMatrix, default_ids, save_embeddings
from corerank.graph import BuildConfig, SimilarityGraph, build_graph, cosine_similarity
from corerank.selection import Tier, ranked_ids, select_fraction, select_tiers

FIXTURES = Path(__file__).parent / "fixtures"


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL: {name}")
        raise
    print(f"ACCEPTANCE PASS: {name}")


def random_suite(seed: int, count: int, max_n: int):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        p = float(rng.choice([0.02, 0.05, 0.1, 0.3]))
        yield random_graph(rng, n, p)


def test_oracle_equivalence():
    with criterion("oracle equivalence on 100 random graphs in < 10 s"):
        start = time.monotonic()
        for g in random_suite(seed=1, count=100, max_n=200):
            r = decompose(g)
            assert (r.coreness == np.maximum(1, core_numbers(g))).all()
        assert time.monotonic() - start < 10.0


def test_hand_traced_fixtures(tmp_path):
    with criterion("hand-traced fixtures bit-exact in CSV"):
        cases = {
            "triangle": (
                SimilarityGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)]),
                "id,label,coreness,round,rd\n0,0,2,2,6\n1,0,2,2,6\n2,0,2,2,6\n",
            ),
            "path5": (
                SimilarityGraph.from_edges(
                    5, [(0, 1), (1, 2), (2, 3), (3, 4)], node_ids=tuple("abcde")
                ),
                "id,label,coreness,round,rd\na,0,1,1,3\nb,0,1,2,6\nc,0,1,3,7\n"
                "d,0,1,2,6\ne,0,1,1,3\n",
            ),
            "star": (
                SimilarityGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)]),
                "id,label,coreness,round,rd\n0,0,1,2,5\n1,0,1,1,3\n2,0,1,1,3\n3,0,1,1,3\n",
            ),
            "triangle_plus_isolate": (
                SimilarityGraph.from_edges(4, [(0, 1), (1, 2), (0, 2)]),
                "id,label,coreness,round,rd\n0,0,2,2,6\n1,0,2,2,6\n2,0,2,2,6\n3,0,1,1,1\n",
            ),
        }
        for name, (graph, expected) in cases.items():
            path = tmp_path / f"{name}.csv"
            save_decomposition_csv(decompose(graph), path)
            assert path.read_text() == expected, name


def test_relabeling_equivariance():
    with criterion("relabeling equivariance on 50 random graphs"):
        rng = np.random.default_rng(2)
        for g in random_suite(seed=3, count=50, max_n=100):
            n = g.node_count
            perm = rng.permutation(n)
            inv = np.argsort(perm)
            gp = SimilarityGraph.from_edges(
                n, [(int(inv[u]), int(inv[v])) for u, v in g.edges()]
            )
            r, rp = decompose(g), decompose(gp)
            assert (rp.coreness[inv] == r.coreness).all()
            assert (rp.round[inv] == r.round).all()
            assert (rp.rd[inv] == r.rd).all()


def test_fine_grained_ranking():
    with criterion("rd refines the coreness ranking on every random graph"):
        ratios = []
        for g in random_suite(seed=4, count=100, max_n=150):
            r = decompose(g)
            pairs = len({(int(k), int(d)) for k, d in zip(r.coreness, r.rd)})
            values = len(set(r.coreness.tolist()))
            assert pairs >= values
            ratios.append(pairs / values)
        print(f"  median refinement ratio: {statistics.median(ratios):.2f}")


def test_graph_builder_oracle():
    with criterion("graph builder matches brute force; edges monotone in threshold"):
        rng = np.random.default_rng(5)
        thresholds = (-0.5, 0.0, 0.3, 0.6, 0.9)
        for _ in range(20):
            n = int(rng.integers(2, 51))
            rows = random_embeddings(rng, n, 8)
            m = EmbeddingMatrix(rows, default_ids(n), ("0",) * n)
            previous = None
            for eps in thresholds:
                g = build_graph(m, BuildConfig(epsilon=eps))
                expected = {
                    (u, v)
                    for u in range(n)
                    for v in range(u + 1, n)
                    if cosine_similarity(rows[u], rows[v]) > eps
                }
                assert set(g.edges()) == expected
                if previous is not None:
                    assert set(g.edges()) <= previous
                previous = set(g.edges())


def test_synthetic_hierarchy():
    with criterion(
        "central samples of a Gaussian cluster rank higher (Spearman > 0.5) in < 30 s"
    ):
        start = time.monotonic()
        sigma = 0.1
        rng = np.random.default_rng(2024)
        center = np.ones(64) / 8.0  # unit-norm mean direction
        points = center + sigma * rng.normal(size=(500, 64))
        m = EmbeddingMatrix(points, default_ids(500), ("0",) * 500)
        g = build_graph(m, BuildConfig(percentile=90.0))
        assert g.degrees.mean() >= 10
        r = decompose(g)
        order = ranked_ids(r)  # best first
        score = np.empty(500)
        for pos, sid in enumerate(order):
            score[int(sid)] = 500 - pos
        distance = np.linalg.norm(points - center, axis=1)
        rho = spearmanr(-distance, score).statistic
        print(f"  spearman rho: {rho:.3f}")
        assert rho > 0.5
        assert time.monotonic() - start < 30.0


def test_rd_bounds():
    with criterion("round + degree <= rd <= round + degree * max_round"):
        for g in random_suite(seed=6, count=60, max_n=120):
            r = decompose(g)
            degs = g.degrees
            max_round = int(r.round.max())
            assert (r.round + degs <= r.rd).all()
            assert (r.rd <= r.round + degs * max_round).all()


def test_selection_contracts():
    with criterion("tier sizes, disjointness, ordering, and class balance"):
        rng = np.random.default_rng(7)
        for _ in range(30):
            n_nodes = int(rng.integers(3, 120))
            g = random_graph(rng, n_nodes, 0.1)
            r = decompose(g)
            ordering = ranked_ids(r)
            n = int(rng.integers(1, n_nodes + 1))
            tiers = select_tiers(ordering, n)
            assert all(len(ids) == n for ids in tiers.values())
            if 3 * n <= n_nodes:
                combined = [s for ids in tiers.values() for s in ids]
                assert len(set(combined)) == 3 * n
            if 2 * n <= n_nodes:
                core_of = dict(zip(r.node_ids, r.coreness.tolist()))
                assert min(core_of[s] for s in tiers[Tier.HIGH]) >= max(
                    core_of[s] for s in tiers[Tier.LOW]
                )
        orderings = {
            "a": [f"a{i}" for i in range(137)],
            "b": [f"b{i}" for i in range(52)],
        }
        for fraction in (0.05, 0.1, 0.2, 0.33, 1.0):
            subsets = select_fraction(orderings, fraction)
            for label, ids in subsets.items():
                target = int(np.ceil(fraction * len(orderings[label])))
                assert abs(len(ids) - target) <= 1


def test_pipeline_determinism(tmp_path):
    with criterion("two pipeline runs produce byte-identical data outputs"):
        rng = np.random.default_rng(9)
        rows = np.concatenate(
            [
                rng.normal(loc=1.0, scale=0.5, size=(20, 8)),
                rng.normal(loc=-1.0, scale=0.5, size=(20, 8)),
            ]
        )
        m = EmbeddingMatrix(
            rows, default_ids(40), ("x",) * 20 + ("y",) * 20
        )
        src = tmp_path / "data.emb"
        save_embeddings(m, src)
        outs = [tmp_path / "run1", tmp_path / "run2"]
        for out in outs:
            code = cli_main(
                [
                    "pipeline", str(src), "--epsilon", "0.2", "--out", str(out),
                    "--tier-size", "5", "--fraction", "0.1", "--format", "csv",
                ]
            )
            assert code == 0
        names = sorted(p.name for p in outs[0].iterdir())
        assert names == sorted(p.name for p in outs[1].iterdir())
        for name in names:
            if name == "manifest.json":
                continue  # records the differing --out path by design
            assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes(), name
