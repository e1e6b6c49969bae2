import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_graph

from corerank.decomposition import DecompositionResult, decompose
from corerank.errors import ValidationError
from corerank.selection import (
    Tier,
    load_id_list,
    load_manifest,
    load_subset_ids,
    rank_nodes,
    ranked_ids,
    save_id_list,
    save_manifest,
    select_fraction,
    select_tier,
    select_tiers,
)


def result(ids, coreness, rd, labels=None, rounds=None):
    ids = tuple(ids)
    return DecompositionResult(
        ids,
        tuple(labels) if labels else ("0",) * len(ids),
        coreness,
        rounds if rounds else [1] * len(ids),
        rd,
    )


class TestRankNodes:
    def test_path_ordering(self, path5):
        assert ranked_ids(decompose(path5)) == ["c", "b", "d", "a", "e"]

    def test_all_equal_falls_back_to_id(self):
        r = result(["d", "b", "a", "c"], [1] * 4, [5] * 4)
        assert ranked_ids(r) == ["a", "b", "c", "d"]

    def test_coreness_dominates(self, triangle_plus_isolate):
        order = ranked_ids(decompose(triangle_plus_isolate))
        assert order[:3] == ["0", "1", "2"] and order[3] == "3"

    def test_monotone_rd_transform_invariance(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            r = decompose(random_graph(rng, 40, 0.1))
            transformed = result(r.node_ids, r.coreness, (3 * r.rd + 7).tolist())
            assert rank_nodes(transformed) == rank_nodes(r)


class TestSelectTier:
    def test_full_selection(self):
        ordering = list("abcde")
        for tier in Tier:
            assert select_tier(ordering, 5, tier) == ordering

    def test_path_n1(self, path5):
        ordering = ranked_ids(decompose(path5))
        assert select_tier(ordering, 1, Tier.HIGH) == ["c"]
        assert select_tier(ordering, 1, Tier.LOW) == ["e"]
        assert select_tier(ordering, 1, Tier.MEDIUM) == [ordering[2]]

    def test_medium_window(self):
        ordering = [str(i) for i in range(10)]
        assert select_tier(ordering, 4, Tier.MEDIUM) == ["3", "4", "5", "6"]

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            select_tier(list("abc"), 4, Tier.HIGH)
        with pytest.raises(ValidationError):
            select_tier(list("abc"), 0, Tier.HIGH)

    @given(total=st.integers(1, 60), seed=st.integers(0, 10_000))
    @settings(max_examples=60)
    def test_tier_contracts(self, total, seed):
        rng = np.random.default_rng(seed)
        r = decompose(random_graph(rng, total, 0.15))
        ordering = ranked_ids(r)
        n = int(rng.integers(1, total + 1))
        tiers = select_tiers(ordering, n)
        assert all(len(ids) == n for ids in tiers.values())
        if 3 * n <= total:
            all_ids = [sid for ids in tiers.values() for sid in ids]
            assert len(set(all_ids)) == 3 * n
        if 2 * n <= total:
            core_of = dict(zip(r.node_ids, r.coreness.tolist()))
            assert min(core_of[s] for s in tiers[Tier.HIGH]) >= max(
                core_of[s] for s in tiers[Tier.LOW]
            )


class TestSelectFraction:
    def test_full_fraction(self):
        subsets = select_fraction({"a": ["1", "2"], "b": ["3"]}, 1.0)
        assert subsets == {"a": ["1", "2"], "b": ["3"]}

    def test_five_percent_of_hundred(self):
        orderings = {
            "a": [f"a{i}" for i in range(100)],
            "b": [f"b{i}" for i in range(100)],
        }
        subsets = select_fraction(orderings, 0.05)
        assert len(subsets["a"]) == len(subsets["b"]) == 5
        assert subsets["a"] == [f"a{i}" for i in range(5)]

    def test_ceiling_rounding(self):
        subsets = select_fraction({"a": [str(i) for i in range(7)]}, 0.5)
        assert len(subsets["a"]) == 4

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            select_fraction({"a": ["1"]}, 0.0)
        with pytest.raises(ValidationError):
            select_fraction({"a": ["1"]}, 1.5)

    @given(
        sizes=st.lists(st.integers(1, 40), min_size=1, max_size=4),
        fraction=st.floats(0.01, 1.0),
    )
    @settings(max_examples=60)
    def test_class_balance(self, sizes, fraction):
        orderings = {
            f"c{j}": [f"c{j}_{i}" for i in range(size)] for j, size in enumerate(sizes)
        }
        subsets = select_fraction(orderings, fraction)
        for label, ids in subsets.items():
            expected = int(np.ceil(fraction * len(orderings[label])))
            assert abs(len(ids) - expected) <= 1


class TestSubsetIO:
    def test_id_list_round_trip(self, tmp_path):
        ids = ["x", "y", "z"]
        save_id_list(ids, tmp_path / "s.txt")
        assert load_id_list(tmp_path / "s.txt") == ids

    def test_manifest_round_trip(self, tmp_path):
        subsets = {"b": ["3"], "a": ["1", "2"]}
        save_manifest(subsets, tmp_path / "m.json")
        assert load_manifest(tmp_path / "m.json") == subsets

    def test_load_subset_ids_both_formats(self, tmp_path):
        save_id_list(["x", "y"], tmp_path / "s.txt")
        save_manifest({"a": ["x"], "b": ["y"]}, tmp_path / "s.json")
        assert load_subset_ids(tmp_path / "s.txt") == {"x", "y"}
        assert load_subset_ids(tmp_path / "s.json") == {"x", "y"}
