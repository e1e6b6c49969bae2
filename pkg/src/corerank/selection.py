"""Hierarchical ranking and subset extraction from decomposition results.

Nodes are ordered by coreness (descending), then rd (descending), then
sample id (ascending).  The id tie-break makes every ordering a strict
total order, so selections are reproducible with no randomness anywhere.
"""

from __future__ import annotations

import json
from enum import Enum
from math import ceil
from pathlib import Path

from .decomposition import DecompositionResult
from .errors import ValidationError


class Tier(str, Enum):
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"


def rank_nodes(result: DecompositionResult) -> list[int]:
    """Node indices sorted best-first: coreness desc, rd desc, id asc."""
    return sorted(
        range(len(result.node_ids)),
        key=lambda i: (-result.coreness[i], -result.rd[i], result.node_ids[i]),
    )


def ranked_ids(result: DecompositionResult) -> list[str]:
    return [result.node_ids[i] for i in rank_nodes(result)]


def select_tier(ordering: list[str], n: int, tier: Tier) -> list[str]:
    """n sample ids from a best-first ordering.

    High takes the first n, Low the last n, Medium a contiguous block of n
    starting at position floor((N - n) / 2).
    """
    total = len(ordering)
    if not 1 <= n <= total:
        raise ValidationError(f"tier size {n} out of range [1, {total}]")
    tier = Tier(tier)
    if tier is Tier.HIGH:
        return list(ordering[:n])
    if tier is Tier.LOW:
        return list(ordering[total - n :])
    start = (total - n) // 2
    return list(ordering[start : start + n])


def select_tiers(ordering: list[str], n: int) -> dict[Tier, list[str]]:
    return {tier: select_tier(ordering, n, tier) for tier in Tier}


def select_fraction(
    per_class_orderings: dict[str, list[str]], fraction: float
) -> dict[str, list[str]]:
    """Top ceil(fraction * N_class) ids from every class's ordering."""
    if not 0.0 < fraction <= 1.0:
        raise ValidationError(f"fraction must be in (0, 1], got {fraction}")
    out = {}
    for label, ordering in per_class_orderings.items():
        if not ordering:
            raise ValidationError(f"class {label!r} has no nodes")
        out[label] = list(ordering[: ceil(fraction * len(ordering))])
    return out


def save_id_list(ids, path: str | Path) -> None:
    """Newline-delimited sample ids."""
    ids = list(ids)
    Path(path).write_text("\n".join(ids) + ("\n" if ids else ""), encoding="utf-8")


def load_id_list(path: str | Path) -> list[str]:
    return [
        line for line in Path(path).read_text(encoding="utf-8").splitlines() if line
    ]


def save_manifest(subsets: dict[str, list[str]], path: str | Path) -> None:
    """JSON manifest mapping class label to selected sample ids."""
    Path(path).write_text(
        json.dumps({label: list(ids) for label, ids in sorted(subsets.items())}, indent=2)
        + "\n",
        encoding="utf-8",
    )


def load_manifest(path: str | Path) -> dict[str, list[str]]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: manifest must map class label to id list")
    return {label: list(ids) for label, ids in data.items()}


def load_subset_ids(path: str | Path) -> set[str]:
    """Read an external subset file, either newline-delimited ids or a
    JSON manifest; returns the union of ids."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        manifest = load_manifest(path)
        return {sid for ids in manifest.values() for sid in ids}
    return set(load_id_list(path))
