"""Command-line front-end: pool/load -> build -> decompose -> select -> analyze.

Subcommands share the graph-building flags; every run writes a
``manifest.json`` describing its inputs and parameters, and re-running
with the same inputs reproduces byte-identical outputs.  Diagnostics go
to stderr; data goes to files under ``--out``.

Exit codes: 0 success, 1 domain or validation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import coreness_histogram, radial_layout, render
from .decomposition import (
    DecompositionResult,
    decompose,
    save_decomposition_csv,
    save_decomposition_json,
)
from .embeddings import EmbeddingMatrix, load_embeddings, partition_by_label
from .errors import CorerankError
from .graph import BuildConfig, build_graph, save_edge_list, save_graph_json
from .selection import (
    Tier,
    ranked_ids,
    save_id_list,
    save_manifest,
    select_fraction,
    select_tier,
    load_subset_ids,
)


def _atomic_write_text(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic(path: Path, writer) -> None:
    """Run ``writer(tmp_path)`` then rename onto ``path``."""
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    os.close(fd)
    try:
        writer(Path(tmp))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", label) or "_"


def _add_graph_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--epsilon", type=float, help="absolute similarity threshold")
    group.add_argument(
        "--epsilon-percentile",
        type=float,
        help="threshold at this percentile of off-diagonal similarities",
    )
    p.add_argument("--class", dest="class_filter", help="restrict to one class label")
    p.add_argument(
        "--merge-classes",
        action="store_true",
        help="build one graph over all samples instead of one per class",
    )


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="embedding file (.csv or EMB1 binary)")
    p.add_argument("--out", required=True, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corerank",
        description="Coreness-based hierarchy analysis of embedded datasets",
    )
    parser.add_argument("--version", action="version", version=f"corerank {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-graph", help="build similarity graphs and export them")
    _add_common(p)
    _add_graph_flags(p)

    p = sub.add_parser("decompose", help="build graphs and compute the decomposition")
    _add_common(p)
    _add_graph_flags(p)

    p = sub.add_parser("select", help="extract tier and fraction subsets")
    _add_common(p)
    _add_graph_flags(p)
    p.add_argument("--tier-size", type=int, help="samples per tier per class")
    p.add_argument(
        "--fraction", type=float, action="append", default=[],
        help="class-balanced fraction in (0, 1]; repeatable",
    )

    p = sub.add_parser("analyze", help="coreness histograms and radial layouts")
    _add_common(p)
    _add_graph_flags(p)
    p.add_argument("--subset", help="external subset file (id list or JSON manifest)")
    p.add_argument("--format", choices=["svg", "csv", "json"], default="csv")
    p.add_argument("--sqrt-scale", action="store_true", help="sqrt y-scale in SVG bars")

    p = sub.add_parser("pipeline", help="run build, decompose, select, and analyze")
    _add_common(p)
    _add_graph_flags(p)
    p.add_argument("--tier-size", type=int)
    p.add_argument("--fraction", type=float, action="append", default=[])
    p.add_argument("--subset", help="external subset file (id list or JSON manifest)")
    p.add_argument("--format", choices=["svg", "csv", "json"], default="csv")
    p.add_argument("--sqrt-scale", action="store_true")

    return parser


def _load_groups(args) -> dict[str, EmbeddingMatrix]:
    """Embedding groups to process: per class, merged, or one filtered class."""
    matrix = load_embeddings(args.input)
    if args.merge_classes:
        groups = {"all": matrix}
    else:
        groups = partition_by_label(matrix)
    if args.class_filter is not None:
        if args.class_filter not in groups:
            raise CorerankError(
                f"class {args.class_filter!r} not present in {args.input}"
            )
        groups = {args.class_filter: groups[args.class_filter]}
    return groups


def _config(args) -> BuildConfig:
    return BuildConfig(epsilon=args.epsilon, percentile=args.epsilon_percentile)


def _write_run_manifest(args, out: Path) -> None:
    manifest = {
        "tool": "corerank",
        "version": __version__,
        "command": args.command,
        "input": args.input,
        "epsilon": args.epsilon,
        "epsilon_percentile": args.epsilon_percentile,
        "class_filter": args.class_filter,
        "merge_classes": args.merge_classes,
        "tier_size": getattr(args, "tier_size", None),
        "fractions": getattr(args, "fraction", None),
        "subset": getattr(args, "subset", None),
        "format": getattr(args, "format", None),
        "sqrt_scale": getattr(args, "sqrt_scale", None),
        "out": str(out),
    }
    _atomic_write_text(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")


def _decompose_groups(groups, config) -> dict[str, tuple]:
    out = {}
    for label, part in groups.items():
        graph = build_graph(part, config)
        out[label] = (graph, decompose(graph))
    return out


def _concat_results(per_class: dict[str, tuple]) -> DecompositionResult:
    ids, labels, coreness, rnd, rd = [], [], [], [], []
    for label in sorted(per_class):
        _, result = per_class[label]
        ids.extend(result.node_ids)
        labels.extend(result.labels)
        coreness.extend(result.coreness.tolist())
        rnd.extend(result.round.tolist())
        rd.extend(result.rd.tolist())
    return DecompositionResult(tuple(ids), tuple(labels), coreness, rnd, rd)


def _cmd_build_graph(args, out: Path) -> None:
    config = _config(args)
    for label, part in _load_groups(args).items():
        graph = build_graph(part, config)
        _atomic(out / f"graph_{_slug(label)}.json", lambda p: save_graph_json(graph, p))
        _atomic(out / f"edges_{_slug(label)}.txt", lambda p: save_edge_list(graph, p))


def _cmd_decompose(args, out: Path) -> None:
    per_class = _decompose_groups(_load_groups(args), _config(args))
    combined = _concat_results(per_class)
    _atomic(out / "decomposition.csv", lambda p: save_decomposition_csv(combined, p))
    _atomic(out / "decomposition.json", lambda p: save_decomposition_json(combined, p))


def _cmd_select(args, out: Path) -> None:
    if args.tier_size is None and not args.fraction:
        raise CorerankError("select needs --tier-size and/or --fraction")
    per_class = _decompose_groups(_load_groups(args), _config(args))
    orderings = {label: ranked_ids(result) for label, (_, result) in per_class.items()}
    if args.tier_size is not None:
        for tier in Tier:
            per_label = {
                label: select_tier(ordering, args.tier_size, tier)
                for label, ordering in orderings.items()
            }
            merged = [sid for label in sorted(per_label) for sid in per_label[label]]
            _atomic(out / f"tier_{tier.value}.txt", lambda p: save_id_list(merged, p))
            _atomic(out / f"tier_{tier.value}.json", lambda p: save_manifest(per_label, p))
    for fraction in args.fraction:
        subsets = select_fraction(orderings, fraction)
        stem = f"fraction_{fraction:g}".replace(".", "_")
        merged = [sid for label in sorted(subsets) for sid in subsets[label]]
        _atomic(out / f"{stem}.txt", lambda p: save_id_list(merged, p))
        _atomic(out / f"{stem}.json", lambda p: save_manifest(subsets, p))


def _cmd_analyze(args, out: Path) -> None:
    subset = load_subset_ids(args.subset) if args.subset else None
    per_class = _decompose_groups(_load_groups(args), _config(args))
    for label, (graph, result) in per_class.items():
        class_subset = (
            None if subset is None else subset & set(result.node_ids)
        )
        hist = coreness_histogram(result, class_subset)
        layout = radial_layout(
            graph,
            result,
            class_subset,
            meta={"class": label, "epsilon": args.epsilon},
        )
        slug = _slug(label)
        fmt = args.format
        _atomic(
            out / f"histogram_{slug}.{fmt}",
            lambda p: render(hist, fmt, p, sqrt_scale=args.sqrt_scale),
        )
        _atomic(out / f"layout_{slug}.{fmt}", lambda p: render(layout, fmt, p))


def _cmd_pipeline(args, out: Path) -> None:
    _cmd_build_graph(args, out)
    _cmd_decompose(args, out)
    if args.tier_size is not None or args.fraction:
        _cmd_select(args, out)
    _cmd_analyze(args, out)


_COMMANDS = {
    "build-graph": _cmd_build_graph,
    "decompose": _cmd_decompose,
    "select": _cmd_select,
    "analyze": _cmd_analyze,
    "pipeline": _cmd_pipeline,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        _COMMANDS[args.command](args, out)
        _write_run_manifest(args, out)
    except (CorerankError, FileNotFoundError, OSError) as exc:
        print(f"corerank: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
