"""Coreness histograms and radial layouts, with CSV/JSON/SVG rendering.

The radial layout places high-coreness nodes near the center:
radius = (k_max - coreness + 1) / (k_max - k_min + 1), so the maximal
core forms the innermost ring and every ring shares one radius.  The
formula itself is a presentation choice; output metadata records it.
Node size is an affine map of degree into [s_min, s_max].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .decomposition import DecompositionResult
from .errors import FormatError, ValidationError
from .graph import SimilarityGraph


@dataclass(frozen=True)
class HistogramReport:
    """Counts per coreness value for the full node set and, optionally,
    an overlaid subset."""

    bins: dict[int, int]
    total: int
    overlay: dict[int, int] | None = None
    subset_total: int | None = None


@dataclass(frozen=True)
class LayoutNode:
    id: str
    coreness: int
    round: int
    rd: int
    degree: int
    radius: float
    angle: float
    size: float
    highlight: bool


@dataclass(frozen=True)
class RadialLayout:
    nodes: tuple[LayoutNode, ...]
    meta: dict = field(default_factory=dict)


def coreness_histogram(
    result: DecompositionResult, subset: set[str] | None = None
) -> HistogramReport:
    """Exact count per coreness value; overlay counts are filled for every
    bin (zero where the subset is absent) when a subset is given."""
    bins: dict[int, int] = {}
    for k in result.coreness:
        bins[int(k)] = bins.get(int(k), 0) + 1
    bins = dict(sorted(bins.items()))
    if subset is None:
        return HistogramReport(bins=bins, total=len(result.node_ids))
    known = set(result.node_ids)
    for sid in sorted(subset):
        if sid not in known:
            raise ValidationError(f"subset id {sid!r} not in node set")
    overlay = {k: 0 for k in bins}
    for sid, k in zip(result.node_ids, result.coreness):
        if sid in subset:
            overlay[int(k)] += 1
    return HistogramReport(
        bins=bins, total=len(result.node_ids), overlay=overlay, subset_total=len(subset)
    )


def radial_layout(
    graph: SimilarityGraph,
    result: DecompositionResult,
    subset: set[str] | None = None,
    s_min: float = 2.0,
    s_max: float = 10.0,
    meta: dict | None = None,
) -> RadialLayout:
    """Ring per coreness value; within a ring nodes are spaced uniformly
    in rd-descending (then id-ascending) order."""
    if graph.node_ids != result.node_ids:
        raise ValidationError("decomposition is not aligned with the graph")
    if subset:
        known = set(graph.node_ids)
        for sid in sorted(subset):
            if sid not in known:
                raise ValidationError(f"subset id {sid!r} not in node set")
    subset = subset or set()
    k_min = int(result.coreness.min())
    k_max = int(result.coreness.max())
    span = k_max - k_min + 1
    degrees = graph.degrees
    d_min, d_max = int(degrees.min()), int(degrees.max())

    def size_of(d: int) -> float:
        if d_max == d_min:
            return s_min
        return s_min + (d - d_min) / (d_max - d_min) * (s_max - s_min)

    rings: dict[int, list[int]] = {}
    for i, k in enumerate(result.coreness):
        rings.setdefault(int(k), []).append(i)
    nodes: list[LayoutNode | None] = [None] * graph.node_count
    for k, members in rings.items():
        members.sort(key=lambda i: (-result.rd[i], result.node_ids[i]))
        for pos, i in enumerate(members):
            nodes[i] = LayoutNode(
                id=result.node_ids[i],
                coreness=k,
                round=int(result.round[i]),
                rd=int(result.rd[i]),
                degree=int(degrees[i]),
                radius=(k_max - k + 1) / span,
                angle=2.0 * math.pi * pos / len(members),
                size=size_of(int(degrees[i])),
                highlight=result.node_ids[i] in subset,
            )
    full_meta = {"k_min": k_min, "k_max": k_max}
    full_meta.update(meta or {})
    return RadialLayout(nodes=tuple(nodes), meta=full_meta)


# --- rendering ---------------------------------------------------------


def histogram_to_csv(report: HistogramReport) -> str:
    lines = ["coreness,count,subset_count"]
    for k, count in report.bins.items():
        sub = "" if report.overlay is None else str(report.overlay[k])
        lines.append(f"{k},{count},{sub}")
    return "\n".join(lines) + "\n"


def histogram_from_csv(text: str) -> HistogramReport:
    lines = [line for line in text.splitlines() if line]
    if not lines or lines[0] != "coreness,count,subset_count":
        raise FormatError("expected header 'coreness,count,subset_count'")
    bins: dict[int, int] = {}
    overlay: dict[int, int] = {}
    has_overlay = False
    for line in lines[1:]:
        k, count, sub = line.split(",")
        bins[int(k)] = int(count)
        if sub != "":
            has_overlay = True
            overlay[int(k)] = int(sub)
    return HistogramReport(
        bins=bins,
        total=sum(bins.values()),
        overlay=overlay if has_overlay else None,
        subset_total=sum(overlay.values()) if has_overlay else None,
    )


def histogram_to_json(report: HistogramReport) -> str:
    payload = {
        "bins": {str(k): v for k, v in report.bins.items()},
        "total": report.total,
        "overlay": None
        if report.overlay is None
        else {str(k): v for k, v in report.overlay.items()},
        "subset_total": report.subset_total,
    }
    return json.dumps(payload, indent=2) + "\n"


def histogram_from_json(text: str) -> HistogramReport:
    data = json.loads(text)
    return HistogramReport(
        bins={int(k): v for k, v in data["bins"].items()},
        total=data["total"],
        overlay=None
        if data["overlay"] is None
        else {int(k): v for k, v in data["overlay"].items()},
        subset_total=data["subset_total"],
    )


def layout_to_csv(layout: RadialLayout) -> str:
    lines = ["id,coreness,round,rd,degree,radius,angle,size,highlight"]
    for n in layout.nodes:
        lines.append(
            f"{n.id},{n.coreness},{n.round},{n.rd},{n.degree},"
            f"{n.radius!r},{n.angle!r},{n.size!r},{int(n.highlight)}"
        )
    return "\n".join(lines) + "\n"


def layout_from_csv(text: str) -> RadialLayout:
    lines = [line for line in text.splitlines() if line]
    header = "id,coreness,round,rd,degree,radius,angle,size,highlight"
    if not lines or lines[0] != header:
        raise FormatError(f"expected header {header!r}")
    nodes = []
    for line in lines[1:]:
        p = line.split(",")
        nodes.append(
            LayoutNode(
                id=p[0],
                coreness=int(p[1]),
                round=int(p[2]),
                rd=int(p[3]),
                degree=int(p[4]),
                radius=float(p[5]),
                angle=float(p[6]),
                size=float(p[7]),
                highlight=bool(int(p[8])),
            )
        )
    return RadialLayout(nodes=tuple(nodes))


def layout_to_json(layout: RadialLayout) -> str:
    payload = {
        "nodes": [
            {
                "id": n.id,
                "coreness": n.coreness,
                "round": n.round,
                "rd": n.rd,
                "degree": n.degree,
                "radius": n.radius,
                "angle": n.angle,
                "size": n.size,
                "highlight": n.highlight,
            }
            for n in layout.nodes
        ],
        "meta": layout.meta,
    }
    return json.dumps(payload, indent=2) + "\n"


def layout_from_json(text: str) -> RadialLayout:
    data = json.loads(text)
    return RadialLayout(
        nodes=tuple(LayoutNode(**n) for n in data["nodes"]),
        meta=data.get("meta", {}),
    )


_SVG_SIZE = 600


def histogram_to_svg(report: HistogramReport, sqrt_scale: bool = False) -> str:
    """Self-contained bar chart; overlay bars drawn inside the full bars."""
    width = _SVG_SIZE
    height = _SVG_SIZE
    margin = 40
    ks = list(report.bins)
    scale = math.sqrt if sqrt_scale else float
    max_val = max(scale(v) for v in report.bins.values())
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin
    bar_w = plot_w / max(len(ks), 1)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<!-- y-scale: {"sqrt" if sqrt_scale else "linear"} -->',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for i, k in enumerate(ks):
        x = margin + i * bar_w
        h = 0.0 if max_val == 0 else scale(report.bins[k]) / max_val * plot_h
        parts.append(
            f'<rect x="{x:.3f}" y="{height - margin - h:.3f}" '
            f'width="{bar_w * 0.85:.3f}" height="{h:.3f}" fill="#4878cf"/>'
        )
        if report.overlay is not None:
            ho = 0.0 if max_val == 0 else scale(report.overlay[k]) / max_val * plot_h
            parts.append(
                f'<rect x="{x:.3f}" y="{height - margin - ho:.3f}" '
                f'width="{bar_w * 0.85:.3f}" height="{ho:.3f}" fill="#d65f5f"/>'
            )
        parts.append(
            f'<text x="{x + bar_w * 0.425:.3f}" y="{height - margin + 15}" '
            f'font-size="10" text-anchor="middle">{k}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def layout_to_svg(layout: RadialLayout) -> str:
    """Self-contained scatter of nodes on their coreness rings; subset
    members get a distinct fill."""
    size = _SVG_SIZE
    center = size / 2
    scale = size / 2 - 20
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<!-- meta: {json.dumps(layout.meta, sort_keys=True)} -->",
        "<!-- radius rule: higher coreness lies closer to the center; "
        "radius=(k_max-coreness+1)/(k_max-k_min+1) is a presentation choice -->",
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for radius in sorted({n.radius for n in layout.nodes}, reverse=True):
        parts.append(
            f'<circle cx="{center}" cy="{center}" r="{radius * scale:.3f}" '
            f'fill="none" stroke="#dddddd"/>'
        )
    for n in layout.nodes:
        cx = center + n.radius * scale * math.cos(n.angle)
        cy = center + n.radius * scale * math.sin(n.angle)
        fill = "#d65f5f" if n.highlight else "#9ab8e8"
        parts.append(
            f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{n.size:.3f}" '
            f'fill="{fill}" stroke="#333333" stroke-width="0.3"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render(report, format: str, path: str | Path, sqrt_scale: bool = False) -> None:
    """Write a histogram or layout to ``path`` as svg, csv, or json."""
    if isinstance(report, HistogramReport):
        renderers = {
            "csv": lambda: histogram_to_csv(report),
            "json": lambda: histogram_to_json(report),
            "svg": lambda: histogram_to_svg(report, sqrt_scale=sqrt_scale),
        }
    elif isinstance(report, RadialLayout):
        renderers = {
            "csv": lambda: layout_to_csv(report),
            "json": lambda: layout_to_json(report),
            "svg": lambda: layout_to_svg(report),
        }
    else:
        raise TypeError(f"cannot render {type(report).__name__}")
    if format not in renderers:
        raise ValidationError(f"unknown render format {format!r}")
    Path(path).write_text(renderers[format](), encoding="utf-8")
