"""Chart-ready summaries of annotated texts.

Four views, all pure functions of (project, parameters): per-text tag
lanes (gantt), binned coverage counts (stacked area), hierarchical tag
proportions (sunburst) and the per-corpus gallery of minimized lanes.
Rendering belongs to the UI or the SVG exporter; this module only emits
data, but its ``*_json`` helpers own the wire serialization so the HTTP
layer can return their output byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Collection

import numpy as np

from .model import Project, Tag


@dataclass(frozen=True, slots=True)
class GanttLane:
    """One tag's merged annotation intervals along a text."""

    tag: str
    color: str
    intervals: tuple[tuple[int, int], ...]


@dataclass(frozen=True, slots=True)
class StackedSeries:
    """Per-bin counts of code points covered by one tag."""

    tag: str
    bin_width: int
    counts: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class SunburstNode:
    """Subtree annotation count and share of the sibling total.

    ``tag`` is None only at the synthetic root. A leaf child carrying its
    parent's tag id holds the annotations placed directly on a tag that
    also has annotated subtags, so children always sum to their parent.
    """

    tag: str | None
    name: str
    color: str | None
    count: int
    share: float
    children: tuple["SunburstNode", ...]


def _merge_intervals(ranges: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    if not ranges:
        return ()
    ranges.sort()
    merged = [list(ranges[0])]
    for start, end in ranges[1:]:
        if start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return tuple((s, e) for s, e in merged)


def _ordered_tags(project: Project, tags: Collection[str] | None) -> list[Tag]:
    selected = list(project.tags())
    if tags is not None:
        wanted = set(tags)
        selected = [t for t in selected if t.id in wanted]
    return selected


def gantt(
    project: Project, text_id: str, tags: Collection[str] | None = None
) -> list[GanttLane]:
    """One lane per tag with at least one annotation in the text.

    Lane intervals are the union of the tag's annotation ranges; lanes
    follow tagset declaration order.
    """
    project.text_by_id(text_id)  # raises KeyError on unknown text
    by_tag: dict[str, list[tuple[int, int]]] = {}
    for ann in project.annotations:
        if ann.text == text_id:
            by_tag.setdefault(ann.tag, []).extend(ann.ranges)
    lanes = []
    for tag in _ordered_tags(project, tags):
        if tag.id in by_tag:
            lanes.append(
                GanttLane(
                    tag=tag.id,
                    color=tag.color,
                    intervals=_merge_intervals(by_tag[tag.id]),
                )
            )
    return lanes


def default_bin_width(text_length: int) -> int:
    """About 100 bins: one per screen-width slot of an area chart."""
    return max(1, math.ceil(text_length / 100))


def stacked_area(
    project: Project,
    text_id: str,
    bin_width: int | None = None,
    tags: Collection[str] | None = None,
) -> list[StackedSeries]:
    """Covered-code-point counts per bin for each tag present in the text."""
    text = project.text_by_id(text_id)
    if bin_width is None:
        bin_width = default_bin_width(text.length)
    if bin_width < 1:
        raise ValueError("bin_width must be >= 1")
    n_bins = math.ceil(text.length / bin_width) if text.length else 0
    edges = np.arange(0, n_bins * bin_width, bin_width)
    series = []
    for lane in gantt(project, text_id, tags):
        covered = np.zeros(text.length, dtype=bool)
        for start, end in lane.intervals:
            covered[start:end] = True
        if n_bins:
            counts = np.add.reduceat(covered.astype(np.int64), edges)
        else:
            counts = np.zeros(0, np.int64)
        series.append(
            StackedSeries(
                tag=lane.tag, bin_width=bin_width, counts=tuple(int(c) for c in counts)
            )
        )
    return series


def gallery(
    project: Project, tags: Collection[str] | None = None
) -> list[tuple[str, list[GanttLane]]]:
    """Minimized per-text lanes, in project text order."""
    return [(t.id, gantt(project, t.id, tags)) for t in project.texts]


def sunburst(
    project: Project, scope: str | None = None, mode: str = "occurrences"
) -> SunburstNode:
    """Hierarchical tag distribution for one text or the whole project.

    ``mode`` is "occurrences" (count annotations, the reported default) or
    "characters" (count covered code points, merged per tag so sibling
    sums stay exact). An annotation on a subtag rolls up into every
    ancestor's count.
    """
    if mode not in ("occurrences", "characters"):
        raise ValueError(f"unknown sunburst mode: {mode!r}")
    if scope is not None:
        root_name = project.text_by_id(scope).title
        annotations = project.annotations_for(scope)
    else:
        root_name = project.name
        annotations = list(project.annotations)

    direct: dict[str, int] = {}
    if mode == "occurrences":
        for ann in annotations:
            direct[ann.tag] = direct.get(ann.tag, 0) + 1
    else:
        per_tag_ranges: dict[tuple[str, str], list[tuple[int, int]]] = {}
        for ann in annotations:
            per_tag_ranges.setdefault((ann.text, ann.tag), []).extend(ann.ranges)
        for (_, tag_id), ranges in per_tag_ranges.items():
            covered = sum(e - s for s, e in _merge_intervals(ranges))
            direct[tag_id] = direct.get(tag_id, 0) + covered

    tags = {t.id: t for t in project.tags()}
    children_of: dict[str | None, list[Tag]] = {}
    for tag in project.tags():
        parent = tag.parent if tag.parent in tags else None
        children_of.setdefault(parent, []).append(tag)

    def build(tag: Tag) -> SunburstNode | None:
        own = direct.get(tag.id, 0)
        child_nodes = [
            node for child in children_of.get(tag.id, ()) if (node := build(child))
        ]
        total = own + sum(c.count for c in child_nodes)
        if total == 0:
            return None
        if own and child_nodes:
            # annotations directly on an inner tag get their own slice so
            # that child counts always sum to the parent count
            child_nodes.append(
                SunburstNode(tag.id, tag.name, tag.color, own, 0.0, ())
            )
        return SunburstNode(tag.id, tag.name, tag.color, total, 0.0, tuple(child_nodes))

    roots = [node for tag in children_of.get(None, ()) if (node := build(tag))]
    total = sum(r.count for r in roots)

    def with_shares(node: SunburstNode, parent_count: int) -> SunburstNode:
        share = node.count / parent_count if parent_count else 0.0
        return SunburstNode(
            tag=node.tag,
            name=node.name,
            color=node.color,
            count=node.count,
            share=share,
            children=tuple(with_shares(c, node.count) for c in node.children),
        )

    return SunburstNode(
        tag=None,
        name=root_name,
        color=None,
        count=total,
        share=1.0,
        children=tuple(with_shares(r, total) for r in roots),
    )


# ---------------------------------------------------------------------------
# Wire serialization (shared verbatim by the HTTP service and the CLI)
# ---------------------------------------------------------------------------


def _dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def _lane_jsonable(lane: GanttLane) -> dict:
    return {
        "tag": lane.tag,
        "color": lane.color,
        "intervals": [[s, e] for s, e in lane.intervals],
    }


def gantt_json(
    project: Project, text_id: str, tags: Collection[str] | None = None
) -> str:
    text = project.text_by_id(text_id)
    lanes = gantt(project, text_id, tags)
    return _dumps(
        {
            "text": text.id,
            "title": text.title,
            "length": text.length,
            "lanes": [_lane_jsonable(lane) for lane in lanes],
        }
    )


def stacked_json(
    project: Project,
    text_id: str,
    bin_width: int | None = None,
    tags: Collection[str] | None = None,
) -> str:
    text = project.text_by_id(text_id)
    series = stacked_area(project, text_id, bin_width, tags)
    width = series[0].bin_width if series else (bin_width or default_bin_width(text.length))
    colors = {t.id: t.color for t in project.tags()}
    return _dumps(
        {
            "text": text.id,
            "length": text.length,
            "bin_width": width,
            "series": [
                {"tag": s.tag, "color": colors[s.tag], "counts": list(s.counts)}
                for s in series
            ],
        }
    )


def stacked_csv(series: list[StackedSeries]) -> str:
    """CSV export, columns: bin_start, tag, count."""
    lines = ["bin_start,tag,count"]
    for s in series:
        for b, count in enumerate(s.counts):
            lines.append(f"{b * s.bin_width},{s.tag},{count}")
    return "\n".join(lines) + "\n"


def _sunburst_jsonable(node: SunburstNode) -> dict:
    return {
        "tag": node.tag,
        "name": node.name,
        "color": node.color,
        "count": node.count,
        "share": node.share,
        "children": [_sunburst_jsonable(c) for c in node.children],
    }


def sunburst_json(
    project: Project, scope: str | None = None, mode: str = "occurrences"
) -> str:
    return _dumps(_sunburst_jsonable(sunburst(project, scope, mode)))


def gallery_json(project: Project, tags: Collection[str] | None = None) -> str:
    entries = []
    for text_id, lanes in gallery(project, tags):
        text = project.text_by_id(text_id)
        entries.append(
            {
                "text": text.id,
                "title": text.title,
                "length": text.length,
                "lanes": [_lane_jsonable(lane) for lane in lanes],
            }
        )
    return _dumps({"project": project.id, "entries": entries})
