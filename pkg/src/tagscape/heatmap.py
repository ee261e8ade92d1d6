"""Similarity heatmap as a standalone SVG.

White-to-red linear ramp (redder = more similar), row/column labels,
and a small legend. No rendering dependencies: the output is a plain
deterministic string.
"""

from __future__ import annotations

from typing import Mapping
from xml.sax.saxutils import escape

from .similarity import SimilarityMatrix


def ramp_color(score: float) -> str:
    """Linear white (0) -> red (1)."""
    s = min(max(score, 0.0), 1.0)
    channel = round(255 * (1.0 - s))
    return f"#ff{channel:02x}{channel:02x}"


def heatmap_svg(
    matrix: SimilarityMatrix,
    titles: Mapping[str, str] | None = None,
    cell: int = 26,
    label_space: int = 110,
) -> str:
    """Render the full symmetric matrix; the diagonal sits at saturation."""
    names = [titles.get(t, t) if titles else t for t in matrix.texts]
    n = len(matrix.texts)
    legend_h = 46
    width = label_space + n * cell + 10
    height = label_space + n * cell + legend_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for i, a in enumerate(matrix.texts):
        y = label_space + i * cell
        for j, b in enumerate(matrix.texts):
            x = label_space + j * cell
            score = matrix.score(a, b)
            parts.append(
                f'<rect x="{x}" y="{y}" width="{cell}" height="{cell}" '
                f'fill="{ramp_color(score)}" stroke="#ddd">'
                f"<title>{escape(names[i])} / {escape(names[j])}: {score:.6f}</title></rect>"
            )
    for i, name in enumerate(names):
        y = label_space + i * cell + cell // 2 + 4
        parts.append(
            f'<text x="{label_space - 6}" y="{y}" text-anchor="end">{escape(name)}</text>'
        )
        x = label_space + i * cell + cell // 2
        parts.append(
            f'<text x="{x}" y="{label_space - 6}" text-anchor="start" '
            f'transform="rotate(-60 {x} {label_space - 6})">{escape(name)}</text>'
        )

    # legend: 0 -> 1 ramp in ten swatches
    ly = label_space + n * cell + 14
    for k in range(10):
        parts.append(
            f'<rect x="{label_space + k * 20}" y="{ly}" width="20" height="12" '
            f'fill="{ramp_color((k + 0.5) / 10)}"/>'
        )
    parts.append(f'<text x="{label_space}" y="{ly + 26}">0</text>')
    parts.append(f'<text x="{label_space + 200}" y="{ly + 26}" text-anchor="end">1</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
