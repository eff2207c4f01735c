"""Render region snapshots as static SVG figures."""

import logging
from typing import List, Sequence, Tuple
from xml.sax.saxutils import escape

from feasible_region.engine.clip_engine import RegionKind, RegionSnapshot
from feasible_region.verification.oracle import canonical_vertices, snapshot_vertices

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())

# The figure is drawn in the viewBox 0 0 VIEW_SIZE VIEW_SIZE
VIEW_SIZE = 100.0
MARGIN = 5.0
POINT_RADIUS = 1.0
STROKE = "#1f4e79"
FILL = "#9dc3e6"


def _project(
    vertices: Sequence[Tuple[float, float]]
) -> List[Tuple[float, float]]:
    """Scale vertices into the viewBox, y axis pointing up."""
    xs = [x for x, _ in vertices]
    ys = [y for _, y in vertices]
    width = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    scale = (VIEW_SIZE - 2 * MARGIN) / width
    return [
        (
            MARGIN + (x - min(xs)) * scale,
            VIEW_SIZE - MARGIN - (y - min(ys)) * scale,
        )
        for x, y in vertices
    ]


def render_svg(snapshot: RegionSnapshot, title: str = "") -> str:
    """Return an SVG document drawing the region of a snapshot."""
    vertices = [
        (float(x), float(y)) for x, y in canonical_vertices(snapshot_vertices(snapshot))
    ]
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg"'
        f' viewBox="0 0 {VIEW_SIZE:g} {VIEW_SIZE:g}">',
    ]
    if title:
        lines.append(f"  <title>{escape(title)}</title>")
    if snapshot.kind == RegionKind.EMPTY or not vertices:
        lines.append(
            f'  <text x="{VIEW_SIZE / 2:g}" y="{VIEW_SIZE / 2:g}"'
            ' text-anchor="middle" font-size="6">empty</text>'
        )
    else:
        points = _project(vertices)
        if snapshot.kind == RegionKind.POLYGON:
            path = " ".join(f"{x:.3f},{y:.3f}" for x, y in points)
            lines.append(
                f'  <polygon points="{path}" fill="{FILL}" stroke="{STROKE}"'
                ' stroke-width="0.5"/>'
            )
        elif snapshot.kind == RegionKind.SEGMENT:
            (x1, y1), (x2, y2) = points
            lines.append(
                f'  <line x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}"'
                f' stroke="{STROKE}" stroke-width="0.5"/>'
            )
        for x, y in points:
            lines.append(
                f'  <circle cx="{x:.3f}" cy="{y:.3f}" r="{POINT_RADIUS:g}"'
                f' fill="{STROKE}"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(filename: str, snapshot: RegionSnapshot, title: str = "") -> None:
    """Write the SVG figure of a snapshot."""
    LOGGER.info(
        "Writing the figure of the %s region to %s", snapshot.kind.value, filename
    )
    with open(filename, "w", encoding="utf-8") as stream:
        stream.write(render_svg(snapshot, title))
