"""SVG drawing of a Newton polygon: valuation points, hull, lattice points, grid."""
from __future__ import annotations
from typing import List, Sequence

import numpy as np
from shapely import affinity
from shapely.geometry import LineString, MultiPoint, Point

from .newton import NewtonPolygon, ValuationPoint

GRID_LIMIT = 50
MARGIN = 1.0


def _flip(geom):
    # SVG y grows downward; valuations should grow upward
    return affinity.scale(geom, xfact=1.0, yfact=-1.0, origin=(0, 0))


def _grid(max_x: int, max_y: int) -> List[str]:
    if max_x > GRID_LIMIT or max_y > GRID_LIMIT:
        return []
    lines = []
    for x in np.arange(0, max_x + 1):
        lines.append(_flip(LineString([(x, 0), (x, max_y)])))
    for y in np.arange(0, max_y + 1):
        lines.append(_flip(LineString([(0, y), (max_x, y)])))
    return [g.svg(scale_factor=0.02, stroke_color="#dddddd") for g in lines]


def render_svg(polygon: NewtonPolygon, points: Sequence[ValuationPoint]) -> str:
    """Standalone SVG document; vertices sit in ``<g class="vertices">``, one circle each."""
    cloud = _flip(MultiPoint([(p.x, p.y) for p in points]))
    minx, miny, maxx, maxy = cloud.bounds
    width = maxx - minx + 2 * MARGIN
    height = maxy - miny + 2 * MARGIN
    max_x = max(p.x for p in points)
    max_y = max(p.y for p in points)

    parts = ['<g class="grid">', *_grid(max_x, max_y), "</g>"]
    if len(polygon.vertices) >= 2:
        hull = _flip(LineString([(v.x, v.y) for v in polygon.vertices]))
        parts += ['<g class="hull">', hull.svg(scale_factor=0.05, stroke_color="#1f77b4"), "</g>"]
    parts.append('<g class="lattice">')
    for edge in polygon.edges:
        for lp in edge.lattice_points()[1:-1]:
            parts.append(_flip(Point(lp.x, lp.y)).svg(scale_factor=0.03, fill_color="#2ca02c"))
    parts.append("</g>")
    parts.append('<g class="points">')
    on_hull = set(polygon.vertices)
    for p in points:
        if p not in on_hull:
            parts.append(_flip(Point(p.x, p.y)).svg(scale_factor=0.03, fill_color="#999999"))
    parts.append("</g>")
    parts.append('<g class="vertices">')
    for v in polygon.vertices:
        parts.append(_flip(Point(v.x, v.y)).svg(scale_factor=0.05, fill_color="#d62728"))
    parts.append("</g>")

    view = f"{minx - MARGIN} {miny - MARGIN} {width} {height}"
    header = (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{view}" width="{int(width * 60)}" height="{int(height * 60)}">'
    )
    if polygon.prime is not None:
        header += f"<title>Newton polygon, p = {polygon.prime}</title>"
    return "\n".join([header, *parts, "</svg>"]) + "\n"
