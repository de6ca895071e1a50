"""SVG export of electrode outlines.

User units are millimeters. The emitter and collector sheets are separate
groups so they can be cut as separate layers; every closed polyline becomes
one ``path``. Output carries no timestamps and fixed number formatting.
"""

import xml.etree.ElementTree as ET
from collections.abc import Iterable, Sequence
from pathlib import Path

from .geometry import ElectrodeOutline
from .utils.types import PathLike, Point

__all__ = ["outline_to_svg", "write_svg"]

SVG_NAMESPACE = "http://www.w3.org/2000/svg"
_MM = 1e3


def _fmt(value: float) -> str:
    text = f"{value:.4f}"
    return "0.0000" if text == "-0.0000" else text


def _path_data(points: Sequence[Point]) -> str:
    # SVG y grows downwards
    coords = [f"{_fmt(x * _MM)},{_fmt(-y * _MM)}" for x, y in points]
    return "M" + " L".join(coords) + " Z"


def _group(parent: ET.Element, name: str, polylines: Iterable[Sequence[Point]], stroke: str) -> ET.Element:
    group = ET.SubElement(parent, "g", id=name, fill="none", stroke=stroke, attrib={"stroke-width": "0.02"})
    for polyline in polylines:
        ET.SubElement(group, "path", d=_path_data(polyline))
    return group


def outline_to_svg(outline: ElectrodeOutline) -> str:
    """Render an outline as an SVG document string."""
    xs = [x for x, _ in outline.rim]
    ys = [y for _, y in outline.rim]
    min_x, max_x = min(xs) * _MM, max(xs) * _MM
    min_y, max_y = -max(ys) * _MM, -min(ys) * _MM
    width, height = max_x - min_x, max_y - min_y

    root = ET.Element(
        "svg",
        xmlns=SVG_NAMESPACE,
        version="1.1",
        width=f"{_fmt(width)}mm",
        height=f"{_fmt(height)}mm",
        viewBox=f"{_fmt(min_x)} {_fmt(min_y)} {_fmt(width)} {_fmt(height)}",
    )
    _group(root, "emitter", outline.emitter, "#c0392b")
    _group(root, "collector", outline.collector, "#2c3e50")
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def write_svg(outline: ElectrodeOutline, path: PathLike) -> None:
    Path(path).write_text(outline_to_svg(outline), encoding="utf-8")
