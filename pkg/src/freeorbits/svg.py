"""Small SVG renderings: arcs on a circle glyph, orbit clouds and step graphs.

Coordinates are float approximations printed at 12 significant digits.
"""
from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from typing import Iterable, Optional, Sequence

SIZE = 400
CENTER = SIZE / 2
RADIUS = 150
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _f(x: float) -> str:
    return format(float(x), ".12g")


def _svg(width=SIZE, height=SIZE) -> ET.Element:
    return ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(width), height=str(height),
                      viewBox=f"0 0 {width} {height}")


def _polar(t: float, r: float) -> tuple[float, float]:
    ang = 2 * math.pi * t - math.pi / 2
    return CENTER + r * math.cos(ang), CENTER + r * math.sin(ang)


def _arc_path(lo: float, hi: float, r: float) -> str:
    span = (hi - lo) % 1.0 or 1.0
    if span >= 1.0 - 1e-12:
        x0, y0 = _polar(lo, r)
        x1, y1 = _polar(lo + 0.5, r)
        return (f"M {_f(x0)} {_f(y0)} A {_f(r)} {_f(r)} 0 1 1 {_f(x1)} {_f(y1)} "
                f"A {_f(r)} {_f(r)} 0 1 1 {_f(x0)} {_f(y0)}")
    x0, y0 = _polar(lo, r)
    x1, y1 = _polar(lo + span, r)
    large = 1 if span > 0.5 else 0
    return f"M {_f(x0)} {_f(y0)} A {_f(r)} {_f(r)} 0 {large} 1 {_f(x1)} {_f(y1)}"


def _to_string(root: ET.Element) -> str:
    return ET.tostring(root, encoding="unicode") + "\n"


def circle_arcs(layers: Sequence[tuple[str, Iterable]], title: str = "") -> str:
    """``layers`` is a list of ``(label, components)``; each component is an ArcInterval."""
    root = _svg()
    if title:
        ET.SubElement(root, "title").text = title
    ET.SubElement(root, "circle", cx=_f(CENTER), cy=_f(CENTER), r=_f(RADIUS), fill="none", stroke="#999")
    for i, (label, comps) in enumerate(layers):
        color = PALETTE[i % len(PALETTE)]
        r = RADIUS - 12 * (i + 1)
        g = ET.SubElement(root, "g", stroke=color, fill=color)
        g.set("data-label", label)
        for c in comps:
            if c.kind == "full":
                path = _arc_path(0.0, 1.0, r)
                ET.SubElement(g, "path", d=path, fill="none")
            elif c.kind == "point":
                x, y = _polar(float(c.lo), r)
                ET.SubElement(g, "circle", cx=_f(x), cy=_f(y), r="3")
            else:
                path = _arc_path(float(c.lo), float(c.hi), r)
                ET.SubElement(g, "path", d=path, fill="none", **{"stroke-width": "4"})
        tx = ET.SubElement(root, "text", x="8", y=_f(16 + 14 * i), fill=color)
        tx.text = label
    return _to_string(root)


def orbit_cloud(points: Sequence[float], circle: bool = True, window: Optional[tuple] = None, title: str = "") -> str:
    root = _svg()
    if title:
        ET.SubElement(root, "title").text = title
    if circle:
        ET.SubElement(root, "circle", cx=_f(CENTER), cy=_f(CENTER), r=_f(RADIUS), fill="none", stroke="#999")
        for t in points:
            x, y = _polar(t, RADIUS)
            ET.SubElement(root, "circle", cx=_f(x), cy=_f(y), r="2", fill=PALETTE[0])
    else:
        lo, hi = window if window else (min(points, default=0.0), max(points, default=1.0))
        span = (hi - lo) or 1.0
        ET.SubElement(root, "line", x1="20", y1=_f(CENTER), x2=_f(SIZE - 20), y2=_f(CENTER), stroke="#999")
        for t in points:
            if lo <= t <= hi:
                x = 20 + (SIZE - 40) * (t - lo) / span
                ET.SubElement(root, "circle", cx=_f(x), cy=_f(CENTER), r="2", fill=PALETTE[0])
    return _to_string(root)


def step_graph(pieces: Sequence[tuple[float, float, Optional[float]]], title: str = "") -> str:
    """Pieces ``(x0, x1, value)`` on [0, 1] (value ``None`` where undefined)."""
    root = _svg()
    if title:
        ET.SubElement(root, "title").text = title
    pad = 30
    w = SIZE - 2 * pad

    def px(t):
        return pad + w * t

    def py(v):
        return SIZE - pad - w * v

    ET.SubElement(root, "rect", x=_f(pad), y=_f(pad), width=_f(w), height=_f(w), fill="none", stroke="#999")
    for x0, x1, v in pieces:
        if v is None:
            ET.SubElement(root, "line", x1=_f(px(x0)), y1=_f(py(0)), x2=_f(px(x1)), y2=_f(py(0)),
                          stroke="#ccc", **{"stroke-dasharray": "4 2"})
        elif x0 == x1:
            ET.SubElement(root, "circle", cx=_f(px(x0)), cy=_f(py(v)), r="2.5", fill=PALETTE[1])
        else:
            ET.SubElement(root, "line", x1=_f(px(x0)), y1=_f(py(v)), x2=_f(px(x1)), y2=_f(py(v)),
                          stroke=PALETTE[0], **{"stroke-width": "2"})
    return _to_string(root)
