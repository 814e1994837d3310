"""Deterministic SVG and JSON serialization of resolved pictures."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .curves import BezierChain, closed_spline
from .resolver import ResolvedPicture

PX_PER_CM = 96 / 2.54


@dataclass(frozen=True)
class SvgConfig:
    precision: int = 4
    margin_units: float = 0.0
    px_per_cm: float = PX_PER_CM

    def __post_init__(self):
        if not 1 <= self.precision <= 12:
            raise ValueError("precision must be in [1, 12]")
        if not self.margin_units >= 0:
            raise ValueError("margin_units must be >= 0")
        if not self.px_per_cm > 0:
            raise ValueError("px_per_cm must be positive")


def expand_curves(picture: ResolvedPicture, tension: float = 0.0) -> List[Optional[BezierChain]]:
    """One entry per element: a chain for closed curves, None for polylines."""
    return [closed_spline(el.points, tension) if el.kind == "closed_curve" else None
            for el in picture.elements]


def fmt(x: float, precision: int) -> str:
    text = f"{x:.{precision}f}"
    if text.startswith("-") and not text.strip("-0."):
        text = text[1:]
    return text


def emit_svg(picture: ResolvedPicture,
             chains: Optional[Sequence[Optional[BezierChain]]] = None,
             config: SvgConfig = SvgConfig()) -> str:
    """Render one picture as a standalone SVG 1.1 document.

    User space is pixels; a unit-space point (x, y) maps to (x*s, -y*s)
    with s = unit_cm * px_per_cm. Nothing is clipped to the bounding box.
    """
    if chains is None:
        chains = expand_curves(picture)
    if len(chains) != len(picture.elements):
        raise ValueError("need one chain entry per element")
    s = picture.unit_cm * config.px_per_cm
    p = config.precision
    m = config.margin_units
    lo_x, lo_y = picture.bbox_lo.x - m, picture.bbox_lo.y - m
    hi_x, hi_y = picture.bbox_hi.x + m, picture.bbox_hi.y + m
    width, height = (hi_x - lo_x) * s, (hi_y - lo_y) * s

    def xy(pt) -> str:
        return f"{fmt(pt[0] * s, p)} {fmt(-pt[1] * s, p)}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{fmt(width, p)}" height="{fmt(height, p)}" '
        f'viewBox="{fmt(lo_x * s, p)} {fmt(-hi_y * s, p)} {fmt(width, p)} {fmt(height, p)}" '
        f'overflow="visible">',
    ]
    for element, chain in zip(picture.elements, chains):
        if element.kind == "polyline":
            d = "M " + xy(element.points[0]) + "".join(" L " + xy(q) for q in element.points[1:])
        else:
            if chain is None:
                raise ValueError("closed curve without a Bézier chain")
            d = "M " + xy(chain.segments[0][0])
            for _, c1, c2, p3 in chain.segments:
                d += f" C {xy(c1)} {xy(c2)} {xy(p3)}"
            d += " Z"
        stroke = fmt(element.linewidth_cm * config.px_per_cm, p)
        lines.append(
            f'<path d="{d}" fill="none" stroke="#000000" stroke-width="{stroke}" '
            f'stroke-linecap="round" stroke-linejoin="round"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _num(x: float) -> float:
    # 12 significant digits, no negative zero
    return float(f"{x:.12g}") + 0.0


def _pt(pt) -> List[float]:
    return [_num(pt[0]), _num(pt[1])]


def emit_resolved_json(pictures: Sequence[ResolvedPicture],
                       chains: Optional[Sequence[Sequence[Optional[BezierChain]]]] = None,
                       unit_cm: Optional[float] = None) -> str:
    """Dump resolved geometry (and curve Béziers) as one JSON document."""
    if chains is None:
        chains = [expand_curves(pic) for pic in pictures]
    if unit_cm is None:
        unit_cm = pictures[0].unit_cm if pictures else 1.0
    out = {"unit_cm": _num(unit_cm), "pictures": []}
    for pic, pic_chains in zip(pictures, chains):
        elements = []
        for el, chain in zip(pic.elements, pic_chains):
            entry = {
                "kind": el.kind,
                "linewidth_cm": _num(el.linewidth_cm),
                "points": [_pt(q) for q in el.points],
            }
            if el.kind == "closed_curve":
                entry["beziers"] = [[_pt(q) for q in seg] for seg in chain.segments]
            elements.append(entry)
        out["pictures"].append({"bbox": [_pt(pic.bbox_lo), _pt(pic.bbox_hi)], "elements": elements})
    return json.dumps(out, separators=(",", ":")) + "\n"
