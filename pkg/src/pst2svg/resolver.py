"""Turn parsed pictures into absolute geometry.

Points are resolved in picture units (the unit in effect when the picture
opens). Angles in the surface language are degrees throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .model import (
    AbsPoint,
    Cartesian,
    Dimension,
    DocumentTree,
    NodeRef,
    Offset,
    Picture,
    PNode,
    PointExpr,
    Polar,
    PsCCurve,
    PsLine,
    PsSet,
)
from .parser import parse_dimension

TEX_POINTS_PER_INCH = 72.27
CM_PER_UNIT = {"cm": 1.0, "mm": 0.1, "in": 2.54, "pt": 2.54 / TEX_POINTS_PER_INCH}
DEFAULT_LINEWIDTH = Dimension(0.8, "pt")


class ResolveError(Exception):
    """A point expression could not be resolved, e.g. an unbound node."""

    def __init__(self, message: str, line: int = 0, name: str = ""):
        super().__init__(f"line {line}: {message}" if line else message)
        self.message = message
        self.line = line
        self.name = name


@dataclass
class NodeEnv:
    bindings: Dict[str, AbsPoint] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)

    def lookup(self, name: str, line: int = 0) -> AbsPoint:
        try:
            return self.bindings[name]
        except KeyError:
            raise ResolveError(f"undefined node {name!r}", line, name) from None

    def bind(self, name: str, point: AbsPoint, line: int = 0) -> None:
        if name in self.bindings:
            self.warnings.append(f"line {line}: node {name!r} redefined")
        self.bindings[name] = point


@dataclass(frozen=True)
class ResolvedElement:
    kind: str  # "polyline" | "closed_curve"
    points: Tuple[AbsPoint, ...]
    linewidth_cm: float

    def __post_init__(self):
        minimum = {"polyline": 2, "closed_curve": 3}[self.kind]
        if len(self.points) < minimum:
            raise ValueError(f"{self.kind} needs at least {minimum} points")
        if not self.linewidth_cm > 0:
            raise ValueError("linewidth must be positive")


@dataclass(frozen=True)
class ResolvedPicture:
    bbox_lo: AbsPoint
    bbox_hi: AbsPoint
    elements: Tuple[ResolvedElement, ...]
    unit_cm: float
    nodes: Dict[str, AbsPoint] = field(default_factory=dict, compare=False)
    warnings: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.unit_cm > 0:
            raise ValueError("unit_cm must be positive")


def convert_dimension(d: Dimension) -> float:
    """Length of ``d`` in centimetres (``pt`` is the TeX point, 1/72.27 in)."""
    return d.value * CM_PER_UNIT[d.unit]


def cos_sin_deg(angle: float) -> Tuple[float, float]:
    """cos and sin of an angle in degrees, exact on multiples of 90."""
    quadrant = round(angle / 90.0)
    rest = angle - 90.0 * quadrant  # in [-45, 45]
    if rest == 0.0:
        c, s = 1.0, 0.0
    else:
        c, s = math.cos(math.radians(rest)), math.sin(math.radians(rest))
    q = quadrant % 4
    if q == 0:
        return c, s
    # 0.0 - v rather than -v keeps exact zeros positive
    if q == 1:
        return 0.0 - s, c
    if q == 2:
        return 0.0 - c, 0.0 - s
    return s, 0.0 - c


def resolve_point(expr: PointExpr, env: NodeEnv, scale: float = 1.0, line: int = 0) -> AbsPoint:
    """Absolute position of ``expr``.

    ``scale`` converts lengths written under a picture-local ``\\psset{unit=}``
    into picture units; node positions are already absolute.
    """
    if isinstance(expr, Cartesian):
        return AbsPoint(expr.x * scale, expr.y * scale)
    if isinstance(expr, Polar):
        c, s = cos_sin_deg(expr.theta)
        r = expr.r * scale
        return AbsPoint(r * c, r * s)
    if isinstance(expr, NodeRef):
        return env.lookup(expr.name, line)
    if isinstance(expr, Offset):
        base = env.lookup(expr.base, line)
        if expr.nodesep == 0:
            return base
        c, s = cos_sin_deg(expr.angle)
        d = expr.nodesep * scale
        return AbsPoint(base.x + d * c, base.y + d * s)
    raise TypeError(f"not a point expression: {expr!r}")


def _linewidth_cm(raw: str, line: int) -> float:
    width = convert_dimension(parse_dimension(raw))
    if not width > 0:
        raise ResolveError(f"linewidth must be positive, got {raw!r}", line)
    return width


def resolve_picture(picture: Picture, unit_cm: float) -> ResolvedPicture:
    if not unit_cm > 0:
        raise ValueError("unit_cm must be positive")
    env = NodeEnv()
    scale = 1.0
    default_width = convert_dimension(DEFAULT_LINEWIDTH)
    elements: List[ResolvedElement] = []
    for cmd in picture.commands:
        if isinstance(cmd, PsSet):
            unit = cmd.options.get("unit")
            if unit is not None:
                scale = convert_dimension(parse_dimension(unit)) / unit_cm
            width = cmd.options.get("linewidth")
            if width is not None:
                default_width = _linewidth_cm(width, cmd.line)
        elif isinstance(cmd, PNode):
            env.bind(cmd.name, resolve_point(cmd.point, env, scale, cmd.line), cmd.line)
        elif isinstance(cmd, (PsLine, PsCCurve)):
            width = cmd.options.get("linewidth")
            width_cm = default_width if width is None else _linewidth_cm(width, cmd.line)
            points = tuple(resolve_point(p, env, scale, cmd.line) for p in cmd.points)
            kind = "polyline" if isinstance(cmd, PsLine) else "closed_curve"
            elements.append(ResolvedElement(kind, points, width_cm))
        else:
            raise TypeError(f"not a command: {cmd!r}")
    return ResolvedPicture(
        AbsPoint(*picture.bbox_lo),
        AbsPoint(*picture.bbox_hi),
        tuple(elements),
        unit_cm,
        nodes=dict(env.bindings),
        warnings=tuple(env.warnings),
    )


def resolve_document(doc: DocumentTree) -> List[ResolvedPicture]:
    return [resolve_picture(pic, convert_dimension(pic.unit)) for pic in doc.pictures]
