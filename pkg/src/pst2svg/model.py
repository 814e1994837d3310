"""Syntax tree and value types shared by the parser, resolver and emitters."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from decimal import Decimal
from typing import NamedTuple, Optional, Tuple, Union

UNIT_TAGS = ("cm", "mm", "pt", "in")
IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v!r}")


def _check_ident(name: str) -> None:
    if not IDENT_RE.match(name):
        raise ValueError(f"invalid identifier {name!r}")


@dataclass(frozen=True)
class Dimension:
    value: float
    unit: str

    def __post_init__(self):
        _check_finite(self.value)
        if self.unit not in UNIT_TAGS:
            raise ValueError(f"unknown unit tag {self.unit!r}")

    def __str__(self):
        return f"{format_number(self.value)}{self.unit}"


class AbsPoint(NamedTuple):
    """Absolute point in picture units, +y up."""
    x: float
    y: float


# --- point expressions ---

@dataclass(frozen=True)
class Cartesian:
    x: float
    y: float

    def __post_init__(self):
        _check_finite(self.x, self.y)


@dataclass(frozen=True)
class Polar:
    r: float
    theta: float  # degrees

    def __post_init__(self):
        _check_finite(self.r, self.theta)


@dataclass(frozen=True)
class NodeRef:
    name: str

    def __post_init__(self):
        _check_ident(self.name)


@dataclass(frozen=True)
class Offset:
    angle: float  # degrees
    nodesep: float
    base: str

    def __post_init__(self):
        _check_finite(self.angle, self.nodesep)
        _check_ident(self.base)


PointExpr = Union[Cartesian, Polar, NodeRef, Offset]


@dataclass(frozen=True)
class OptionList:
    """Ordered ``key=value`` pairs; values stay raw text."""
    entries: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        seen = set()
        for key, _ in self.entries:
            _check_ident(key)
            if key in seen:
                raise ValueError(f"duplicate option key {key!r}")
            seen.add(key)

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        for k, v in self.entries:
            if k == key:
                return v
        return default

    def keys(self):
        return [k for k, _ in self.entries]

    def __bool__(self):
        return bool(self.entries)

    def __len__(self):
        return len(self.entries)


# --- commands ---
# ``line`` is the 1-based source line; it is ignored by equality.

@dataclass(frozen=True)
class PsLine:
    options: OptionList
    points: Tuple[PointExpr, ...]
    line: int = field(default=0, compare=False)

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("\\psline needs at least 2 points")


@dataclass(frozen=True)
class PsCCurve:
    options: OptionList
    points: Tuple[PointExpr, ...]
    line: int = field(default=0, compare=False)

    def __post_init__(self):
        if len(self.points) < 3:
            raise ValueError("\\psccurve needs at least 3 points")


@dataclass(frozen=True)
class PNode:
    point: PointExpr
    name: str
    line: int = field(default=0, compare=False)

    def __post_init__(self):
        _check_ident(self.name)


@dataclass(frozen=True)
class PsSet:
    options: OptionList
    line: int = field(default=0, compare=False)


Command = Union[PsLine, PsCCurve, PNode, PsSet]


@dataclass(frozen=True)
class Picture:
    bbox_lo: Tuple[float, float]
    bbox_hi: Tuple[float, float]
    commands: Tuple[Command, ...] = ()
    # document-level unit in effect at \begin{pspicture}
    unit: Dimension = Dimension(1.0, "cm")
    line: int = field(default=0, compare=False)

    def __post_init__(self):
        _check_finite(*self.bbox_lo, *self.bbox_hi)
        if not (self.bbox_lo[0] < self.bbox_hi[0] and self.bbox_lo[1] < self.bbox_hi[1]):
            raise ValueError(f"empty bounding box {self.bbox_lo}{self.bbox_hi}")


@dataclass(frozen=True)
class DocumentTree:
    unit: Dimension = Dimension(1.0, "cm")
    pictures: Tuple[Picture, ...] = ()
    warnings: Tuple[str, ...] = field(default=(), compare=False)


# --- pretty printing (source form) ---

def format_number(x: float) -> str:
    """Shortest source form of a float, never in exponent notation."""
    x = float(x) + 0.0
    text = repr(x)
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
    if text.endswith(".0"):
        text = text[:-2]
    return text


def format_options(options: OptionList) -> str:
    if not options:
        return ""
    return "[" + ",".join(f"{k}={v}" for k, v in options.entries) + "]"


def format_point(p: PointExpr) -> str:
    if isinstance(p, Cartesian):
        return f"({format_number(p.x)},{format_number(p.y)})"
    if isinstance(p, Polar):
        return f"({format_number(p.r)};{format_number(p.theta)})"
    if isinstance(p, NodeRef):
        return f"({p.name})"
    if isinstance(p, Offset):
        return f"([angle={format_number(p.angle)},nodesep={format_number(p.nodesep)}]{p.base})"
    raise TypeError(f"not a point expression: {p!r}")


def format_command(cmd: Command) -> str:
    if isinstance(cmd, PsLine):
        return "\\psline" + format_options(cmd.options) + "".join(map(format_point, cmd.points))
    if isinstance(cmd, PsCCurve):
        return "\\psccurve" + format_options(cmd.options) + "".join(map(format_point, cmd.points))
    if isinstance(cmd, PNode):
        return f"\\pnode{format_point(cmd.point)}{{{cmd.name}}}"
    if isinstance(cmd, PsSet):
        return "\\psset{" + ",".join(f"{k}={v}" for k, v in cmd.options.entries) + "}"
    raise TypeError(f"not a command: {cmd!r}")
