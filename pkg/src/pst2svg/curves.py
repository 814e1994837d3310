"""Closed interpolating splines as chains of cubic Bézier segments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .model import AbsPoint

Segment = Tuple[AbsPoint, AbsPoint, AbsPoint, AbsPoint]


@dataclass(frozen=True)
class BezierChain:
    segments: Tuple[Segment, ...]
    closed: bool = True

    def __post_init__(self):
        segs = self.segments
        for i in range(len(segs) - 1):
            if segs[i][3] != segs[i + 1][0]:
                raise ValueError(f"segment {i} does not end where segment {i + 1} starts")
        if self.closed and segs and segs[-1][3] != segs[0][0]:
            raise ValueError("closed chain does not return to its start")

    def __len__(self):
        return len(self.segments)


def closed_spline(points: Sequence[AbsPoint], tension: float = 0.0) -> BezierChain:
    """Uniform closed Catmull-Rom spline through ``points``.

    Segment i runs from P[i] to P[i+1] with control points
    P[i] + k(P[i+1] - P[i-1])/6 and P[i+1] - k(P[i+2] - P[i])/6, where
    k = 1 - tension and indices wrap. tension -> 1 gives straight chords.
    """
    pts = [AbsPoint(float(x), float(y)) for x, y in points]
    n = len(pts)
    if n < 3:
        raise ValueError(f"closed spline needs at least 3 points, got {n}")
    if not 0.0 <= tension < 1.0:
        raise ValueError(f"tension must be in [0, 1), got {tension}")
    for i, p in enumerate(pts):
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise ValueError(f"point {i} is not finite: {p}")
        if p == pts[(i + 1) % n]:
            raise ValueError(f"points {i} and {(i + 1) % n} coincide")
    k = 1.0 - tension
    segments = []
    for i in range(n):
        prev, p0, p3, nxt = pts[i - 1], pts[i], pts[(i + 1) % n], pts[(i + 2) % n]
        c1 = AbsPoint(p0.x + k * (p3.x - prev.x) / 6, p0.y + k * (p3.y - prev.y) / 6)
        c2 = AbsPoint(p3.x - k * (nxt.x - p0.x) / 6, p3.y - k * (nxt.y - p0.y) / 6)
        segments.append((p0, c1, c2, p3))
    return BezierChain(tuple(segments), closed=True)


def bezier_point(seg: Segment, t: float) -> AbsPoint:
    if t == 0.0:
        return seg[0]
    if t == 1.0:
        return seg[3]
    u = 1.0 - t
    b0, b1, b2, b3 = u * u * u, 3 * u * u * t, 3 * u * t * t, t * t * t
    p0, c1, c2, p3 = seg
    return AbsPoint(b0 * p0.x + b1 * c1.x + b2 * c2.x + b3 * p3.x,
                    b0 * p0.y + b1 * c1.y + b2 * c2.y + b3 * p3.y)


def sample_chain(chain: BezierChain, samples_per_segment: int) -> List[AbsPoint]:
    """Evaluate every segment at t = j/m for j in 0..m-1.

    Open chains also get the final endpoint.
    """
    m = int(samples_per_segment)
    if m < 1:
        raise ValueError("samples_per_segment must be >= 1")
    out = [bezier_point(seg, j / m) for seg in chain.segments for j in range(m)]
    if not chain.closed and chain.segments:
        out.append(chain.segments[-1][3])
    return out
