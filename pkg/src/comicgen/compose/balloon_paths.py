"""Vector outlines for the three balloon shapes.

Every outline is a closed polygon (flattened curves) so the SVG writer
and the scanline rasterizer share identical geometry.  `balloon_path`
returns the main outline first, followed by any satellite polygons (the
trailing circles of a thought balloon).
"""

from __future__ import annotations

import math

from ..layout import Rect

Point = tuple[float, float]

ELLIPSE_SEGMENTS = 64
THOUGHT_TRAIL = 3


def _ellipse_point(box: Rect, ang: float) -> Point:
    return (
        box.cx + (box.w / 2.0) * math.cos(ang),
        box.cy + (box.h / 2.0) * math.sin(ang),
    )


def _circle(cx: float, cy: float, r: float, segments: int = 24) -> list[Point]:
    return [
        (cx + r * math.cos(2 * math.pi * i / segments), cy + r * math.sin(2 * math.pi * i / segments))
        for i in range(segments)
    ]


def _tail_angle(box: Rect, target: Point) -> float:
    return math.atan2(target[1] - box.cy, target[0] - box.cx)


def _target_outside(box: Rect, target: Point) -> bool:
    dx = (target[0] - box.cx) / (box.w / 2.0)
    dy = (target[1] - box.cy) / (box.h / 2.0)
    return dx * dx + dy * dy > 1.05


def _quad_bezier(p0: Point, c: Point, p1: Point, steps: int = 8) -> list[Point]:
    pts = []
    for i in range(1, steps + 1):
        t = i / steps
        u = 1.0 - t
        pts.append(
            (
                u * u * p0[0] + 2 * u * t * c[0] + t * t * p1[0],
                u * u * p0[1] + 2 * u * t * c[1] + t * t * p1[1],
            )
        )
    return pts


def rounded_path(box: Rect, tail_target: Point | None) -> list[Point]:
    """Ellipse, with a two-segment curved tail wedge when a target exists."""
    has_tail = tail_target is not None and _target_outside(box, tail_target)
    if not has_tail:
        return [
            _ellipse_point(box, 2 * math.pi * i / ELLIPSE_SEGMENTS)
            for i in range(ELLIPSE_SEGMENTS)
        ]

    tail_ang = _tail_angle(box, tail_target)
    half_gap = math.radians(14.0)
    arc = 2 * math.pi - 2 * half_gap
    pts = [
        _ellipse_point(box, tail_ang + half_gap + arc * i / (ELLIPSE_SEGMENTS - 1))
        for i in range(ELLIPSE_SEGMENTS)
    ]
    start = pts[-1]  # gap edge the tail leaves from
    end = pts[0]  # gap edge the tail returns to
    mid1 = ((start[0] + tail_target[0]) / 2.0, (start[1] + tail_target[1]) / 2.0)
    mid2 = ((end[0] + tail_target[0]) / 2.0, (end[1] + tail_target[1]) / 2.0)
    pull = 0.25
    c1 = (mid1[0] + (box.cx - mid1[0]) * pull, mid1[1] + (box.cy - mid1[1]) * pull)
    c2 = (mid2[0] + (box.cx - mid2[0]) * pull, mid2[1] + (box.cy - mid2[1]) * pull)
    tail_pts = _quad_bezier(start, c1, tail_target) + _quad_bezier(tail_target, c2, end)[:-1]
    return pts + tail_pts


def thought_path(box: Rect, tail_target: Point | None) -> list[list[Point]]:
    """Cloud of arc bumps plus trailing circles toward the target."""
    perimeter = math.pi * (3 * (box.w / 2 + box.h / 2) - math.sqrt((3 * box.w / 2 + box.h / 2) * (box.w / 2 + 3 * box.h / 2)))
    bumps = min(14, max(10, int(round(perimeter / 120.0))))
    pts: list[Point] = []
    for b in range(bumps):
        a0 = 2 * math.pi * b / bumps
        a1 = 2 * math.pi * (b + 1) / bumps
        p0 = _ellipse_point(box, a0)
        p1 = _ellipse_point(box, a1)
        mid_ang = (a0 + a1) / 2.0
        bulge = 1.0 + 0.35 * (2 * math.pi / bumps)
        c = (
            box.cx + (box.w / 2.0) * bulge * math.cos(mid_ang),
            box.cy + (box.h / 2.0) * bulge * math.sin(mid_ang),
        )
        pts.append(p0)
        pts.extend(_quad_bezier(p0, c, p1, steps=6)[:-1])
    paths = [pts]
    if tail_target is not None and _target_outside(box, tail_target):
        ang = _tail_angle(box, tail_target)
        rim = _ellipse_point(box, ang)
        base_r = min(box.w, box.h) * 0.09
        for i in range(THOUGHT_TRAIL):
            t = (i + 1) / (THOUGHT_TRAIL + 1.0)
            cx = rim[0] + (tail_target[0] - rim[0]) * t
            cy = rim[1] + (tail_target[1] - rim[1]) * t
            r = base_r * (1.0 - 0.28 * i)
            paths.append(_circle(cx, cy, max(2.0, r)))
    return paths


def jagged_path(box: Rect, tail_target: Point | None) -> list[Point]:
    """Alternating spikes; the spike nearest the target stretches toward it."""
    perimeter = math.pi * (box.w / 2 + box.h / 2)
    spikes = min(24, max(16, int(round(perimeter / 90.0)))) // 2 * 2
    has_tail = tail_target is not None and _target_outside(box, tail_target)
    tail_ang = _tail_angle(box, tail_target) if has_tail else None

    tail_vertex = None
    if tail_ang is not None:
        outer_ids = range(0, spikes, 2)
        tail_vertex = min(
            outer_ids,
            key=lambda i: abs(
                math.atan2(
                    math.sin(2 * math.pi * i / spikes - tail_ang),
                    math.cos(2 * math.pi * i / spikes - tail_ang),
                )
            ),
        )

    pts: list[Point] = []
    for i in range(spikes):
        ang = 2 * math.pi * i / spikes
        if i == tail_vertex and tail_target is not None:
            pts.append(tail_target)
            continue
        scale = 1.0 if i % 2 == 0 else 0.72
        pts.append(
            (
                box.cx + (box.w / 2.0) * scale * math.cos(ang),
                box.cy + (box.h / 2.0) * scale * math.sin(ang),
            )
        )
    return pts


def balloon_path(shape: str, box: Rect, tail_target: Point | None) -> list[list[Point]]:
    """Closed polygon outlines for a balloon; main outline first."""
    if box.w <= 0 or box.h <= 0:
        raise ValueError("balloon box must be non-degenerate")
    if shape == "rounded":
        return [rounded_path(box, tail_target)]
    if shape == "thought":
        return thought_path(box, tail_target)
    if shape == "jagged":
        return [jagged_path(box, tail_target)]
    raise ValueError(f"unknown balloon shape {shape!r}")
