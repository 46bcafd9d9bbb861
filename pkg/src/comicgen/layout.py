"""Importance-guided guillotine page layout with slanted gutters.

This synthesizer replaces the learned layout model named by the source
material: it consumes the same four inputs (ROI, importance rank,
relation group, panels per page) and recursively cuts the live page area
in two, giving each contiguous panel subset area proportional to its
summed ranks.  Cut orientation alternates with depth unless the aspect
bound vetoes it; each cut is then tilted by a seeded angle, which keeps
layouts lively without moving areas much (tilt pivots on the cut
midpoint).

Every panel records both the slanted quad that gets rendered and the
axis-aligned rectangle it occupied before tilting (`base_rect`).  Area
shares and reading bands are defined on the base rectangles; the quads
only decorate them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import TooManyPanels
from .semantics import RoiBox

DEFAULT_PAGE_SIZE = (2480, 3508)
MAX_PANELS = 9
RISE_CAP = 0.35  # max cut rise as a fraction of the thinner child's thickness

Point = tuple[float, float]


@dataclass(frozen=True)
class StyleParams:
    margin_px: int = 60
    gutter_px: int = 24
    slant_deg: float = 8.0
    rtl: bool = False
    min_aspect: float = 0.3
    max_aspect: float = 3.0


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    @property
    def area(self) -> float:
        return self.w * self.h

    @property
    def cx(self) -> float:
        return self.x + self.w / 2.0

    @property
    def cy(self) -> float:
        return self.y + self.h / 2.0


@dataclass(frozen=True)
class CropSpec:
    """Axis-aligned source rectangle mapped onto the panel's bounding box."""

    sx: float
    sy: float
    sw: float
    sh: float
    scale: float


@dataclass
class Panel:
    quad: list[Point]  # 4 vertices, convex, clockwise
    base_rect: Rect
    keyframe_index: int
    rank: int
    crop: CropSpec | None = None

    def bbox(self) -> Rect:
        xs = [p[0] for p in self.quad]
        ys = [p[1] for p in self.quad]
        return Rect(min(xs), min(ys), max(xs) - min(xs), max(ys) - min(ys))


@dataclass
class PageLayout:
    page_size: tuple[int, int]
    panels: list[Panel] = field(default_factory=list)
    gutter: int = 24


def polygon_area(points: list[Point]) -> float:
    acc = 0.0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        acc += x1 * y2 - x2 * y1
    return abs(acc) / 2.0


def _seg_line_param(a: Point, b: Point, p: Point, d: Point) -> float | None:
    """Parameter t on segment a->b where it crosses the line through p with
    direction d, or None when parallel."""
    ex, ey = b[0] - a[0], b[1] - a[1]
    denom = ex * d[1] - ey * d[0]
    if abs(denom) < 1e-12:
        return None
    t = ((p[0] - a[0]) * d[1] - (p[1] - a[1]) * d[0]) / denom
    return t


def _lerp(a: Point, b: Point, t: float) -> Point:
    return (a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t)


def _cut_quad(
    quad: list[Point], horizontal: bool, pivot: Point, angle_rad: float, gutter: float
) -> tuple[list[Point], list[Point]] | None:
    """Split a clockwise quad [tl, tr, br, bl] along a tilted cut.

    Horizontal cuts cross the left and right edges, vertical cuts the top
    and bottom edges; the two children are separated by a gutter-wide
    band around the cut line.  Returns None when the cut (at this tilt)
    does not cross the expected edges.
    """
    tl, tr, br, bl = quad
    if horizontal:
        d = (math.cos(angle_rad), math.sin(angle_rad))
        edge_a = (tl, bl)  # left edge, param grows downward
        edge_b = (tr, br)
    else:
        d = (math.sin(angle_rad), math.cos(angle_rad))
        edge_a = (tl, tr)  # top edge, param grows rightward
        edge_b = (bl, br)
    nx, ny = -d[1], d[0]
    norm = math.hypot(nx, ny)
    nx, ny = nx / norm * gutter / 2.0, ny / norm * gutter / 2.0

    params = []
    for off in ((-nx, -ny), (nx, ny)):
        p = (pivot[0] + off[0], pivot[1] + off[1])
        ta = _seg_line_param(edge_a[0], edge_a[1], p, d)
        tb = _seg_line_param(edge_b[0], edge_b[1], p, d)
        if ta is None or tb is None or not (0.0 < ta < 1.0) or not (0.0 < tb < 1.0):
            return None
        params.append((ta, tb))
    (ta0, tb0), (ta1, tb1) = params
    if ta0 > ta1:
        (ta0, tb0), (ta1, tb1) = (ta1, tb1), (ta0, tb0)
    pa0, pb0 = _lerp(*edge_a, ta0), _lerp(*edge_b, tb0)
    pa1, pb1 = _lerp(*edge_a, ta1), _lerp(*edge_b, tb1)
    if horizontal:
        first = [tl, tr, pb0, pa0]
        second = [pa1, pb1, br, bl]
    else:
        first = [tl, pa0, pb0, bl]
        second = [pa1, tr, br, pb1]
    if polygon_area(first) < 1.0 or polygon_area(second) < 1.0:
        return None
    return first, second


def _split_index(ranks: list[int], groups: list[int] | None) -> int:
    """Middle split of the run, nudged off relation-group boundaries.

    The index is chosen independently of the ranks so that raising one
    panel's rank can only grow its area share.
    """
    k = len(ranks)
    mid = (k + 1) // 2
    if groups is None:
        return mid
    candidates = sorted(range(1, k), key=lambda i: (abs(i - mid), i))
    for idx in candidates:
        if groups[idx - 1] != groups[idx]:
            return idx
    return mid


def _aspect_violation(w: float, h: float, style: StyleParams) -> float:
    if w <= 0 or h <= 0:
        return float("inf")
    a = w / h
    if a < style.min_aspect:
        return math.log(style.min_aspect / a)
    if a > style.max_aspect:
        return math.log(a / style.max_aspect)
    return 0.0


def _choose_orientation(
    rect: Rect, f: float, depth: int, style: StyleParams
) -> bool:
    """True for a horizontal cut.  Alternates with depth unless the aspect
    bound prefers the other orientation."""
    scheduled_h = depth % 2 == 0
    viol_h = _aspect_violation(rect.w, rect.h * f, style) + _aspect_violation(
        rect.w, rect.h * (1.0 - f), style
    )
    viol_v = _aspect_violation(rect.w * f, rect.h, style) + _aspect_violation(
        rect.w * (1.0 - f), rect.h, style
    )
    if viol_h == viol_v:
        return scheduled_h
    return viol_h < viol_v


def synthesize_page(
    kf_indices: list[int],
    ranks: list[int],
    page_size: tuple[int, int] = DEFAULT_PAGE_SIZE,
    style: StyleParams = StyleParams(),
    seed: int = 0,
    relation_groups: list[int] | None = None,
) -> PageLayout:
    """Lay out one page's panels in reading order.

    kf_indices, ranks and relation_groups run parallel and are already in
    temporal (reading) order.  Deterministic for a given seed.
    """
    n = len(kf_indices)
    if n > MAX_PANELS:
        raise TooManyPanels(f"{n} panels exceed the maximum of {MAX_PANELS}")
    if n < 1:
        raise ValueError("a page needs at least one panel")
    if len(ranks) != n:
        raise ValueError("ranks must run parallel to kf_indices")
    if relation_groups is not None and len(relation_groups) != n:
        raise ValueError("relation_groups must run parallel to kf_indices")

    pw, ph = page_size
    m = style.margin_px
    live_rect = Rect(m, m, pw - 2 * m, ph - 2 * m)
    live_quad = [
        (live_rect.x, live_rect.y),
        (live_rect.x + live_rect.w, live_rect.y),
        (live_rect.x + live_rect.w, live_rect.y + live_rect.h),
        (live_rect.x, live_rect.y + live_rect.h),
    ]
    rng = random.Random(seed)
    layout = PageLayout(page_size=(pw, ph), gutter=style.gutter_px)

    def emit(rect: Rect, quad: list[Point], i: int) -> None:
        layout.panels.append(
            Panel(quad=list(quad), base_rect=rect, keyframe_index=kf_indices[i], rank=ranks[i])
        )

    def recurse(rect: Rect, quad: list[Point], lo: int, hi: int, depth: int) -> None:
        if hi - lo == 1:
            emit(rect, quad, lo)
            return
        run_ranks = ranks[lo:hi]
        run_groups = relation_groups[lo:hi] if relation_groups is not None else None
        split = _split_index(run_ranks, run_groups)
        w_first = sum(run_ranks[:split])
        w_second = sum(run_ranks[split:])
        f = w_first / float(w_first + w_second)

        horizontal = _choose_orientation(rect, f, depth, style)
        # keep both children at least a gutter thick
        extent_sched = rect.h if horizontal else rect.w
        f_floor = min(0.45, 2.0 * style.gutter_px / max(extent_sched, 1.0))
        f = min(max(f, f_floor), 1.0 - f_floor)
        angle = math.radians(rng.uniform(-style.slant_deg, style.slant_deg))
        g = float(style.gutter_px)

        if horizontal:
            extent, span = rect.h, rect.w
            cut_pos = rect.y + f * rect.h
            pivot = (rect.cx, cut_pos)
            r_first = Rect(rect.x, rect.y, rect.w, f * rect.h - g / 2.0)
            r_second = Rect(
                rect.x, cut_pos + g / 2.0, rect.w, (1.0 - f) * rect.h - g / 2.0
            )
        else:
            extent, span = rect.w, rect.h
            cut_pos = rect.x + f * rect.w
            pivot = (cut_pos, rect.cy)
            r_first = Rect(rect.x, rect.y, f * rect.w - g / 2.0, rect.h)
            r_second = Rect(
                cut_pos + g / 2.0, rect.y, (1.0 - f) * rect.w - g / 2.0, rect.h
            )

        # cap the tilt so the rise stays well inside the thinner child
        rise_limit = RISE_CAP * min(f, 1.0 - f) * extent
        if abs(math.tan(angle)) * span > rise_limit:
            angle = math.copysign(math.atan2(rise_limit, span), angle)
        children = _cut_quad(quad, horizontal, pivot, angle, g)
        while children is None and abs(angle) > 1e-6:
            angle /= 2.0
            children = _cut_quad(quad, horizontal, pivot, angle, g)
        if children is None:
            children = _cut_quad(quad, horizontal, pivot, 0.0, g)
        assert children is not None, "axis-aligned cut must succeed"
        q_first, q_second = children

        if horizontal or not style.rtl:
            recurse(r_first, q_first, lo, lo + split, depth + 1)
            recurse(r_second, q_second, lo + split, hi, depth + 1)
        else:
            # manga mode: earlier panels go to the right column
            recurse(r_second, q_second, lo, lo + split, depth + 1)
            recurse(r_first, q_first, lo + split, hi, depth + 1)

    recurse(live_rect, live_quad, 0, n, 0)
    return layout


def fit_roi(frame_size: tuple[int, int], roi: RoiBox, panel: Panel) -> CropSpec:
    """Smallest source rectangle with the panel's aspect that contains the
    ROI, shifted (and if necessary shrunk) to stay inside the frame."""
    fw, fh = frame_size
    bb = panel.bbox()
    aspect = bb.w / bb.h if bb.h > 0 else 1.0

    ch = max(float(roi.h), roi.w / aspect)
    cw = aspect * ch
    if cw > fw or ch > fh:
        s = min(fw / cw, fh / ch)
        cw *= s
        ch *= s
    cx = roi.x + roi.w / 2.0
    cy = roi.y + roi.h / 2.0
    sx = min(max(cx - cw / 2.0, 0.0), fw - cw)
    sy = min(max(cy - ch / 2.0, 0.0), fh - ch)
    return CropSpec(sx=sx, sy=sy, sw=cw, sh=ch, scale=bb.w / cw)


def reading_sequence(layout: PageLayout, rtl: bool = False) -> list[int]:
    """Keyframe indices in visual reading order.

    Panels are grouped into row bands on their base rectangles (connected
    through significant vertical overlap), bands run top to bottom;
    within a band, stacks of horizontally aligned panels run by column
    (left to right, or right to left in manga mode) and top to bottom
    inside a stack.
    """
    panels = layout.panels
    n = len(panels)
    if n == 0:
        return []
    rects = [p.base_rect for p in panels]

    def overlap(a0: float, a1: float, b0: float, b1: float) -> float:
        return max(0.0, min(a1, b1) - max(a0, b0))

    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            ov = overlap(
                rects[i].y, rects[i].y + rects[i].h, rects[j].y, rects[j].y + rects[j].h
            )
            if ov >= 0.45 * min(rects[i].h, rects[j].h):
                parent[find(i)] = find(j)

    bands: dict[int, list[int]] = {}
    for i in range(n):
        bands.setdefault(find(i), []).append(i)
    ordered_bands = sorted(bands.values(), key=lambda idxs: min(rects[i].y for i in idxs))

    result: list[int] = []
    for band in ordered_bands:
        # stacks: panels horizontally aligned within the band
        sub_parent = {i: i for i in band}

        def sfind(i: int) -> int:
            while sub_parent[i] != i:
                sub_parent[i] = sub_parent[sub_parent[i]]
                i = sub_parent[i]
            return i

        for ai, i in enumerate(band):
            for j in band[ai + 1 :]:
                ov = overlap(
                    rects[i].x,
                    rects[i].x + rects[i].w,
                    rects[j].x,
                    rects[j].x + rects[j].w,
                )
                if ov >= 0.5 * min(rects[i].w, rects[j].w):
                    sub_parent[sfind(i)] = sfind(j)
        stacks: dict[int, list[int]] = {}
        for i in band:
            stacks.setdefault(sfind(i), []).append(i)
        ordered = sorted(
            stacks.values(),
            key=lambda idxs: sum(rects[i].cx for i in idxs) / len(idxs),
            reverse=rtl,
        )
        for stack in ordered:
            for i in sorted(stack, key=lambda k: rects[k].cy):
                result.append(panels[i].keyframe_index)
    return result
