"""Scanline PNG rasterizer for comic pages.

Shares panel quads, balloon polygons and text metrics with the SVG
writer; images are sampled nearest-neighbor through each panel's crop
transform and text uses the embedded bitmap font (uppercased, in the
comic lettering tradition).
"""

from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..balloon import BalloonSpec, wrap_text, LINE_HEIGHT
from ..layout import PageLayout, Panel
from .balloon_paths import balloon_path
from .fonts import char_cell, render_text


def _stroke_polygon(canvas: np.ndarray, points, width: float, color) -> None:
    h, w = canvas.shape[:2]
    half = width / 2.0
    col = np.asarray(color, dtype=np.uint8)
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        dx, dy = x2 - x1, y2 - y1
        norm = math.hypot(dx, dy)
        if norm < 1e-9:
            continue
        nx, ny = -dy / norm * half, dx / norm * half
        quad = [
            (x1 + nx, y1 + ny),
            (x2 + nx, y2 + ny),
            (x2 - nx, y2 - ny),
            (x1 - nx, y1 - ny),
        ]
        mask = kernels.fill_polygon(h, w, quad)
        canvas[mask.astype(bool)] = col


def _fill_polygon(canvas: np.ndarray, points, color) -> None:
    h, w = canvas.shape[:2]
    mask = kernels.fill_polygon(h, w, points)
    canvas[mask.astype(bool)] = np.asarray(color, dtype=np.uint8)


def _draw_panel_image(canvas: np.ndarray, panel: Panel, source: np.ndarray) -> None:
    h, w = canvas.shape[:2]
    mask = kernels.fill_polygon(h, w, panel.quad).astype(bool)
    if not mask.any():
        return
    crop = panel.crop
    bb = panel.bbox()
    ys, xs = np.nonzero(mask)
    sh, sw = source.shape[:2]
    # page pixel center -> source pixel, nearest neighbor
    u = (xs + 0.5 - bb.x) / bb.w * crop.sw + crop.sx
    v = (ys + 0.5 - bb.y) / bb.h * crop.sh + crop.sy
    ui = np.clip(u.astype(np.int64), 0, sw - 1)
    vi = np.clip(v.astype(np.int64), 0, sh - 1)
    canvas[ys, xs] = source[vi, ui]


def render_png(
    layout: PageLayout,
    sources: dict[int, np.ndarray],
    balloons: list[BalloonSpec],
) -> np.ndarray:
    """Rasterize one page; draw order is images, borders, balloons, text."""
    w, h = layout.page_size
    canvas = np.full((h, w, 3), 255, dtype=np.uint8)

    for panel in layout.panels:
        src = sources.get(panel.keyframe_index)
        if src is not None and panel.crop is not None:
            _draw_panel_image(canvas, panel, src)
    for panel in layout.panels:
        _stroke_polygon(canvas, panel.quad, 3.0, (0, 0, 0))

    for spec in balloons:
        paths = balloon_path(spec.shape, spec.box, spec.tail_target)
        for pts in paths:
            _fill_polygon(canvas, pts, (255, 255, 255))
        for pts in paths:
            _stroke_polygon(canvas, pts, 2.0, (0, 0, 0))
        pad = 10.0
        lines = wrap_text(spec.text, spec.font_px, spec.box.w - 2 * pad)
        _, cw = char_cell(spec.font_px)
        block_h = len(lines) * LINE_HEIGHT * spec.font_px
        top = spec.box.cy - block_h / 2.0
        for li, line in enumerate(lines):
            lw = len(line) * cw
            lx = int(round(spec.box.cx - lw / 2.0))
            ly = int(round(top + li * LINE_HEIGHT * spec.font_px + 0.125 * spec.font_px))
            render_text(canvas, lx, ly, line.upper(), spec.font_px, (0, 0, 0))
    return canvas


def save_png(canvas: np.ndarray, path) -> None:
    from PIL import Image

    Image.fromarray(canvas, mode="RGB").save(path, format="PNG")
