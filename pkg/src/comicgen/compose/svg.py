"""Deterministic SVG page writer.

Panels clip their stylized image through a per-panel clip path; balloons
are filled polygon paths with black strokes; text is emitted as plain
<text> lines in a generic sans family.  All floats are formatted to two
decimals so identical scenes serialize to identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..balloon import BalloonSpec, wrap_text, LINE_HEIGHT, CHAR_ADVANCE
from ..layout import PageLayout
from .balloon_paths import balloon_path


def _f(v: float) -> str:
    s = f"{v:.2f}"
    if s == "-0.00":
        s = "0.00"
    return s


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


@dataclass(frozen=True)
class PanelImage:
    """Where a panel's stylized source image lives and its pixel size."""

    href: str
    width: int
    height: int


def _points_attr(points) -> str:
    return " ".join(f"{_f(x)},{_f(y)}" for x, y in points)


def _path_d(points) -> str:
    head = f"M {_f(points[0][0])} {_f(points[0][1])}"
    body = " ".join(f"L {_f(x)} {_f(y)}" for x, y in points[1:])
    return f"{head} {body} Z"


def render_svg(
    layout: PageLayout,
    images: dict[int, PanelImage],
    balloons: list[BalloonSpec],
) -> str:
    """Serialize one page as an SVG document string."""
    w, h = layout.page_size
    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" '
        f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">'
    )
    out.append("<defs>")
    for i, panel in enumerate(layout.panels):
        out.append(f'<clipPath id="panel{i}"><polygon points="{_points_attr(panel.quad)}"/></clipPath>')
    out.append("</defs>")
    out.append(f'<rect width="{w}" height="{h}" fill="#ffffff"/>')

    for i, panel in enumerate(layout.panels):
        img = images.get(panel.keyframe_index)
        if img is None or panel.crop is None:
            continue
        bb = panel.bbox()
        crop = panel.crop
        scale_x = bb.w / crop.sw
        scale_y = bb.h / crop.sh
        x = bb.x - crop.sx * scale_x
        y = bb.y - crop.sy * scale_y
        out.append(f'<g clip-path="url(#panel{i})">')
        out.append(
            f'<image xlink:href="{_escape(img.href)}" x="{_f(x)}" y="{_f(y)}" '
            f'width="{_f(img.width * scale_x)}" height="{_f(img.height * scale_y)}" '
            f'preserveAspectRatio="none"/>'
        )
        out.append("</g>")

    for panel in layout.panels:
        out.append(
            f'<polygon points="{_points_attr(panel.quad)}" fill="none" '
            f'stroke="#000000" stroke-width="3"/>'
        )

    for spec in balloons:
        paths = balloon_path(spec.shape, spec.box, spec.tail_target)
        for pts in paths:
            out.append(
                f'<path d="{_path_d(pts)}" fill="#ffffff" stroke="#000000" stroke-width="2"/>'
            )
        pad = 10.0
        lines = wrap_text(spec.text, spec.font_px, spec.box.w - 2 * pad)
        block_h = len(lines) * LINE_HEIGHT * spec.font_px
        top = spec.box.cy - block_h / 2.0
        for li, line in enumerate(lines):
            lw = len(line) * CHAR_ADVANCE * spec.font_px
            lx = spec.box.cx - lw / 2.0
            ly = top + (li + 0.8) * LINE_HEIGHT * spec.font_px
            out.append(
                f'<text x="{_f(lx)}" y="{_f(ly)}" font-family="sans-serif" '
                f'font-size="{spec.font_px}">{_escape(line)}</text>'
            )

    out.append("</svg>")
    return "\n".join(out) + "\n"
