"""Rendering and orchestration: balloon geometry, SVG/PNG pages, manifest,
pipeline stages."""

from __future__ import annotations

import numpy as np

from ..balloon import BalloonSpec
from ..errors import MissingImage
from ..layout import PageLayout
from .balloon_paths import balloon_path
from .manifest import Manifest, load_manifest
from .pipeline import run_pipeline, run_stages, STAGE_ORDER
from .raster import render_png, save_png
from .serialize import dump_json, dumps_json, load_json, serialize_srt
from .svg import PanelImage, render_svg

__all__ = [
    "balloon_path",
    "Manifest",
    "load_manifest",
    "run_pipeline",
    "run_stages",
    "STAGE_ORDER",
    "render_page",
    "render_svg",
    "render_png",
    "save_png",
    "PanelImage",
    "serialize_srt",
    "dump_json",
    "dumps_json",
    "load_json",
]


def render_page(
    layout: PageLayout,
    images: dict[int, tuple[str, np.ndarray]],
    balloons: list[BalloonSpec],
) -> tuple[str, np.ndarray]:
    """Render one page to an SVG string and a PNG raster array.

    `images` maps keyframe index to (href, pixel array); every keyframe
    referenced by a panel with a crop must be present.
    """
    for panel in layout.panels:
        if panel.crop is not None and panel.keyframe_index not in images:
            raise MissingImage(f"no stylized image for keyframe {panel.keyframe_index}")
    panel_images = {
        idx: PanelImage(href=href, width=arr.shape[1], height=arr.shape[0])
        for idx, (href, arr) in images.items()
    }
    sources = {idx: arr for idx, (_, arr) in images.items()}
    return render_svg(layout, panel_images, balloons), render_png(layout, sources, balloons)
