"""Comic stylization: XDoG line art, median-cut quantization, compositing.

Black-white mode is the XDoG output alone; color mode multiplies the
quantized image by the edge map so line art darkens the flat regions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch


@dataclass(frozen=True)
class XdogParams:
    sigma: float = 1.0
    k: float = 1.6
    p: float = 20.0
    epsilon: float = 0.6
    phi: float = 10.0

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")
        if self.k <= 1:
            raise ValueError("k must be > 1")
        if self.phi <= 0:
            raise ValueError("phi must be > 0")


def xdog(image: np.ndarray, params: XdogParams = XdogParams()) -> np.ndarray:
    """Extended difference-of-Gaussians of a grayscale raster in [0, 1].

    D = (1 + p) * G_sigma(I) - p * G_{k sigma}(I); pixels with D >= eps
    render white, the rest soft-threshold through 1 + tanh(phi (D - eps)).
    """
    img = np.asarray(image, dtype=np.float64)
    narrow = kernels.gaussian_blur(img, params.sigma)
    wide = kernels.gaussian_blur(img, params.k * params.sigma)
    d = (1.0 + params.p) * narrow - params.p * wide
    out = np.where(d >= params.epsilon, 1.0, 1.0 + np.tanh(params.phi * (d - params.epsilon)))
    return np.clip(out, 0.0, 1.0)


def _median_cut_palette(pixels: np.ndarray, levels: int) -> np.ndarray:
    """Median-cut palette (K, 3) uint8 from an (N, 3) uint8 pixel list."""
    colors, counts = np.unique(pixels.reshape(-1, 3), axis=0, return_counts=True)
    if len(colors) <= levels:
        return colors.astype(np.uint8)

    boxes = [(colors, counts)]
    while len(boxes) < levels:
        # split the box holding the most pixels that still has >1 color
        order = sorted(
            range(len(boxes)),
            key=lambda i: int(boxes[i][1].sum()),
            reverse=True,
        )
        split_at = next((i for i in order if len(boxes[i][0]) > 1), None)
        if split_at is None:
            break
        cols, cnts = boxes.pop(split_at)
        ranges = cols.max(axis=0).astype(int) - cols.min(axis=0).astype(int)
        chan = int(np.argmax(ranges))
        sel = np.argsort(cols[:, chan], kind="stable")
        cols, cnts = cols[sel], cnts[sel]
        cum = np.cumsum(cnts)
        half = cum[-1] / 2.0
        cut = int(np.searchsorted(cum, half)) + 1
        cut = min(max(cut, 1), len(cols) - 1)
        boxes.append((cols[:cut], cnts[:cut]))
        boxes.append((cols[cut:], cnts[cut:]))

    palette = np.empty((len(boxes), 3), dtype=np.uint8)
    for i, (cols, cnts) in enumerate(boxes):
        mean = (cols.astype(np.float64) * cnts[:, None]).sum(axis=0) / cnts.sum()
        palette[i] = np.clip(np.round(mean), 0, 255).astype(np.uint8)
    # stable palette order regardless of split history
    order = np.lexsort((palette[:, 2], palette[:, 1], palette[:, 0]))
    return palette[order]


def quantize_colors(image: np.ndarray, levels: int = 128) -> np.ndarray:
    """Reduce an (H, W, 3) uint8 image to a median-cut palette of `levels`
    colors, mapping every pixel to its nearest palette entry (RGB
    Euclidean)."""
    if levels < 2:
        raise ValueError("levels must be >= 2")
    img = np.asarray(image)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError("quantize_colors expects an (H, W, 3) raster")
    img = img.astype(np.uint8)
    flat = img.reshape(-1, 3)
    palette = _median_cut_palette(flat, levels)
    idx = kernels.palette_map(flat.astype(np.int64), palette.astype(np.int64))
    return palette[idx].reshape(img.shape)


def composite(edges: np.ndarray, quantized: np.ndarray) -> np.ndarray:
    """Multiply each color channel by the edge map (uint8 result)."""
    e = np.asarray(edges, dtype=np.float64)
    q = np.asarray(quantized)
    if e.shape != q.shape[:2]:
        raise DimensionMismatch(f"edges {e.shape} vs image {q.shape[:2]}")
    out = q.astype(np.float64) * e[:, :, None]
    return np.clip(np.round(out), 0, 255).astype(np.uint8)


def stylize_bw(rgb: np.ndarray, params: XdogParams = XdogParams()) -> np.ndarray:
    """Black-white comic rendering of an (H, W, 3) uint8 image."""
    gray = (rgb.astype(np.float64) / 255.0) @ np.array([0.299, 0.587, 0.114])
    edges = xdog(gray, params)
    mono = np.clip(np.round(edges * 255.0), 0, 255).astype(np.uint8)
    return np.repeat(mono[:, :, None], 3, axis=2)


def stylize_color(
    rgb: np.ndarray, params: XdogParams = XdogParams(), levels: int = 128
) -> np.ndarray:
    """Colored comic rendering: quantized colors darkened by XDoG edges."""
    gray = (rgb.astype(np.float64) / 255.0) @ np.array([0.299, 0.587, 0.114])
    edges = xdog(gray, params)
    quant = quantize_colors(rgb, levels)
    return composite(edges, quant)
