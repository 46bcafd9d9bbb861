"""Frame sequence ingestion and holistic scene descriptors.

The descriptor is an oriented-gradient energy grid: for each cell of a
4x4 spatial grid, the mean gradient energy in 8 orientation bins, at the
original, half and quarter resolutions (16 * 8 * 3 = 384 values), then
L2-normalized.  A constant frame yields the all-zero vector.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, LengthMismatch, MissingFrame

DESCRIPTOR_LENGTH = 384
GRID = 4
ORIENTATIONS = 8
SCALES = 3
DEFAULT_PATTERN = "frame_%06d.png"
DEFAULT_SAMPLE_PERIOD_MS = 500


@dataclass(frozen=True)
class FrameRef:
    ordinal: int
    timestamp_ms: int
    path: str
    width: int
    height: int


def _pattern_to_regex(pattern: str) -> re.Pattern:
    m = re.search(r"%0?(\d*)d", pattern)
    if not m:
        raise ValueError(f"pattern {pattern!r} has no %d ordinal field")
    prefix, suffix = pattern[: m.start()], pattern[m.end() :]
    return re.compile(re.escape(prefix) + r"(\d+)" + re.escape(suffix) + r"$")


def load_sequence(
    frames_dir: str | Path,
    pattern: str = DEFAULT_PATTERN,
    sample_period_ms: int = DEFAULT_SAMPLE_PERIOD_MS,
) -> list[FrameRef]:
    """Collect the sampled frame files and stamp them with timestamps.

    Ordinals must be contiguous from 0 and all frames must share
    dimensions.
    """
    from PIL import Image

    frames_dir = Path(frames_dir)
    if not frames_dir.is_dir():
        raise FileNotFoundError(f"frames directory not found: {frames_dir}")
    rx = _pattern_to_regex(pattern)
    found: dict[int, Path] = {}
    for p in frames_dir.iterdir():
        m = rx.match(p.name)
        if m:
            found[int(m.group(1))] = p
    if not found:
        return []
    ordinals = sorted(found)
    for expect, got in enumerate(ordinals):
        if got != expect:
            raise MissingFrame(f"ordinal {expect} missing (next file has ordinal {got})")

    refs: list[FrameRef] = []
    dims: tuple[int, int] | None = None
    for ordinal in ordinals:
        path = found[ordinal]
        with Image.open(path) as im:
            w, h = im.size
        if dims is None:
            dims = (w, h)
        elif (w, h) != dims:
            raise DimensionMismatch(
                f"{path.name} is {w}x{h}, expected {dims[0]}x{dims[1]}"
            )
        refs.append(
            FrameRef(
                ordinal=ordinal,
                timestamp_ms=ordinal * sample_period_ms,
                path=str(path),
                width=w,
                height=h,
            )
        )
    return refs


def load_gray(path: str | Path) -> np.ndarray:
    """Load an image as float64 luminance in [0, 1] (0.299 R + 0.587 G + 0.114 B)."""
    from PIL import Image

    with Image.open(path) as im:
        rgb = np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0
    return rgb @ np.array([0.299, 0.587, 0.114])


def load_rgb(path: str | Path) -> np.ndarray:
    from PIL import Image

    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def _halve(img: np.ndarray) -> np.ndarray:
    h, w = img.shape
    h2, w2 = h // 2, w // 2
    if h2 == 0 or w2 == 0:
        return img
    return img[: h2 * 2, : w2 * 2].reshape(h2, 2, w2, 2).mean(axis=(1, 3))


def _grid_energies(img: np.ndarray) -> np.ndarray:
    """Mean oriented-gradient energy per 4x4 cell and 8 orientation bins."""
    gy, gx = np.gradient(img)
    energy = gx * gx + gy * gy
    angle = np.mod(np.arctan2(gy, gx), math.pi)
    bins = np.minimum((angle / math.pi * ORIENTATIONS).astype(np.int64), ORIENTATIONS - 1)

    h, w = img.shape
    rows = np.minimum((np.arange(h) * GRID) // max(h, 1), GRID - 1)
    cols = np.minimum((np.arange(w) * GRID) // max(w, 1), GRID - 1)
    cell = rows[:, None] * GRID + cols[None, :]

    flat_idx = cell * ORIENTATIONS + bins
    sums = np.bincount(flat_idx.ravel(), weights=energy.ravel(), minlength=GRID * GRID * ORIENTATIONS)
    counts = np.bincount(cell.ravel(), minlength=GRID * GRID).astype(np.float64)
    out = sums.reshape(GRID * GRID, ORIENTATIONS) / np.maximum(counts, 1.0)[:, None]
    return out.ravel()


def descriptor(image: np.ndarray) -> np.ndarray:
    """384-value holistic descriptor of a grayscale raster.

    Zero for constant images; otherwise unit L2 norm.
    """
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise ValueError("descriptor expects a non-empty 2-D grayscale raster")
    parts = []
    level = img
    for _ in range(SCALES):
        parts.append(_grid_energies(level))
        level = _halve(level)
    vec = np.concatenate(parts)
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec = vec / norm
    return vec


def similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity clamped to [0, 1].

    Two zero descriptors compare as 1 (both constant frames); a zero
    against a non-zero compares as 0.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch(f"descriptor lengths differ: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 1.0 if (na == 0.0 and nb == 0.0) else 0.0
    cos = float(np.dot(a, b) / (na * nb))
    return min(1.0, max(0.0, cos))


def descriptors_for(refs: list[FrameRef]) -> np.ndarray:
    """Descriptor matrix (one row per frame) in ordinal order."""
    if not refs:
        return np.zeros((0, DESCRIPTOR_LENGTH))
    return np.stack([descriptor(load_gray(r.path)) for r in refs])
