"""Per-keyframe ROI and importance, from sidecar files or built-in fallbacks.

The neural models that would normally produce these values run outside
the pipeline; their outputs arrive through roi.csv / importance.csv and
override the deterministic heuristics implemented here.  Downstream
stages cannot tell which source a value came from.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import BoxOutOfBounds, UnknownKeyframeIndex
from .keyframes import Keyframe

DEFAULT_THETA3 = 0.5
SALIENCY_SIGMA = 4.0


@dataclass(frozen=True)
class RoiBox:
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"degenerate ROI {self}")

    @property
    def area(self) -> int:
        return self.w * self.h

    def within(self, width: int, height: int) -> bool:
        return 0 <= self.x and 0 <= self.y and self.x + self.w <= width and self.y + self.h <= height


@dataclass(frozen=True)
class ImportanceRecord:
    score: float
    rank: int


def roi_fallback(image: np.ndarray, theta3: float = DEFAULT_THETA3) -> RoiBox:
    """Saliency-based ROI: gradient magnitude of luminance, blurred and
    max-normalized; the box bounds all pixels above theta3.

    A flat image (no saliency) returns a centered box of half the frame
    dimensions.
    """
    if not (0.0 < theta3 < 1.0):
        raise ValueError("theta3 must be in (0, 1)")
    img = np.asarray(image)
    if img.ndim == 3:
        lum = (img.astype(np.float64) / 255.0) @ np.array([0.299, 0.587, 0.114])
    else:
        lum = img.astype(np.float64)
    h, w = lum.shape
    gy, gx = np.gradient(lum)
    sal = kernels.gaussian_blur(np.hypot(gx, gy), SALIENCY_SIGMA)
    peak = float(sal.max())
    if peak <= 0.0:
        return _centered_half_box(w, h)
    sal = sal / peak
    ys, xs = np.nonzero(sal > theta3)
    if len(xs) == 0:
        return _centered_half_box(w, h)
    x0, x1 = int(xs.min()), int(xs.max())
    y0, y1 = int(ys.min()), int(ys.max())
    return RoiBox(x0, y0, x1 - x0 + 1, y1 - y0 + 1)


def _centered_half_box(width: int, height: int) -> RoiBox:
    bw = max(1, width // 2)
    bh = max(1, height // 2)
    return RoiBox((width - bw) // 2, (height - bh) // 2, bw, bh)


def importance_fallback(
    keys: list[Keyframe], descriptors: np.ndarray, rois: list[RoiBox]
) -> list[float]:
    """score = 0.5 * uniqueness + 0.5 * ROI share, min-max normalized.

    Uniqueness is one minus the maximum similarity to the temporal
    neighbor keyframes; ROI share is ROI area over frame area.  When all
    raw scores tie the whole book collapses to 0.5.
    """
    from .framestream import similarity

    if not keys:
        raise ValueError("importance_fallback needs at least one keyframe")
    raw = []
    for i, kf in enumerate(keys):
        neigh = []
        if i > 0:
            neigh.append(similarity(descriptors[kf.frame.ordinal], descriptors[keys[i - 1].frame.ordinal]))
        if i + 1 < len(keys):
            neigh.append(similarity(descriptors[kf.frame.ordinal], descriptors[keys[i + 1].frame.ordinal]))
        uniqueness = 1.0 - (max(neigh) if neigh else 0.0)
        share = rois[i].area / float(kf.frame.width * kf.frame.height)
        raw.append(0.5 * uniqueness + 0.5 * share)
    lo, hi = min(raw), max(raw)
    if hi - lo <= 1e-12:
        return [0.5] * len(raw)
    return [(v - lo) / (hi - lo) for v in raw]


def quantize_rank(scores: list[float]) -> list[int]:
    """Quartile ranks 1..4 (4 = most important), stable under ties.

    Sorted position j of n maps to 1 + floor(3 j / (n - 1) + 0.5), which
    pins the extremes to ranks 1 and 4 for any n >= 2.
    """
    n = len(scores)
    if n == 0:
        return []
    if n == 1:
        return [1]
    order = sorted(range(n), key=lambda i: (scores[i], i))
    ranks = [0] * n
    for j, i in enumerate(order):
        ranks[i] = 1 + int(np.floor(3.0 * j / (n - 1) + 0.5))
    return ranks


def ingest_sidecars(
    roi_csv: str | Path | None,
    importance_csv: str | Path | None,
    keys: list[Keyframe],
) -> tuple[dict[int, RoiBox], dict[int, float]]:
    """Parse optional sidecar CSVs into per-keyframe overrides.

    roi.csv rows: keyframe_index,x,y,w,h (pixels).
    importance.csv rows: keyframe_index,score (score in [0, 1]).
    Both files carry a header row.  Row indices must reference existing
    keyframes and boxes must stay inside the frame.
    """
    rois: dict[int, RoiBox] = {}
    scores: dict[int, float] = {}
    if roi_csv is not None:
        for row in _read_rows(roi_csv, 5):
            idx, x, y, w, h = (int(v) for v in row)
            kf = _lookup(keys, idx)
            box = RoiBox(x, y, w, h)
            if not box.within(kf.frame.width, kf.frame.height):
                raise BoxOutOfBounds(
                    f"roi row for keyframe {idx}: {box} exceeds "
                    f"{kf.frame.width}x{kf.frame.height}"
                )
            rois[idx] = box
    if importance_csv is not None:
        for row in _read_rows(importance_csv, 2):
            idx = int(row[0])
            score = float(row[1])
            _lookup(keys, idx)
            if not (0.0 <= score <= 1.0):
                raise ValueError(f"importance score {score} out of [0, 1]")
            scores[idx] = score
    return rois, scores


def _read_rows(path: str | Path, width: int) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if not rows:
        return []
    rows = rows[1:]  # header required
    for r in rows:
        if len(r) != width:
            raise ValueError(f"{path}: expected {width} columns, got {r}")
    return rows


def _lookup(keys: list[Keyframe], idx: int) -> Keyframe:
    if not (0 <= idx < len(keys)):
        raise UnknownKeyframeIndex(f"keyframe index {idx} out of range 0..{len(keys) - 1}")
    return keys[idx]


def compute_semantics(
    keys: list[Keyframe],
    descriptors: np.ndarray,
    images: list[np.ndarray],
    theta3: float = DEFAULT_THETA3,
    roi_csv: str | Path | None = None,
    importance_csv: str | Path | None = None,
) -> tuple[list[RoiBox], list[ImportanceRecord]]:
    """Fallback values with sidecar overrides applied, plus quartile ranks."""
    roi_over, score_over = ingest_sidecars(roi_csv, importance_csv, keys)
    rois = [
        roi_over.get(i, roi_fallback(images[i], theta3)) for i in range(len(keys))
    ]
    scores = importance_fallback(keys, descriptors, rois)
    for i, v in score_over.items():
        scores[i] = v
    ranks = quantize_rank(scores)
    records = [ImportanceRecord(score=s, rank=r) for s, r in zip(scores, ranks)]
    return rois, records
