"""Pure numpy implementations of the hot pixel kernels.

These are the fallback used when the compiled extension is unavailable.
Accumulation orders are chosen to match the native kernels: convolution
adds taps in ascending index order and palette mapping uses integer
arithmetic, so those two are bit-identical across backends.  The MSD
search differs only in floating-point summation order (numpy reduces
pairwise) and agrees to ~1e-12 relative.
"""

from __future__ import annotations

import numpy as np


def convolve_axis(img: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    """1-D correlation along `axis` with edge-clamped borders.

    `kernel` must have odd length; the center tap aligns with the output
    pixel.
    """
    k = kernel.shape[0]
    r = k // 2
    out = np.zeros_like(img)
    if axis == 0:
        pad = np.pad(img, ((r, r), (0, 0)), mode="edge")
        for t in range(k):
            out += kernel[t] * pad[t : t + img.shape[0], :]
    else:
        pad = np.pad(img, ((0, 0), (r, r)), mode="edge")
        for t in range(k):
            out += kernel[t] * pad[:, t : t + img.shape[1]]
    return out


def palette_map(pixels: np.ndarray, palette: np.ndarray) -> np.ndarray:
    """Index of the nearest palette color per pixel row.

    Squared Euclidean distance over int64 channels; the first minimal
    index wins on ties.  Chunked so the (N, K) distance matrix stays
    small.
    """
    n = pixels.shape[0]
    out = np.empty(n, dtype=np.int64)
    chunk = 65536
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        d = pixels[lo:hi, None, :] - palette[None, :, :]
        dist = np.einsum("nkc,nkc->nk", d, d)
        out[lo:hi] = np.argmin(dist, axis=1)
    return out


def msd_search(
    patch: np.ndarray, other: np.ndarray, x0: int, y0: int, radius: int
) -> float:
    """Minimum mean squared difference over integer offsets.

    `patch` is compared against same-sized windows of `other` anchored at
    (x0 + dx, y0 + dy) for all offsets in [-radius, radius]^2 that stay
    inside `other`.  Offsets scan dy-major, dx-minor, ascending.
    """
    h, w = patch.shape
    oh, ow = other.shape
    best = np.inf
    for dy in range(-radius, radius + 1):
        ty = y0 + dy
        if ty < 0 or ty + h > oh:
            continue
        for dx in range(-radius, radius + 1):
            tx = x0 + dx
            if tx < 0 or tx + w > ow:
                continue
            diff = patch - other[ty : ty + h, tx : tx + w]
            val = float(np.mean(diff * diff))
            if val < best:
                best = val
    return best


def fill_polygon(height: int, width: int, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Even-odd scanline fill of a closed polygon, sampled at pixel centers.

    A pixel (x, y) is inside when its center (x+0.5, y+0.5) is inside the
    polygon.  Vertices are float64; the polygon closes implicitly.
    """
    mask = np.zeros((height, width), dtype=np.uint8)
    n = xs.shape[0]
    if n < 3:
        return mask
    ymin = max(0, int(np.floor(ys.min() - 0.5)))
    ymax = min(height - 1, int(np.ceil(ys.max())))
    for y in range(ymin, ymax + 1):
        yc = y + 0.5
        crossings = []
        for i in range(n):
            y1 = ys[i]
            y2 = ys[(i + 1) % n]
            if y1 == y2:
                continue
            if (y1 <= yc < y2) or (y2 <= yc < y1):
                x1 = xs[i]
                x2 = xs[(i + 1) % n]
                crossings.append(x1 + (yc - y1) * (x2 - x1) / (y2 - y1))
        if not crossings:
            continue
        crossings.sort()
        for j in range(0, len(crossings) - 1, 2):
            xa, xb = crossings[j], crossings[j + 1]
            lo = int(np.ceil(xa - 0.5))
            hi = int(np.ceil(xb - 0.5))
            lo = max(lo, 0)
            hi = min(hi, width)
            if hi > lo:
                mask[y, lo:hi] = 1
    return mask
