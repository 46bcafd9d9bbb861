"""Hot pixel kernels with a compiled core and a numpy fallback.

The backend is chosen once at import time.  Set COMICGEN_KERNELS to
"native" (require the compiled extension), "python" (force the numpy
fallback) or "auto" (default: native when built, fallback otherwise).

Exposed operations:
  convolve_axis(img, kernel, axis)  edge-clamped 1-D correlation
  gaussian_blur(img, sigma)         separable blur, kernel cut at 3 sigma
  palette_map(pixels, palette)      nearest palette index per pixel
  msd_search(patch, other, x0, y0, radius)  motion-compensated MSD
  fill_polygon(height, width, xs, ys)       even-odd scanline mask
"""

from __future__ import annotations

import os

import numpy as np

from . import numpy_backend

BACKEND = "python"
_impl = numpy_backend

_choice = os.environ.get("COMICGEN_KERNELS", "auto")
if _choice not in ("auto", "native", "python"):
    raise ValueError(f"COMICGEN_KERNELS must be auto|native|python, got {_choice!r}")
if _choice in ("auto", "native"):
    try:
        from . import _native  # type: ignore[attr-defined]

        _impl = _native
        BACKEND = "native"
    except ImportError:
        if _choice == "native":
            raise


def backend_name() -> str:
    return BACKEND


def convolve_axis(img: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    img = np.ascontiguousarray(img, dtype=np.float64)
    kernel = np.ascontiguousarray(kernel, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError("convolve_axis expects a 2-D array")
    if kernel.ndim != 1 or kernel.shape[0] % 2 != 1:
        raise ValueError("kernel must be 1-D with odd length")
    if axis not in (0, 1):
        raise ValueError("axis must be 0 or 1")
    return np.asarray(_impl.convolve_axis(img, kernel, axis))


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian, truncated at 3 sigma."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    radius = max(1, int(np.ceil(3.0 * sigma)))
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(xs * xs) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    k = gaussian_kernel(sigma)
    return convolve_axis(convolve_axis(img, k, 0), k, 1)


def palette_map(pixels: np.ndarray, palette: np.ndarray) -> np.ndarray:
    pixels = np.ascontiguousarray(pixels, dtype=np.int64)
    palette = np.ascontiguousarray(palette, dtype=np.int64)
    if pixels.ndim != 2 or palette.ndim != 2 or pixels.shape[1] != palette.shape[1]:
        raise ValueError("pixels and palette must be (N, C) and (K, C)")
    if palette.shape[0] == 0:
        raise ValueError("palette is empty")
    return np.asarray(_impl.palette_map(pixels, palette))


def msd_search(
    patch: np.ndarray, other: np.ndarray, x0: int, y0: int, radius: int
) -> float:
    patch = np.ascontiguousarray(patch, dtype=np.float64)
    other = np.ascontiguousarray(other, dtype=np.float64)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    return float(_impl.msd_search(patch, other, int(x0), int(y0), int(radius)))


def fill_polygon(height: int, width: int, points) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be (N, 2)")
    xs = np.ascontiguousarray(pts[:, 0])
    ys = np.ascontiguousarray(pts[:, 1])
    return np.asarray(_impl.fill_polygon(int(height), int(width), xs, ys))
