# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pixel kernels.

Mirrors kernels.numpy_backend; convolution and palette mapping are
bit-identical to the fallback (same accumulation order, integer
distances), the MSD search agrees to float64 summation-order noise.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def convolve_axis(cnp.float64_t[:, ::1] img, cnp.float64_t[::1] kernel, int axis):
    cdef Py_ssize_t h = img.shape[0]
    cdef Py_ssize_t w = img.shape[1]
    cdef Py_ssize_t k = kernel.shape[0]
    cdef Py_ssize_t r = k // 2
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((h, w), dtype=np.float64)
    cdef cnp.float64_t[:, ::1] o = out
    cdef Py_ssize_t y, x, t, idx
    cdef double acc
    if axis == 0:
        for y in range(h):
            for x in range(w):
                acc = 0.0
                for t in range(k):
                    idx = y + t - r
                    if idx < 0:
                        idx = 0
                    elif idx >= h:
                        idx = h - 1
                    acc += kernel[t] * img[idx, x]
                o[y, x] = acc
    else:
        for y in range(h):
            for x in range(w):
                acc = 0.0
                for t in range(k):
                    idx = x + t - r
                    if idx < 0:
                        idx = 0
                    elif idx >= w:
                        idx = w - 1
                    acc += kernel[t] * img[y, idx]
                o[y, x] = acc
    return out


def palette_map(cnp.int64_t[:, ::1] pixels, cnp.int64_t[:, ::1] palette):
    cdef Py_ssize_t n = pixels.shape[0]
    cdef Py_ssize_t k = palette.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] o = out
    cdef Py_ssize_t i, j
    cdef long long d0, d1, d2, dist, best
    cdef Py_ssize_t best_j
    for i in range(n):
        best = -1
        best_j = 0
        for j in range(k):
            d0 = pixels[i, 0] - palette[j, 0]
            d1 = pixels[i, 1] - palette[j, 1]
            d2 = pixels[i, 2] - palette[j, 2]
            dist = d0 * d0 + d1 * d1 + d2 * d2
            if best < 0 or dist < best:
                best = dist
                best_j = j
        o[i] = best_j
    return out


def msd_search(cnp.float64_t[:, ::1] patch, cnp.float64_t[:, ::1] other,
               int x0, int y0, int radius):
    cdef Py_ssize_t h = patch.shape[0]
    cdef Py_ssize_t w = patch.shape[1]
    cdef Py_ssize_t oh = other.shape[0]
    cdef Py_ssize_t ow = other.shape[1]
    cdef double best = float("inf")
    cdef double acc, d
    cdef int dy, dx
    cdef Py_ssize_t ty, tx, y, x
    for dy in range(-radius, radius + 1):
        ty = y0 + dy
        if ty < 0 or ty + h > oh:
            continue
        for dx in range(-radius, radius + 1):
            tx = x0 + dx
            if tx < 0 or tx + w > ow:
                continue
            acc = 0.0
            for y in range(h):
                for x in range(w):
                    d = patch[y, x] - other[ty + y, tx + x]
                    acc += d * d
            acc /= h * w
            if acc < best:
                best = acc
    return best


def fill_polygon(int height, int width, cnp.float64_t[::1] xs, cnp.float64_t[::1] ys):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] mask = np.zeros((height, width), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] m = mask
    cdef Py_ssize_t n = xs.shape[0]
    if n < 3:
        return mask
    cdef double lo_y = ys[0]
    cdef double hi_y = ys[0]
    cdef Py_ssize_t i
    for i in range(n):
        if ys[i] < lo_y:
            lo_y = ys[i]
        if ys[i] > hi_y:
            hi_y = ys[i]
    cdef int ymin = <int>(lo_y - 0.5)
    if ymin < 0:
        ymin = 0
    cdef int ymax = <int>(hi_y + 1.0)
    if ymax > height - 1:
        ymax = height - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cross = np.empty(n, dtype=np.float64)
    cdef cnp.float64_t[::1] cr = cross
    cdef int y, nc, j, lo, hi, x
    cdef double yc, y1, y2, x1, x2, tmp
    for y in range(ymin, ymax + 1):
        yc = y + 0.5
        nc = 0
        for i in range(n):
            y1 = ys[i]
            y2 = ys[(i + 1) % n]
            if y1 == y2:
                continue
            if (y1 <= yc < y2) or (y2 <= yc < y1):
                x1 = xs[i]
                x2 = xs[(i + 1) % n]
                cr[nc] = x1 + (yc - y1) * (x2 - x1) / (y2 - y1)
                nc += 1
        if nc == 0:
            continue
        # insertion sort: crossing counts are tiny
        for i in range(1, nc):
            tmp = cr[i]
            j = i - 1
            while j >= 0 and cr[j] > tmp:
                cr[j + 1] = cr[j]
                j -= 1
            cr[j + 1] = tmp
        for j in range(0, nc - 1, 2):
            lo = <int>ceil_half(cr[j])
            hi = <int>ceil_half(cr[j + 1])
            if lo < 0:
                lo = 0
            if hi > width:
                hi = width
            for x in range(lo, hi):
                m[y, x] = 1
    return mask


cdef inline double ceil_half(double v):
    cdef double shifted = v - 0.5
    cdef long long fl = <long long>shifted
    if shifted > fl:
        return fl + 1
    return fl
