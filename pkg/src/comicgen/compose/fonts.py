"""Embedded 5x7 uppercase bitmap font for the PNG rasterizer.

Comic lettering is traditionally upper case, so the raster output
uppercases text; SVG output keeps the original case and leaves glyph
shapes to the viewer's sans-serif.  Glyph cell: 5x7 pixels in an 8x6
advance box (one blank leading row, one blank spacing column), scaled to
the requested font size by nearest neighbor.
"""

from __future__ import annotations

import numpy as np

GLYPH_ROWS = 7
GLYPH_COLS = 5
CELL_ROWS = 8
CELL_COLS = 6

_RAW = {
    "A": (".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "B": ("####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."),
    "C": (".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."),
    "D": ("####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."),
    "E": ("#####", "#....", "#....", "####.", "#....", "#....", "#####"),
    "F": ("#####", "#....", "#....", "####.", "#....", "#....", "#...."),
    "G": (".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".###."),
    "H": ("#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"),
    "I": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "#####"),
    "J": (".####", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."),
    "K": ("#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"),
    "L": ("#....", "#....", "#....", "#....", "#....", "#....", "#####"),
    "M": ("#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"),
    "N": ("#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#", "#...#"),
    "O": (".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."),
    "P": ("####.", "#...#", "#...#", "####.", "#....", "#....", "#...."),
    "Q": (".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"),
    "R": ("####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"),
    "S": (".####", "#....", "#....", ".###.", "....#", "....#", "####."),
    "T": ("#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."),
    "U": ("#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."),
    "V": ("#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."),
    "W": ("#...#", "#...#", "#...#", "#.#.#", "#.#.#", "##.##", "#...#"),
    "X": ("#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"),
    "Y": ("#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."),
    "Z": ("#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"),
    "0": (".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."),
    "1": ("..#..", ".##..", "..#..", "..#..", "..#..", "..#..", "#####"),
    "2": (".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"),
    "3": (".###.", "#...#", "....#", "..##.", "....#", "#...#", ".###."),
    "4": ("...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."),
    "5": ("#####", "#....", "####.", "....#", "....#", "#...#", ".###."),
    "6": (".###.", "#....", "#....", "####.", "#...#", "#...#", ".###."),
    "7": ("#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."),
    "8": (".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."),
    "9": (".###.", "#...#", "#...#", ".####", "....#", "....#", ".###."),
    " ": (".....", ".....", ".....", ".....", ".....", ".....", "....."),
    ".": (".....", ".....", ".....", ".....", ".....", ".##..", ".##.."),
    ",": (".....", ".....", ".....", ".....", ".....", "..#..", ".#..."),
    "!": ("..#..", "..#..", "..#..", "..#..", "..#..", ".....", "..#.."),
    "?": (".###.", "#...#", "....#", "..##.", "..#..", ".....", "..#.."),
    "'": ("..#..", "..#..", ".....", ".....", ".....", ".....", "....."),
    '"': (".#.#.", ".#.#.", ".....", ".....", ".....", ".....", "....."),
    "-": (".....", ".....", ".....", "#####", ".....", ".....", "....."),
    ":": (".....", ".##..", ".##..", ".....", ".##..", ".##..", "....."),
    ";": (".....", ".##..", ".##..", ".....", ".##..", "..#..", ".#..."),
    "(": ("...#.", "..#..", ".#...", ".#...", ".#...", "..#..", "...#."),
    ")": (".#...", "..#..", "...#.", "...#.", "...#.", "..#..", ".#..."),
    "/": ("....#", "...#.", "...#.", "..#..", ".#...", ".#...", "#...."),
    "&": (".##..", "#..#.", "#.#..", ".#...", "#.#.#", "#..#.", ".##.#"),
    "+": (".....", "..#..", "..#..", "#####", "..#..", "..#..", "....."),
    "%": ("##..#", "##.#.", "...#.", "..#..", ".#...", ".#.##", "#..##"),
}

_FALLBACK = ("#####", "#...#", "#...#", "#...#", "#...#", "#...#", "#####")

_BITMAPS: dict[str, np.ndarray] = {}


def _bitmap(ch: str) -> np.ndarray:
    bm = _BITMAPS.get(ch)
    if bm is None:
        rows = _RAW.get(ch, _FALLBACK)
        bm = np.array([[c == "#" for c in row] for row in rows], dtype=bool)
        _BITMAPS[ch] = bm
    return bm


def _normalize_char(ch: str) -> str:
    ch = ch.upper()
    if ch in _RAW:
        return ch
    if ch in ("’", "‘", "`"):
        return "'"
    if ch in ("“", "”"):
        return '"'
    if ch in ("—", "–"):
        return "-"
    return ch


def char_cell(font_px: int) -> tuple[int, int]:
    """Rendered (height, width) of one character cell at the given size.

    The width matches the 0.75 * font_px advance that text fitting uses.
    """
    h = max(1, int(font_px))
    w = max(1, int(round(0.75 * font_px)))
    return h, w


def render_text(canvas: np.ndarray, x: int, y: int, text: str, font_px: int, color=(0, 0, 0)) -> None:
    """Draw one line of text onto an (H, W, 3) uint8 canvas, top-left anchored."""
    h_px, w_px = char_cell(font_px)
    hh, ww = canvas.shape[:2]
    row_idx = np.arange(h_px) * CELL_ROWS // h_px
    col_idx = np.arange(w_px) * CELL_COLS // w_px
    col = np.asarray(color, dtype=np.uint8)
    cx = x
    for raw_ch in text:
        ch = _normalize_char(raw_ch)
        bm = _bitmap(ch)
        cell = np.zeros((CELL_ROWS, CELL_COLS), dtype=bool)
        cell[:GLYPH_ROWS, :GLYPH_COLS] = bm
        scaled = cell[row_idx][:, col_idx]
        ys, xs = np.nonzero(scaled)
        ys = ys + y
        xs = xs + cx
        keep = (ys >= 0) & (ys < hh) & (xs >= 0) & (xs < ww)
        canvas[ys[keep], xs[keep]] = col
        cx += w_px
