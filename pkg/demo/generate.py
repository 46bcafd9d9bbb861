"""Regenerate the demo fixture (frames, subtitles, sidecars, manifest).

The fixture is committed; run this only when the demo content itself
needs to change:  python demo/generate.py
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

HERE = Path(__file__).parent
W, H = 320, 180

# scene id per frame ordinal (hard cuts at 3->4, 6->7, 9->10)
SCENES = [0, 0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3]

CHAR_A = {"body": (50, 90, 36, 70), "head": (58, 62, 20, 26), "mouth": (64, 78, 10, 6)}
CHAR_B = {"body": (230, 92, 36, 68), "head": (238, 64, 20, 26), "mouth": (244, 80, 10, 6)}

# frames in which each character's mouth flaps (their speaking scenes)
SPEAKING = {
    "A": {0, 1, 2, 3, 7, 8, 9},
    "B": {4, 5, 6, 10, 11},
}

SRT = """\
1
00:00:00,200 --> 00:00:01,100
Hello there, captain.

2
00:00:01,200 --> 00:00:02,000
The sea looks calm tonight.

3
00:00:02,100 --> 00:00:03,000
Something is moving below the water.

4
00:00:03,100 --> 00:00:03,900
RUN! NOW!

5
00:00:04,100 --> 00:00:04,900
We are safe at last.

6
00:00:05,000 --> 00:00:05,800
I hope the ship holds together.
"""

AFFECT = """\
cue_index,valence,arousal
1,0.70,0.25
2,0.65,0.20
3,0.40,0.55
4,0.15,0.90
5,0.75,0.35
6,0.55,0.30
"""

MANIFEST = """\
{
  "frames_dir": "frames",
  "frame_pattern": "frame_%06d.png",
  "sample_period_ms": 500,
  "subtitles_path": "subs.srt",
  "sidecars": {
    "affect": "affect.csv",
    "mouths": "mouths.csv"
  },
  "pages": 2,
  "seed": 0,
  "style": "color",
  "reading_order": "ltr",
  "page_size_px": [1240, 1754],
  "output_dir": "out",
  "thought_cues": [5]
}
"""


def scene_background(scene: int) -> np.ndarray:
    img = np.zeros((H, W, 3), dtype=np.uint8)
    yy = np.linspace(0.0, 1.0, H)[:, None]
    xx = np.linspace(0.0, 1.0, W)[None, :]
    if scene == 0:
        img[..., 0] = (120 + 80 * yy).astype(np.uint8)
        img[..., 1] = (170 + 60 * yy).astype(np.uint8)
        img[..., 2] = (230 - 20 * yy).astype(np.uint8)
        sea = (np.sin(np.arange(H)[:, None] / 3.0) > 0) & (np.arange(H)[:, None] > 130)
        img[sea.repeat(W, axis=1)] = 40
        cy, cx = 30, 270
        ys, xs = np.ogrid[:H, :W]
        sun = (ys - cy) ** 2 + (xs - cx) ** 2 < 18 ** 2
        img[sun] = (255, 220, 90)
    elif scene == 1:
        img[:] = (40, 32, 48)
        stripes = (np.arange(W)[None, :] // 20) % 2 == 0
        img[stripes.repeat(H, axis=0).reshape(H, W)] = (70, 48, 80)
        img[120:170, 100:220] = (120, 90, 60)
    elif scene == 2:
        diag = (xx + yy) / 2.0
        img[..., 0] = (200 * diag + 30).astype(np.uint8)
        img[..., 1] = (90 * diag + 40).astype(np.uint8)
        img[..., 2] = (60 + 120 * (1 - diag)).astype(np.uint8)
        ys, xs = np.ogrid[:H, :W]
        blob = (ys - 60) ** 2 + ((xs - 160) * 0.7) ** 2 < 45 ** 2
        img[blob] = (250, 245, 200)
    else:
        checks = ((np.arange(H)[:, None] // 24) + (np.arange(W)[None, :] // 24)) % 2 == 0
        img[:] = (180, 180, 190)
        img[checks] = (215, 210, 170)
        img[140:180, :] = (90, 110, 90)
    return img


def draw_char(img: np.ndarray, char: dict, mouth_open: bool, tone) -> None:
    bx, by, bw, bh = char["body"]
    hx, hy, hw, hh = char["head"]
    mx, my, mw, mh = char["mouth"]
    img[by : by + bh, bx : bx + bw] = tone
    img[hy : hy + hh, hx : hx + hw] = (250, 214, 180)
    img[my : my + mh, mx : mx + mw] = (40, 10, 10) if mouth_open else (210, 150, 140)


def render_frame(ordinal: int) -> np.ndarray:
    img = scene_background(SCENES[ordinal]).copy()
    open_a = ordinal in SPEAKING["A"] and ordinal % 2 == 0
    open_b = ordinal in SPEAKING["B"] and ordinal % 2 == 0
    draw_char(img, CHAR_A, open_a, (160, 40, 40))
    draw_char(img, CHAR_B, open_b, (40, 60, 160))
    return img


def main() -> None:
    frames_dir = HERE / "frames"
    frames_dir.mkdir(exist_ok=True)
    for i in range(len(SCENES)):
        Image.fromarray(render_frame(i), "RGB").save(frames_dir / f"frame_{i:06d}.png")

    (HERE / "subs.srt").write_text(SRT, encoding="utf-8")
    (HERE / "affect.csv").write_text(AFFECT, encoding="utf-8")

    rows = ["frame_ordinal,character_id,x,y,w,h"]
    for i in range(len(SCENES)):
        for cid, char in (("A", CHAR_A), ("B", CHAR_B)):
            mx, my, mw, mh = char["mouth"]
            rows.append(f"{i},{cid},{mx},{my},{mw},{mh}")
    (HERE / "mouths.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    (HERE / "manifest.json").write_text(MANIFEST, encoding="utf-8")
    print(f"wrote {len(SCENES)} frames + sidecars under {HERE}")


if __name__ == "__main__":
    main()
