"""Emotion features, balloon shape classification, speaker detection and
balloon placement.

Audio valence/arousal comes from a sidecar file (the upstream audio
analyzer is external); text emotion is scored by a deterministic marker
counter.  The shape classifier is a one-vs-rest linear hinge model
trained by batch subgradient descent, so training is bit-reproducible.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .errors import BoxOutOfBounds, CannotPlace, DoesNotFit, SingleClass, TooFewRows
from .layout import Panel, Rect, polygon_area
from .semantics import RoiBox

SHAPES = ("rounded", "thought", "jagged")

CHAR_ADVANCE = 0.75  # text width per character, in units of font_px
LINE_HEIGHT = 1.25
MIN_FONT = 12
MAX_FONT = 64
BASE_FONT = 28

DEFAULT_THETA_LIP = 40.0
DEFAULT_SEARCH_RADIUS = 4

INTENSITY_LEXICON = frozenset(
    """
    love hate kill die dead death murder blood amazing awesome terrible
    horrible awful crazy insane mad stupid idiot fool hell damn curse liar
    traitor monster freak scream screaming shout danger help hurry quick
    fire gun knife attack war fight destroy explode bomb wonderful perfect
    incredible unbelievable impossible forever never worst best fantastic
    beautiful
    """.split()
)


@dataclass(frozen=True)
class AffectFeatures:
    valence: float = 0.5
    arousal: float = 0.3
    emotion_rank: int = 1

    def __post_init__(self):
        if not (0.0 <= self.valence <= 1.0 and 0.0 <= self.arousal <= 1.0):
            raise ValueError("valence and arousal must be in [0, 1]")
        if not (1 <= self.emotion_rank <= 5):
            raise ValueError("emotion_rank must be 1..5")


@dataclass
class BalloonSpec:
    shape: str
    text: str
    font_px: int
    box: Rect  # page coordinates
    tail_target: tuple[float, float] | None
    panel_index: int
    reading_index: int
    cue_ids: list[int] = field(default_factory=list)


def text_emotion_rank(text: str) -> int:
    """Marker-count emotion score 1..5 for one subtitle text."""
    if not text.strip():
        raise ValueError("empty text")
    exclamations = text.count("!")
    words = [w.strip(".,!?;:\"'") for w in text.split()]
    caps = sum(1 for w in words if len(w) >= 2 and w.isalpha() and w.isupper())
    hits = sum(1 for w in words if w.lower() in INTENSITY_LEXICON)
    return 1 + min(4, exclamations + 2 * caps + hits)


# --- shape classifier -------------------------------------------------------


@dataclass
class ShapeModel:
    classes: list[str]
    weights: list[list[float]]  # per class: 3 feature weights + bias
    means: list[float]
    scales: list[float]

    def to_json(self) -> str:
        return json.dumps(
            {
                "classes": self.classes,
                "weights": self.weights,
                "means": self.means,
                "scales": self.scales,
            },
            indent=2,
            sort_keys=True,
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ShapeModel":
        d = json.loads(text)
        return cls(d["classes"], d["weights"], d["means"], d["scales"])

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ShapeModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class TrainingReport:
    accuracy: float
    macro_recall: float


def train_shape_classifier(
    rows: list[tuple[float, float, int, str]],
    seed: int = 0,
    epochs: int = 200,
    lam: float = 1e-3,
) -> tuple[ShapeModel, TrainingReport]:
    """Fit the one-vs-rest linear hinge classifier.

    rows: (valence, arousal, emotion_rank, shape).  Batch subgradient per
    epoch with learning rate 1/(lam * t); the per-seed shuffle fixes the
    row order but the batch update makes the result order-independent,
    so duplicated data trains to the identical model.
    """
    if len(rows) < 10:
        raise TooFewRows(f"need at least 10 rows, got {len(rows)}")
    labels = {r[3] for r in rows}
    if len(labels) < 2:
        raise SingleClass(f"training data has a single class {labels}")
    for r in rows:
        if r[3] not in SHAPES:
            raise ValueError(f"unknown shape label {r[3]!r}")

    order = list(range(len(rows)))
    random.Random(seed).shuffle(order)
    rows = [rows[i] for i in order]

    x = np.array([[r[0], r[1], float(r[2])] for r in rows], dtype=np.float64)
    means = x.mean(axis=0)
    scales = x.std(axis=0)
    scales[scales == 0.0] = 1.0
    xs = (x - means) / scales

    n = len(rows)
    weights = []
    for cls_name in SHAPES:
        y = np.array([1.0 if r[3] == cls_name else -1.0 for r in rows])
        w = np.zeros(3)
        b = 0.0
        for t in range(1, epochs + 1):
            margins = y * (xs @ w + b)
            mask = margins < 1.0
            grad_w = lam * w - (xs[mask] * y[mask, None]).sum(axis=0) / n
            grad_b = -(y[mask].sum()) / n
            eta = 1.0 / (lam * t)
            w = w - eta * grad_w
            b = b - eta * grad_b
        weights.append([float(w[0]), float(w[1]), float(w[2]), float(b)])

    model = ShapeModel(
        classes=list(SHAPES),
        weights=weights,
        means=[float(v) for v in means],
        scales=[float(v) for v in scales],
    )
    preds = [predict_shape(model, AffectFeatures(r[0], r[1], r[2])) for r in rows]
    correct = sum(1 for p, r in zip(preds, rows) if p == r[3])
    recalls = []
    for cls_name in sorted(labels):
        members = [i for i, r in enumerate(rows) if r[3] == cls_name]
        hit = sum(1 for i in members if preds[i] == rows[i][3])
        recalls.append(hit / len(members))
    report = TrainingReport(accuracy=correct / n, macro_recall=sum(recalls) / len(recalls))
    return model, report


def predict_shape(model: ShapeModel, f: AffectFeatures) -> str:
    """Highest-scoring class; exact ties fall to the earlier class in the
    model's order (rounded first)."""
    feats = [f.valence, f.arousal, float(f.emotion_rank)]
    z = [(v - m) / s for v, m, s in zip(feats, model.means, model.scales)]
    best_cls = model.classes[0]
    best_score = -math.inf
    for cls_name, w in zip(model.classes, model.weights):
        score = w[0] * z[0] + w[1] * z[1] + w[2] * z[2] + w[3]
        if score > best_score:
            best_score = score
            best_cls = cls_name
    return best_cls


def rule_fallback_shape(f: AffectFeatures, thought_flag: bool = False) -> str:
    """Shape choice without a trained model."""
    if thought_flag:
        return "thought"
    if f.arousal >= 0.7 or f.emotion_rank >= 4:
        return "jagged"
    return "rounded"


# --- text fitting -----------------------------------------------------------


def wrap_text(text: str, font_px: int, max_width: float) -> list[str]:
    """Greedy word wrap at the monospace metric CHAR_ADVANCE * font_px."""
    adv = CHAR_ADVANCE * font_px
    max_chars = max(1, int(max_width / adv))
    lines: list[str] = []
    current = ""
    for word in text.split():
        candidate = word if not current else current + " " + word
        if len(candidate) <= max_chars:
            current = candidate
        else:
            if current:
                lines.append(current)
            current = word
    if current:
        lines.append(current)
    return lines or [""]


def text_block_size(lines: list[str], font_px: int) -> tuple[float, float]:
    width = max(len(ln) for ln in lines) * CHAR_ADVANCE * font_px
    height = len(lines) * LINE_HEIGHT * font_px
    return width, height


def _fits(text: str, font_px: int, box_w: float, box_h: float) -> bool:
    lines = wrap_text(text, font_px, box_w)
    w, h = text_block_size(lines, font_px)
    longest = max(len(ln) for ln in lines)
    return w <= box_w and h <= box_h and longest * CHAR_ADVANCE * font_px <= box_w


def font_size(rank: int, word_count: int, box: Rect) -> int:
    """Font in pixels for a balloon of the given emotion rank.

    Starts at 28 px scaled by (1 + 0.12 (rank - 3)), then steps down by
    2 px until the wrapped text fits the box; DoesNotFit below 12 px.
    """
    if box.w <= 0 or box.h <= 0:
        raise ValueError("box must be non-degenerate")
    text = "x " * word_count  # sizing by word count only needs a width proxy
    return fit_font_to_box(text.strip(), rank, box)


def initial_font(rank: int) -> int:
    scaled = BASE_FONT * (1.0 + 0.12 * (rank - 3))
    return max(MIN_FONT, min(MAX_FONT, int(scaled)))


def fit_font_to_box(text: str, rank: int, box: Rect) -> int:
    font = initial_font(rank)
    while font >= MIN_FONT:
        if _fits(text, font, box.w, box.h):
            return font
        font -= 2
    raise DoesNotFit(f"text of {len(text)} chars cannot fit a {box.w:.0f}x{box.h:.0f} box")


# --- speaker detection ------------------------------------------------------


def lip_motion_score(
    frame_t: np.ndarray,
    frame_t1: np.ndarray,
    mouth: RoiBox,
    search_radius: int = DEFAULT_SEARCH_RADIUS,
) -> float:
    """Motion-compensated mean squared difference over the mouth region.

    Frames are 2-D grayscale rasters in 8-bit units; the score is the
    minimum MSD over integer offsets within the search radius.
    """
    a = np.asarray(frame_t, dtype=np.float64)
    b = np.asarray(frame_t1, dtype=np.float64)
    for frame in (a, b):
        h, w = frame.shape
        if not mouth.within(w, h):
            raise BoxOutOfBounds(f"mouth box {mouth} outside {w}x{h} frame")
    patch = a[mouth.y : mouth.y + mouth.h, mouth.x : mouth.x + mouth.w]
    return kernels.msd_search(patch, b, mouth.x, mouth.y, search_radius)


def detect_speaker(
    frames_in_shot: list[np.ndarray],
    mouth_boxes: dict[str, list[RoiBox | None]],
    theta_lip: float = DEFAULT_THETA_LIP,
    search_radius: int = DEFAULT_SEARCH_RADIUS,
) -> str | None:
    """Character with the highest mean lip motion above the threshold.

    mouth_boxes maps character id to one optional box per frame in the
    shot.  Characters without at least one usable consecutive pair are
    skipped; ties go to the lexicographically first character id.
    """
    if len(frames_in_shot) < 2:
        return None
    means: dict[str, float] = {}
    for char_id in sorted(mouth_boxes):
        boxes = mouth_boxes[char_id]
        scores = []
        for t in range(len(frames_in_shot) - 1):
            box = boxes[t] if t < len(boxes) else None
            if box is None:
                continue
            scores.append(
                lip_motion_score(frames_in_shot[t], frames_in_shot[t + 1], box, search_radius)
            )
        if scores:
            means[char_id] = float(np.mean(scores))
    speakers = {c: v for c, v in means.items() if v > theta_lip}
    if not speakers:
        return None
    return max(sorted(speakers), key=lambda c: speakers[c])


# --- placement --------------------------------------------------------------


def _clip_convex(subject: list[tuple[float, float]], clip: list[tuple[float, float]]):
    """Sutherland-Hodgman clip of a polygon by a convex clockwise polygon."""
    output = list(subject)
    n = len(clip)
    for i in range(n):
        if not output:
            break
        a = clip[i]
        b = clip[(i + 1) % n]
        # inside = right of edge a->b for clockwise polygons
        def inside(p):
            return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0

        def intersect(p, q):
            dx1, dy1 = q[0] - p[0], q[1] - p[1]
            dx2, dy2 = b[0] - a[0], b[1] - a[1]
            denom = dx1 * dy2 - dy1 * dx2
            if abs(denom) < 1e-12:
                return q
            t = ((a[0] - p[0]) * dy2 - (a[1] - p[1]) * dx2) / denom
            return (p[0] + t * dx1, p[1] + t * dy1)

        nxt = []
        for j in range(len(output)):
            cur = output[j]
            prev = output[j - 1]
            if inside(cur):
                if not inside(prev):
                    nxt.append(intersect(prev, cur))
                nxt.append(cur)
            elif inside(prev):
                nxt.append(intersect(prev, cur))
        output = nxt
    return output


def _rect_points(r: Rect) -> list[tuple[float, float]]:
    return [(r.x, r.y), (r.x + r.w, r.y), (r.x + r.w, r.y + r.h), (r.x, r.y + r.h)]


def _rect_overlap(a: Rect, b: Rect) -> float:
    w = max(0.0, min(a.x + a.w, b.x + b.w) - max(a.x, b.x))
    h = max(0.0, min(a.y + a.h, b.y + b.h) - max(a.y, b.y))
    return w * h


def outside_panel_fraction(box: Rect, panel: Panel) -> float:
    inter = _clip_convex(_rect_points(box), panel.quad)
    inside = polygon_area(inter) if len(inter) >= 3 else 0.0
    return max(0.0, 1.0 - inside / box.area)


def place_balloon(
    panel: Panel,
    roi_in_panel: Rect,
    mouth_point_in_panel: tuple[float, float] | None,
    text: str,
    rank: int,
    placed: list[BalloonSpec],
    reading_index: int,
    panel_index: int = 0,
    rtl: bool = False,
    shape: str = "rounded",
    cue_ids: list[int] | None = None,
) -> BalloonSpec:
    """Place one balloon inside a panel.

    Candidate anchors ring the speaker's mouth (panel corners when there
    is no speaker); each candidate is scored by weighted ROI overlap,
    balloon overlap, area outside the panel, distance to the mouth and
    reading-order violations.  When even the best candidate still has a
    hard overlap the font shrinks stepwise before accepting the
    least-cost placement.
    """
    bb = panel.bbox()
    pad = 10.0
    nominal = Rect(0, 0, 0.42 * bb.w, 0.38 * bb.h)
    try:
        font = fit_font_to_box(text, rank, Rect(0, 0, nominal.w - 2 * pad, nominal.h - 2 * pad))
    except DoesNotFit as e:
        raise CannotPlace(str(e)) from e

    diag = math.hypot(bb.w, bb.h)

    def candidates_for(w: float, h: float) -> list[Rect]:
        out = []
        if mouth_point_in_panel is not None:
            mx, my = mouth_point_in_panel
            ring = math.hypot(w, h) / 2.0 + 30.0
            for kk in range(8):
                ang = kk * math.pi / 4.0
                cx = mx + ring * math.cos(ang - math.pi / 2.0)
                cy = my + ring * math.sin(ang - math.pi / 2.0)
                out.append(Rect(cx - w / 2.0, cy - h / 2.0, w, h))
        else:
            inset = 8.0
            corners = [
                (bb.x + inset, bb.y + inset),
                (bb.x + bb.w - w - inset, bb.y + inset),
                (bb.x + inset, bb.y + bb.h - h - inset),
                (bb.x + bb.w - w - inset, bb.y + bb.h - h - inset),
            ]
            if rtl:
                corners = [corners[1], corners[0], corners[3], corners[2]]
            out = [Rect(cx, cy, w, h) for cx, cy in corners]
        return out

    def violation(box: Rect) -> int:
        bad = 0
        for other in placed:
            if other.panel_index != panel_index or other.reading_index >= reading_index:
                continue
            ox, oy = other.box.cx, other.box.cy
            if rtl:
                if oy > box.cy and ox < box.cx:
                    bad += 1
            else:
                if oy > box.cy and ox > box.cx:
                    bad += 1
        return bad

    best_any: tuple[float, Rect, int] | None = None
    chosen: tuple[float, Rect, int] | None = None
    cur_font = font
    while True:
        lines = wrap_text(text, cur_font, nominal.w - 2 * pad)
        tw, th = text_block_size(lines, cur_font)
        w, h = tw + 2 * pad, th + 2 * pad
        scored: list[tuple[float, float, int, Rect]] = []
        for order, cand in enumerate(candidates_for(w, h)):
            roi_ov = _rect_overlap(cand, roi_in_panel) / cand.area
            ball_ov = sum(_rect_overlap(cand, other.box) for other in placed) / cand.area
            outside = outside_panel_fraction(cand, panel)
            dist = (
                math.hypot(cand.cx - mouth_point_in_panel[0], cand.cy - mouth_point_in_panel[1]) / diag
                if mouth_point_in_panel is not None
                else 0.0
            )
            cost = 4.0 * roi_ov + 4.0 * ball_ov + 8.0 * outside + 0.5 * dist + 6.0 * violation(cand)
            hard = ball_ov + outside
            scored.append((cost, hard, order, cand))
        scored.sort(key=lambda t: (t[0], t[2]))
        cost, _, _, box = scored[0]
        if best_any is None or cost < best_any[0]:
            best_any = (cost, box, cur_font)
        feasible = [t for t in scored if t[1] <= 1e-9]
        if feasible:
            chosen = (feasible[0][0], feasible[0][3], cur_font)
            break
        if cur_font - 2 < MIN_FONT:
            break
        cur_font -= 2

    _, box, used_font = chosen if chosen is not None else best_any
    return BalloonSpec(
        shape=shape,
        text=text,
        font_px=used_font,
        box=box,
        tail_target=mouth_point_in_panel,
        panel_index=panel_index,
        reading_index=reading_index,
        cue_ids=list(cue_ids or []),
    )
