"""Stage orchestration: drives the whole book generation from a manifest.

Each stage persists a JSON artifact (plus PNGs for images) under the
output directory, so any stage can be re-run individually from the
artifacts of the stages before it.  All randomness derives from the
manifest seed; two runs over the same inputs produce byte-identical
stage artifacts and SVG pages.
"""

from __future__ import annotations

import csv
import logging
import time
from pathlib import Path

import numpy as np

from .. import kernels
from ..allocate import ga_allocate
from ..balloon import (
    AffectFeatures,
    BalloonSpec,
    CannotPlace,
    ShapeModel,
    detect_speaker,
    place_balloon,
    predict_shape,
    rule_fallback_shape,
    text_emotion_rank,
    DEFAULT_THETA_LIP,
)
from ..compress import compress
from ..errors import StageError, ValidationError
from ..framestream import FrameRef, descriptors_for, load_gray, load_rgb, load_sequence
from ..keyframes import Keyframe, SelectionConfig, run_selection
from ..layout import CropSpec, PageLayout, Panel, Rect, StyleParams, fit_roi
from ..semantics import RoiBox, compute_semantics, DEFAULT_THETA3
from ..stylize import XdogParams, stylize_bw, stylize_color
from ..subtitle import Shot, SubtitleCue, parse_srt, segment_shots, DEFAULT_GAP_MERGE_MS
from .manifest import Manifest
from .raster import render_png, save_png
from .serialize import dump_json, load_json
from .svg import PanelImage, render_svg

log = logging.getLogger(__name__)

STAGE_ORDER = (
    "subtitle",
    "framestream",
    "keyframes",
    "stylize",
    "semantics",
    "allocate",
    "layout",
    "balloons",
    "render",
)


def _page_seed(seed: int, page_index: int) -> int:
    return seed * 1_000_003 + page_index


# --- artifact (de)serialization ---------------------------------------------


def _cue_to_json(c: SubtitleCue) -> dict:
    return {"index": c.index, "start_ms": c.start_ms, "end_ms": c.end_ms, "text": c.text}


def _cue_from_json(d: dict) -> SubtitleCue:
    return SubtitleCue(d["index"], d["start_ms"], d["end_ms"], d["text"])


def _frame_to_json(f: FrameRef) -> dict:
    return {
        "ordinal": f.ordinal,
        "timestamp_ms": f.timestamp_ms,
        "path": f.path,
        "width": f.width,
        "height": f.height,
    }


def _frame_from_json(d: dict) -> FrameRef:
    return FrameRef(d["ordinal"], d["timestamp_ms"], d["path"], d["width"], d["height"])


def _kf_to_json(k: Keyframe) -> dict:
    return {
        "ordinal": k.frame.ordinal,
        "shot_id": k.shot_id,
        "cue_group": list(k.cue_group),
        "relation_group": k.relation_group,
        "interval": list(k.interval),
    }


def _layout_to_json(layout: PageLayout) -> dict:
    return {
        "panels": [
            {
                "quad": [[x, y] for x, y in p.quad],
                "base_rect": [p.base_rect.x, p.base_rect.y, p.base_rect.w, p.base_rect.h],
                "keyframe_index": p.keyframe_index,
                "rank": p.rank,
                "crop": {
                    "sx": p.crop.sx,
                    "sy": p.crop.sy,
                    "sw": p.crop.sw,
                    "sh": p.crop.sh,
                    "scale": p.crop.scale,
                },
            }
            for p in layout.panels
        ]
    }


def _layout_from_json(d: dict, page_size: tuple[int, int], gutter: int) -> PageLayout:
    panels = []
    for pd in d["panels"]:
        crop = CropSpec(**pd["crop"])
        panels.append(
            Panel(
                quad=[tuple(pt) for pt in pd["quad"]],
                base_rect=Rect(*pd["base_rect"]),
                keyframe_index=pd["keyframe_index"],
                rank=pd["rank"],
                crop=crop,
            )
        )
    return PageLayout(page_size=page_size, panels=panels, gutter=gutter)


# --- stages ------------------------------------------------------------------


def stage_subtitle(m: Manifest, out: Path) -> None:
    cues = parse_srt(m.subtitles_path.read_bytes())
    dump_json({"cues": [_cue_to_json(c) for c in cues]}, out / "cues.json")


def stage_framestream(m: Manifest, out: Path) -> None:
    frames = load_sequence(m.frames_dir, m.frame_pattern, m.sample_period_ms)
    if not frames:
        raise ValidationError(f"no frames matching {m.frame_pattern!r} in {m.frames_dir}")
    descs = descriptors_for(frames)
    np.save(out / "descriptors.npy", descs)
    dump_json(
        {
            "frames": [_frame_to_json(f) for f in frames],
            "sample_period_ms": m.sample_period_ms,
            "duration_ms": len(frames) * m.sample_period_ms,
        },
        out / "frames.json",
    )


def _load_frames(out: Path) -> tuple[list[FrameRef], np.ndarray, int]:
    fj = load_json(out / "frames.json")
    frames = [_frame_from_json(d) for d in fj["frames"]]
    descs = np.load(out / "descriptors.npy")
    return frames, descs, fj["duration_ms"]


def _load_cues(out: Path) -> list[SubtitleCue]:
    return [_cue_from_json(d) for d in load_json(out / "cues.json")["cues"]]


def stage_keyframes(m: Manifest, out: Path) -> None:
    cues = _load_cues(out)
    frames, descs, frames_duration = _load_frames(out)
    duration = max(frames_duration, max((c.end_ms for c in cues), default=0))
    shots = segment_shots(cues, duration, int(m.threshold("gap_merge_ms", DEFAULT_GAP_MERGE_MS)))
    cfg = SelectionConfig(
        theta1=m.threshold("theta1", SelectionConfig.theta1),
        theta2=m.threshold("theta2", SelectionConfig.theta2),
        theta_nd=m.threshold("theta_nd", SelectionConfig.theta_nd),
    )
    keys = run_selection(cues, shots, frames, descs, cfg, duration)
    if not keys:
        raise ValidationError("keyframe selection produced no keyframes")
    dump_json(
        {
            "duration_ms": duration,
            "shots": [
                {
                    "kind": s.kind,
                    "start_ms": s.start_ms,
                    "end_ms": s.end_ms,
                    "cue_indices": list(s.cue_indices),
                }
                for s in shots
            ],
            "keyframes": [_kf_to_json(k) for k in keys],
        },
        out / "keyframes.json",
    )


def _load_keyframes(out: Path) -> tuple[list[Keyframe], list[Shot], int]:
    kj = load_json(out / "keyframes.json")
    frames, _, _ = _load_frames(out)
    keys = []
    for d in kj["keyframes"]:
        kf = Keyframe(
            frame=frames[d["ordinal"]],
            shot_id=d["shot_id"],
            cue_group=list(d["cue_group"]),
            relation_group=d["relation_group"],
            interval=tuple(d["interval"]),
        )
        keys.append(kf)
    shots = [
        Shot(s["kind"], s["start_ms"], s["end_ms"], tuple(s["cue_indices"]))
        for s in kj["shots"]
    ]
    return keys, shots, kj["duration_ms"]


def stage_stylize(m: Manifest, out: Path) -> None:
    keys, _, _ = _load_keyframes(out)
    img_dir = out / "stylized"
    img_dir.mkdir(exist_ok=True)
    params = XdogParams()
    index: dict[str, str] = {}
    for i, kf in enumerate(keys):
        rgb = load_rgb(kf.frame.path)
        art = stylize_bw(rgb, params) if m.style == "bw" else stylize_color(rgb, params)
        rel = f"stylized/kf_{i:04d}.png"
        save_png(art, out / rel)
        index[str(i)] = rel
    dump_json({"style": m.style, "images": index}, out / "stylize.json")


def stage_semantics(m: Manifest, out: Path) -> None:
    keys, _, _ = _load_keyframes(out)
    _, descs, _ = _load_frames(out)
    images = [load_rgb(k.frame.path) for k in keys]
    rois, records = compute_semantics(
        keys,
        descs,
        images,
        theta3=m.threshold("theta3", DEFAULT_THETA3),
        roi_csv=m.sidecars.get("roi"),
        importance_csv=m.sidecars.get("importance"),
    )
    dump_json(
        {
            "rois": [[r.x, r.y, r.w, r.h] for r in rois],
            "scores": [rec.score for rec in records],
            "ranks": [rec.rank for rec in records],
        },
        out / "semantics.json",
    )


def _load_semantics(out: Path) -> tuple[list[RoiBox], list[float], list[int]]:
    sj = load_json(out / "semantics.json")
    return (
        [RoiBox(*r) for r in sj["rois"]],
        sj["scores"],
        sj["ranks"],
    )


def stage_allocate(m: Manifest, out: Path) -> None:
    keys, _, _ = _load_keyframes(out)
    _, scores, _ = _load_semantics(out)
    groups: dict[int, list[int]] = {}
    for i, kf in enumerate(keys):
        groups.setdefault(kf.relation_group, []).append(i)
    relation_groups = [g for g in groups.values() if len(g) > 1]
    allocation = ga_allocate(
        len(keys), scores, relation_groups, m.allocation_params(), m.ga_config()
    )
    dump_json(
        {
            "counts": list(allocation.counts),
            "pages": [list(p) for p in allocation.assignment],
            "z": allocation.z,
            "breakdown": {
                "over_max": allocation.breakdown.over_max,
                "under_min": allocation.breakdown.under_min,
                "count_mismatch": allocation.breakdown.count_mismatch,
                "uniformity": allocation.breakdown.uniformity,
                "split_relations": allocation.breakdown.split_relations,
            },
        },
        out / "allocation.json",
    )


def stage_layout(m: Manifest, out: Path) -> None:
    keys, _, _ = _load_keyframes(out)
    rois, _, ranks = _load_semantics(out)
    alloc = load_json(out / "allocation.json")
    style = StyleParams(rtl=m.reading_order == "rtl")
    pages = []
    for page_index, kf_indices in enumerate(alloc["pages"]):
        synth = _synthesize(m, keys, rois, ranks, kf_indices, page_index, style)
        pages.append(_layout_to_json(synth))
    dump_json(
        {"page_size": list(m.page_size_px), "gutter": style.gutter_px, "pages": pages},
        out / "layout.json",
    )


def _synthesize(
    m: Manifest,
    keys: list[Keyframe],
    rois: list[RoiBox],
    ranks: list[int],
    kf_indices: list[int],
    page_index: int,
    style: StyleParams,
) -> PageLayout:
    from ..layout import synthesize_page

    layout = synthesize_page(
        kf_indices,
        [ranks[i] for i in kf_indices],
        m.page_size_px,
        style,
        _page_seed(m.seed, page_index),
        relation_groups=[keys[i].relation_group for i in kf_indices],
    )
    for panel in layout.panels:
        kf = keys[panel.keyframe_index]
        panel.crop = fit_roi(
            (kf.frame.width, kf.frame.height), rois[panel.keyframe_index], panel
        )
    return layout


def _read_affect(path: Path | None) -> dict[int, tuple[float, float]]:
    if path is None:
        return {}
    out: dict[int, tuple[float, float]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    for row in rows[1:]:
        if len(row) != 3:
            raise ValidationError(f"affect.csv row must be cue_index,valence,arousal: {row}")
        idx, v, a = int(row[0]), float(row[1]), float(row[2])
        if not (0.0 <= v <= 1.0 and 0.0 <= a <= 1.0):
            raise ValidationError(f"affect values out of [0,1]: {row}")
        out[idx] = (v, a)
    return out


def _read_mouths(path: Path | None) -> dict[int, dict[str, RoiBox]]:
    if path is None:
        return {}
    out: dict[int, dict[str, RoiBox]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    for row in rows[1:]:
        if len(row) != 6:
            raise ValidationError(
                f"mouths.csv row must be frame_ordinal,character_id,x,y,w,h: {row}"
            )
        ordinal = int(row[0])
        char = row[1].strip()
        box = RoiBox(int(row[2]), int(row[3]), int(row[4]), int(row[5]))
        out.setdefault(ordinal, {})[char] = box
    return out


def _crop_to_page(crop: CropSpec, bb: Rect, x: float, y: float) -> tuple[float, float]:
    px = bb.x + (x - crop.sx) / crop.sw * bb.w
    py = bb.y + (y - crop.sy) / crop.sh * bb.h
    return px, py


def stage_balloons(m: Manifest, out: Path) -> None:
    cues = {c.index: c for c in _load_cues(out)}
    keys, _, _ = _load_keyframes(out)
    frames, _, _ = _load_frames(out)
    rois, _, _ = _load_semantics(out)
    lj = load_json(out / "layout.json")
    page_size = tuple(lj["page_size"])
    gutter = lj["gutter"]
    affect = _read_affect(m.sidecars.get("affect"))
    mouths = _read_mouths(m.sidecars.get("mouths"))
    model = (
        ShapeModel.load(m.sidecars["shape_model"])
        if "shape_model" in m.sidecars
        else None
    )
    theta_lip = m.threshold("theta_lip", DEFAULT_THETA_LIP)
    rtl = m.reading_order == "rtl"

    gray_cache: dict[int, np.ndarray] = {}

    def gray(ordinal: int) -> np.ndarray:
        if ordinal not in gray_cache:
            gray_cache[ordinal] = load_gray(frames[ordinal].path) * 255.0
        return gray_cache[ordinal]

    balloons_json = []
    skips = []
    for page_index, page_dict in enumerate(lj["pages"]):
        layout = _layout_from_json(page_dict, page_size, gutter)
        placed: list[BalloonSpec] = []
        for reading_index, panel in enumerate(layout.panels):
            kf = keys[panel.keyframe_index]
            cue_ids = sorted(kf.cue_group)
            if not cue_ids:
                continue
            texts = [cues[i].text for i in cue_ids]
            try:
                text = compress(texts)
            except Exception as e:  # never lose a cue silently
                skips.append({"cue_ids": cue_ids, "reason": f"compress: {e}"})
                continue

            pairs = [affect.get(i, (0.5, 0.3)) for i in cue_ids]
            valence = sum(p[0] for p in pairs) / len(pairs)
            arousal = sum(p[1] for p in pairs) / len(pairs)
            rank = max(text_emotion_rank(t) for t in texts)
            feats = AffectFeatures(valence, arousal, rank)

            thought = any(i in m.thought_cues for i in cue_ids)
            if thought:
                shape = "thought"
            elif model is not None:
                shape = predict_shape(model, feats)
            else:
                shape = rule_fallback_shape(feats)

            speaker, mouth_point = _find_speaker(
                kf, cues, cue_ids, frames, mouths, gray, theta_lip, panel
            )

            bb = panel.bbox()
            roi = rois[panel.keyframe_index]
            r0 = _crop_to_page(panel.crop, bb, roi.x, roi.y)
            r1 = _crop_to_page(panel.crop, bb, roi.x + roi.w, roi.y + roi.h)
            roi_page = Rect(r0[0], r0[1], max(1.0, r1[0] - r0[0]), max(1.0, r1[1] - r0[1]))

            try:
                spec = place_balloon(
                    panel,
                    roi_page,
                    mouth_point,
                    text,
                    rank,
                    placed,
                    reading_index,
                    panel_index=reading_index,
                    rtl=rtl,
                    shape=shape,
                    cue_ids=cue_ids,
                )
            except CannotPlace as e:
                skips.append({"cue_ids": cue_ids, "reason": str(e)})
                continue
            placed.append(spec)
            balloons_json.append(
                {
                    "page": page_index,
                    "panel_index": spec.panel_index,
                    "reading_index": spec.reading_index,
                    "shape": spec.shape,
                    "text": spec.text,
                    "font_px": spec.font_px,
                    "box": [spec.box.x, spec.box.y, spec.box.w, spec.box.h],
                    "tail": list(spec.tail_target) if spec.tail_target else None,
                    "cue_ids": spec.cue_ids,
                    "speaker": speaker,
                }
            )
    dump_json({"balloons": balloons_json, "skips": skips}, out / "balloons.json")


def _find_speaker(
    kf: Keyframe,
    cues: dict[int, SubtitleCue],
    cue_ids: list[int],
    frames: list[FrameRef],
    mouths: dict[int, dict[str, RoiBox]],
    gray,
    theta_lip: float,
    panel: Panel,
) -> tuple[str | None, tuple[float, float] | None]:
    if not mouths:
        return None, None
    start = min(cues[i].start_ms for i in cue_ids)
    end = max(cues[i].end_ms for i in cue_ids)
    window = [f.ordinal for f in frames if start <= f.timestamp_ms < end]
    if len(window) < 2:
        window = [f.ordinal for f in frames if start - 500 <= f.timestamp_ms <= end + 500]
    if len(window) < 2:
        return None, None
    chars = sorted({c for o in window for c in mouths.get(o, {})})
    if not chars:
        return None, None
    shot_frames = [gray(o) for o in window]
    boxes = {c: [mouths.get(o, {}).get(c) for o in window] for c in chars}
    speaker = detect_speaker(shot_frames, boxes, theta_lip)
    if speaker is None:
        return None, None
    box = mouths.get(kf.frame.ordinal, {}).get(speaker)
    if box is None:
        for o in window:
            box = mouths.get(o, {}).get(speaker)
            if box is not None:
                break
    if box is None:
        return speaker, None
    bb = panel.bbox()
    mx, my = _crop_to_page(panel.crop, bb, box.x + box.w / 2.0, box.y + box.h / 2.0)
    mx = min(max(mx, bb.x), bb.x + bb.w)
    my = min(max(my, bb.y), bb.y + bb.h)
    return speaker, (mx, my)


def stage_render(m: Manifest, out: Path) -> None:
    lj = load_json(out / "layout.json")
    sj = load_json(out / "stylize.json")
    bj = load_json(out / "balloons.json")
    page_size = tuple(lj["page_size"])
    gutter = lj["gutter"]
    pages_dir = out / "pages"
    pages_dir.mkdir(exist_ok=True)

    from PIL import Image

    sources: dict[int, np.ndarray] = {}
    panel_images: dict[int, PanelImage] = {}
    for key, rel in sj["images"].items():
        idx = int(key)
        path = out / rel
        with Image.open(path) as im:
            arr = np.asarray(im.convert("RGB"), dtype=np.uint8)
        sources[idx] = arr
        panel_images[idx] = PanelImage(href=f"../{rel}", width=arr.shape[1], height=arr.shape[0])

    for page_index, page_dict in enumerate(lj["pages"]):
        layout = _layout_from_json(page_dict, page_size, gutter)
        specs = [
            BalloonSpec(
                shape=b["shape"],
                text=b["text"],
                font_px=b["font_px"],
                box=Rect(*b["box"]),
                tail_target=tuple(b["tail"]) if b["tail"] else None,
                panel_index=b["panel_index"],
                reading_index=b["reading_index"],
                cue_ids=b["cue_ids"],
            )
            for b in bj["balloons"]
            if b["page"] == page_index
        ]
        svg_text = render_svg(layout, panel_images, specs)
        (pages_dir / f"page_{page_index + 1:03d}.svg").write_text(svg_text, encoding="utf-8")
        canvas = render_png(layout, sources, specs)
        save_png(canvas, pages_dir / f"page_{page_index + 1:03d}.png")

    alloc = load_json(out / "allocation.json")
    kj = load_json(out / "keyframes.json")
    dump_json(
        {
            "keyframes": len(kj["keyframes"]),
            "pages": len(lj["pages"]),
            "z": alloc["z"],
            "balloons_placed": len(bj["balloons"]),
            "balloons_skipped": len(bj["skips"]),
            "kernels_backend": kernels.BACKEND,
        },
        out / "summary.json",
    )


_STAGE_FUNCS = {
    "subtitle": stage_subtitle,
    "framestream": stage_framestream,
    "keyframes": stage_keyframes,
    "stylize": stage_stylize,
    "semantics": stage_semantics,
    "allocate": stage_allocate,
    "layout": stage_layout,
    "balloons": stage_balloons,
    "render": stage_render,
}


def run_stages(m: Manifest, names: list[str]) -> Path:
    out = m.output_dir
    out.mkdir(parents=True, exist_ok=True)
    for name in names:
        fn = _STAGE_FUNCS[name]
        started = time.perf_counter()
        try:
            fn(m, out)
        except Exception as e:
            if isinstance(e, StageError):
                raise
            raise StageError(name, e) from e
        log.info("stage %-11s %.3fs", name, time.perf_counter() - started)
    return out


def run_pipeline(m: Manifest) -> dict:
    """Execute every stage in order; returns the summary document."""
    out = run_stages(m, list(STAGE_ORDER))
    return load_json(out / "summary.json")
