"""Keyframe selection, scene merging and subtitle grouping.

Dialogue shots look for visual changes between consecutive frames and
guarantee at least one keyframe per cue; non-dialogue shots contribute
at most one keyframe (the most dissimilar frame, deduplicated against
everything selected before).  Keyframes picked during the same cue form
a semantic relation group that later stages keep on one page.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyShot
from .framestream import FrameRef, similarity
from .subtitle import Shot, SubtitleCue

log = logging.getLogger(__name__)

DEFAULT_THETA1 = 0.82
DEFAULT_THETA2 = 0.90
DEFAULT_THETA_ND = 0.90


@dataclass(frozen=True)
class SelectionConfig:
    theta1: float = DEFAULT_THETA1
    theta2: float = DEFAULT_THETA2
    theta_nd: float = DEFAULT_THETA_ND

    def __post_init__(self):
        if not (0.0 < self.theta1 <= self.theta2 < 1.0):
            raise ValueError("need 0 < theta1 <= theta2 < 1")
        if not (0.0 < self.theta_nd < 1.0):
            raise ValueError("theta_nd must be in (0, 1)")


@dataclass
class Keyframe:
    frame: FrameRef
    shot_id: int
    cue_group: list[int] = field(default_factory=list)
    relation_group: int = -1
    interval: tuple[int, int] = (0, 0)

    @property
    def timestamp_ms(self) -> int:
        return self.frame.timestamp_ms


def _frames_in(shot: Shot, frames: list[FrameRef]) -> list[FrameRef]:
    return [f for f in frames if shot.start_ms <= f.timestamp_ms < shot.end_ms]


def select_dialogue(
    shot: Shot,
    frames: list[FrameRef],
    descriptors: np.ndarray,
    cues_by_index: dict[int, SubtitleCue],
    cfg: SelectionConfig,
    shot_id: int = 0,
) -> list[Keyframe]:
    """Keyframes for one dialogue shot.

    A frame is selected when its similarity to the previous frame drops
    below theta1; every cue without a keyframe in its span falls back to
    the middle frame of that span.
    """
    local = _frames_in(shot, frames)
    if not local:
        raise EmptyShot(f"dialogue shot [{shot.start_ms},{shot.end_ms}) contains no frames")

    chosen: dict[int, FrameRef] = {}
    for prev, cur in zip(local, local[1:]):
        if similarity(descriptors[prev.ordinal], descriptors[cur.ordinal]) < cfg.theta1:
            chosen[cur.ordinal] = cur

    for idx in shot.cue_indices:
        cue = cues_by_index[idx]
        span = [f for f in local if cue.start_ms <= f.timestamp_ms < cue.end_ms]
        if not span:
            span = local
        if not any(cue.start_ms <= f.timestamp_ms < cue.end_ms for f in chosen.values()):
            mid = span[len(span) // 2]
            chosen.setdefault(mid.ordinal, mid)

    keys = [Keyframe(frame=f, shot_id=shot_id) for _, f in sorted(chosen.items())]

    # provisional cue partition: each cue goes to the last keyframe at or
    # before its start (group_and_relate re-derives this globally)
    for idx in shot.cue_indices:
        cue = cues_by_index[idx]
        owner = keys[0]
        for kf in keys:
            if kf.timestamp_ms <= cue.start_ms:
                owner = kf
        owner.cue_group.append(idx)
    return keys


def select_nondialogue(
    shot: Shot,
    frames: list[FrameRef],
    descriptors: np.ndarray,
    already_selected: list[Keyframe],
    cfg: SelectionConfig,
    shot_id: int = 0,
) -> list[Keyframe]:
    """At most one keyframe: the frame most dissimilar to the rest of the
    shot, kept only when it does not duplicate an earlier keyframe."""
    local = _frames_in(shot, frames)
    if not local:
        return []

    best: FrameRef | None = None
    best_mean = float("inf")
    for f in local:
        sims = [
            similarity(descriptors[f.ordinal], descriptors[g.ordinal])
            for g in local
            if g.ordinal != f.ordinal
        ]
        mean = float(np.mean(sims)) if sims else 0.0
        if mean < best_mean:  # strict: ties keep the earliest ordinal
            best = f
            best_mean = mean
    assert best is not None

    for kf in already_selected:
        if similarity(descriptors[best.ordinal], descriptors[kf.frame.ordinal]) >= cfg.theta_nd:
            return []
    return [Keyframe(frame=best, shot_id=shot_id)]


def merge_scenes(
    keys: list[Keyframe], descriptors: np.ndarray, cfg: SelectionConfig
) -> list[Keyframe]:
    """Collapse runs of consecutive near-identical keyframes.

    The earliest keyframe of a run survives and inherits the cues of the
    merged ones; similarity is checked between consecutive originals so
    the merge is transitive along a run.
    """
    if len(keys) <= 1:
        return list(keys)
    merged = [keys[0]]
    prev_original = keys[0]
    for kf in keys[1:]:
        sim = similarity(
            descriptors[prev_original.frame.ordinal], descriptors[kf.frame.ordinal]
        )
        if sim > cfg.theta2:
            merged[-1].cue_group.extend(kf.cue_group)
        else:
            merged.append(kf)
        prev_original = kf
    return merged


def group_and_relate(
    keys: list[Keyframe],
    cues: list[SubtitleCue],
    duration_ms: int,
) -> list[Keyframe]:
    """Assign representation intervals, attach cues, and stamp relation groups.

    Each keyframe represents [its timestamp, next keyframe's timestamp);
    the last one extends to the stream end.  A cue belongs to the
    keyframe whose interval contains its start; cues starting before the
    first keyframe are attached to it with a warning.  Keyframes whose
    timestamp falls inside the same cue span share a relation group.
    """
    if not keys:
        return []
    keys = sorted(keys, key=lambda k: k.timestamp_ms)
    for i, kf in enumerate(keys):
        end = keys[i + 1].timestamp_ms if i + 1 < len(keys) else max(duration_ms, kf.timestamp_ms + 1)
        kf.interval = (kf.timestamp_ms, end)
        kf.cue_group = []

    for cue in cues:
        if cue.start_ms < keys[0].timestamp_ms:
            log.warning("cue %d starts before the first keyframe; attaching to it", cue.index)
            keys[0].cue_group.append(cue.index)
            continue
        for kf in keys:
            if kf.interval[0] <= cue.start_ms < kf.interval[1]:
                kf.cue_group.append(cue.index)
                break
        else:
            keys[-1].cue_group.append(cue.index)

    # relation groups: keyframes selected during the same cue
    next_group = 0
    by_cue: dict[int, int] = {}
    for kf in keys:
        owner = None
        for cue in cues:
            if cue.start_ms <= kf.timestamp_ms < cue.end_ms:
                owner = cue.index
                break
        if owner is None:
            kf.relation_group = next_group
            next_group += 1
        else:
            if owner not in by_cue:
                by_cue[owner] = next_group
                next_group += 1
            kf.relation_group = by_cue[owner]
    return keys


def run_selection(
    cues: list[SubtitleCue],
    shots: list[Shot],
    frames: list[FrameRef],
    descriptors: np.ndarray,
    cfg: SelectionConfig,
    duration_ms: int,
) -> list[Keyframe]:
    """Full selection pass over all shots, in temporal order."""
    cues_by_index = {c.index: c for c in cues}
    selected: list[Keyframe] = []
    for shot_id, shot in enumerate(shots):
        if shot.kind == "dialogue":
            try:
                selected.extend(
                    select_dialogue(shot, frames, descriptors, cues_by_index, cfg, shot_id)
                )
            except EmptyShot:
                log.warning("dialogue shot %d has no sampled frames; skipping", shot_id)
        else:
            selected.extend(
                select_nondialogue(shot, frames, descriptors, selected, cfg, shot_id)
            )
    selected.sort(key=lambda k: k.timestamp_ms)
    merged = merge_scenes(selected, descriptors, cfg)
    return group_and_relate(merged, cues, duration_ms)
