"""SRT parsing and dialogue/non-dialogue timeline segmentation.

Pure functions over immutable inputs; no shared state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import EmptyFile, MalformedTimestamp

DEFAULT_GAP_MERGE_MS = 1000

_TIMESTAMP_RE = re.compile(
    r"^\s*(\d{1,2}):(\d{2}):(\d{2})[,.](\d{3})\s*-->\s*(\d{1,2}):(\d{2}):(\d{2})[,.](\d{3})"
)
_TAG_RE = re.compile(r"</?[a-zA-Z][^>]*>")


@dataclass(frozen=True)
class SubtitleCue:
    """One timed dialogue line; text has newlines joined by single spaces."""

    index: int
    start_ms: int
    end_ms: int
    text: str

    def __post_init__(self):
        if self.start_ms >= self.end_ms:
            raise ValueError(f"cue {self.index}: start {self.start_ms} >= end {self.end_ms}")


@dataclass(frozen=True)
class Shot:
    """A timeline segment; dialogue shots carry the cues spoken in them."""

    kind: str  # "dialogue" | "non_dialogue"
    start_ms: int
    end_ms: int
    cue_indices: tuple[int, ...] = field(default_factory=tuple)

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms


def _parse_timestamp_line(line: str) -> tuple[int, int]:
    m = _TIMESTAMP_RE.match(line)
    if not m:
        raise MalformedTimestamp(f"bad timestamp line: {line.strip()!r}")
    h1, m1, s1, ms1, h2, m2, s2, ms2 = (int(g) for g in m.groups())
    start = ((h1 * 60 + m1) * 60 + s1) * 1000 + ms1
    end = ((h2 * 60 + m2) * 60 + s2) * 1000 + ms2
    return start, end


def _clean_text(lines: list[str]) -> str:
    joined = " ".join(_TAG_RE.sub("", ln).strip() for ln in lines)
    return " ".join(joined.split())


def parse_srt(data: bytes) -> list[SubtitleCue]:
    """Parse raw SRT file contents into normalized cues.

    Cues come back sorted by start time, clipped so no cue overlaps the
    next one, and renumbered 1..n.  Cues that end up empty (no text, or
    fully swallowed by the clip) are dropped.
    """
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise EmptyFile(f"not valid UTF-8: {e}") from e
    if not text.strip():
        raise EmptyFile("subtitle file has no content")

    blocks = re.split(r"(?:\r?\n)\s*(?:\r?\n)+", text.strip())
    raw: list[tuple[int, int, str]] = []
    for block in blocks:
        lines = [ln for ln in block.splitlines()]
        if not lines:
            continue
        # optional numeric index line
        if re.fullmatch(r"\s*\d+\s*", lines[0]) and len(lines) > 1:
            lines = lines[1:]
        if not lines:
            continue
        start, end = _parse_timestamp_line(lines[0])
        body = _clean_text(lines[1:])
        if body and start < end:
            raw.append((start, end, body))

    if not raw:
        raise EmptyFile("subtitle file contains no usable cues")

    raw.sort(key=lambda t: (t[0], t[1]))
    cues: list[SubtitleCue] = []
    for i, (start, end, body) in enumerate(raw):
        if i + 1 < len(raw):
            end = min(end, raw[i + 1][0])
        if end <= start:
            continue  # fully overlapped by the next cue
        cues.append(SubtitleCue(index=len(cues) + 1, start_ms=start, end_ms=end, text=body))
    if not cues:
        raise EmptyFile("all cues collapsed during overlap clipping")
    return cues


def segment_shots(
    cues: list[SubtitleCue],
    duration_ms: int,
    gap_merge_ms: int = DEFAULT_GAP_MERGE_MS,
) -> list[Shot]:
    """Tile [0, duration_ms] into dialogue and non-dialogue shots.

    Consecutive cues closer than gap_merge_ms share one dialogue shot
    (the short silence between them is folded in); larger gaps and the
    leading/trailing silences become non-dialogue shots.
    """
    if cues and duration_ms < max(c.end_ms for c in cues):
        raise ValueError("duration_ms is shorter than the last cue")
    if not cues:
        if duration_ms <= 0:
            return []
        return [Shot("non_dialogue", 0, duration_ms)]

    groups: list[list[SubtitleCue]] = [[cues[0]]]
    for cue in cues[1:]:
        if cue.start_ms - groups[-1][-1].end_ms < gap_merge_ms:
            groups[-1].append(cue)
        else:
            groups.append([cue])

    shots: list[Shot] = []
    cursor = 0
    for group in groups:
        start = group[0].start_ms
        end = group[-1].end_ms
        if start > cursor:
            shots.append(Shot("non_dialogue", cursor, start))
        shots.append(Shot("dialogue", start, end, tuple(c.index for c in group)))
        cursor = end
    if cursor < duration_ms:
        shots.append(Shot("non_dialogue", cursor, duration_ms))
    return shots
