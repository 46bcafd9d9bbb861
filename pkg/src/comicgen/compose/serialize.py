"""Canonical JSON stage artifacts and SRT rendering.

Stage outputs are always dumped through `dump_json` (sorted keys, fixed
indentation, trailing newline) so loading a persisted artifact and
re-serializing it is byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..subtitle import SubtitleCue


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dump_json(obj, path: str | Path) -> None:
    Path(path).write_text(dumps_json(obj), encoding="utf-8")


def load_json(path: str | Path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _ms_to_stamp(ms: int) -> str:
    h, rem = divmod(ms, 3600_000)
    m, rem = divmod(rem, 60_000)
    s, milli = divmod(rem, 1000)
    return f"{h:02d}:{m:02d}:{s:02d},{milli:03d}"


def serialize_srt(cues: list[SubtitleCue]) -> bytes:
    """Render normalized cues back to SRT; parse(serialize(cues)) == cues."""
    blocks = []
    for cue in cues:
        blocks.append(
            f"{cue.index}\n{_ms_to_stamp(cue.start_ms)} --> {_ms_to_stamp(cue.end_ms)}\n{cue.text}\n"
        )
    return "\n".join(blocks).encode("utf-8")
