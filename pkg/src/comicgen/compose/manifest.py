"""Project manifest: the single input document that drives the pipeline.

JSON, UTF-8, with the exact field names below; unknown fields are
rejected so typos surface immediately.  Relative paths resolve against
the manifest's own directory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..allocate import DEFAULT_ALPHA, DEFAULT_N_MAX, DEFAULT_N_MIN, AllocationParams, GaConfig
from ..errors import ManifestError

KNOWN_FIELDS = {
    "frames_dir",
    "frame_pattern",
    "sample_period_ms",
    "subtitles_path",
    "sidecars",
    "pages",
    "seed",
    "style",
    "reading_order",
    "page_size_px",
    "output_dir",
    "thresholds",
    "thought_cues",
    "allocation",
    "ga",
}
KNOWN_SIDECARS = {"affect", "mouths", "roi", "importance", "shape_model"}
KNOWN_THRESHOLDS = {"theta1", "theta2", "theta_nd", "theta3", "theta_lip", "gap_merge_ms"}
KNOWN_ALLOCATION = {"alpha", "n_max", "n_min", "penalty_mode", "importance_mode"}
KNOWN_GA = {"population", "generations", "crossover_rate", "mutation_rate", "elitism", "stagnation_limit"}


@dataclass
class Manifest:
    frames_dir: Path
    subtitles_path: Path
    pages: int
    frame_pattern: str = "frame_%06d.png"
    sample_period_ms: int = 500
    sidecars: dict[str, Path] = field(default_factory=dict)
    seed: int = 0
    style: str = "color"
    reading_order: str = "ltr"
    page_size_px: tuple[int, int] = (2480, 3508)
    output_dir: Path = Path("out")
    thresholds: dict[str, float] = field(default_factory=dict)
    thought_cues: list[int] = field(default_factory=list)
    allocation: dict = field(default_factory=dict)
    ga: dict = field(default_factory=dict)

    def threshold(self, name: str, default: float) -> float:
        return self.thresholds.get(name, default)

    def allocation_params(self) -> AllocationParams:
        return AllocationParams(
            alpha=tuple(self.allocation.get("alpha", DEFAULT_ALPHA)),
            n_max=int(self.allocation.get("n_max", DEFAULT_N_MAX)),
            n_min=int(self.allocation.get("n_min", DEFAULT_N_MIN)),
            pages=self.pages,
            penalty_mode=self.allocation.get("penalty_mode", "hinge"),
            importance_mode=self.allocation.get("importance_mode", "score"),
        )

    def ga_config(self) -> GaConfig:
        return GaConfig(seed=self.seed, **{k: self.ga[k] for k in self.ga})


def load_manifest(path: str | Path, overrides: dict | None = None) -> Manifest:
    """Parse, validate and resolve a manifest file.

    `overrides` lets the CLI replace fields (--seed, --pages, --style,
    --out) after parsing but before validation.
    """
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ManifestError(f"manifest is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ManifestError("manifest root must be a JSON object")
    if overrides:
        data.update({k: v for k, v in overrides.items() if v is not None})

    unknown = set(data) - KNOWN_FIELDS
    if unknown:
        raise ManifestError(f"unknown manifest fields: {sorted(unknown)}")
    for req in ("frames_dir", "subtitles_path", "pages"):
        if req not in data:
            raise ManifestError(f"manifest is missing required field {req!r}")

    base = path.parent

    def respath(v: str) -> Path:
        p = Path(v)
        return p if p.is_absolute() else base / p

    sidecars_raw = data.get("sidecars", {})
    if not isinstance(sidecars_raw, dict):
        raise ManifestError("sidecars must be an object")
    bad = set(sidecars_raw) - KNOWN_SIDECARS
    if bad:
        raise ManifestError(f"unknown sidecar keys: {sorted(bad)}")
    sidecars = {k: respath(v) for k, v in sidecars_raw.items() if v}

    thresholds = data.get("thresholds", {})
    if not isinstance(thresholds, dict):
        raise ManifestError("thresholds must be an object")
    bad = set(thresholds) - KNOWN_THRESHOLDS
    if bad:
        raise ManifestError(f"unknown threshold keys: {sorted(bad)}")

    for group, known in (("allocation", KNOWN_ALLOCATION), ("ga", KNOWN_GA)):
        g = data.get(group, {})
        if not isinstance(g, dict):
            raise ManifestError(f"{group} must be an object")
        bad = set(g) - known
        if bad:
            raise ManifestError(f"unknown {group} keys: {sorted(bad)}")

    pages = data["pages"]
    if not isinstance(pages, int) or pages < 1:
        raise ManifestError("pages must be a positive integer")
    style = data.get("style", "color")
    if style not in ("bw", "color"):
        raise ManifestError("style must be bw or color")
    reading = data.get("reading_order", "ltr")
    if reading not in ("ltr", "rtl"):
        raise ManifestError("reading_order must be ltr or rtl")
    size = data.get("page_size_px", [2480, 3508])
    if not (isinstance(size, (list, tuple)) and len(size) == 2 and all(isinstance(v, int) and v > 200 for v in size)):
        raise ManifestError("page_size_px must be [width, height] above 200 px")

    manifest = Manifest(
        frames_dir=respath(data["frames_dir"]),
        subtitles_path=respath(data["subtitles_path"]),
        pages=pages,
        frame_pattern=data.get("frame_pattern", "frame_%06d.png"),
        sample_period_ms=int(data.get("sample_period_ms", 500)),
        sidecars=sidecars,
        seed=int(data.get("seed", 0)),
        style=style,
        reading_order=reading,
        page_size_px=(size[0], size[1]),
        output_dir=respath(data.get("output_dir", "out")),
        thresholds={k: float(v) for k, v in thresholds.items()},
        thought_cues=[int(v) for v in data.get("thought_cues", [])],
        allocation=data.get("allocation", {}),
        ga=data.get("ga", {}),
    )

    if not manifest.frames_dir.is_dir():
        raise ManifestError(f"frames_dir does not exist: {manifest.frames_dir}")
    if not manifest.subtitles_path.is_file():
        raise ManifestError(f"subtitles_path does not exist: {manifest.subtitles_path}")
    for name, p in manifest.sidecars.items():
        if not p.is_file():
            raise ManifestError(f"sidecar {name} does not exist: {p}")
    if manifest.sample_period_ms <= 0:
        raise ManifestError("sample_period_ms must be positive")
    return manifest
