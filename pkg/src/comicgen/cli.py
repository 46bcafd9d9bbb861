"""Command line interface.

  comicgen generate --manifest project.json [--out DIR] [--seed N]
                    [--pages M] [--style bw|color]
  comicgen keyframes|stylize|allocate|layout|balloons|render --manifest ...
  comicgen train-shapes --data shapes_training.csv --out model.json

Exit codes: 0 success, 2 validation error (manifest, arguments, sidecar
files), 1 anything else.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .balloon import train_shape_classifier
from .compose import load_manifest, run_pipeline, run_stages
from .errors import StageError, ValidationError

log = logging.getLogger("comicgen")

# CLI stage names -> internal pipeline stages
STAGE_GROUPS = {
    "keyframes": ["subtitle", "framestream", "keyframes"],
    "stylize": ["stylize"],
    "allocate": ["semantics", "allocate"],
    "layout": ["layout"],
    "balloons": ["balloons"],
    "render": ["render"],
}


def _add_manifest_args(p: argparse.ArgumentParser, with_overrides: bool = False) -> None:
    p.add_argument("--manifest", required=True, help="path to the project manifest JSON")
    if with_overrides:
        p.add_argument("--out", help="override output directory")
        p.add_argument("--seed", type=int, help="override manifest seed")
        p.add_argument("--pages", type=int, help="override page count")
        p.add_argument("--style", choices=("bw", "color"), help="override style")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="comicgen", description="Video frames + SRT -> comic book pages")
    parser.add_argument("--verbose", action="store_true", help="log per-stage timing")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="run the whole pipeline")
    _add_manifest_args(gen, with_overrides=True)

    for name in STAGE_GROUPS:
        sp = sub.add_parser(name, help=f"run only the {name} stage(s)")
        _add_manifest_args(sp)

    train = sub.add_parser("train-shapes", help="train the balloon shape classifier")
    train.add_argument("--data", required=True, help="shapes_training.csv")
    train.add_argument("--out", required=True, help="model JSON output path")
    train.add_argument("--seed", type=int, default=0)
    return parser


def _load_training_rows(path: Path) -> list[tuple[float, float, int, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValidationError(f"{path} is empty")
    out = []
    for row in rows[1:]:
        if len(row) != 4:
            raise ValidationError(f"expected valence,arousal,emotion_rank,shape: {row}")
        out.append((float(row[0]), float(row[1]), int(row[2]), row[3].strip()))
    return out


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "train-shapes":
            rows = _load_training_rows(Path(args.data))
            model, report = train_shape_classifier(rows, seed=args.seed)
            model.save(args.out)
            print(
                f"trained on {len(rows)} rows: accuracy {report.accuracy:.3f}, "
                f"macro recall {report.macro_recall:.3f} -> {args.out}"
            )
            return 0

        overrides = {}
        if args.command == "generate":
            overrides = {
                "output_dir": args.out,
                "seed": args.seed,
                "pages": args.pages,
                "style": args.style,
            }
        manifest = load_manifest(args.manifest, overrides)
        if args.command == "generate":
            summary = run_pipeline(manifest)
            print(
                f"keyframes {summary['keyframes']}  pages {summary['pages']}  "
                f"z {summary['z']:.4f}  balloons {summary['balloons_placed']} placed / "
                f"{summary['balloons_skipped']} skipped"
            )
        else:
            run_stages(manifest, STAGE_GROUPS[args.command])
            print(f"{args.command}: done -> {manifest.output_dir}")
        return 0
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except StageError as e:
        if isinstance(e.cause, ValidationError):
            print(f"error: {e}", file=sys.stderr)
            return 2
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # noqa: BLE001 - CLI boundary
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
