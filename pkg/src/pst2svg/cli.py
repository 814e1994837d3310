"""pst2svg command line: parse, resolve, fit curves and write SVG/JSON."""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .model import format_command
from .parser import ParseError, parse_document
from .resolver import ResolveError, convert_dimension, resolve_picture
from .svg import SvgConfig, emit_resolved_json, emit_svg, expand_curves

EXIT_OK, EXIT_INPUT, EXIT_RESOLVE, EXIT_OUTPUT = 0, 1, 2, 3
FORMATS = ("svg", "json")


@dataclass(frozen=True)
class CliConfig:
    input_path: Path
    out_dir: Optional[Path] = None
    formats: FrozenSet[str] = frozenset({"svg"})
    tension: float = 0.0
    precision: int = 4
    margin_units: float = 0.0
    strict: bool = True
    dump_ast: bool = False

    def __post_init__(self):
        if not self.formats or not set(self.formats) <= set(FORMATS):
            raise ValueError(f"formats must be a nonempty subset of {FORMATS}")
        if not 0.0 <= self.tension < 1.0:
            raise ValueError("tension must be in [0, 1)")
        if not 1 <= self.precision <= 12:
            raise ValueError("precision must be in [1, 12]")
        if not self.margin_units >= 0:
            raise ValueError("margin must be >= 0")


def _write_atomically(files: Sequence[Tuple[Path, str]]) -> None:
    """Write every file or none: stage to temp files, then rename."""
    staged: List[Tuple[str, Path]] = []
    try:
        for path, text in files:
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix="." + path.name, suffix=".tmp")
            staged.append((tmp, path))
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except BaseException:
        for tmp, _ in staged:
            try:
                os.unlink(tmp)
            except OSError:
                pass
        raise
    for tmp, path in staged:
        os.replace(tmp, path)


def run(config: CliConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    path = Path(config.input_path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read {path}: {exc}", file=stderr)
        return EXIT_INPUT

    try:
        doc = parse_document(text, strict=config.strict)
    except ParseError as exc:
        print(f"error: {exc.line}:{exc.column}: {exc.message}", file=stderr)
        if exc.snippet:
            print(f"  {exc.snippet}", file=stderr)
        return EXIT_INPUT

    if config.dump_ast:
        print(f"document unit={doc.unit}", file=stdout)
        for k, pic in enumerate(doc.pictures, 1):
            print(f"picture {k} (line {pic.line}) bbox={pic.bbox_lo}{pic.bbox_hi} unit={pic.unit}",
                  file=stdout)
            for cmd in pic.commands:
                print(f"  {cmd.line:4d}  {format_command(cmd)}", file=stdout)

    resolved, chains = [], []
    try:
        for pic in doc.pictures:
            rp = resolve_picture(pic, convert_dimension(pic.unit))
            resolved.append(rp)
            chains.append(expand_curves(rp, config.tension))
    except ResolveError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_RESOLVE
    except ValueError as exc:
        # degenerate curve input, e.g. coinciding consecutive points
        print(f"error: {exc}", file=stderr)
        return EXIT_RESOLVE

    out_dir = Path(config.out_dir) if config.out_dir is not None else path.parent
    stem = path.stem
    svg_config = SvgConfig(precision=config.precision, margin_units=config.margin_units)
    outputs: List[Tuple[Path, str]] = []
    if "svg" in config.formats:
        for k, (rp, ch) in enumerate(zip(resolved, chains), 1):
            outputs.append((out_dir / f"{stem}-{k}.svg", emit_svg(rp, ch, svg_config)))
    if "json" in config.formats:
        outputs.append((out_dir / f"{stem}.resolved.json",
                        emit_resolved_json(resolved, chains, convert_dimension(doc.unit))))
    try:
        if outputs:
            out_dir.mkdir(parents=True, exist_ok=True)
            _write_atomically(outputs)
    except OSError as exc:
        print(f"error: cannot write to {out_dir}: {exc}", file=stderr)
        return EXIT_OUTPUT

    for warning in doc.warnings:
        print(f"warning: {warning}", file=stdout)
    print(f"{len(resolved)} pictures", file=stdout)
    for k, rp in enumerate(resolved, 1):
        print(f"picture {k}: {len(rp.elements)} elements, {len(rp.nodes)} nodes, "
              f"{len(rp.warnings)} warnings", file=stdout)
        for warning in rp.warnings:
            print(f"  warning: {warning}", file=stdout)
    for out_path, _ in outputs:
        print(f"wrote {out_path}", file=stdout)
    return EXIT_OK


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors count as input errors, not resolve errors (2)
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _formats(value: str) -> FrozenSet[str]:
    items = frozenset(v.strip() for v in value.split(",") if v.strip())
    if not items or not items <= set(FORMATS):
        raise argparse.ArgumentTypeError(f"expected a comma list drawn from {','.join(FORMATS)}")
    return items


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="pst2svg",
                             description="Render PSTricks pspicture environments as SVG.")
    parser.add_argument("input", type=Path, help="input .tex file")
    parser.add_argument("--out-dir", type=Path, default=None,
                        help="output directory (default: next to the input)")
    parser.add_argument("--formats", type=_formats, default=frozenset({"svg"}),
                        help="comma-separated output formats: svg,json (default: svg)")
    parser.add_argument("--tension", type=float, default=0.0,
                        help="curve tension in [0, 1); 0 is plain Catmull-Rom")
    parser.add_argument("--precision", type=int, default=4, help="decimal places in SVG output")
    parser.add_argument("--margin", type=float, default=0.0,
                        help="extra viewport margin around the bounding box, in units")
    parser.add_argument("--lenient", action="store_true",
                        help="skip unknown commands with a warning instead of failing")
    parser.add_argument("--dump-ast", action="store_true", help="print the parsed commands")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = CliConfig(
            input_path=args.input,
            out_dir=args.out_dir,
            formats=args.formats,
            tension=args.tension,
            precision=args.precision,
            margin_units=args.margin,
            strict=not args.lenient,
            dump_ast=args.dump_ast,
        )
    except ValueError as exc:
        parser.error(str(exc))
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
