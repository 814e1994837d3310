"""Recursive-descent parser for the PSTricks subset.

The accepted language is small: a ``document`` environment holding
``\\psset`` and ``pspicture`` environments separated by ``\\newpage``, with
``\\psline``, ``\\psccurve``, ``\\pnode`` and ``\\psset`` inside pictures.
Anything else is a :class:`ParseError` in strict mode and a warning plus a
skip in lenient mode.
"""

from __future__ import annotations

import bisect
import math
import re
from typing import List, Optional, Tuple

from .model import (
    IDENT_RE,
    Cartesian,
    Command,
    Dimension,
    DocumentTree,
    NodeRef,
    Offset,
    OptionList,
    Picture,
    PNode,
    PointExpr,
    Polar,
    PsCCurve,
    PsLine,
    PsSet,
)

NUMBER_RE = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)")
IDENT_AT_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")
LETTERS_RE = re.compile(r"[A-Za-z]+")
DIMENSION_RE = re.compile(r"\s*([+-]?(?:\d+\.?\d*|\.\d+))\s*([A-Za-z]*)\s*\Z")
WS = " \t\r\n\f"

DRAWING_KEYS = {"linewidth"}
PICTURE_PSSET_KEYS = {"unit", "linewidth"}
DOCUMENT_PSSET_KEYS = {"unit"}
DIMENSION_KEYS = {"unit", "linewidth"}


class ParseError(Exception):
    """Syntax error with a 1-based position into the original input."""

    def __init__(self, line: int, column: int, message: str, snippet: str = ""):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message
        self.snippet = snippet


class DimensionError(ValueError):
    pass


def parse_dimension(raw: str) -> Dimension:
    """Parse a TeX dimension such as ``0.5cm`` or ``2pt``.

    The unit tag is mandatory; ``cm``, ``mm``, ``pt`` and ``in`` are accepted.
    """
    m = DIMENSION_RE.match(raw)
    if not m:
        raise DimensionError(f"malformed dimension {raw!r}")
    value, tag = m.groups()
    if not tag:
        raise DimensionError(f"missing unit tag in {raw!r}")
    if tag not in ("cm", "mm", "pt", "in"):
        raise DimensionError(f"unknown unit tag {tag!r} in {raw!r}")
    v = float(value)
    if not math.isfinite(v):
        raise DimensionError(f"non-finite dimension {raw!r}")
    return Dimension(v, tag)


def _strip_comments(text: str) -> str:
    # blank out comments in place so offsets keep pointing into the original
    out = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\\" and i + 1 < n:
            out.append(text[i:i + 2])
            i += 2
        elif c == "%":
            j = text.find("\n", i)
            j = n if j < 0 else j
            out.append(" " * (j - i))
            i = j
        else:
            out.append(c)
            i += 1
    return "".join(out)


class _Parser:
    def __init__(self, text: str, strict: bool = True):
        self.src = text
        self.text = _strip_comments(text)
        self.pos = 0
        self.strict = strict
        self.warnings: List[str] = []
        self._line_starts = [0] + [i + 1 for i, c in enumerate(text) if c == "\n"]

    # --- positions and diagnostics ---

    def location(self, pos: int) -> Tuple[int, int]:
        pos = max(0, min(pos, len(self.src)))
        idx = bisect.bisect_right(self._line_starts, pos) - 1
        return idx + 1, pos - self._line_starts[idx] + 1

    def error(self, message: str, pos: Optional[int] = None, length: int = 0) -> ParseError:
        pos = self.pos if pos is None else pos
        if self.src and pos >= len(self.src):
            # EOF: point at the last character instead of past it
            pos = len(self.src) - 1
            while pos > 0 and self.src[pos] in WS:
                pos -= 1
        line, col = self.location(pos)
        line_end = self.src.find("\n", pos)
        line_end = len(self.src) if line_end < 0 else line_end
        if length <= 0:
            length = 30
        snippet = self.src[pos:min(pos + length, line_end)]
        return ParseError(line, col, message, snippet)

    def warn(self, message: str, pos: int) -> None:
        line, col = self.location(pos)
        self.warnings.append(f"{line}:{col}: {message}")

    def unknown(self, message: str, pos: int, length: int) -> None:
        if self.strict:
            raise self.error(message, pos, length)
        self.warn(message + " (skipped)", pos)

    # --- low-level scanning ---

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self) -> None:
        n = len(self.text)
        while self.pos < n and self.text[self.pos] in WS:
            self.pos += 1

    def expect(self, ch: str, what: str = "") -> int:
        self.skip_ws()
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {what or repr(ch)}, found {found!r}", length=1)
        start = self.pos
        self.pos += 1
        return start

    def read_control_word(self) -> str:
        assert self.peek() == "\\"
        self.pos += 1
        m = LETTERS_RE.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            return m.group()
        if self.eof():
            raise self.error("dangling backslash", self.pos - 1, 1)
        self.pos += 1
        return self.text[self.pos - 1]

    def read_group(self, open_ch: str, close_ch: str) -> Tuple[str, int]:
        """Read a balanced group; returns its inner text and its start offset."""
        start = self.expect(open_ch)
        depth = 0
        i = self.pos
        while i < len(self.text):
            c = self.text[i]
            if c == "\\":
                i += 2
                continue
            if c == "{":
                depth += 1
            elif c == "}":
                if depth == 0 and close_ch == "}":
                    break
                depth -= 1
            elif c == close_ch and depth == 0:
                break
            i += 1
        else:
            raise self.error(f"unclosed {open_ch!r}", start, 1)
        self.pos = i + 1
        return self.text[start + 1:i], start

    def read_env_name(self) -> Tuple[str, int]:
        body, start = self.read_group("{", "}")
        return body.strip(), start

    def read_ident(self, what: str = "node name") -> str:
        self.skip_ws()
        m = IDENT_AT_RE.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}", length=1)
        self.pos = m.end()
        return m.group()

    def read_number(self) -> float:
        self.skip_ws()
        m = NUMBER_RE.match(self.text, self.pos)
        if not m:
            raise self.error("expected a number", length=1)
        self.pos = m.end()
        return float(m.group())

    def number_value(self, raw: str, pos: int, key: str) -> float:
        m = NUMBER_RE.fullmatch(raw.strip())
        if not m:
            raise self.error(f"option {key}: expected a number, got {raw.strip()!r}", pos, len(raw))
        return float(m.group())

    # --- options ---

    def parse_options(self, open_ch: str = "[", close_ch: str = "]"):
        """Return an OptionList and each entry's value offset."""
        body, start = self.read_group(open_ch, close_ch)
        entries: List[Tuple[str, str]] = []
        positions = {}
        offset = start + 1
        for part in _split_top_level(body):
            part_pos = offset
            offset += len(part) + 1
            if not part.strip():
                if len(body.strip()) == 0:
                    continue
                raise self.error("empty option entry", part_pos, 1)
            if "=" not in part:
                raise self.error(f"malformed option {part.strip()!r}: expected key=value", part_pos, len(part))
            key, value = part.split("=", 1)
            key_pos = part_pos + len(key) - len(key.lstrip())
            key = key.strip()
            if not IDENT_RE.match(key):
                raise self.error(f"malformed option key {key!r}", key_pos, max(1, len(key)))
            if key in positions:
                raise self.error(f"duplicate option key {key!r}", key_pos, len(key))
            value_pos = part_pos + len(part) - len(value)
            entries.append((key, value.strip()))
            positions[key] = value_pos
        return OptionList(tuple(entries)), positions

    def check_options(self, options: OptionList, positions, known, where: str) -> None:
        for key, value in options.entries:
            if key not in known:
                self.warn(f"unknown option {key!r} on {where} ignored", positions[key])
            elif key in DIMENSION_KEYS:
                try:
                    parse_dimension(value)
                except DimensionError as exc:
                    raise self.error(f"option {key}: {exc}", positions[key], len(value)) from None

    # --- points ---

    def parse_point(self) -> PointExpr:
        start = self.expect("(")
        self.skip_ws()
        c = self.peek()
        if c.isalpha():
            name = self.read_ident()
            self.close_point(start)
            return NodeRef(name)
        if c == "[":
            options, positions = self.parse_options()
            keys = set(options.keys())
            for required in ("angle", "nodesep"):
                if required not in keys:
                    raise self.error(f"offset point is missing the {required!r} key", start, self.pos - start)
            extra = sorted(keys - {"angle", "nodesep"})
            if extra:
                raise self.error(f"unexpected key {extra[0]!r} in offset point", positions[extra[0]], 1)
            angle = self.number_value(options.get("angle"), positions["angle"], "angle")
            nodesep = self.number_value(options.get("nodesep"), positions["nodesep"], "nodesep")
            base = self.read_ident("base node name")
            self.close_point(start)
            return Offset(angle, nodesep, base)
        if not c:
            raise self.error("unclosed '('", start, 1)
        first = self.read_number()
        self.skip_ws()
        sep = self.peek()
        if sep == ")":
            raise self.error("bare number is not a node name", start, self.pos - start + 1)
        if sep not in (",", ";"):
            if not sep:
                raise self.error("unclosed '('", start, 1)
            raise self.error(f"expected ',' or ';' in point, found {sep!r}", length=1)
        self.pos += 1
        second = self.read_number()
        self.close_point(start)
        return Cartesian(first, second) if sep == "," else Polar(first, second)

    def close_point(self, start: int) -> None:
        self.skip_ws()
        c = self.peek()
        if c == ")":
            self.pos += 1
        elif not c:
            raise self.error("unclosed '('", start, 1)
        else:
            raise self.error(f"expected ')', found {c!r}", length=1)

    def point_list(self) -> List[PointExpr]:
        points = []
        while True:
            self.skip_ws()
            if self.peek() != "(":
                return points
            points.append(self.parse_point())

    # --- commands ---

    def picture_command(self, name: str, start: int, line: int) -> Optional[Command]:
        """Parse the arguments of a picture-level command; None if not one."""
        if name in ("psline", "psccurve"):
            self.skip_ws()
            options, positions = (self.parse_options() if self.peek() == "["
                                  else (OptionList(), {}))
            self.check_options(options, positions, DRAWING_KEYS, "\\" + name)
            points = self.point_list()
            minimum = 2 if name == "psline" else 3
            if len(points) < minimum:
                raise self.error(f"\\{name} needs at least {minimum} points, got {len(points)}",
                                 start, len(name) + 1)
            cls = PsLine if name == "psline" else PsCCurve
            return cls(options, tuple(points), line=line)
        if name == "pnode":
            point = self.parse_point()
            body, gstart = self.read_group("{", "}")
            node = body.strip()
            if not IDENT_RE.match(node):
                raise self.error(f"invalid node name {node!r}", gstart, len(body) + 2)
            return PNode(point, node, line=line)
        if name == "psset":
            options, positions = self.parse_options("{", "}")
            self.check_options(options, positions, PICTURE_PSSET_KEYS, "\\psset")
            return PsSet(options, line=line)
        return None

    def skip_unknown_arguments(self) -> None:
        while True:
            save = self.pos
            self.skip_ws()
            c = self.peek()
            if c == "*":
                self.pos += 1
            elif c in ("[", "(", "{"):
                self.read_group(c, {"[": "]", "(": ")", "{": "}"}[c])
            else:
                self.pos = save
                return

    def skip_text(self, where: str) -> None:
        start = self.pos
        while not self.eof() and self.peek() != "\\":
            self.pos += 1
        self.unknown(f"unexpected text {where}", start, self.pos - start)

    def skip_environment(self, env: str, start: int) -> None:
        pat = re.compile(r"\\end\s*\{\s*" + re.escape(env) + r"\s*\}")
        m = pat.search(self.text, self.pos)
        if not m:
            raise self.error(f"unbalanced environments: \\begin{{{env}}} is never closed", start)
        self.pos = m.end()

    # --- structure ---

    def document(self) -> DocumentTree:
        m = re.search(r"\\begin\s*\{\s*document\s*\}", self.text)
        if not m:
            raise self.error("missing \\begin{document}", 0)
        for cw in re.finditer(r"\\([A-Za-z]+)", self.text[:m.start()]):
            self.warn(f"skipped preamble command \\{cw.group(1)}", cw.start())
        doc_start = m.start()
        self.pos = m.end()
        unit = Dimension(1.0, "cm")
        pictures: List[Picture] = []
        while True:
            self.skip_ws()
            if self.eof():
                raise self.error("unbalanced environments: missing \\end{document}", doc_start, 16)
            if self.peek() != "\\":
                self.skip_text("in document body")
                continue
            start = self.pos
            name = self.read_control_word()
            if name == "begin":
                env, _ = self.read_env_name()
                if env == "pspicture":
                    pictures.append(self.picture(start, unit))
                elif env == "document":
                    raise self.error("nested \\begin{document}", start, self.pos - start)
                else:
                    self.unknown(f"unknown environment {env!r}", start, self.pos - start)
                    self.skip_environment(env, start)
            elif name == "end":
                env, _ = self.read_env_name()
                if env == "document":
                    # TeX ignores everything after \end{document}
                    break
                raise self.error(f"unbalanced environments: \\end{{{env}}} without matching \\begin",
                                 start, self.pos - start)
            elif name == "newpage":
                continue
            elif name == "psset":
                options, positions = self.parse_options("{", "}")
                self.check_options(options, positions, DOCUMENT_PSSET_KEYS, "document-level \\psset")
                if options.get("unit") is not None:
                    unit = parse_dimension(options.get("unit"))
            elif name in ("psline", "psccurve", "pnode"):
                raise self.error(f"\\{name} outside a pspicture", start, len(name) + 1)
            else:
                self.unknown(f"unknown command \\{name}", start, len(name) + 1)
                self.skip_unknown_arguments()
        return DocumentTree(unit=unit, pictures=tuple(pictures), warnings=tuple(self.warnings))

    def picture(self, begin: int, unit: Dimension) -> Picture:
        line, _ = self.location(begin)
        corners = []
        for _ in range(2):
            self.skip_ws()
            if self.peek() != "(":
                break
            p_start = self.pos
            p = self.parse_point()
            if not isinstance(p, Cartesian):
                raise self.error("pspicture corners must be (x,y) pairs", p_start, self.pos - p_start)
            corners.append((p.x, p.y))
        if not corners:
            raise self.error("pspicture needs a bounding box", begin, self.pos - begin)
        lo, hi = corners if len(corners) == 2 else [(0.0, 0.0), corners[0]]
        if not (lo[0] < hi[0] and lo[1] < hi[1]):
            raise self.error(f"empty pspicture bounding box {lo}{hi}", begin, self.pos - begin)
        commands: List[Command] = []
        while True:
            self.skip_ws()
            if self.eof():
                raise self.error("unbalanced environments: pspicture is never closed", begin, 17)
            if self.peek() != "\\":
                self.skip_text("in pspicture")
                continue
            start = self.pos
            cmd_line, _ = self.location(start)
            name = self.read_control_word()
            cmd = self.picture_command(name, start, cmd_line)
            if cmd is not None:
                commands.append(cmd)
            elif name == "newpage":
                raise self.error("\\newpage inside pspicture", start, self.pos - start)
            elif name == "begin":
                env, _ = self.read_env_name()
                raise self.error(f"nested environment \\begin{{{env}}} inside pspicture",
                                 start, self.pos - start)
            elif name == "end":
                env, _ = self.read_env_name()
                if env == "pspicture":
                    break
                raise self.error(f"unbalanced environments: \\end{{{env}}} while pspicture is open",
                                 start, self.pos - start)
            else:
                self.unknown(f"unknown command \\{name}", start, len(name) + 1)
                self.skip_unknown_arguments()
        return Picture(lo, hi, tuple(commands), unit=unit, line=line)


def _split_top_level(body: str) -> List[str]:
    parts, depth, current = [], 0, []
    for c in body:
        if c == "{":
            depth += 1
        elif c == "}":
            depth -= 1
        if c == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(c)
    parts.append("".join(current))
    return parts


def parse_document(text: str, strict: bool = True) -> DocumentTree:
    """Parse a whole ``.tex`` source into a :class:`DocumentTree`."""
    return _Parser(text, strict).document()


def parse_point(text: str) -> PointExpr:
    """Parse a single parenthesised point expression such as ``(5;90)``."""
    p = _Parser(text)
    point = p.parse_point()
    p.skip_ws()
    if not p.eof():
        raise p.error("trailing text after point", length=1)
    return point


def parse_command(text: str, strict: bool = True) -> Command:
    """Parse one picture-level command, e.g. ``\\pnode(6;330){V}``."""
    p = _Parser(text, strict)
    p.skip_ws()
    if p.peek() != "\\":
        raise p.error("expected a command", length=1)
    start = p.pos
    name = p.read_control_word()
    cmd = p.picture_command(name, start, 1)
    if cmd is None:
        raise p.error(f"unknown command \\{name}", start, len(name) + 1)
    p.skip_ws()
    if not p.eof():
        raise p.error("trailing text after command", length=1)
    return cmd
