"""Canonical data model and text format for Tetris problem instances.

The on-disk format is a line-oriented document, diff-friendly and
hand-editable.  Board rows are drawn with '.'/'#' top row first (so the
bottom row is listed last), while indexing everywhere in code is bottom-up.
Sequences are stored run-length (``J*20,O``) to keep generated instances
small.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum

from .board import Board
from .engine import GravityMode, PieceState
from .pieces import MIRROR_ORIENT, MIRROR_PIECE, Orientation, PieceType


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, col {column}: {message}")
        self.line = line
        self.column = column


class ValidationError(Exception):
    pass


class AsymmetryWarning(Exception):
    """Mirroring requested for a sequence with I pieces; the I kick table is
    not mirror-symmetric, so the caller must opt in explicitly."""


class Objective(str, Enum):
    CLEAR = "clear"
    SURVIVE = "survive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Blowup:
    """Exact solution-count multiplier, possibly with unresolved f4 factors.

    The value is ``const * prod f4(piece, width, m)^exp``; it resolves to a
    big integer once every f4 value is known.
    """

    const: int = 1
    f4_terms: tuple[tuple[PieceType, int, int, int], ...] = ()

    def __post_init__(self):
        if self.const < 1:
            raise ValidationError("blowup must be >= 1")

    def is_resolved(self) -> bool:
        return not self.f4_terms

    def resolve(self, f4_table: dict[tuple[PieceType, int, int], int]) -> int:
        value = self.const
        for piece, width, m, exp in self.f4_terms:
            key = (piece, width, m)
            if key not in f4_table:
                raise MissingF4(key)
            value *= f4_table[key] ** exp
        return value

    def format(self) -> str:
        parts = [str(self.const)]
        parts.extend(
            f"f4({piece},{width},{m})^{exp}" for piece, width, m, exp in self.f4_terms
        )
        return " * ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "Blowup":
        const = 1
        terms = []
        for part in (p.strip() for p in text.split("*")):
            m = re.fullmatch(r"f4\((\w),(\d+),(\d+)\)(?:\^(\d+))?", part)
            if m:
                terms.append(
                    (PieceType(m.group(1)), int(m.group(2)), int(m.group(3)),
                     int(m.group(4) or 1))
                )
            elif re.fullmatch(r"\d+", part):
                const *= int(part)
            else:
                raise ValidationError(f"bad blowup term {part!r}")
        return cls(const, tuple(terms))

    def mirrored(self) -> "Blowup":
        return Blowup(
            self.const,
            tuple((MIRROR_PIECE[p], w, m, e) for p, w, m, e in self.f4_terms),
        )


class MissingF4(Exception):
    pass


@dataclass(frozen=True)
class ReductionMeta:
    construction: str
    source: str = ""
    blowup: Blowup = field(default_factory=Blowup)
    relaxed: bool = False

    def mirrored(self, construction: str) -> "ReductionMeta":
        return ReductionMeta(construction, self.source, self.blowup.mirrored(), self.relaxed)


_SEQ_TOKEN = re.compile(r"([IOTSZJL])(?:\*(\d+))?$")


class PieceSequence(tuple):
    """Ordered piece list; constructors accept run-length segments."""

    def __new__(cls, pieces=()):
        return super().__new__(cls, (PieceType(p) for p in pieces))

    @classmethod
    def from_segments(cls, segments) -> "PieceSequence":
        out = []
        for piece, count in segments:
            if count < 0:
                raise ValidationError("negative run length")
            out.extend([PieceType(piece)] * count)
        return cls(out)

    @classmethod
    def parse(cls, text: str) -> "PieceSequence":
        text = text.strip()
        if not text:
            return cls()
        segments = []
        for item in text.split(","):
            m = _SEQ_TOKEN.match(item.strip())
            if not m:
                raise ValidationError(f"bad sequence item {item!r}")
            segments.append((PieceType(m.group(1)), int(m.group(2) or 1)))
        return cls.from_segments(segments)

    def tokens(self) -> str:
        out = []
        i = 0
        while i < len(self):
            j = i
            while j < len(self) and self[j] == self[i]:
                j += 1
            run = j - i
            out.append(f"{self[i]}*{run}" if run > 1 else str(self[i]))
            i = j
        return ",".join(out)

    def mirrored(self) -> "PieceSequence":
        return PieceSequence(MIRROR_PIECE[p] for p in self)


@dataclass(frozen=True)
class Instance:
    board: Board
    sequence: PieceSequence
    objective: Objective
    mode: GravityMode
    meta: ReductionMeta | None = None

    def mirrored_construction_id(self) -> str | None:
        if self.meta is None:
            return None
        return mirror_construction_id(self.meta.construction)


def mirror_construction_id(cid: str) -> str:
    """Mirror a construction id piece-letter-wise: IL -> IJ, survival-IO
    stays, asp-ITL -> asp-ITJ."""

    def flip(letters: str) -> str:
        return "".join(str(MIRROR_PIECE[PieceType(c)]) for c in letters)

    parts = cid.split("-")
    parts[-1] = flip(parts[-1]) if all(c in "IOTSZJL" for c in parts[-1]) else parts[-1]
    return "-".join(parts)


def mirror_instance(inst: Instance, allow_i_asymmetry: bool = False) -> Instance:
    """Reflect the whole instance through a vertical axis.

    Swaps J<->L and S<->Z in the sequence and mirrors the board.  The I kick
    table is not vertically symmetric, so instances with I pieces require the
    caller to acknowledge the asymmetry.
    """
    if PieceType.I in inst.sequence and not allow_i_asymmetry:
        raise AsymmetryWarning("sequence contains I pieces; pass allow_i_asymmetry=True")
    meta = None
    if inst.meta is not None:
        meta = inst.meta.mirrored(mirror_construction_id(inst.meta.construction))
    return Instance(
        board=inst.board.mirrored(),
        sequence=inst.sequence.mirrored(),
        objective=inst.objective,
        mode=inst.mode,
        meta=meta,
    )


def serialize(inst: Instance) -> str:
    lines = ["# srstris instance v1"]
    lines.append(f"width: {inst.board.width}")
    lines.append(f"height: {inst.board.height}")
    lines.append(f"objective: {inst.objective}")
    lines.append(f"mode: {inst.mode}")
    lines.append(f"sequence: {inst.sequence.tokens()}")
    if inst.meta is not None:
        lines.append(f"meta.construction: {inst.meta.construction}")
        if inst.meta.source:
            lines.append(f"meta.source: {inst.meta.source}")
        lines.append(f"meta.blowup: {inst.meta.blowup.format()}")
        if inst.meta.relaxed:
            lines.append("meta.relaxed: true")
    lines.append("rows:")
    lines.append(inst.board.render())
    return "\n".join(lines) + "\n"


def parse(text: str) -> Instance:
    fields: dict[str, str] = {}
    art: list[str] = []
    in_rows = False
    rows_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if in_rows:
            if line:
                art.append(line)
            continue
        if not line or line.startswith("#"):
            continue
        if line == "rows:":
            in_rows = True
            rows_line = lineno
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno)
        key, _, value = line.partition(":")
        fields[key.strip()] = value.strip()
    for required in ("width", "height", "objective", "mode"):
        if required not in fields:
            raise ParseError(f"missing field {required!r}", 1)
    try:
        width = int(fields["width"])
        height = int(fields["height"])
    except ValueError as exc:
        raise ParseError(str(exc), 1) from exc
    if not in_rows:
        raise ParseError("missing rows section", 1)
    if len(art) != height:
        raise ParseError(
            f"expected {height} row lines, found {len(art)}", rows_line
        )
    for i, ln in enumerate(art):
        if len(ln) != width:
            raise ParseError("row width mismatch", rows_line + 1 + i, len(ln) + 1)
        bad = next((j for j, ch in enumerate(ln) if ch not in ".#"), None)
        if bad is not None:
            raise ParseError(f"bad cell char {ln[bad]!r}", rows_line + 1 + i, bad + 1)
    board = Board.from_strings(art, width=width)
    try:
        sequence = PieceSequence.parse(fields.get("sequence", ""))
        objective = Objective(fields["objective"])
        mode = GravityMode(fields["mode"])
    except (ValidationError, ValueError) as exc:
        raise ParseError(str(exc), 1) from exc
    meta = None
    if "meta.construction" in fields:
        meta = ReductionMeta(
            construction=fields["meta.construction"],
            source=fields.get("meta.source", ""),
            blowup=Blowup.parse(fields.get("meta.blowup", "1")),
            relaxed=fields.get("meta.relaxed", "false") == "true",
        )
    return Instance(board, sequence, objective, mode, meta)


# -- witness scripts ---------------------------------------------------------

_ORIENT_BY_LABEL = {o.label(): o for o in Orientation}


def serialize_witness(script: list[PieceState]) -> str:
    lines = ["# srstris witness v1", "# index piece orient center_x center_y"]
    for i, st in enumerate(script):
        lines.append(f"{i} {st.piece} {st.orient.label()} {st.x} {st.y}")
    return "\n".join(lines) + "\n"


def parse_witness(text: str) -> list[PieceState]:
    out: list[PieceState] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 5:
            raise ParseError("expected 'index piece orient x y'", lineno)
        idx, piece, orient, x, y = parts
        if int(idx) != len(out):
            raise ParseError(f"out-of-order index {idx}", lineno)
        if orient not in _ORIENT_BY_LABEL:
            raise ParseError(f"bad orientation {orient!r}", lineno)
        try:
            out.append(
                PieceState(PieceType(piece), _ORIENT_BY_LABEL[orient], int(x), int(y))
            )
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
    return out


def with_meta(inst: Instance, **changes) -> Instance:
    assert inst.meta is not None
    return replace(inst, meta=replace(inst.meta, **changes))
