"""Reader for the line-oriented matrix-set file format.

::

    # comments and blank lines are ignored
    dim 2
    matrices 2
    1 1
    0 1
    0 0
    -1/3 1
    cone orthant                 # or: cone generators <g>, then g rows
    inner_cone generators 2      # optional, same syntax as cone
    1 2
    2 1

Numbers may be integers, decimals or rationals such as ``-1/3``; they are
parsed exactly and the matrix set keeps the exact values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .cones import PolyhedralCone
from .errors import ParseError, ValidationError
from .linalg import MatrixSet


@dataclass
class ParsedInput:
    sigma: MatrixSet
    cone: PolyhedralCone | None = None
    inner_cone: PolyhedralCone | None = None


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _number(tok, no):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {tok!r}", no) from None


def _count(toks, keyword, no):
    if len(toks) != 2 or toks[0] != keyword:
        raise ParseError(f"expected '{keyword} <count>'", no)
    try:
        v = int(toks[1])
    except ValueError:
        raise ParseError(f"expected an integer after '{keyword}'", no) from None
    if v < 1:
        raise ValidationError(f"line {no}: '{keyword}' must be positive")
    return v


def _rows(it, count, n, what):
    rows = []
    for _ in range(count):
        try:
            no, toks = next(it)
        except StopIteration:
            raise ParseError(f"file ended inside {what}") from None
        if len(toks) != n:
            raise ValidationError(f"line {no}: {what} row has {len(toks)} entries, expected {n}")
        rows.append([_number(t, no) for t in toks])
    return rows


def _cone(it, toks, no, n):
    if toks[1:] == ["orthant"]:
        return PolyhedralCone.orthant(n)
    if len(toks) == 3 and toks[1] == "generators":
        g = _count(toks[1:], "generators", no)
        rows = _rows(it, g, n, f"{toks[0]} generator")
        try:
            return PolyhedralCone([[float(v) for v in r] for r in rows])
        except ValidationError as exc:
            raise ValidationError(f"line {no}: {exc}") from None
    raise ParseError(f"expected '{toks[0]} orthant' or '{toks[0]} generators <g>'", no)


def parse_text(text: str) -> ParsedInput:
    it = _lines(text)
    try:
        no, toks = next(it)
    except StopIteration:
        raise ParseError("empty input") from None
    n = _count(toks, "dim", no)
    try:
        no, toks = next(it)
    except StopIteration:
        raise ParseError("missing 'matrices <m>' line") from None
    m = _count(toks, "matrices", no)
    mats = [_rows(it, n, n, f"matrix {i}") for i in range(m)]
    out = ParsedInput(MatrixSet(mats))
    for no, toks in it:
        if toks[0] == "cone" and out.cone is None:
            out.cone = _cone(it, toks, no, n)
        elif toks[0] == "inner_cone" and out.inner_cone is None:
            out.inner_cone = _cone(it, toks, no, n)
        else:
            raise ParseError(f"unexpected line {' '.join(toks)!r}", no)
    return out


def parse_input(path) -> ParsedInput:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    return parse_text(text)
