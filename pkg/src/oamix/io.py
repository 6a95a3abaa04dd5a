"""Design file serialization.

A design file is comma-separated text with one header line naming the
columns: component columns ``x1..xm`` (proportions) or ``a1..am``
(amounts), then optional sign columns ``z12, z13, ...`` in lexicographic
pair order, then an optional total-amount column ``A``.  Amount designs
always carry the A column; proportion designs carry it once levels are
attached.

Values are exact rational strings (``1/3``) by default and round-trip
losslessly.  ``decimals=k`` renders a display variant: values are rounded
half-up to k decimal places, with exact integers printed bare (``0``,
``1``, ``500``) the way the reference tables print them.  Decimal files
are display artifacts; reading one parses each token as an exact decimal
fraction and re-derives orderings from the sign columns, but proportions
rounded for display will no longer sum to 1.

Pair labels use single digits, so the format covers up to 9 components.
"""

from __future__ import annotations

import re
from fractions import Fraction
from importlib import resources

from .core import Design, DesignPoint, Kind, OofARun
from .errors import (
    BadPwoValue,
    InconsistentPwo,
    InconsistentPwoRow,
    MalformedHeader,
    RowLengthMismatch,
)
from .oofa import ordering_from_pwo, pwo_pairs

__all__ = ["write_design", "read_design", "format_value", "reference_design"]

_COMP_RE = re.compile(r"^([xa])([1-9])$")
_PAIR_RE = re.compile(r"^z([1-9])([1-9])$")


def format_value(value: Fraction, decimals: int | None) -> str:
    """Render one exact value: rational text, or half-up rounded decimals."""
    if decimals is None:
        return str(value)
    scale = 10 ** decimals
    scaled = value * scale
    # half-up for the nonnegative values a design can hold
    q = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    if q % scale == 0:
        return str(q // scale)
    return f"{q // scale}.{q % scale:0{decimals}d}"


def round_half_up(value: Fraction, decimals: int) -> Fraction:
    """The exact rational a value displays as at k decimals."""
    scale = 10 ** decimals
    scaled = value * scale
    q = (scaled.numerator * 2 + scaled.denominator) // (2 * scaled.denominator)
    return Fraction(q, scale)


def _columns(design: Design) -> tuple[str, ...]:
    symbol = "a" if design.kind is Kind.AMOUNT else "x"
    cols = [f"{symbol}{i}" for i in range(1, design.m + 1)]
    if design.is_expanded:
        cols += [f"z{j}{k}" for j, k in pwo_pairs(design.m)]
    has_amounts = design.kind is Kind.AMOUNT or any(
        run.amount is not None for run in design.runs
    )
    if has_amounts:
        cols.append("A")
    return tuple(cols)


def write_design(design: Design, decimals: int | None = None) -> str:
    """Serialize a design; deterministic column order, newline-terminated."""
    if design.m > 9:
        raise MalformedHeader("the file format covers up to 9 components")
    cols = _columns(design)
    with_signs = design.is_expanded
    with_amount = cols[-1] == "A"
    lines = [",".join(cols)]
    for run in design.runs:
        cells = [format_value(v, decimals) for v in run.point.values]
        if with_signs:
            cells += [str(z) for z in run.pwo]
        if with_amount:
            cells.append(format_value(run.amount, decimals))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _parse_header(line: str) -> tuple[Kind, int, bool, bool]:
    tokens = [t.strip() for t in line.split(",")]
    if not tokens or not tokens[0]:
        raise MalformedHeader("empty header line")
    match = _COMP_RE.match(tokens[0])
    if match is None:
        raise MalformedHeader(f"header must start with x1 or a1, got {tokens[0]!r}")
    symbol = match.group(1)
    m = 0
    pos = 0
    for tok in tokens:
        cm = _COMP_RE.match(tok)
        if cm is None or cm.group(1) != symbol:
            break
        m += 1
        if int(cm.group(2)) != m:
            raise MalformedHeader(f"component columns out of order at {tok!r}")
        pos += 1
    expected_pairs = [f"z{j}{k}" for j, k in pwo_pairs(m)]
    with_signs = pos < len(tokens) and _PAIR_RE.match(tokens[pos]) is not None
    if with_signs:
        got = tokens[pos : pos + len(expected_pairs)]
        if got != expected_pairs:
            raise MalformedHeader(
                f"sign columns must be {expected_pairs} in order, got {got}"
            )
        pos += len(expected_pairs)
    with_amount = pos < len(tokens) and tokens[pos] == "A"
    if with_amount:
        pos += 1
    if pos != len(tokens):
        raise MalformedHeader(f"unrecognized trailing columns: {tokens[pos:]}")
    kind = Kind.AMOUNT if symbol == "a" else Kind.PROPORTION
    if kind is Kind.AMOUNT and not with_amount:
        raise MalformedHeader("amount designs must carry the A column")
    return kind, m, with_signs, with_amount


def read_design(text: str) -> Design:
    """Parse a design file.

    Rational files reproduce the written design exactly.  Sign columns are
    checked row by row: entries must be -1, 0, or +1, must be zero exactly
    when an involved component is zero, and must be induced by some
    addition order (the ordering is re-derived from them).
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MalformedHeader("empty design file")
    kind, m, with_signs, with_amount = _parse_header(lines[0])
    n_pairs = len(pwo_pairs(m)) if with_signs else 0
    width = m + n_pairs + (1 if with_amount else 0)
    runs = []
    for row_no, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != width:
            raise RowLengthMismatch(
                f"line {row_no}: expected {width} values, got {len(cells)}"
            )
        try:
            values = tuple(Fraction(c) for c in cells[:m])
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedHeader(f"line {row_no}: bad value ({exc})") from exc
        point = DesignPoint(values, kind)
        ordering = None
        pwo = None
        if with_signs:
            pwo_vals = []
            for cell in cells[m : m + n_pairs]:
                try:
                    v = Fraction(cell)
                except (ValueError, ZeroDivisionError) as exc:
                    raise BadPwoValue(f"line {row_no}: sign {cell!r} unreadable") from exc
                if v not in (-1, 0, 1):
                    raise BadPwoValue(f"line {row_no}: sign {cell!r} not in -1/0/+1")
                pwo_vals.append(int(v))
            pwo = tuple(pwo_vals)
            support = point.support()
            active = set(support)
            for (j, k), z in zip(pwo_pairs(m), pwo):
                both_active = j in active and k in active
                if both_active and z == 0:
                    raise InconsistentPwoRow(
                        f"line {row_no}: z{j}{k} is 0 but both components are present"
                    )
                if not both_active and z != 0:
                    raise InconsistentPwoRow(
                        f"line {row_no}: z{j}{k} is {z} but a component is absent"
                    )
            try:
                ordering = ordering_from_pwo(support, pwo)
            except InconsistentPwo as exc:
                raise InconsistentPwoRow(f"line {row_no}: {exc}") from exc
        if kind is Kind.AMOUNT:
            amount = sum(values, Fraction(0))
        elif with_amount:
            try:
                amount = Fraction(cells[-1])
            except (ValueError, ZeroDivisionError) as exc:
                raise MalformedHeader(f"line {row_no}: bad amount ({exc})") from exc
        else:
            amount = None
        runs.append(OofARun(point=point, ordering=ordering, pwo=pwo, amount=amount))
    return Design(m=m, kind=kind, runs=tuple(runs))


def reference_design(name: str) -> Design:
    """Load one of the packaged reference designs: table1, table2, table3,
    or table5 (rational fixtures regenerated by ``oamix demo``)."""
    path = resources.files("oamix").joinpath(f"data/{name}.csv")
    return read_design(path.read_text(encoding="utf-8"))
