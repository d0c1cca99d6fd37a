"""Coordinate models of the blocks e*_s (x) D (x) e*_t and e*_s (x) D (x) D* (x) e_t.

A rank-4 block has the basis e*_s (x) e_i (x) e*_j (x) e_t for 0 <= i, j <= d and
is addressed by the cell (i, j).  The rank-3 block e*_s (x) D (x) e*_t is
addressed by i alone.  Expanding a^k = sum_i theta_i^k e_i and
a*^k = sum_j theta*_j^k e*_j puts every spanning vector of R into these
coordinates.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import TdShapeError, ZigzagCellHasNoWeight
from .exactla import rank
from .sequences import EigenvalueSequence, SequencePair
from .words import is_between

ZIGZAG, POSITIVE, NEGATIVE = "z", "+", "-"


class Cell4(NamedTuple):
    s: int
    t: int
    i: int
    j: int


# --------------------------------------------------------------------------
# Classification
# --------------------------------------------------------------------------

def is_zigzag_cell(s: int, t: int, i: int, j: int) -> bool:
    return (not is_between(s, i, j)
            and not is_between(i, j, t)
            and (not is_between(s, i, t) or not is_between(s, j, t)))


def is_zigzag_cell_by_table(d: int, s: int, t: int, i: int, j: int) -> bool:
    """The case-by-case description of the zigzag cells of block (s, t)."""
    if s < t:
        return ((0 <= i < s and t <= j <= d)
                or (s < i < t and 0 <= j < s)
                or (t <= i <= d and 0 <= j <= t))
    if s == t:
        return ((0 <= i < s and s <= j <= d)
                or (i == s and j == s)
                or (s < i <= d and 0 <= j <= s))
    return ((0 <= i <= t and t <= j <= d)
            or (t < i < s and s < j <= d)
            or (s < i <= d and 0 <= j <= t))


def positive_cases(d: int, s: int, t: int, i: int, j: int) -> list:
    """Row numbers of the positivity table that the cell satisfies."""
    if s < t:
        rows = [0 <= i < s and i <= j < t,
                s <= i < t and s <= j < s + t - i,
                t < j <= i <= d]
    elif s == t:
        rows = [0 <= i <= j < s,
                s < j <= i <= d]
    else:
        rows = [0 <= i <= j < t,
                t < i <= s and s + t - i < j <= s,
                s < i <= d and t < j <= i]
    return [k for k, hit in enumerate(rows) if hit]


def classify_cell(s: int, t: int, i: int, j: int, d: int | None = None) -> str:
    """``'z'``, ``'+'`` or ``'-'`` for the cell (i, j) of block (s, t)."""
    if is_zigzag_cell(s, t, i, j):
        return ZIGZAG
    if d is None:
        d = max(s, t, i, j)
    return POSITIVE if positive_cases(d, s, t, i, j) else NEGATIVE


def classify_cell3(s: int, i: int, t: int) -> bool:
    """True iff e*_s (x) e_i (x) e*_t is zigzag."""
    return not is_between(s, i, t)


# --------------------------------------------------------------------------
# Weights
# --------------------------------------------------------------------------

# (label, condition, weight); '+' rows give even weights, '-' rows odd ones
_WEIGHTS_LT = [
    ("+1", lambda d, s, t, i, j: 0 <= i < s and i <= j < t, lambda d, s, t, i, j: 2 * i),
    ("+2", lambda d, s, t, i, j: s <= i < t and s <= j < s + t - i,
     lambda d, s, t, i, j: 2 * (d - t + i + 1)),
    ("+3", lambda d, s, t, i, j: t < j <= i <= d, lambda d, s, t, i, j: 2 * (d - i + s)),
    ("-1", lambda d, s, t, i, j: 0 <= j < i <= s, lambda d, s, t, i, j: 2 * j + 1),
    ("-2", lambda d, s, t, i, j: s < j <= t and s + t - j <= i < t,
     lambda d, s, t, i, j: 2 * (d - j + s) + 1),
    ("-3", lambda d, s, t, i, j: t < j <= d and s <= i < j,
     lambda d, s, t, i, j: 2 * (d - j + s) + 1),
]
_WEIGHTS_EQ = [
    ("+1", lambda d, s, t, i, j: 0 <= i <= j < s, lambda d, s, t, i, j: 2 * i),
    ("+2", lambda d, s, t, i, j: s < j <= i <= d, lambda d, s, t, i, j: 2 * (d - i + s)),
    ("-1", lambda d, s, t, i, j: 0 <= j < i <= s, lambda d, s, t, i, j: 2 * j + 1),
    ("-2", lambda d, s, t, i, j: s <= i < j <= d, lambda d, s, t, i, j: 2 * (d - j + s) + 1),
]
_WEIGHTS_GT = [
    ("+1", lambda d, s, t, i, j: 0 <= i <= j < t, lambda d, s, t, i, j: 2 * i),
    ("+2", lambda d, s, t, i, j: t < i <= s and s + t - i < j <= s,
     lambda d, s, t, i, j: 2 * (d - i + t + 1)),
    ("+3", lambda d, s, t, i, j: s < i <= d and t < j <= i,
     lambda d, s, t, i, j: 2 * (d - i + t)),
    ("-1", lambda d, s, t, i, j: 0 <= j < t and j < i <= s, lambda d, s, t, i, j: 2 * j + 1),
    ("-2", lambda d, s, t, i, j: t <= j < s and t < i <= s + t - j,
     lambda d, s, t, i, j: 2 * (d - s + j) + 1),
    ("-3", lambda d, s, t, i, j: s <= i < j <= d, lambda d, s, t, i, j: 2 * (d - j + t) + 1),
]


def weight_table(s: int, t: int) -> list:
    return _WEIGHTS_LT if s < t else _WEIGHTS_EQ if s == t else _WEIGHTS_GT


def weight_matches(d: int, s: int, t: int, i: int, j: int) -> list:
    """Every ``(label, weight)`` row of the weight table that the cell meets."""
    return [(label, value(d, s, t, i, j))
            for label, cond, value in weight_table(s, t) if cond(d, s, t, i, j)]


def weight(d: int, s: int, t: int, i: int, j: int) -> int:
    if is_zigzag_cell(s, t, i, j):
        raise ZigzagCellHasNoWeight(f"cell {(i, j)} of block {(s, t)} is zigzag")
    matches = weight_matches(d, s, t, i, j)
    if not matches:
        raise TdShapeError(f"no weight rule covers cell {(i, j)} of block {(s, t)}, d={d}")
    values = {w for _, w in matches}
    if len(values) > 1:
        raise TdShapeError(f"conflicting weight rules {matches} at {(i, j)} of block {(s, t)}")
    return matches[0][1]


@dataclass
class WeightAudit:
    """Outcome of sweeping the weight and positivity tables over all cells."""

    d: int
    cells: int = 0
    gaps: list = field(default_factory=list)
    conflicts: list = field(default_factory=list)
    overlaps: list = field(default_factory=list)
    sign_mismatches: list = field(default_factory=list)
    zigzag_hits: list = field(default_factory=list)
    positive_overlaps: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.gaps or self.conflicts or self.sign_mismatches or self.zigzag_hits
                    or self.positive_overlaps)


def audit_weight_tables(d: int) -> WeightAudit:
    """Check that the weight rows partition the nonzigzag cells consistently.

    ``overlaps`` collects cells met by several rows that agree on the value;
    those are harmless.  Everything else counts as a failure.
    """
    audit = WeightAudit(d)
    for s in range(d + 1):
        for t in range(d + 1):
            for i in range(d + 1):
                for j in range(d + 1):
                    audit.cells += 1
                    where = (s, t, i, j)
                    matches = weight_matches(d, s, t, i, j)
                    if len(positive_cases(d, s, t, i, j)) > 1:
                        audit.positive_overlaps.append(where)
                    if is_zigzag_cell(s, t, i, j):
                        if matches:
                            audit.zigzag_hits.append((where, matches))
                        continue
                    if not matches:
                        audit.gaps.append(where)
                        continue
                    if len(matches) > 1:
                        if len({w for _, w in matches}) > 1:
                            audit.conflicts.append((where, matches))
                        else:
                            audit.overlaps.append((where, matches))
                    sign = classify_cell(s, t, i, j, d)
                    for label, w in matches:
                        if label[0] != sign or (w % 2 == 0) != (sign == POSITIVE):
                            audit.sign_mismatches.append((where, label, w))
    return audit


# --------------------------------------------------------------------------
# Counting
# --------------------------------------------------------------------------

def block_census(d: int, s: int, t: int) -> dict:
    """Brute-force counts for block (s, t) next to their closed forms."""
    classes = {(i, j): classify_cell(s, t, i, j, d)
               for i in range(d + 1) for j in range(d + 1)}
    zig = sum(1 for c in classes.values() if c == ZIGZAG)
    row_pos = [sum(1 for j in range(d + 1) if classes[i, j] == POSITIVE) for i in range(d + 1)]
    col_neg = [sum(1 for i in range(d + 1) if classes[i, j] == NEGATIVE) for j in range(d + 1)]
    r_right = sum(1 for i in range(d + 1) for k in range(d + 1) if k < abs(i - t))
    r_left = sum(1 for j in range(d + 1) for k in range(d + 1) if k < abs(s - j))
    return {
        "d": d, "s": s, "t": t,
        "zigzag": zig,
        "row_positive": row_pos,
        "col_negative": col_neg,
        "r_right": r_right,
        "r_left": r_left,
        "closed_form": {
            "zigzag": d + 1 + s * (d - s) + t * (d - t),
            "row_positive": [abs(i - t) for i in range(d + 1)],
            "col_negative": [abs(j - s) for j in range(d + 1)],
            "r_right": d * (d + 1) // 2 - t * (d - t),
            "r_left": d * (d + 1) // 2 - s * (d - s),
        },
    }


def census_matches(census: dict) -> bool:
    cf = census["closed_form"]
    return all(census[k] == cf[k] for k in cf)


def dim_r_block(d: int, s: int, t: int) -> int:
    return d * (d + 1) - (s + t) * d + s * s + t * t


def dim_r_total(d: int) -> int:
    return 2 * d * (d + 1) ** 2 * (d + 2) // 3


def codim_r_total(d: int) -> int:
    return (d + 1) ** 2 * (d * d + 2 * d + 3) // 3


# --------------------------------------------------------------------------
# Spanning sets of R
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TensorElement:
    """Sparse coordinates in one block; keys are (i, j) for rank 4, i for rank 3."""

    block: tuple
    coords: dict

    def __post_init__(self):
        object.__setattr__(self, "coords", {k: v for k, v in self.coords.items() if v != 0})

    def dense(self, d: int) -> list:
        zero = 0
        if self.coords:
            zero = next(iter(self.coords.values())) * 0
        keys = _keys(d, rank3=self._rank3())
        return [self.coords.get(k, zero) for k in keys]

    def _rank3(self) -> bool:
        return bool(self.coords) and isinstance(next(iter(self.coords)), int)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, 0) + v
        return TensorElement(self.block, out)

    def scale(self, c) -> "TensorElement":
        return TensorElement(self.block, {k: c * v for k, v in self.coords.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.block == other.block and (self - other).coords == {}


def _keys(d: int, rank3: bool = False) -> list:
    if rank3:
        return list(range(d + 1))
    return [(i, j) for i in range(d + 1) for j in range(d + 1)]


def unit(s: int, t: int, i: int, j: int, one=1) -> TensorElement:
    return TensorElement((s, t), {(i, j): one})


@dataclass(frozen=True)
class RVector:
    """One spanning vector of R_{s,t}.

    side ``"right"``: e*_s (x) e_i (x) a*^k (x) e_t with ``index = i``;
    side ``"left"``:  e*_s (x) a^k (x) e*_j (x) e_t with ``index = j``.
    """

    side: str
    index: int
    k: int
    element: TensorElement


def r_spanning_set(d: int, s: int, t: int, pair: SequencePair) -> list:
    th, ths = pair.theta, pair.theta_star
    out = []
    for i in range(d + 1):
        for k in range(abs(i - t)):
            coords = {(i, j): ths[j] ** k for j in range(d + 1)}
            out.append(RVector("right", i, k, TensorElement((s, t), coords)))
    for j in range(d + 1):
        for k in range(abs(s - j)):
            coords = {(i, j): th[i] ** k for i in range(d + 1)}
            out.append(RVector("left", j, k, TensorElement((s, t), coords)))
    return out


def r_index(d: int, s: int, t: int) -> dict:
    """Position of each ``(side, index, k)`` inside :func:`r_spanning_set`."""
    pos = {}
    for i in range(d + 1):
        for k in range(abs(i - t)):
            pos["right", i, k] = len(pos)
    for j in range(d + 1):
        for k in range(abs(s - j)):
            pos["left", j, k] = len(pos)
    return pos


def r3_vectors(s: int, t: int, seq: EigenvalueSequence) -> list:
    """Coordinates of e*_s (x) a^k (x) e*_t for k < |s - t|."""
    return [TensorElement((s, t), {i: seq[i] ** k for i in range(seq.d + 1)})
            for k in range(abs(s - t))]


@dataclass
class BasisReport:
    d: int
    s: int
    t: int
    count_r: int
    rank_r: int
    count_zigzag: int
    rank_union: int
    expected_dim_r: int

    @property
    def is_basis(self) -> bool:
        full = (self.d + 1) ** 2 if self.expected_dim_r is not None else self.d + 1
        ok = self.rank_r == self.count_r and self.rank_union == full
        ok = ok and self.count_r + self.count_zigzag == full
        if self.expected_dim_r is not None:
            ok = ok and self.rank_r == self.expected_dim_r
        return ok

    def to_json(self) -> dict:
        return {"d": self.d, "s": self.s, "t": self.t, "count_r": self.count_r,
                "rank_r": self.rank_r, "count_zigzag": self.count_zigzag,
                "rank_union": self.rank_union, "expected_dim_r": self.expected_dim_r,
                "is_basis": self.is_basis}


def verify_block_basis4(d: int, s: int, t: int, pair: SequencePair) -> BasisReport:
    pair.check()
    rvecs = [rv.element.dense(d) for rv in r_spanning_set(d, s, t, pair)]
    one = pair.theta[0] * 0 + 1
    zig = [unit(s, t, i, j, one).dense(d)
           for i in range(d + 1) for j in range(d + 1) if is_zigzag_cell(s, t, i, j)]
    return BasisReport(d, s, t, len(rvecs), rank(rvecs) if rvecs else 0, len(zig),
                       rank(rvecs + zig), dim_r_block(d, s, t))


def verify_block_basis3(s: int, t: int, seq: EigenvalueSequence) -> BasisReport:
    d = seq.d
    vand = [v.dense(d) for v in r3_vectors(s, t, seq)]
    one = seq[0] * 0 + 1
    zero = one * 0
    zig = [[one if c == i else zero for c in range(d + 1)]
           for i in range(d + 1) if classify_cell3(s, i, t)]
    return BasisReport(d, s, t, len(vand), rank(vand) if vand else 0, len(zig),
                       rank(vand + zig), None)


def space_dimensions(d: int, pair: SequencePair | None = None) -> dict:
    """Closed-form dimensions of R, optionally confirmed by per-block ranks."""
    per_block = {(s, t): dim_r_block(d, s, t) for s in range(d + 1) for t in range(d + 1)}
    out = {
        "d": d,
        "dim_r4": dim_r_total(d),
        "codim_r4": codim_r_total(d),
        "total": (d + 1) ** 4,
        "sum_per_block": sum(per_block.values()),
        "sum_per_block_codim": sum((d + 1) ** 2 - v for v in per_block.values()),
        "dim_r3": sum(abs(s - t) for s in range(d + 1) for t in range(d + 1)),
        "codim_r3": sum(sum(1 for i in range(d + 1) if classify_cell3(s, i, t))
                        for s in range(d + 1) for t in range(d + 1)),
        "per_block": {f"{s},{t}": v for (s, t), v in per_block.items()},
    }
    if pair is not None:
        out["brute_dim_r4"] = sum(verify_block_basis4(d, s, t, pair).rank_r
                                  for s in range(d + 1) for t in range(d + 1))
    return out


# --------------------------------------------------------------------------
# Tables
# --------------------------------------------------------------------------

def table_cells(d: int, s: int, t: int, kind: str) -> dict:
    """Cell contents of a (d+1)x(d+1) table; blank cells map to ``''``."""
    out = {}
    for i in range(d + 1):
        for j in range(d + 1):
            c = classify_cell(s, t, i, j, d)
            if kind == "zigzag":
                out[i, j] = "z" if c == ZIGZAG else ""
            elif kind == "sign":
                out[i, j] = c
            elif kind == "weight":
                out[i, j] = "z" if c == ZIGZAG else str(weight(d, s, t, i, j))
            else:
                raise ValueError(f"unknown table kind {kind!r}")
    return out


def table_margins(d: int, s: int, t: int) -> tuple:
    """(#'+' per row, #'-' per column) of the sign table."""
    cells = table_cells(d, s, t, "sign")
    rows = [sum(1 for j in range(d + 1) if cells[i, j] == POSITIVE) for i in range(d + 1)]
    cols = [sum(1 for i in range(d + 1) if cells[i, j] == NEGATIVE) for j in range(d + 1)]
    return rows, cols


def render_table(d: int, s: int, t: int, kind: str) -> str:
    cells = table_cells(d, s, t, kind)
    width = max([2] + [len(v) for v in cells.values()]) + 1
    lab = max(len(str(d)), 2) + 1
    header = " " * lab + "|" + "".join(f"{j:>{width}}" for j in range(d + 1))
    if kind == "sign":
        header += " |" + f"{'#+':>{width}}"
    lines = [f"block s={s} t={t} d={d} kind={kind}", header, "-" * len(header)]
    rows, cols = table_margins(d, s, t) if kind == "sign" else (None, None)
    for i in range(d + 1):
        line = f"{i:>{lab - 1}} |" + "".join(f"{cells[i, j]:>{width}}" for j in range(d + 1))
        if kind == "sign":
            line += " |" + f"{rows[i]:>{width}}"
        lines.append(line.rstrip())
    if kind == "sign":
        lines.append("-" * len(header))
        lines.append(f"{'#-':>{lab - 1}} |" + "".join(f"{c:>{width}}" for c in cols))
    return "\n".join(lines) + "\n"


def parse_rendered_table(text: str, d: int) -> dict:
    """Inverse of :func:`render_table`: cell grid plus the sign-table margins."""
    cells, row_margin, col_margin = {}, {}, None
    width = None
    for line in text.splitlines():
        if "|" not in line:
            continue
        label, *parts = line.split("|")
        label = label.strip()
        if not label:
            width = len(parts[0]) // (d + 1)
        elif label.isdigit():
            body = parts[0].ljust((d + 1) * width)
            i = int(label)
            for j in range(d + 1):
                cells[i, j] = body[j * width:(j + 1) * width].strip()
            if len(parts) > 1:
                row_margin[i] = int(parts[1])
        elif label == "#-":
            col_margin = [int(x) for x in parts[0].split()]
    return {"cells": cells, "row_margin": row_margin, "col_margin": col_margin}


def table_csv(d: int, s: int, t: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "j", "class", "weight"])
    for i in range(d + 1):
        for j in range(d + 1):
            c = classify_cell(s, t, i, j, d)
            writer.writerow([i, j, c, "" if c == ZIGZAG else weight(d, s, t, i, j)])
    return buf.getvalue()
