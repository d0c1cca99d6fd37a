"""Eigenvalue sequences and the pairs of them that define the algebra T."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (BadSubsetSize, DegenerateParameters, DiameterTooSmall,
                     InvalidSequencePair, RatioNotConstant)
from .exactla import QQ, format_scalar, parse_scalar, rank


@dataclass(frozen=True)
class EigenvalueSequence:
    d: int
    values: tuple

    def __init__(self, values: Sequence, d: int | None = None):
        values = tuple(values)
        if d is not None and d != len(values) - 1:
            raise ValueError(f"d={d} does not match {len(values)} values")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "d", len(values) - 1)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def reversed(self) -> "EigenvalueSequence":
        return EigenvalueSequence(self.values[::-1])

    def to_json(self) -> dict:
        return {"d": self.d, "values": [format_scalar(v) for v in self.values]}

    @classmethod
    def from_json(cls, data, field=QQ) -> "EigenvalueSequence":
        if isinstance(data, str):
            data = json.loads(data)
        seq = cls([parse_scalar(v, field) for v in data["values"]])
        if seq.d != data["d"]:
            raise ValueError(f"d={data['d']} does not match {len(seq.values)} values")
        return seq


@dataclass
class ValidationReport:
    distinct_violations: list = field(default_factory=list)
    ratio_violations: list = field(default_factory=list)
    ratio: object = None

    @property
    def ok(self) -> bool:
        return not self.distinct_violations and not self.ratio_violations

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "distinct_violations": [list(p) for p in self.distinct_violations],
            "ratio_violations": list(self.ratio_violations),
            "ratio": None if self.ratio is None else format_scalar(self.ratio),
        }


def _ratio_at(values, i):
    return (values[i - 2] - values[i + 1]) / (values[i - 1] - values[i])


def validate(seq: EigenvalueSequence) -> ValidationReport:
    """Check pairwise distinctness and constancy of the three-term ratio.

    ``ratio_violations`` lists every ``i`` whose ratio differs from the one at
    ``i = 2``.  The ratio is only examined once distinctness holds.
    """
    v = seq.values
    report = ValidationReport()
    for a in range(len(v)):
        for b in range(a + 1, len(v)):
            if v[a] == v[b]:
                report.distinct_violations.append((a, b))
    if report.distinct_violations or seq.d < 3:
        return report
    first = _ratio_at(v, 2)
    report.ratio = first
    for i in range(3, seq.d):
        if _ratio_at(v, i) != first:
            report.ratio_violations.append(i)
    return report


def common_ratio(seq: EigenvalueSequence):
    if seq.d < 3:
        raise DiameterTooSmall(f"the ratio needs d >= 3, got d={seq.d}")
    report = validate(seq)
    if report.distinct_violations:
        raise RatioNotConstant(f"values coincide at {report.distinct_violations}")
    if report.ratio_violations:
        raise RatioNotConstant(f"ratio changes at i={report.ratio_violations}")
    return report.ratio


def make_family(kind: str, d: int, *, alpha=0, beta=1, gamma=1, q=2,
                field=QQ) -> EigenvalueSequence:
    """Standard parametrised families.

    linear:     alpha + beta*i
    geometric:  alpha + beta*q**i
    qracah:     alpha + beta*q**i + gamma*q**(-i)
    """
    alpha, beta, gamma, q = field(alpha), field(beta), field(gamma), field(q)
    if kind == "linear":
        values = [alpha + beta * i for i in range(d + 1)]
    elif kind == "geometric":
        if q == 0:
            raise DegenerateParameters("q must be nonzero")
        values = [alpha + beta * q**i for i in range(d + 1)]
    elif kind == "qracah":
        if q == 0:
            raise DegenerateParameters("q must be nonzero")
        values = [alpha + beta * q**i + gamma / q**i for i in range(d + 1)]
    else:
        raise ValueError(f"unknown family {kind!r}")
    seq = EigenvalueSequence(values)
    report = validate(seq)
    if report.distinct_violations:
        raise DegenerateParameters(
            f"{kind} family with these parameters repeats values at {report.distinct_violations}")
    return seq


@dataclass(frozen=True)
class SequencePair:
    primal: EigenvalueSequence
    dual: EigenvalueSequence

    @property
    def d(self) -> int:
        return self.primal.d

    @property
    def theta(self):
        return self.primal.values

    @property
    def theta_star(self):
        return self.dual.values

    def swapped(self) -> "SequencePair":
        return SequencePair(self.dual, self.primal)

    def problems(self) -> list:
        out = []
        if self.primal.d != self.dual.d:
            out.append(f"diameters differ: {self.primal.d} vs {self.dual.d}")
            return out
        rp, rd = validate(self.primal), validate(self.dual)
        if not rp.ok:
            out.append(f"primal sequence invalid: {rp.to_json()}")
        if not rd.ok:
            out.append(f"dual sequence invalid: {rd.to_json()}")
        if rp.ok and rd.ok and self.d >= 3 and rp.ratio != rd.ratio:
            out.append(f"ratios differ: {rp.ratio} vs {rd.ratio}")
        return out

    def check(self) -> "SequencePair":
        problems = self.problems()
        if problems:
            raise InvalidSequencePair("; ".join(problems))
        return self

    def to_json(self) -> dict:
        return {"primal": self.primal.to_json(), "dual": self.dual.to_json()}


def default_pair(kind: str, d: int, field=QQ, q=2) -> SequencePair:
    """Test pairs: linear (0..d) with dual (d..0), or geometric with the same q."""
    if kind == "linear":
        return SequencePair(make_family("linear", d, field=field),
                            make_family("linear", d, alpha=d, beta=-1, field=field))
    if kind == "geometric":
        return SequencePair(make_family("geometric", d, q=q, field=field),
                            make_family("geometric", d, q=q, beta=-1, alpha=1, field=field))
    if kind == "qracah":
        return SequencePair(make_family("qracah", d, q=q, field=field),
                            make_family("qracah", d, q=q, beta=2, gamma=-1, field=field))
    raise ValueError(f"unknown family {kind!r}")


def replacement_matrix(seq: EigenvalueSequence, subset, n: int) -> list:
    d = seq.d
    one = seq.values[0] * 0 + 1
    zero = one * 0
    rows = [[one if c == i else zero for c in range(d + 1)]
            for i in range(d + 1) if i not in subset]
    rows += [[seq.values[c] ** k for c in range(d + 1)] for k in range(n + 1)]
    return rows


def verify_replacement_basis(seq: EigenvalueSequence, subset, n: int) -> bool:
    """Swap the unit rows indexed by ``subset`` for the powers 1, a, ..., a^n.

    Rows are coordinates in the basis e_0..e_d of D, where a^k has coordinates
    (theta_0^k, ..., theta_d^k).  True iff the result is still a basis.
    """
    subset = set(subset)
    if len(subset) != n + 1 or not subset <= set(range(seq.d + 1)):
        raise BadSubsetSize(f"need an ({n}+1)-subset of 0..{seq.d}, got {sorted(subset)}")
    return rank(replacement_matrix(seq, subset, n)) == seq.d + 1
