"""Rewriting cells of a block into zigzag cells modulo R.

For a positive cell (i, j) of block (s, t) the boundary polynomial f+ is 1 at
theta*_j and vanishes at the other positive columns of row i, so

    unit(i, j) = e*_s (x) e_i (x) f+(a*) (x) e_t  -  sum_h f+(theta*_h) unit(i, h)

with h over the zigzag and negative cells of the row.  The first term lies in
R because deg f+ < |i - t|.  Negative cells are handled column-wise with f-.
Every nonzigzag cell produced on the right has smaller weight, so repeating
the step terminates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import WrongClass, ZigzagInput
from .exactla import Polynomial, format_scalar, solve_in_span
from .sequences import EigenvalueSequence, SequencePair
from .tensor import (NEGATIVE, POSITIVE, ZIGZAG, TensorElement, classify_cell,
                     classify_cell3, r3_vectors, r_index, r_spanning_set, unit,
                     weight)
from .words import Word


def boundary_polynomial(s: int, t: int, i: int, j: int, pair: SequencePair,
                        sign: str) -> Polynomial:
    d = pair.d
    want = POSITIVE if sign in ("plus", "+") else NEGATIVE
    if classify_cell(s, t, i, j, d) != want:
        raise WrongClass(f"cell {(i, j)} of block {(s, t)} is not {want}")
    one = pair.theta[0] * 0 + 1
    f = Polynomial([one])
    if want == POSITIVE:
        nodes = pair.theta_star
        others = [k for k in range(d + 1) if k != j and classify_cell(s, t, i, k, d) == POSITIVE]
        centre = j
    else:
        nodes = pair.theta
        others = [k for k in range(d + 1) if k != i and classify_cell(s, t, k, j, d) == NEGATIVE]
        centre = i
    for k in others:
        den = nodes[centre] - nodes[k]
        f = f * Polynomial([-nodes[k] / den, one / den])
    return f


@dataclass
class IdentityRecord:
    """unit(cell) = sum r_terms[label] * R(label) + sum cell_terms[cell] * unit(cell)."""

    s: int
    t: int
    cell: tuple
    sign: str
    polynomial: Polynomial
    r_terms: dict
    cell_terms: dict

    def rhs(self, d: int, pair: SequencePair) -> TensorElement:
        rvecs = {(rv.side, rv.index, rv.k): rv.element for rv in r_spanning_set(d, self.s, self.t, pair)}
        total = TensorElement((self.s, self.t), {})
        for label, c in self.r_terms.items():
            total = total + rvecs[label].scale(c)
        for (i, j), c in self.cell_terms.items():
            total = total + unit(self.s, self.t, i, j, c)
        return total

    def verify(self, pair: SequencePair) -> bool:
        one = pair.theta[0] * 0 + 1
        return self.rhs(pair.d, pair) == unit(self.s, self.t, *self.cell, one)


def expand_identity(s: int, t: int, i: int, j: int, pair: SequencePair) -> IdentityRecord:
    d = pair.d
    cls = classify_cell(s, t, i, j, d)
    if cls == ZIGZAG:
        raise ZigzagInput(f"cell {(i, j)} of block {(s, t)} is zigzag")
    sign = "plus" if cls == POSITIVE else "minus"
    f = boundary_polynomial(s, t, i, j, pair, sign)
    if sign == "plus":
        r_terms = {("right", i, k): c for k, c in enumerate(f.coeffs) if c != 0}
        cell_terms = {}
        for h in range(d + 1):
            if classify_cell(s, t, i, h, d) != POSITIVE:
                v = f(pair.theta_star[h])
                if v != 0:
                    cell_terms[i, h] = -v
    else:
        r_terms = {("left", j, k): c for k, c in enumerate(f.coeffs) if c != 0}
        cell_terms = {}
        for h in range(d + 1):
            if classify_cell(s, t, h, j, d) != NEGATIVE:
                v = f(pair.theta[h])
                if v != 0:
                    cell_terms[h, j] = -v
    return IdentityRecord(s, t, (i, j), sign, f, r_terms, cell_terms)


@dataclass
class Step:
    cell: tuple
    weight: int
    identity: str
    children: list


@dataclass
class ReductionCertificate:
    d: int
    s: int
    t: int
    cell: tuple
    zigzag_part: dict
    r_part: dict
    steps: list = field(default_factory=list)

    def r_coefficients(self) -> list:
        """Coefficients aligned with :func:`tdshape.tensor.r_spanning_set`."""
        pos = r_index(self.d, self.s, self.t)
        out = [0] * len(pos)
        for label, c in self.r_part.items():
            out[pos[label]] = c
        return out

    def zigzag_element(self) -> TensorElement:
        return TensorElement((self.s, self.t), dict(self.zigzag_part))

    def reconstruct(self, pair: SequencePair) -> TensorElement:
        total = self.zigzag_element()
        for rv, c in zip(r_spanning_set(self.d, self.s, self.t, pair), self.r_coefficients()):
            if c != 0:
                total = total + rv.element.scale(c)
        return total

    def verify(self, pair: SequencePair) -> bool:
        one = pair.theta[0] * 0 + 1
        if any(classify_cell(self.s, self.t, i, j, self.d) != ZIGZAG for i, j in self.zigzag_part):
            return False
        return self.reconstruct(pair) == unit(self.s, self.t, *self.cell, one)

    def weights_decrease(self) -> bool:
        by_cell = {st.cell: st.weight for st in self.steps}
        return all(by_cell[c] < st.weight for st in self.steps for c in st.children)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "block": [self.s, self.t],
            "input": {"s": self.s, "t": self.t, "i": self.cell[0], "j": self.cell[1]},
            "zigzag": [{"i": i, "j": j, "coef": format_scalar(c)}
                       for (i, j), c in sorted(self.zigzag_part.items())],
            "r": [{"side": side, "index": idx, "k": k, "coef": format_scalar(c)}
                  for (side, idx, k), c in sorted(self.r_part.items())],
            "steps": [{"i": st.cell[0], "j": st.cell[1], "weight": st.weight,
                       "identity": st.identity,
                       "children": [list(c) for c in st.children]} for st in self.steps],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _accumulate(into: dict, terms: dict, c):
    for key, v in terms.items():
        new = into.get(key, 0) + c * v
        if new == 0:
            into.pop(key, None)
        else:
            into[key] = new


def reduce_cell(s: int, t: int, i: int, j: int, pair: SequencePair) -> ReductionCertificate:
    """Express unit(i, j) as zigzag cells plus a combination of R vectors."""
    d = pair.d
    one = pair.theta[0] * 0 + 1
    memo = {}
    steps = []

    def resolve(cell):
        if cell in memo:
            return memo[cell]
        if classify_cell(s, t, cell[0], cell[1], d) == ZIGZAG:
            memo[cell] = ({cell: one}, {})
            return memo[cell]
        rec = expand_identity(s, t, cell[0], cell[1], pair)
        zig, rpart = {}, dict(rec.r_terms)
        children = []
        for other, c in rec.cell_terms.items():
            if classify_cell(s, t, other[0], other[1], d) == ZIGZAG:
                _accumulate(zig, {other: one}, c)
            else:
                children.append(other)
        steps.append(Step(cell, weight(d, s, t, *cell), rec.sign, children))
        for other in children:
            z2, r2 = resolve(other)
            c = rec.cell_terms[other]
            _accumulate(zig, z2, c)
            _accumulate(rpart, r2, c)
        memo[cell] = (zig, rpart)
        return memo[cell]

    zig, rpart = resolve((i, j))
    return ReductionCertificate(d, s, t, (i, j), dict(zig), dict(rpart), steps)


def reduce_block(s: int, t: int, pair: SequencePair) -> dict:
    d = pair.d
    return {(i, j): reduce_cell(s, t, i, j, pair) for i in range(d + 1) for j in range(d + 1)}


# --------------------------------------------------------------------------
# Word-level readings
# --------------------------------------------------------------------------

@dataclass
class WordReduction:
    """``word == sum coef * zigzag word`` in every T-module, plus the R part used."""

    word: Word
    combination: list
    r_part: list
    certificate: ReductionCertificate | None = None

    def to_json(self) -> dict:
        out = {
            "word": self.word.to_json(),
            "combination": [{"coef": format_scalar(c), "word": w.to_json()}
                            for c, w in self.combination],
            "r": [format_scalar(c) for c in self.r_part],
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def reduce_word3(s: int, i: int, t: int, seq: EigenvalueSequence,
                 start_starred: bool = True) -> WordReduction:
    """Rewrite e*_s e_i e*_t (or e_s e*_i e_t with the dual sequence) into zigzag words.

    ``seq`` is the sequence belonging to the middle letter.
    """
    d = seq.d
    one = seq[0] * 0 + 1
    word = Word(d, start_starred, (s, i, t))
    if classify_cell3(s, i, t):
        return WordReduction(word, [(one, word)], [])
    vand = [v.dense(d) for v in r3_vectors(s, t, seq)]
    zig_idx = [h for h in range(d + 1) if classify_cell3(s, h, t)]
    zero = one * 0
    zig = [[one if c == h else zero for c in range(d + 1)] for h in zig_idx]
    target = [one if c == i else zero for c in range(d + 1)]
    coeffs = solve_in_span(vand + zig, target)
    assert coeffs is not None, "zigzag cells and R vectors failed to span the block"
    r_part = coeffs[:len(vand)]
    combo = [(c, Word(d, start_starred, (s, h, t)))
             for h, c in zip(zig_idx, coeffs[len(vand):]) if c != 0]
    return WordReduction(word, combo, r_part)


def reduce_word4(s: int, i: int, j: int, t: int, pair: SequencePair,
                 start_starred: bool = True) -> WordReduction:
    """Rewrite e*_s e_i e*_j e_t into zigzag words.

    For a word that starts nonstarred the roles of the two sequences swap.
    """
    work = pair if start_starred else pair.swapped()
    cert = reduce_cell(s, t, i, j, work)
    word = Word(pair.d, start_starred, (s, i, j, t))
    combo = [(c, Word(pair.d, start_starred, (s, a, b, t)))
             for (a, b), c in sorted(cert.zigzag_part.items())]
    return WordReduction(word, combo, cert.r_coefficients(), cert)
