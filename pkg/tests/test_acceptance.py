"""Acceptance criteria 1-9.

Each test checks one criterion at its stated tolerance (every one is exact)
and time limit, and prints a single ``criterion N: PASS|FAIL`` line.
"""
import random
import time
from contextlib import contextmanager
from itertools import combinations, product
from math import comb

import pytest

import reference_tables as ref
from tdshape.exactla import matrix_sum
from tdshape.models import (build_krawtchouk, build_qracah_leonard, validate_tdsystem,
                            verify_eDDDe, verify_shape_bound, verify_span_equality, word_image)
from tdshape.reduction import reduce_block, reduce_word3, reduce_word4
from tdshape.sequences import default_pair
from tdshape.tensor import (block_census, census_matches, dim_r_block, dim_r_total,
                            codim_r_total, parse_rendered_table, render_table,
                            verify_block_basis3, verify_block_basis4)
from tdshape.words import (Generator, enumerate_nonredundant_lifting, enumerate_words,
                           inverse_bijection, is_zigzag, is_zigzag_by_signs, peak_index,
                           subset_bijection)


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title, limit):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = elapsed < limit
            with capsys.disabled():
                verdict = "PASS" if ok and within else "FAIL"
                print(f"\ncriterion {number}: {verdict}  {title}  "
                      f"({elapsed:.2f}s, limit {limit}s)")
        assert within, f"took {elapsed:.2f}s, limit {limit}s"
    return run


def _grid(rows):
    return {(i, j): ("" if v == "." else v)
            for i, row in enumerate(rows) for j, v in enumerate(row.split())}


def test_criterion_1_table_reproduction(criterion):
    with criterion(1, "d=9 zigzag, sign and weight tables", 1.0):
        for block in [(3, 6), (4, 4), (6, 3)]:
            for kind, source in (("zigzag", ref.ZIGZAG), ("sign", ref.SIGN),
                                 ("weight", ref.WEIGHT)):
                parsed = parse_rendered_table(render_table(9, *block, kind), 9)
                assert parsed["cells"] == _grid(source[block]), (block, kind)
                if kind == "sign":
                    rows, cols = ref.SIGN_MARGINS[block]
                    assert [parsed["row_margin"][i] for i in range(10)] == rows
                    assert parsed["col_margin"] == cols


def test_criterion_2_counting(criterion):
    with criterion(2, "census closed forms, d <= 12", 30.0):
        for d in range(13):
            for s in range(d + 1):
                for t in range(d + 1):
                    c = block_census(d, s, t)
                    assert census_matches(c), (d, s, t)
                    assert c["zigzag"] == d + 1 + s * (d - s) + t * (d - t)
                    assert c["row_positive"] == [abs(i - t) for i in range(d + 1)]
                    assert c["col_negative"] == [abs(j - s) for j in range(d + 1)]


def test_criterion_3_block_bases(criterion):
    with criterion(3, "rank-3 and rank-4 bases, d <= 6", 120.0):
        for family in ("linear", "geometric"):
            for d in range(7):
                pair = default_pair(family, d)
                total = 0
                for s in range(d + 1):
                    for t in range(d + 1):
                        assert verify_block_basis3(s, t, pair.primal).is_basis
                        assert verify_block_basis3(s, t, pair.dual).is_basis
                        rep = verify_block_basis4(d, s, t, pair)
                        assert rep.is_basis, (family, d, s, t)
                        assert rep.rank_r == d * (d + 1) - (s + t) * d + s * s + t * t
                        total += rep.rank_r
                assert total == dim_r_total(d)
        assert (dim_r_total(2), codim_r_total(2)) == (48, 33)
        assert sum(dim_r_block(9, s, t) for s in range(10) for t in range(10)) == 6600
        assert dim_r_total(9) == 6600


def test_criterion_4_reduction(criterion):
    with criterion(4, "reduction certificates, d <= 5", 60.0):
        for family in ("linear", "geometric"):
            for d in range(6):
                pair = default_pair(family, d)
                for s in range(d + 1):
                    for t in range(d + 1):
                        for cell, cert in reduce_block(s, t, pair).items():
                            assert cert.verify(pair), (family, d, s, t, cell)
                            assert cert.weights_decrease(), (family, d, s, t, cell)


def test_criterion_5_word_combinatorics(criterion):
    with criterion(5, "zigzag criteria, peaks, lifting words, bijection", 60.0):
        for d in range(5):
            for n in range(1, 8):
                for x in product(range(d + 1), repeat=n):
                    zz = is_zigzag(x)
                    assert zz == is_zigzag_by_signs(x), x
                    if zz and len(set(x)) > 1:
                        p = peak_index(x)
                        diffs = [abs(a - b) for a, b in zip(x, x[1:])]
                        rise, fall = diffs[:p - 1], diffs[p - 2:]
                        assert rise[0] > 0 and all(a < b for a, b in zip(rise, rise[1:]))
                        assert all(a >= b for a, b in zip(fall, fall[1:]))
                        if p < n:
                            assert diffs[p - 1] <= diffs[p - 2]  # p is maximal, hence unique
        assert len(enumerate_words(2, 3, Generator(False, 0))) == 9
        grid = {s: sorted(str(w) for w in enumerate_nonredundant_lifting(3, s))
                for s in range(4)}
        assert grid == {0: ["e_0"],
                        1: ["e_1 e*_0", "e_1 e*_2 e_0", "e_1 e*_3 e_0"],
                        2: ["e_2 e*_0", "e_2 e*_1 e_3 e*_0", "e_2 e*_3 e_0"],
                        3: ["e_3 e*_0"]}
        for d in range(11):
            for s in range(d + 1):
                found = enumerate_nonredundant_lifting(d, s)
                assert len(found) == comb(d, s)
                for w in found:
                    assert inverse_bijection(d, subset_bijection(w)) == w
            if d <= 8:
                for k in range(d + 1):
                    for sub in combinations(range(1, d + 1), k):
                        assert subset_bijection(inverse_bijection(d, sub)) == set(sub)


def _models(kraw_max, qr_max):
    return ([build_krawtchouk(d) for d in range(kraw_max + 1)]
            + [build_qracah_leonard(d, q=2) for d in range(qr_max + 1)])


def test_criterion_6_model_axioms(criterion):
    with criterion(6, "Krawtchouk d <= 6 and q-Racah d <= 4 axioms", 60.0):
        for m in _models(6, 4):
            rep = validate_tdsystem(m)
            assert rep.ok, (m.name, rep.failures())
            assert rep.checks["triangularity"]["pass"] and rep.checks["irreducible"]["pass"]


def test_criterion_7_word_spans(criterion):
    with criterion(7, "span equality n <= 6 and eDDDe n <= 3", 120.0):
        for m in _models(3, 2):
            gens = [Generator(st, i) for st in (False, True) for i in range(m.d + 1)]
            for n in range(1, 7):
                for b in gens:
                    for e in gens:
                        if e.starred != (b.starred if n % 2 else not b.starred):
                            continue
                        assert verify_span_equality(m, n, b, e), (m.name, n, str(b), str(e))
        for d in range(4):
            m = build_krawtchouk(d)
            for n in range(1, 4):
                assert verify_eDDDe(m, n), (d, n)


def test_criterion_8_shape_bound(criterion):
    with criterion(8, "shape bound and lifting-word cover, d <= 4", 60.0):
        for m in _models(4, 4):
            rep = verify_shape_bound(m)
            assert rep.ok, (m.name, rep.to_json())
            assert rep.rho == [1] * (m.d + 1)
            assert all(rep.containment)


def test_criterion_9_cross_module(criterion):
    with criterion(9, "reduced words pushed through matrix models", 60.0):
        rng = random.Random(20240607)
        for d in range(5):
            for m in (build_krawtchouk(d), build_qracah_leonard(d)):
                for _ in range(200):
                    starred = rng.random() < 0.5
                    idx = [rng.randint(0, d) for _ in range(4)]
                    if rng.random() < 0.5:
                        res = reduce_word4(*idx, m.eigen, start_starred=starred)
                    else:
                        seq = m.eigen.primal if starred else m.eigen.dual
                        res = reduce_word3(*idx[:3], seq, start_starred=starred)
                    lhs = word_image(m, res.word)
                    terms = [word_image(m, w).scale(c) for c, w in res.combination]
                    rhs = matrix_sum(terms) if terms else lhs.scale(0)
                    assert lhs == rhs, (m.name, str(res.word))
