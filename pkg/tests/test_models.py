import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tdshape.errors import (BadCharacteristic, DegenerateParameters, DiameterMismatch,
                            EigenvalueMismatch, ParityMismatch)
from tdshape.exactla import GF, Matrix, solve_in_span
from tdshape.models import (build_krawtchouk, build_qracah_leonard, eDDDe_ranks, idempotents,
                            model_from_json, model_from_matrices, probe_independence,
                            span_ranks, validate_tdsystem, verify_eDDDe, verify_shape_bound,
                            verify_span_equality, word_image)
from tdshape.sequences import EigenvalueSequence, common_ratio
from tdshape.words import Generator, Word


def M(rows):
    return Matrix([[F(x) for x in r] for r in rows])


def test_krawtchouk_d1():
    m = build_krawtchouk(1)
    assert m.A == M([[0, 1], [1, 0]])
    assert m.Astar == M([[1, 0], [0, -1]])
    eye = Matrix.identity(2)
    assert m.E[0] == (eye + m.A).scale(F(1, 2))
    assert m.E[1] == (eye - m.A).scale(F(1, 2))


def test_krawtchouk_d3_passes_every_check():
    rep = validate_tdsystem(build_krawtchouk(3))
    assert rep.ok, rep.failures()
    assert set(rep.checks) >= {"distinct_eigenvalues", "triangularity", "irreducible"}


def test_krawtchouk_characteristic_guard():
    with pytest.raises(BadCharacteristic):
        build_krawtchouk(4, GF(3))
    with pytest.raises(BadCharacteristic):
        build_krawtchouk(1, GF(2))
    assert validate_tdsystem(build_krawtchouk(3, GF(101))).ok


def test_qracah_models():
    assert validate_tdsystem(build_qracah_leonard(1, q=2)).ok
    assert validate_tdsystem(build_qracah_leonard(2, q=2)).ok
    m = build_qracah_leonard(3, q=2)
    assert common_ratio(m.eigen.primal) == F(7, 2)
    assert common_ratio(m.eigen.dual) == F(7, 2)


def test_qracah_rejects_roots_of_unity():
    with pytest.raises(DegenerateParameters):
        build_qracah_leonard(2, q=-1)
    with pytest.raises(DegenerateParameters):
        build_qracah_leonard(2, q=1)


def test_degenerate_dual_fails_distinctness():
    kr = build_krawtchouk(3)
    m = model_from_matrices(kr.A, Matrix.identity(4))
    rep = validate_tdsystem(m)
    assert not rep.ok
    assert "distinct_eigenvalues" in rep.failures()


def test_idempotents_of_diagonal():
    E = idempotents(M([[0, 0, 0], [0, 1, 0], [0, 0, 2]]),
                    EigenvalueSequence([F(0), F(1), F(2)]))
    for i in range(3):
        assert E[i] == Matrix([[F(int(r == c == i)) for c in range(3)] for r in range(3)])


def test_idempotents_reject_wrong_eigenvalues():
    with pytest.raises(EigenvalueMismatch):
        idempotents(M([[0, 0], [0, 1]]), EigenvalueSequence([F(0), F(2)]))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=16, max_size=16))
def test_idempotents_of_conjugated_diagonal(entries):
    P = Matrix([[F(entries[4 * r + c]) + (4 if r == c else 0) for c in range(4)]
                for r in range(4)])
    if P.rank() < 4:
        return
    # column k of P^-1 solves P x = e_k
    cols = P.transpose().entries
    inv_rows = []
    for k in range(4):
        e = [F(int(k == c)) for c in range(4)]
        inv_rows.append(solve_in_span(cols, e))
    Pinv = Matrix(inv_rows).transpose()
    assert P @ Pinv == Matrix.identity(4)
    theta = EigenvalueSequence([F(v) for v in (3, -1, F(1, 2), 7)])
    A = P @ Matrix.diagonal(list(theta)) @ Pinv
    E = idempotents(A, theta)  # raises if any identity fails
    assert all(e.rank() == 1 for e in E)


def test_word_image_examples():
    m = build_krawtchouk(1)
    assert word_image(m, Word(1, None, ())) == Matrix.identity(2)
    w = Word.parse(1, "e_0 e*_0 e_0")
    assert word_image(m, w) == m.E[0] @ m.Estar[0] @ m.E[0]
    expected = (Matrix.identity(2) - m.A).scale(F(1, 2)) @ M([[1, 0], [0, 0]])
    assert word_image(m, Word.parse(1, "e_1 e*_0")) == expected
    with pytest.raises(DiameterMismatch):
        word_image(m, Word.parse(2, "e_2"))


def test_span_equality_examples():
    m = build_krawtchouk(2)
    assert verify_span_equality(m, 3, Generator(False, 0), Generator(False, 2))
    assert verify_span_equality(m, 2, Generator(False, 0), Generator(True, 1))
    with pytest.raises(ParityMismatch):
        verify_span_equality(m, 3, Generator(False, 0), Generator(True, 0))
    r = span_ranks(m, 2, Generator(False, 1), Generator(True, 2))
    assert r["words"] == r["zigzag_words"] == 1


def test_eDDDe():
    m = build_krawtchouk(2)
    assert verify_eDDDe(m, 1) and verify_eDDDe(m, 2)
    assert verify_eDDDe(build_krawtchouk(3), 3)
    r = eDDDe_ranks(m, 1)
    assert r["rank_full"] == r["rank_thin"]


def test_shape_bound():
    rep = verify_shape_bound(build_krawtchouk(3))
    assert rep.rho == [1, 1, 1, 1] and rep.bound == [1, 3, 3, 1]
    assert rep.summary() == "rho = 1 1 1 1; bound 1 3 3 1; PASS"
    for d in range(5):
        for m in (build_krawtchouk(d), build_qracah_leonard(d)):
            rep = verify_shape_bound(m)
            assert rep.ok and all(rep.containment)
            assert sum(rep.rho) == d + 1


def test_probe_reports_numbers():
    rep = probe_independence(build_krawtchouk(0), 1, "zigzag")
    assert (rep["count"], rep["rank"]) == (1, 1)
    rep = probe_independence(build_krawtchouk(1), 2, "zigzag")
    assert rep["count"] == 4 and 0 < rep["rank"] <= 4
    rep = probe_independence(build_krawtchouk(2), 3, "nonrepeatingZigzag")
    assert rep["rank"] <= rep["ambient"] and rep["count"] > 0


def test_json_round_trip():
    m = build_qracah_leonard(2)
    text = json.dumps(m.to_json())
    back = model_from_json(text)
    assert back.A == m.A and back.Astar == m.Astar
    assert validate_tdsystem(back).ok


def test_json_import_finds_a_standard_ordering():
    m = build_krawtchouk(3)
    data = {"d": 3, "A": m.to_json()["A"], "Astar": m.to_json()["Astar"]}
    back = model_from_json(data)
    assert validate_tdsystem(back).ok
    assert list(back.eigen.theta) in (list(m.eigen.theta), list(m.eigen.theta)[::-1])


def test_json_import_rejects_wrong_d():
    m = build_krawtchouk(2)
    data = {"d": 5, "A": m.to_json()["A"], "Astar": m.to_json()["Astar"]}
    with pytest.raises(DiameterMismatch):
        model_from_json(data)


def test_conjugated_model_stays_valid():
    # a change of basis keeps every axiom; P is unitriangular so P^-1 is exact
    m = build_krawtchouk(2)
    P = M([[1, 2, 0], [0, 1, -1], [0, 0, 1]])
    Pinv = M([[1, -2, -2], [0, 1, 1], [0, 0, 1]])
    assert P @ Pinv == Matrix.identity(3)
    moved = model_from_matrices(P @ m.A @ Pinv, P @ m.Astar @ Pinv,
                                list(m.eigen.theta), list(m.eigen.theta_star))
    assert validate_tdsystem(moved).ok


def test_nonstandard_ordering_fails_tridiagonality():
    m = build_krawtchouk(2)
    shuffled = [m.eigen.theta[k] for k in (0, 2, 1)]
    moved = model_from_matrices(m.A, m.Astar, shuffled, list(m.eigen.theta_star))
    rep = validate_tdsystem(moved)
    assert "Astar_tridiagonal_on_E" in rep.failures()
    assert "irreducible" not in rep.failures()
