from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from tdshape.errors import DimensionMismatch, DuplicateNode
from tdshape.exactla import (GF, QQ, EchelonBasis, FpElement, Matrix, Polynomial,
                             format_scalar, gauss_rank, lagrange_interpolant, parse_field,
                             parse_scalar, rank, solve_in_span)


def test_rational_arithmetic():
    assert F(1, 2) + F(1, 3) == F(5, 6)
    assert F(2, 3) * F(3, 2) == 1


def test_prime_field_inverse():
    seven = GF(11)(7)
    assert (1 / seven) == 8
    assert seven * 8 == 1


def test_prime_field_residue_is_canonical():
    a = FpElement(-3, 11)
    assert a.value == 8
    assert str(a) == "8"


def test_prime_field_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        GF(11)(3) / GF(11)(0)


def test_rational_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        F(1) / F(0)


def test_parse_field():
    assert parse_field("rational") == QQ
    assert parse_field("fp:101").characteristic == 101
    with pytest.raises(ValueError):
        parse_field("fp:100")


def test_scalar_strings_round_trip():
    assert format_scalar(F(3)) == "3/1"
    assert format_scalar(F(-5, 4)) == "-5/4"
    assert parse_scalar("-5/4") == F(-5, 4)
    assert parse_scalar(format_scalar(GF(13)(5)), GF(13)) == GF(13)(5)


def test_rank_small_cases():
    assert rank(Matrix.identity(3)) == 3
    assert rank(Matrix.zeros(2, 5)) == 0
    vandermonde = [[F(x) ** k for x in (0, 1, 2)] for k in range(3)]
    assert rank(vandermonde) == 3


def test_rank_over_prime_field():
    f = GF(5)
    m = Matrix([[f(1), f(2)], [f(3), f(1)]])  # det = 1 - 6 = 0 mod 5
    assert rank(m) == 1


def test_solve_in_span_examples():
    assert solve_in_span([(1, 0), (0, 1)], (3, 4)) == [3, 4]
    assert solve_in_span([(1, 1)], (1, 2)) is None
    assert solve_in_span([(F(1), F(1)), (F(1), F(2))], (F(0), F(1))) == [-1, 1]


def test_solve_in_span_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_in_span([(1, 0, 0)], (1, 0))


def test_lagrange_examples():
    one_minus = lagrange_interpolant([(F(0), F(1)), (F(1), F(0))])
    assert one_minus == Polynomial([1, -1])
    square = lagrange_interpolant([(F(0), F(0)), (F(1), F(1)), (F(2), F(4))])
    assert square == Polynomial([0, 0, 1])
    assert lagrange_interpolant([(F(5), F(1))]) == Polynomial([1])


def test_lagrange_rejects_repeated_nodes():
    with pytest.raises(DuplicateNode):
        lagrange_interpolant([(F(1), F(0)), (F(1), F(2))])


def test_zero_polynomial_degree():
    assert Polynomial([0, 0]).degree == -1
    assert Polynomial([]).degree == -1


def test_echelon_basis_membership():
    b = EchelonBasis(3)
    assert b.add([F(1), F(1), F(0)])
    assert not b.add([F(2), F(2), F(0)])
    assert b.contains([F(-3), F(-3), F(0)])
    assert not b.contains([F(0), F(0), F(1)])
    assert b.rank == 1


def test_matrix_power_and_identity():
    m = Matrix([[F(0), F(1)], [F(1), F(0)]])
    assert m.power(2) == Matrix.identity(2)
    assert m.power(0) == Matrix.identity(2)


small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def matrices(draw, max_side=5):
    r = draw(st.integers(1, max_side))
    c = draw(st.integers(1, max_side))
    return Matrix([[draw(small) for _ in range(c)] for _ in range(r)])


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_bareiss_rank_agrees_with_gauss(m):
    assert rank(m) == gauss_rank(m)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_is_transpose_invariant(m):
    assert rank(m) == rank(m.transpose())


@settings(max_examples=100, deadline=None)
@given(matrices(4), st.data())
def test_rank_of_product_is_bounded(a, data):
    b = Matrix([[data.draw(small) for _ in range(3)] for _ in range(a.cols)])
    assert rank(a @ b) <= min(rank(a), rank(b))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=4), st.data())
def test_solution_reconstructs_target(gens, data):
    coeffs = data.draw(st.lists(small, min_size=len(gens), max_size=len(gens)))
    target = [sum(c * g[k] for c, g in zip(coeffs, gens)) for k in range(3)]
    sol = solve_in_span(gens, target)
    assert sol is not None
    assert [sum(c * g[k] for c, g in zip(sol, gens)) for k in range(3)] == target


@settings(max_examples=100, deadline=None)
@given(st.lists(small, min_size=1, max_size=5, unique=True), st.data())
def test_lagrange_hits_every_node(xs, data):
    ys = data.draw(st.lists(small, min_size=len(xs), max_size=len(xs)))
    p = lagrange_interpolant(list(zip(xs, ys)))
    assert all(p(x) == y for x, y in zip(xs, ys))
    assert p.degree < len(xs)


@settings(max_examples=200, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_prime_field_inverse_property(a, b):
    f = GF(10007)
    x, y = f(a), f(b)
    if y != 0:
        assert (x / y) * y == x
    assert 0 <= x.value < 10007
