from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lsakit.errors import DivisionByZero, FieldMismatch, NoSolution, NotInvertible, ParseError
from lsakit.field import (
    QQ, FieldSpec, Scalar, all_matrices, general_linear_group, gl_order, is_invertible, mat_invert, mat_mul,
    mat_rank, mat_solve, nullspace, rref, scalar_arith,
)

F5 = FieldSpec.prime(5)
F7 = FieldSpec.prime(7)


def test_rational_sum():
    assert Scalar.of(QQ, "1/2") + Scalar.of(QQ, "1/3") == Scalar.of(QQ, "5/6")


def test_inverse_mod_five():
    assert Scalar.of(F5, 2).inverse() == Scalar.of(F5, 3)


def test_negative_fraction_times_two():
    assert Scalar.of(QQ, "-2/4") * 2 == -1


def test_fraction_into_prime_field():
    assert F5(Fraction(1, 2)) == 3
    assert F5("-1/3") == 3


def test_denominator_divisible_by_p():
    with pytest.raises(DivisionByZero):
        F5(Fraction(1, 5))


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        Scalar.of(QQ, 1) / 0
    with pytest.raises(DivisionByZero):
        Scalar.of(F5, 0).inverse()


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        Scalar.of(F5, 1) + Scalar.of(F7, 1)
    with pytest.raises(FieldMismatch):
        scalar_arith("add", Scalar.of(QQ, 1), Scalar.of(F5, 1))


def test_scalar_arith_dispatch():
    a, b = Scalar.of(F7, 3), Scalar.of(F7, 5)
    assert scalar_arith("mul", a, b) == 1
    assert scalar_arith("div", a, b) == a * b.inverse()
    assert scalar_arith("neg", a) == 4
    assert scalar_arith("eq", a, a)


def test_field_parse():
    assert FieldSpec.parse("rational") == QQ
    assert FieldSpec.parse("prime:5") == F5
    with pytest.raises(ParseError):
        FieldSpec.parse("prime:6")
    with pytest.raises(ParseError):
        FieldSpec.parse("reals")


def test_scalar_format():
    assert QQ.format(QQ("3/6")) == "1/2"
    assert QQ.format(QQ(-4)) == "-4"
    assert F5.format(F5(-1)) == "4"


def test_solve_rational():
    A = QQ.array([[1, 2], [3, 4]])
    x, kernel = mat_solve(QQ, A, QQ.array([5, 6]))
    assert list(x) == [Fraction(-4), Fraction(9, 2)]
    assert kernel == []


def test_solve_underdetermined_returns_kernel():
    A = QQ.array([[1, 1, 0]])
    x, kernel = mat_solve(QQ, A, QQ.array([2]))
    assert list(mat_mul(QQ, A, x[:, None])[:, 0]) == [2]
    assert len(kernel) == 2
    for k in kernel:
        assert not np.any(mat_mul(QQ, A, k[:, None]))


def test_solve_inconsistent():
    with pytest.raises(NoSolution):
        mat_solve(QQ, QQ.array([[1, 1], [2, 2]]), QQ.array([1, 3]))


def test_invert_mod_five():
    A = F5.array([[1, 2], [3, 4]])
    inv = mat_invert(F5, A)
    assert np.array_equal(mat_mul(F5, A, inv), F5.eye(2))


def test_singular_matrix():
    with pytest.raises(NotInvertible):
        mat_invert(QQ, QQ.array([[1, 2], [2, 4]]))
    # det = -2, zero in F_2
    assert not is_invertible(FieldSpec.prime(2), FieldSpec.prime(2).array([[1, 2], [3, 4]]))


def test_rref_and_rank():
    R, pivots = rref(QQ, QQ.array([[2, 4, 6], [1, 2, 4]]))
    assert pivots == [0, 2]
    assert mat_rank(QQ, QQ.array([[2, 4, 6], [1, 2, 4]])) == 2
    assert len(nullspace(QQ, QQ.array([[2, 4, 6], [1, 2, 4]]))) == 1


def test_gl_sizes():
    for p in (2, 3):
        F = FieldSpec.prime(p)
        assert len(general_linear_group(F, 2)) == gl_order(p, 2)
    assert gl_order(7, 2) == 2016
    assert len(all_matrices(F5, 1, 2)) == 25


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
residues = st.integers(min_value=0, max_value=6)


@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    x, y, z = (Scalar.of(QQ, v) for v in (a, b, c))
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == 0
    if a != 0:
        assert x * x.inverse() == 1


@given(residues, residues, residues)
def test_prime_field_axioms(a, b, c):
    x, y, z = (Scalar.of(F7, v) for v in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - y + y == x
    if a % 7:
        assert x / x == 1


@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=3, max_size=3))
def test_invert_or_singular(rows):
    A = QQ.array(rows)
    if is_invertible(QQ, A):
        assert np.array_equal(mat_mul(QQ, A, mat_invert(QQ, A)), QQ.eye(3))
    else:
        assert mat_rank(QQ, A) < 3
        assert nullspace(QQ, A)
