from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from orehom import linalg as la
from conftest import matrices


def to_sympy(m):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m])


def test_frac_reads_strings_and_ints():
    assert la.frac("3/6") == Fraction(1, 2)
    assert la.frac(-4) == Fraction(-4)
    with pytest.raises(TypeError):
        la.frac(0.5)


def test_rref_of_known_matrix():
    m = la.matrix([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    red, pivots = la.rref(m)
    assert pivots == [0, 1]
    assert red[0] == [1, 0, 1]
    assert red[1] == [0, 1, 1]
    assert la.rank(m) == 2


def test_solve_inconsistent_and_bad_shape():
    m = la.matrix([[1, 1], [1, 1]])
    assert la.solve(m, [1, 2]) is None
    with pytest.raises(la.DimensionError):
        la.solve(m, [1, 2, 3])


def test_inverse_singular_is_none():
    assert la.inverse(la.matrix([[1, 2], [2, 4]])) is None
    inv = la.inverse(la.matrix([[2, 1], [1, 1]]))
    assert inv == la.matrix([[1, -1], [-1, 2]])


def test_kron_shape_and_entries():
    a = la.matrix([[1, 2]])
    b = la.matrix([[0, 1], [1, 0]])
    assert la.kron(a, b) == la.matrix([[0, 1, 0, 2], [1, 0, 2, 0]])


@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
def test_rank_matches_sympy(m):
    assert la.rank(m) == to_sympy(m).rank()


@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: matrices(r, c))))
def test_kernel_is_kernel_and_rank_nullity(m):
    cols = len(m[0])
    ker = la.kernel_basis(m, cols)
    assert len(ker) + la.rank(m) == cols
    for v in ker:
        assert not any(la.matvec(m, v))
    if ker:
        assert la.rank(la.from_columns(ker, cols)) == len(ker)


@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_inverse_matches_sympy(m):
    inv = la.inverse(m)
    sm = to_sympy(m)
    if sm.det() == 0:
        assert inv is None
    else:
        assert to_sympy(inv) == sm.inv()
        assert la.matmul(m, inv) == la.identity(len(m))


@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.tuples(matrices(r, c), matrices(c, 1)))))
def test_solve_recovers_consistent_systems(args):
    m, x = args
    b = la.matvec(m, [row[0] for row in x])
    sol = la.solve(m, b)
    assert sol is not None
    assert la.matvec(m, sol) == b
    many = la.solve_many(m, [b, b])
    assert many[0] == sol and many[1] == sol
