"""Exact rational linear algebra: rref, nullspaces, primitive vectors."""

from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from walkgroups.qlinalg import (
    integer_nullspace,
    left_integer_kernel,
    nullspace,
    primitive_integer_vector,
    rref,
)

small_fracs = st.fractions(min_value=-5, max_value=5)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_cols).flatmap(
        lambda nc: st.lists(
            st.lists(small_fracs, min_size=nc, max_size=nc),
            min_size=1, max_size=max_rows))


@given(matrices())
@settings(max_examples=100)
def test_nullspace_vectors_annihilate(rows):
    ncols = len(rows[0])
    for vec in nullspace(rows, ncols):
        for row in rows:
            assert sum(a * b for a, b in zip(row, vec)) == 0


@given(matrices())
@settings(max_examples=100)
def test_rank_nullity(rows):
    ncols = len(rows[0])
    _, pivots = rref(rows)
    assert len(pivots) + len(nullspace(rows, ncols)) == ncols


def test_rref_identity():
    red, pivots = rref([[F(2), F(0)], [F(0), F(3)]])
    assert red == [[1, 0], [0, 1]]
    assert pivots == [0, 1]


@given(st.lists(small_fracs, min_size=1, max_size=6))
def test_primitive_integer_vector(vec):
    ints = primitive_integer_vector(vec)
    nonzero = [v for v in ints if v != 0]
    if not any(x != 0 for x in vec):
        assert nonzero == []
        return
    # parallel to the input: cross-ratios match on nonzero entries
    i = next(k for k, x in enumerate(vec) if x != 0)
    scale = F(ints[i]) / vec[i]
    assert all(F(ints[k]) == vec[k] * scale for k in range(len(vec)))
    assert nonzero[0] > 0
    from math import gcd
    g = 0
    for v in nonzero:
        g = gcd(g, abs(v))
    assert g == 1


def test_left_kernel_known():
    # rows of [1, s1, s2] for the four-step model E/W/SE/NW: kernel encodes
    # the multiplicative relation w(1,0) w(-1,0) = w(1,-1) w(-1,1)
    rows = [
        [F(1), F(1), F(0)],
        [F(1), F(-1), F(0)],
        [F(1), F(1), F(-1)],
        [F(1), F(-1), F(1)],
    ]
    basis = left_integer_kernel(rows)
    assert len(basis) == 1
    c = basis[0]
    for j in range(3):
        assert sum(c[i] * rows[i][j] for i in range(4)) == 0
    assert sorted(map(abs, c)) == [1, 1, 1, 1]


@given(matrices())
@settings(max_examples=60)
def test_left_kernel_annihilates(rows):
    for c in left_integer_kernel(rows):
        for j in range(len(rows[0])):
            assert sum(c[i] * rows[i][j] for i in range(len(rows))) == 0
