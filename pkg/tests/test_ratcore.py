from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_det
from pairvol.errors import SingularSystem
from pairvol.ratcore import (
    SymMatrix,
    dot,
    fmt_rat,
    is_negative_definite,
    leading_minors,
    parse_rat,
    solve_symmetric,
)


@st.composite
def symmetric(draw, max_order=8, lo=-6, hi=6):
    n = draw(st.integers(1, max_order))
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = draw(st.integers(lo, hi))
    return SymMatrix(tuple(map(tuple, rows)))


@st.composite
def definite(draw, max_order=7):
    m = draw(symmetric(max_order, -2, 2))
    n = m.order
    shift = sum(abs(m[i, j]) for i in range(n) for j in range(n)) + 1
    return SymMatrix(tuple(tuple(m[i, j] - (shift if i == j else 0) for j in range(n)) for i in range(n)))


def test_format_and_parse():
    assert fmt_rat(Fraction(6, 4)) == "3/2"
    assert fmt_rat(Fraction(-4, 2)) == "-2"
    assert parse_rat("-10/4") == Fraction(-5, 2)
    assert parse_rat("7") == 7
    with pytest.raises(ValueError):
        parse_rat("1/0")


def test_singular_system():
    m = SymMatrix(((1, 1), (1, 1)))
    with pytest.raises(SingularSystem):
        solve_symmetric(m, [1, 2])


def test_affine_e8_witness():
    # -2 curves on the affine E8 diagram: a star with arms of 1, 2 and 5 curves
    edges = [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6), (6, 7), (7, 8)]
    rows = [[-2 if i == j else 0 for j in range(9)] for i in range(9)]
    for a, b in edges:
        rows[a][b] = rows[b][a] = 1
    ok, witness = is_negative_definite(SymMatrix(tuple(map(tuple, rows))))
    assert not ok and witness == 9


@settings(max_examples=200, deadline=None)
@given(symmetric())
def test_leading_minors_match_brute_force(m):
    n = m.order
    expected = [brute_det([[m[i, j] for j in range(k)] for i in range(k)]) for k in range(1, n + 1)]
    if 0 in expected:
        expected = expected[: expected.index(0) + 1]  # elimination cannot continue past a zero minor
    assert leading_minors(m) == expected
    ok, witness = is_negative_definite(m)
    alternating = [(-1) ** k * d > 0 for k, d in enumerate(expected, start=1)]
    assert ok == (all(alternating) and len(expected) == n)
    if not ok:
        assert witness == alternating.index(False) + 1


@settings(max_examples=200, deadline=None)
@given(definite(), st.data())
def test_solve_reproduces_rhs(m, data):
    b = data.draw(st.lists(st.fractions(max_denominator=20), min_size=m.order, max_size=m.order))
    x = solve_symmetric(m, b)
    assert m.apply(x) == b


@settings(max_examples=200, deadline=None)
@given(definite(), st.data())
def test_principal_solve(m, data):
    n = m.order
    index = sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1)))
    b = data.draw(st.lists(st.integers(-5, 5), min_size=len(index), max_size=len(index)))
    x = solve_symmetric(m, b, index)
    assert m.principal(index).apply(x) == b
    assert dot(x, m.principal(index).apply(x)) <= 0
