from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gauss_solve, matrix_rows
from pairvol.graph import intersection_matrix, parse
from pairvol.pairs import log_divisor_vector
from pairvol.zariski import neg_p_squared, self_intersection, zariski_decompose
from strategies import graphs

small_rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)


@st.composite
def graph_and_divisor(draw, max_vertices=6):
    g = draw(graphs(max_vertices=max_vertices, max_arrows=0))
    L = draw(st.lists(small_rationals, min_size=len(g.vertices), max_size=len(g.vertices)))
    return g, L


def subset_search(g, L):
    """Find the negative part by trying every support set."""
    rows = matrix_rows(g)
    n = len(rows)
    for size in range(n + 1):
        for support in combinations(range(n), size):
            coeffs = [Fraction(0)] * n
            if support:
                sub = [[rows[i][j] for j in support] for i in support]
                for i, x in zip(support, gauss_solve(sub, [L[i] for i in support])):
                    coeffs[i] = x
            p_dot = [L[i] - sum(rows[i][j] * coeffs[j] for j in range(n)) for i in range(n)]
            if all(x >= 0 for x in coeffs) and all(x >= 0 for x in p_dot):
                return coeffs
    raise AssertionError("no support set works")


def test_example_cusp_decomposition():
    g = parse("vertex F e=-2\nvertex A e=-2\nvertex B e=-3\nvertex L e=-1\n"
              "edge F A\nedge F B\nedge F L\narrow C at=L c=1\n")
    z = zariski_decompose(g, log_divisor_vector(g))
    assert z.neg_p_squared() == Fraction(1, 6)
    assert z.negative == {"F": 0, "A": Fraction(1, 2), "B": Fraction(1, 3), "L": 0}
    assert z.support == {"A", "B"}


def test_nef_divisor_has_empty_support():
    g = parse("vertex A e=-2\nvertex B e=-2\nedge A B\n")
    z = zariski_decompose(g, [1, 0])
    assert z.support == frozenset() and z.neg_p_squared() == Fraction(2, 3)


def test_anti_nef_divisor_is_all_negative():
    g = parse("vertex A e=-2\nvertex B e=-2\nedge A B\n")
    z = zariski_decompose(g, [-1, -1])
    assert z.is_zero_positive and z.neg_p_squared() == 0
    assert z.negative == {"A": 1, "B": 1}


def test_unknown_strategy():
    g = parse("vertex A e=-2\n")
    with pytest.raises(ValueError):
        zariski_decompose(g, [1], strategy="greedy")


@settings(max_examples=300, deadline=None)
@given(graph_and_divisor(max_vertices=5))
def test_matches_subset_search(case):
    g, L = case
    z = zariski_decompose(g, L)
    assert [z.negative[v] for v in g.ids] == subset_search(g, L)


@settings(max_examples=500, deadline=None)
@given(graph_and_divisor())
def test_growth_rules_agree(case):
    g, L = case
    a = zariski_decompose(g, L, "component")
    b = zariski_decompose(g, L, "naive")
    assert a == b
    assert a.neg_p_squared() >= 0
    m = intersection_matrix(g)
    p = [a.positive[v] for v in g.ids]
    assert m.apply(p) == [a.positive_dot[v] for v in g.ids]
    assert -self_intersection(g, p) == a.neg_p_squared()
    assert all(a.positive_dot[v] == 0 for v in a.support)
    assert all(x >= 0 for x in a.positive_dot.values())
    assert all(a.negative[v] > 0 for v in a.support) or not a.support


@settings(max_examples=300, deadline=None)
@given(graph_and_divisor(), st.data())
def test_subtracting_effective_divisor_raises_value(case, data):
    g, L = case
    n = len(g.vertices)
    d = data.draw(st.lists(st.fractions(min_value=0, max_value=3, max_denominator=4), min_size=n, max_size=n))
    lowered = [a - b for a, b in zip(L, intersection_matrix(g).apply(d))]
    assert neg_p_squared(g, L) <= neg_p_squared(g, lowered)


@settings(max_examples=300, deadline=None)
@given(graph_and_divisor(), st.fractions(min_value=Fraction(1, 9), max_value=10, max_denominator=9))
def test_scaling(case, k):
    g, L = case
    base = zariski_decompose(g, L)
    scaled = zariski_decompose(g, [k * x for x in L])
    assert scaled.negative == {v: k * x for v, x in base.negative.items()}
    assert scaled.positive == {v: k * x for v, x in base.positive.items()}
    assert scaled.neg_p_squared() == k * k * base.neg_p_squared()
