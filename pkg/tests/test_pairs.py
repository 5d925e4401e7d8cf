import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pairvol.errors import NotLogTerminal, ZeroCoefficient
from pairvol.graph import ArrowPoint, DoublePoint, SmoothPoint, blow_up, parse, random_blow_ups, random_locus
from pairvol.pairs import (
    Classification,
    classify,
    discrepancies,
    drop_zero_arrows,
    lct,
    opposite,
    pcp,
    report,
    volume,
)
from strategies import graphs, stars

positive_coefficients = st.builds(Fraction, st.integers(1, 12), st.integers(1, 12)).filter(lambda c: c <= 1)

CUSP = parse("vertex F e=-2\nvertex A e=-2\nvertex B e=-3\nvertex L e=-1\n"
             "edge F A\nedge F B\nedge F L\narrow C at=L c=1\n")


def test_cusp_values():
    assert discrepancies(CUSP) == {"F": -2, "A": -1, "B": -1, "L": -2}
    assert pcp(CUSP) == Fraction(1, 6)
    assert classify(CUSP) is Classification.NOT_LOG_CANONICAL
    assert lct(CUSP) == Fraction(5, 6)
    at_threshold = CUSP.with_weights({"C": Fraction(5, 6)})
    assert discrepancies(at_threshold) == {"F": -1, "A": Fraction(-1, 2), "B": Fraction(-2, 3), "L": Fraction(-5, 6)}
    assert classify(at_threshold) is Classification.LOG_CANONICAL


def test_cusp_pcp_quadratic_in_coefficient():
    # below the threshold the pair is log canonical; above it -P.P = 6 (c - 5/6)^2
    for k in range(0, 61):
        c = Fraction(k, 60)
        expected = 6 * (c - Fraction(5, 6)) ** 2 if c > Fraction(5, 6) else 0
        assert pcp(CUSP, {"C": c}) == expected


def test_rational_double_points_are_log_terminal():
    a3 = parse("vertex A e=-2\nvertex B e=-2\nvertex C e=-2\nedge A B\nedge B C\n")
    assert discrepancies(a3) == {"A": 0, "B": 0, "C": 0}
    assert classify(a3) is Classification.LOG_TERMINAL
    assert pcp(a3) == 0


def test_simple_elliptic_is_log_canonical_not_terminal():
    g = parse("vertex E e=-3 g=1\n")
    assert discrepancies(g) == {"E": -1}
    assert classify(g) is Classification.LOG_CANONICAL
    with pytest.raises(NotLogTerminal):
        lct(g)


def test_v237():
    g = parse("vertex F e=-1\nvertex A e=-2\nvertex B e=-3\nvertex C e=-7\nedge F A\nedge F B\nedge F C\n")
    assert pcp(g) == Fraction(1, 42)
    assert volume(g) == Fraction(1, 42)


def test_volume_zero_coefficient():
    g = parse("vertex E e=-1\narrow C1 at=E c=0\narrow C2 at=E c=1/2\narrow C3 at=E c=1/2\n")
    with pytest.raises(ZeroCoefficient):
        volume(g)
    assert volume(g, drop_zero=True) == volume(drop_zero_arrows(g))


def test_opposite_swaps_coefficients():
    g = parse("vertex E e=-1\narrow C at=E n=3\n")
    assert opposite(g).arrows[0].c == Fraction(2, 3)


def test_three_lines():
    g = parse("vertex E e=-1\narrow C1 at=E c=1\narrow C2 at=E c=1\narrow C3 at=E c=1\n")
    assert lct(g) == Fraction(2, 3)
    assert lct(g, normalize=False) == Fraction(2, 3)
    r = report(g)
    assert r.classification is Classification.NOT_LOG_CANONICAL and r.lct == Fraction(2, 3)
    assert r.pcp == pcp(g)


@settings(max_examples=300, deadline=None)
@given(graphs(genus=False), st.integers(0, 2**32 - 1))
def test_blow_up_discrepancy_calculus(g, seed):
    rng = random.Random(seed)
    locus = random_locus(g, rng)
    h = blow_up(g, locus, "new")
    a = discrepancies(g)
    b = discrepancies(h)
    assert all(b[v] == a[v] for v in a)
    if isinstance(locus, SmoothPoint):
        expected = a[locus.vertex] + 1
    elif isinstance(locus, DoublePoint):
        expected = a[locus.a] + a[locus.b] + 1
    else:
        arrow = g.arrow(locus.arrow)
        assert isinstance(locus, ArrowPoint)
        expected = a[arrow.at] + 1 - arrow.c
    assert b["new"] == expected


@settings(max_examples=500, deadline=None)
@given(graphs(c=positive_coefficients), st.integers(0, 2**32 - 1), st.integers(1, 5))
def test_pcp_and_volume_survive_blow_ups(g, seed, steps):
    h = random_blow_ups(g, random.Random(seed), steps)
    assert pcp(h) == pcp(g)
    assert volume(h) == volume(g)
    assert classify(h) == classify(g)


@settings(max_examples=300, deadline=None)
@given(graphs(max_arrows=4), st.data())
def test_lower_coefficients_lower_pcp(g, data):
    lowered = {a.id: a.c * data.draw(st.fractions(min_value=0, max_value=1, max_denominator=7)) for a in g.arrows}
    assert pcp(g, lowered) <= pcp(g)


def _grid_check(g):
    curve = [a.id for a in g.arrows if a.c != 0]
    threshold = lct(g, normalize=False)
    grid = sorted({Fraction(k, 50) for k in range(51)} | {threshold})
    values = [pcp(g, {a: e for a in curve}) for e in grid]
    assert values == sorted(values)
    for e, v in zip(grid, values):
        assert (v == 0) == (e <= threshold)


@settings(max_examples=200, deadline=None)
@given(graphs(genus=False, c=positive_coefficients, max_vertices=5))
def test_threshold_grid_random(g):
    try:
        _grid_check(g)
    except NotLogTerminal:
        assume(False)


@settings(max_examples=200, deadline=None)
@given(stars(max_genus=0, max_t=4, c=positive_coefficients))
def test_threshold_grid_stars(g):
    try:
        _grid_check(g)
    except NotLogTerminal:
        assume(False)
