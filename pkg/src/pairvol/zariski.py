"""Zariski decomposition of exceptional Q-divisors on a negative-definite graph.

Divisors are passed by their intersection vectors ``L.E_j`` (ordered like
``g.vertices``).  The negative part is found by growing its support: solve
for ``N`` on the current support so that ``(L - N).E_k = 0`` there, then add
every curve that ``L - N`` still dots negatively.  With the component rule
the whole connected component of ``{(L - N).E <= 0}`` around such a curve is
added at once, which usually finishes in one pass.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CertificateFailure
from .graph import DecoratedGraph, intersection_matrix
from .ratcore import dot, solve_symmetric

STRATEGIES = ("component", "naive")


@dataclass(frozen=True)
class ZariskiPair:
    positive: dict  # vertex id -> coefficient of P
    positive_dot: dict  # vertex id -> P.E_j
    negative: dict  # vertex id -> coefficient of N
    support: frozenset

    def neg_p_squared(self) -> Fraction:
        return -sum((self.positive[v] * self.positive_dot[v] for v in self.positive), Fraction(0))

    @property
    def is_zero_positive(self) -> bool:
        return all(x == 0 for x in self.positive_dot.values())


def _grow(g: DecoratedGraph, p_dot: list, support: set, strategy: str) -> set:
    ids = g.ids
    negative = {i for i, x in enumerate(p_dot) if x < 0}
    if strategy == "naive":
        return support | negative
    idx = g.index
    allowed = {i for i, x in enumerate(p_dot) if x <= 0}
    grown = set(support)
    for start in negative:
        if start in grown:
            continue
        stack = [start]
        grown.add(start)
        while stack:
            v = ids[stack.pop()]
            for w in g.neighbors[v]:
                j = idx[w]
                if j in allowed and j not in grown:
                    grown.add(j)
                    stack.append(j)
    return grown


def zariski_decompose(g: DecoratedGraph, L: Sequence, strategy: str = "component") -> ZariskiPair:
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    m = intersection_matrix(g)
    L = [Fraction(x) for x in L]
    n = len(L)
    support: set = set()
    coeffs = [Fraction(0)] * n
    p_dot = list(L)
    while any(x < 0 for x in p_dot):
        support = _grow(g, p_dot, support, strategy)
        order = sorted(support)
        sol = solve_symmetric(m, [L[i] for i in order], order)
        coeffs = [Fraction(0)] * n
        for i, x in zip(order, sol):
            coeffs[i] = x
        n_dot = m.apply(coeffs)
        p_dot = [a - b for a, b in zip(L, n_dot)]

    # certificates
    if any(x < 0 for x in coeffs):
        raise CertificateFailure("negative part has a negative coefficient")
    if any(p_dot[i] != 0 for i in support):
        raise CertificateFailure("positive part does not vanish on the support")
    if any(x < 0 for x in p_dot):
        raise CertificateFailure("positive part is not nef")

    if any(p_dot):
        total = solve_symmetric(m, L)
        p_coeffs = [t - c for t, c in zip(total, coeffs)]
    else:
        p_coeffs = [Fraction(0)] * n
    ids = g.ids
    pair = ZariskiPair(
        positive=dict(zip(ids, p_coeffs)),
        positive_dot=dict(zip(ids, p_dot)),
        negative=dict(zip(ids, coeffs)),
        support=frozenset(ids[i] for i in support),
    )
    if pair.neg_p_squared() < 0:
        raise CertificateFailure("-P.P is negative")
    return pair


def neg_p_squared(g: DecoratedGraph, L: Sequence, strategy: str = "component") -> Fraction:
    return zariski_decompose(g, L, strategy).neg_p_squared()


def self_intersection(g: DecoratedGraph, coeffs: Sequence) -> Fraction:
    return dot(coeffs, intersection_matrix(g).apply(coeffs))
