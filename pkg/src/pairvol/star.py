"""Chains and star-shaped graphs.

A chain ``a = (a_1, ..., a_s)`` lists the negated self-intersections from the
curve next to the centre out to the end curve.  ``m/q`` is the continued
fraction ``a_1 - 1/(a_2 - ...)``; in determinant form ``m = det(a_1..a_s)``,
``q = det(a_2..a_s)`` and ``q' = det(a_1..a_{s-1})`` where ``det`` is the
determinant of the negated chain matrix (empty chain: 1).  A single ``-1``
curve therefore has ``m = q = q' = 1``.

For a star with central curve of genus ``g`` and self-intersection ``-d``
and branches ``(m_i, q_i)`` carrying coefficients ``c_i`` at their ends::

    chi   = 2g - 2 + t - sum 1/m_i
    eps   = d - sum q_i/m_i
    chi_C = chi + sum c_i/m_i

and ``-P.P = chi_C^2 / eps`` when ``chi_C > 0`` (else the pair is log
canonical and ``-P.P = 0``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from functools import cached_property, lru_cache
from typing import Sequence

from .errors import BadChain, CertificateFailure, ExcludedGraph, NotLogTerminal, PreconditionViolated
from .graph import Arrow, DecoratedGraph, Vertex, intersection_matrix, is_orbifold_normal
from .pairs import log_divisor_vector
from .ratcore import SymMatrix, solve_symmetric
from .zariski import ZariskiPair


def chain_det(a: Sequence[int]) -> int:
    """Determinant of the negated intersection matrix of a chain."""
    cur, prev = 1, 0
    for x in a:
        cur, prev = x * cur - prev, cur
    return cur


def chain_matrix(a: Sequence[int]) -> SymMatrix:
    s = len(a)
    return SymMatrix(tuple(
        tuple(-a[i] if i == j else (1 if abs(i - j) == 1 else 0) for j in range(s)) for i in range(s)
    ))


@dataclass(frozen=True)
class ChainData:
    a: tuple
    m: int
    q: int
    q_prime: int
    end_cycle: tuple  # D:  D.E_s = -1, zero on the other chain curves
    start_cycle: tuple  # D': D'.E_1 = -1, zero on the other chain curves


def chain_invariants(a: Sequence[int], strict: bool = True) -> ChainData:
    """Continued-fraction data of a chain, with the dual cycles solved exactly.

    ``strict`` rejects a ``-1`` curve inside a longer chain, which a minimal
    resolution never has.  Non-strict mode accepts any chain with negative
    definite matrix; all identities still hold.
    """
    return _chain_invariants(tuple(int(x) for x in a), strict)


@lru_cache(maxsize=4096)
def _chain_invariants(a: tuple, strict: bool) -> ChainData:
    if not a:
        raise BadChain("empty chain")
    if any(x < 1 for x in a):
        raise BadChain(f"chain entries must be >= 1: {a}")
    if strict and len(a) > 1 and 1 in a:
        raise BadChain(f"-1 curve inside a chain of length {len(a)}")
    m, q, qp = chain_det(a), chain_det(a[1:]), chain_det(a[:-1])
    if m <= 0 or q <= 0 or qp <= 0:
        raise BadChain(f"chain {a} is not negative definite")
    s = len(a)
    mat = chain_matrix(a)
    unit_end = [0] * (s - 1) + [-1]
    unit_start = [-1] + [0] * (s - 1)
    d_end = tuple(solve_symmetric(mat, unit_end))
    d_start = tuple(solve_symmetric(mat, unit_start))
    expected = (
        (d_end[0], Fraction(1, m)),
        (d_end[-1], Fraction(qp, m)),
        (d_start[0], Fraction(q, m)),
        (d_start[-1], Fraction(1, m)),
    )
    if any(x != y for x, y in expected):
        raise CertificateFailure(f"cycle coefficients of chain {a} disagree with m, q, q'")
    if m > 1 and (q * qp - 1) % m:
        raise CertificateFailure(f"q q' is not 1 mod m for chain {a}")
    return ChainData(a, m, q, qp, d_end, d_start)


@dataclass(frozen=True)
class Branch:
    vertices: tuple  # ids from the centre outwards
    chain: ChainData
    c: Fraction = Fraction(0)
    arrow: str | None = None
    n: int | None = None  # orbifold weight, when given that way


@dataclass(frozen=True)
class StarShape:
    graph: DecoratedGraph
    center: str
    genus: int
    d: int
    branches: tuple

    @property
    def t(self) -> int:
        return len(self.branches)

    @cached_property
    def chi(self) -> Fraction:
        return 2 * self.genus - 2 + self.t - sum((Fraction(1, b.chain.m) for b in self.branches), Fraction(0))

    @cached_property
    def eps(self) -> Fraction:
        return self.d - sum((Fraction(b.chain.q, b.chain.m) for b in self.branches), Fraction(0))

    def chi_c(self, weights: dict | None = None) -> Fraction:
        """``chi_C``; ``weights`` maps arrow ids to replacement coefficients."""
        total = self.chi
        for b in self.branches:
            c = b.c if weights is None or b.arrow is None else Fraction(weights.get(b.arrow, 0))
            total += c / b.chain.m
        return total


@dataclass(frozen=True)
class ChainShape:
    """The whole graph is a string of rational curves."""

    vertices: tuple


@dataclass(frozen=True)
class NotStar:
    reason: str


def _is_tree(g: DecoratedGraph) -> bool:
    return all(m == 1 for _, _, m in g.edges) and len(g.edges) == len(g.vertices) - 1


def _path_order(g: DecoratedGraph) -> tuple:
    if len(g.vertices) == 1:
        return (g.vertices[0].id,)
    start = next(v.id for v in g.vertices if g.valence(v.id) == 1)
    order = [start]
    prev = None
    while True:
        nxt = [w for w in g.neighbors[order[-1]] if w != prev]
        if not nxt:
            return tuple(order)
        prev = order[-1]
        order.append(nxt[0])


def detect_star(g: DecoratedGraph):
    """Return :class:`StarShape`, :class:`ChainShape` or :class:`NotStar`."""
    if not _is_tree(g):
        return NotStar("graph has a cycle or a multiple edge")
    nodes = [v.id for v in g.vertices if g.valence(v.id) >= 3]
    curved = [v.id for v in g.vertices if v.genus > 0]
    if not nodes:
        if not curved:
            return ChainShape(_path_order(g))
        if len(curved) > 1:
            return NotStar("two curves of positive genus")
        center = curved[0]
    elif len(nodes) == 1:
        center = nodes[0]
        if any(v != center for v in curved):
            return NotStar("positive genus off the centre")
    else:
        return NotStar("more than one node")
    if g.arrows_at(center):
        return NotStar("arrow on the central curve")

    branches = []
    for first in g.neighbors[center]:
        path = [first]
        prev = center
        while True:
            nxt = [w for w in g.neighbors[path[-1]] if w != prev]
            if not nxt:
                break
            prev = path[-1]
            path.append(nxt[0])
        for v in path[:-1]:
            if g.arrows_at(v):
                return NotStar("arrow inside a branch")
        end_arrows = g.arrows_at(path[-1])
        if len(end_arrows) > 1:
            return NotStar("several arrows on one branch end")
        try:
            chain = chain_invariants([-g.vertex(v).self_int for v in path], strict=False)
        except BadChain as exc:
            return NotStar(str(exc))
        if end_arrows:
            arr = end_arrows[0]
            branches.append(Branch(tuple(path), chain, arr.c, arr.id, arr.n))
        else:
            branches.append(Branch(tuple(path), chain))
    centre = g.vertex(center)
    return StarShape(g, center, centre.genus, -centre.self_int, tuple(branches))


def central_cycle(s: StarShape) -> dict:
    """The cycle ``f`` with ``f.E_center = -1`` and ``f.E_j = 0`` elsewhere."""
    g = s.graph
    rhs = [Fraction(-1) if v == s.center else Fraction(0) for v in g.ids]
    return dict(zip(g.ids, solve_symmetric(intersection_matrix(g), rhs)))


def star_pcp(s: StarShape, weights: dict | None = None) -> tuple:
    """Closed-form ``-P.P`` of ``K + E + sum c_i C_i`` and the positive part.

    Returns ``(value, P)`` with ``P`` as vertex coefficients (all zero when
    the pair is log canonical).  The identity ``f.f = -1/eps`` is checked.
    """
    f = central_cycle(s)
    if -f[s.center] != -1 / s.eps:
        raise CertificateFailure("f.f differs from -1/eps")
    chi_c = s.chi_c(weights)
    if chi_c <= 0:
        return Fraction(0), {v: Fraction(0) for v in f}
    return chi_c * chi_c / s.eps, {v: -chi_c * x for v, x in f.items()}


def maximal_strings(g: DecoratedGraph) -> list:
    """Strings of rational valence-<=2 curves running inward from each leaf.

    Each string is returned as a tuple of ids from the leaf inwards; it stops
    before the first curve of valence >= 3 or positive genus.
    """
    out = []
    for v in g.vertices:
        if g.valence(v.id) != 1 or v.genus > 0:
            continue
        path = [v.id]
        prev = None
        while True:
            nxt = [w for w in g.neighbors[path[-1]] if w != prev]
            w = nxt[0]
            if g.valence(w) >= 3 or g.vertex(w).genus > 0:
                break
            prev = path[-1]
            path.append(w)
            if g.valence(w) == 1:
                return []  # the whole graph is a chain
        out.append(tuple(path))
    return out


def fast_negative_part(g: DecoratedGraph) -> ZariskiPair:
    """Negative part of ``K + E + sum c_i C_i`` as ``sum (1 - c_i) D_i``.

    ``D_i`` is the end cycle of the i-th maximal string (``c_i = 0`` for
    strings without an arrow).  Valid for non-star graphs in minimal orbifold
    form whose nonzero coefficients are all at least 1/2.
    """
    if not is_orbifold_normal(g):
        raise PreconditionViolated("graph is not in minimal orbifold form")
    if not isinstance(detect_star(g), NotStar) or len(g.vertices) == 1:
        raise PreconditionViolated("graph is star-shaped or a chain")
    if any(0 < a.c < Fraction(1, 2) for a in g.arrows):
        raise PreconditionViolated("a nonzero coefficient is below 1/2")
    for v in g.vertices:
        contractible = v.self_int == -1 and v.genus == 0 and g.valence(v.id) <= 2
        if contractible and not any(a.c > 0 for a in g.arrows_at(v.id)):
            raise PreconditionViolated(f"{v.id} is a -1 curve without a weighted arrow; resolution is not minimal")
    strings = maximal_strings(g)
    if not strings:
        raise PreconditionViolated("graph is a chain")
    idx = g.index
    coeffs = [Fraction(0)] * len(g.vertices)
    for path in strings:
        leaf_arrows = g.arrows_at(path[0])
        c = leaf_arrows[0].c if leaf_arrows else Fraction(0)
        if c == 1:
            continue
        inward = list(reversed(path))
        data = chain_invariants([-g.vertex(v).self_int for v in inward], strict=False)
        for v, b in zip(inward, data.end_cycle):
            coeffs[idx[v]] += (1 - c) * b
    m = intersection_matrix(g)
    L = log_divisor_vector(g)
    p_dot = [a - b for a, b in zip(L, m.apply(coeffs))]
    support = {i for i, x in enumerate(coeffs) if x != 0}
    if any(x < 0 for x in p_dot) or any(p_dot[i] != 0 for i in support):
        raise CertificateFailure("string cycles do not give the negative part")
    total = solve_symmetric(m, L)
    ids = g.ids
    return ZariskiPair(
        positive=dict(zip(ids, (t - c for t, c in zip(total, coeffs)))),
        positive_dot=dict(zip(ids, p_dot)),
        negative=dict(zip(ids, coeffs)),
        support=frozenset(ids[i] for i in support),
    )


def lct_star(s: StarShape) -> Fraction:
    """Closed-form threshold of the reduced curve formed by the nonzero arrows."""
    if s.genus > 0 or s.chi >= 0:
        raise NotLogTerminal("star is not a log terminal singularity")
    marked = [b for b in s.branches if b.arrow is not None and b.c != 0]
    if not marked:
        return Fraction(1)
    if s.t == 3 and len(marked) == 1:
        others = [b for b in s.branches if b is not marked[0]]
        if all(b.chain.a == (2,) for b in others):
            raise ExcludedGraph("two single -2 branches with the curve on the third")
    value = -s.chi / sum((Fraction(1, b.chain.m) for b in marked), Fraction(0))
    return min(Fraction(1), value)


def hj_expansion(m: int, q: int) -> tuple:
    """Entries ``a_j >= 2`` with ``m/q = a_1 - 1/(a_2 - ...)``; ``(1,)`` for ``m = 1``."""
    if m == 1:
        return (1,)
    if not 0 < q < m or gcd(m, q) != 1:
        raise BadChain(f"need 0 < q < m coprime, got m={m}, q={q}")
    out = []
    while q:
        a = -(-m // q)
        out.append(a)
        m, q = q, a * q - m
    return tuple(out)


def star_graph(d: int, branches: Sequence, genus: int = 0) -> DecoratedGraph:
    """Build a star from ``(chain, weight)`` pairs.

    ``chain`` lists negated self-intersections from the centre outwards;
    ``weight`` is ``None`` (no arrow), an ``int`` orbifold weight ``n`` or a
    :class:`~fractions.Fraction` coefficient.  Vertex ids are ``F`` for the
    centre and ``b<i>_<j>`` on branch ``i``; arrows are ``C<i>``.
    """
    vertices = [Vertex("F", -d, genus)]
    edges = []
    arrows = []
    for i, (chain, weight) in enumerate(branches):
        prev = "F"
        for j, a in enumerate(chain):
            vid = f"b{i}_{j}"
            vertices.append(Vertex(vid, -a))
            edges.append((prev, vid, 1))
            prev = vid
        if weight is None:
            continue
        if isinstance(weight, int):
            arrows.append(Arrow.orbifold(f"C{i}", prev, weight))
        else:
            arrows.append(Arrow(f"C{i}", prev, Fraction(weight)))
    return DecoratedGraph(tuple(vertices), tuple(edges), tuple(arrows))
