"""Decorated resolution graphs.

A :class:`DecoratedGraph` is the weighted dual graph of a good resolution
(vertices are exceptional curves with self-intersection and genus, edges carry
intersection multiplicities) together with arrows for the proper transforms of
curve branches, each with a rational weight ``c`` in [0, 1].  Orbifold arrows
are written ``n=<int>`` and mean ``c = 1/n``; the ``n`` is kept for reporting.

Text format (one item per line, ``#`` starts a comment)::

    vertex <id> e=<int> g=<uint>
    edge <id1> <id2> [m=<uint>]
    arrow <id> at=<vertex> (c=<int>[/<uint>] | n=<uint>)
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import (
    BadLocus,
    ExceptionalCase,
    GraphSyntaxError,
    InvalidGraph,
    NotNegativeDefinite,
    UnknownVertex,
    WeightOutOfRange,
)
from .ratcore import SymMatrix, fmt_rat, is_negative_definite, parse_rat, solve_symmetric

QDivisor = dict  # vertex id -> Fraction


@dataclass(frozen=True)
class Vertex:
    id: str
    self_int: int
    genus: int = 0


@dataclass(frozen=True)
class Arrow:
    id: str
    at: str
    c: Fraction
    n: int | None = None

    @classmethod
    def orbifold(cls, id, at, n):
        if n < 1:
            raise WeightOutOfRange(f"arrow {id}: orbifold weight must be >= 1, got {n}")
        return cls(id, at, Fraction(1, n), n)


@dataclass(frozen=True)
class DecoratedGraph:
    vertices: tuple
    edges: tuple = ()  # (id1, id2, multiplicity)
    arrows: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        seen = set()
        for v in self.vertices:
            if v.id in seen:
                raise InvalidGraph(f"duplicate vertex id {v.id!r}")
            if v.genus < 0:
                raise InvalidGraph(f"vertex {v.id}: negative genus")
            seen.add(v.id)
        pairs = set()
        for a, b, m in self.edges:
            for x in (a, b):
                if x not in seen:
                    raise UnknownVertex(f"edge refers to unknown vertex {x!r}")
            if a == b:
                raise InvalidGraph(f"loop at vertex {a!r}")
            if m < 1:
                raise InvalidGraph(f"edge {a}-{b}: multiplicity must be >= 1")
            key = frozenset((a, b))
            if key in pairs:
                raise InvalidGraph(f"edge {a}-{b} listed twice; use m=")
            pairs.add(key)
        for arr in self.arrows:
            if arr.id in seen:
                raise InvalidGraph(f"duplicate id {arr.id!r}")
            seen.add(arr.id)
            if not any(v.id == arr.at for v in self.vertices):
                raise UnknownVertex(f"arrow {arr.id} at unknown vertex {arr.at!r}")
            if not 0 <= arr.c <= 1:
                raise WeightOutOfRange(f"arrow {arr.id}: weight {fmt_rat(arr.c)} not in [0, 1]")

    # -- lookup helpers ---------------------------------------------------

    @cached_property
    def index(self) -> dict:
        return {v.id: i for i, v in enumerate(self.vertices)}

    @property
    def ids(self) -> list:
        return [v.id for v in self.vertices]

    def vertex(self, vid) -> Vertex:
        try:
            return self.vertices[self.index[vid]]
        except KeyError:
            raise UnknownVertex(vid) from None

    @cached_property
    def neighbors(self) -> dict:
        nb = {v.id: {} for v in self.vertices}
        for a, b, m in self.edges:
            nb[a][b] = m
            nb[b][a] = m
        return nb

    def valence(self, vid) -> int:
        return sum(self.neighbors[vid].values())

    def arrows_at(self, vid) -> list:
        return [a for a in self.arrows if a.at == vid]

    def arrow(self, aid) -> Arrow:
        for a in self.arrows:
            if a.id == aid:
                return a
        raise BadLocus(f"no arrow {aid!r}")

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        start = self.vertices[0].id
        seen = {start}
        stack = [start]
        while stack:
            for w in self.neighbors[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def with_weights(self, weights: Mapping) -> "DecoratedGraph":
        """Copy with arrow weights replaced (``arrow id -> c``); drops ``n``."""
        arrows = []
        for a in self.arrows:
            if a.id in weights:
                a = Arrow(a.id, a.at, Fraction(weights[a.id]))
            arrows.append(a)
        return replace(self, arrows=tuple(arrows))

    def without_arrows(self) -> "DecoratedGraph":
        return replace(self, arrows=())


def intersection_matrix(g: DecoratedGraph) -> SymMatrix:
    idx = g.index
    rows = [[0] * len(g.vertices) for _ in g.vertices]
    for i, v in enumerate(g.vertices):
        rows[i][i] = v.self_int
    for a, b, m in g.edges:
        i, j = idx[a], idx[b]
        rows[i][j] += m
        rows[j][i] += m
    return SymMatrix(tuple(tuple(r) for r in rows))


def validate(g: DecoratedGraph) -> DecoratedGraph:
    """Check the global conditions a resolution graph must meet."""
    if not g.vertices:
        raise InvalidGraph("graph has no vertices")
    for v in g.vertices:
        if v.self_int > -1:
            raise InvalidGraph(f"vertex {v.id}: self-intersection {v.self_int} must be <= -1")
    if not g.is_connected():
        raise InvalidGraph("graph is not connected")
    ok, witness = is_negative_definite(intersection_matrix(g))
    if not ok:
        raise NotNegativeDefinite(witness)
    return g


def canonical_vector(g: DecoratedGraph) -> list:
    """``K.E_j`` by adjunction: ``2 g_j - 2 - E_j.E_j``."""
    return [Fraction(2 * v.genus - 2 - v.self_int) for v in g.vertices]


def boundary_vector(g: DecoratedGraph) -> list:
    """``(K + E).E_j = 2 g_j - 2 + valence_j``."""
    return [Fraction(2 * v.genus - 2 + g.valence(v.id)) for v in g.vertices]


def arrow_vector(g: DecoratedGraph, weights: Mapping | None = None) -> list:
    """``(sum c_i C_i).E_j``; ``weights`` overrides the arrows' own ``c``."""
    out = [Fraction(0)] * len(g.vertices)
    for a in g.arrows:
        c = a.c if weights is None else Fraction(weights.get(a.id, 0))
        out[g.index[a.at]] += c
    return out


def class_of(g: DecoratedGraph, rhs: Sequence) -> QDivisor:
    """The exceptional Q-divisor ``D`` with ``D.E_j = rhs_j`` for all ``j``."""
    x = solve_symmetric(intersection_matrix(g), rhs)
    return dict(zip(g.ids, x))


# -- text format -------------------------------------------------------------


def _kv(token, lineno, key):
    k, sep, val = token.partition("=")
    if not sep or k != key:
        raise GraphSyntaxError(lineno, f"expected {key}=..., got {token!r}")
    return val


def _int(text, lineno, what, minimum=None):
    try:
        v = int(text)
    except ValueError:
        raise GraphSyntaxError(lineno, f"{what}: not an integer: {text!r}") from None
    if minimum is not None and v < minimum:
        raise GraphSyntaxError(lineno, f"{what} must be >= {minimum}")
    return v


def parse(text: str) -> DecoratedGraph:
    vertices, edges, arrows = [], [], []
    vids = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "vertex":
            if len(tok) not in (3, 4):
                raise GraphSyntaxError(lineno, "usage: vertex <id> e=<int> [g=<uint>]")
            e = _int(_kv(tok[2], lineno, "e"), lineno, "self-intersection")
            genus = _int(_kv(tok[3], lineno, "g"), lineno, "genus", 0) if len(tok) == 4 else 0
            vertices.append(Vertex(tok[1], e, genus))
            vids.add(tok[1])
        elif kind == "edge":
            if len(tok) not in (3, 4):
                raise GraphSyntaxError(lineno, "usage: edge <id1> <id2> [m=<uint>]")
            m = _int(_kv(tok[3], lineno, "m"), lineno, "multiplicity", 1) if len(tok) == 4 else 1
            for x in tok[1:3]:
                if x not in vids:
                    raise UnknownVertex(f"line {lineno}: unknown vertex {x!r}")
            edges.append((tok[1], tok[2], m))
        elif kind == "arrow":
            if len(tok) != 4:
                raise GraphSyntaxError(lineno, "usage: arrow <id> at=<vertex> (c=<rat> | n=<uint>)")
            at = _kv(tok[2], lineno, "at")
            if at not in vids:
                raise UnknownVertex(f"line {lineno}: unknown vertex {at!r}")
            key, _, val = tok[3].partition("=")
            if key == "n":
                n = _int(val, lineno, "orbifold weight")
                if n < 1:
                    raise WeightOutOfRange(f"line {lineno}: orbifold weight must be >= 1")
                arrows.append(Arrow.orbifold(tok[1], at, n))
            elif key == "c":
                try:
                    c = parse_rat(val)
                except ValueError:
                    raise GraphSyntaxError(lineno, f"bad coefficient {val!r}") from None
                if not 0 <= c <= 1:
                    raise WeightOutOfRange(f"line {lineno}: coefficient {val} not in [0, 1]")
                arrows.append(Arrow(tok[1], at, c))
            else:
                raise GraphSyntaxError(lineno, f"expected c= or n=, got {tok[3]!r}")
        else:
            raise GraphSyntaxError(lineno, f"unknown directive {kind!r}")
    try:
        return DecoratedGraph(tuple(vertices), tuple(edges), tuple(arrows))
    except InvalidGraph as exc:
        raise GraphSyntaxError(0, str(exc)) from None


def serialize(g: DecoratedGraph) -> str:
    lines = [f"vertex {v.id} e={v.self_int} g={v.genus}" for v in g.vertices]
    for a, b, m in g.edges:
        lines.append(f"edge {a} {b}" + (f" m={m}" if m != 1 else ""))
    for a in g.arrows:
        weight = f"n={a.n}" if a.n is not None else f"c={fmt_rat(a.c)}"
        lines.append(f"arrow {a.id} at={a.at} {weight}")
    return "\n".join(lines) + "\n"


def load(path) -> DecoratedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- blow-ups ----------------------------------------------------------------


@dataclass(frozen=True)
class SmoothPoint:
    """A point of ``E_vertex`` on no other curve of ``E`` and on no arrow."""

    vertex: str


@dataclass(frozen=True)
class DoublePoint:
    a: str
    b: str


@dataclass(frozen=True)
class ArrowPoint:
    arrow: str


def _fresh_id(g: DecoratedGraph, stem="x"):
    taken = {v.id for v in g.vertices} | {a.id for a in g.arrows}
    k = len(g.vertices)
    while f"{stem}{k}" in taken:
        k += 1
    return f"{stem}{k}"


def blow_up(g: DecoratedGraph, locus, new_id: str | None = None) -> DecoratedGraph:
    """Blow up a point of ``E``; the new ``-1`` curve is appended last."""
    new = new_id or _fresh_id(g)
    if new in g.index or any(a.id == new for a in g.arrows):
        raise BadLocus(f"id {new!r} already in use")
    arrows = list(g.arrows)
    edges = list(g.edges)
    if isinstance(locus, SmoothPoint):
        touched = [locus.vertex]
        g.vertex(locus.vertex)
    elif isinstance(locus, ArrowPoint):
        arr = g.arrow(locus.arrow)
        touched = [arr.at]
        arrows = [replace(a, at=new) if a.id == arr.id else a for a in arrows]
    elif isinstance(locus, DoublePoint):
        a, b = locus.a, locus.b
        m = g.neighbors.get(a, {}).get(b)
        if not m:
            raise BadLocus(f"{a} and {b} do not meet")
        touched = [a, b]
        edges = []
        for x, y, mult in g.edges:
            if {x, y} == {a, b}:
                if mult > 1:
                    edges.append((x, y, mult - 1))
            else:
                edges.append((x, y, mult))
    else:
        raise BadLocus(f"unknown locus {locus!r}")
    vertices = [Vertex(v.id, v.self_int - 1, v.genus) if v.id in touched else v for v in g.vertices]
    vertices.append(Vertex(new, -1, 0))
    edges.extend((t, new, 1) for t in touched)
    out = DecoratedGraph(tuple(vertices), tuple(edges), tuple(arrows))
    if is_negative_definite(intersection_matrix(g))[0]:
        # blowing up keeps the form negative definite; anything else is a bug
        assert is_negative_definite(intersection_matrix(out))[0], "blow-up broke definiteness"
    return out


def is_orbifold_normal(g: DecoratedGraph) -> bool:
    return not _violations(g)


def _violations(g: DecoratedGraph) -> list:
    """Arrows that must be moved by a blow-up, in a deterministic order."""
    bad = []
    for v in g.vertices:
        here = g.arrows_at(v.id)
        if here and (len(here) > 1 or g.valence(v.id) >= 2 or v.genus > 0):
            bad.extend(here)
    return bad


def normalize_minimal_orbifold(g: DecoratedGraph) -> DecoratedGraph:
    """Blow up arrow points until every arrow sits alone on a rational end curve.

    An end curve has valence at most 1.  The lone curve carrying exactly two
    arrows has no minimal such resolution and raises :class:`ExceptionalCase`.
    """
    if len(g.vertices) == 1 and len(g.arrows) == 2 and g.vertices[0].genus == 0:
        raise ExceptionalCase("one exceptional curve meeting two arrows")
    while True:
        bad = _violations(g)
        if not bad:
            return g
        g = blow_up(g, ArrowPoint(bad[0].id), new_id=_fresh_id(g, "o"))


def relabel_arrows(g: DecoratedGraph, arrows: Iterable[Arrow]) -> DecoratedGraph:
    return replace(g, arrows=tuple(arrows))


def random_locus(g: DecoratedGraph, rng):
    """A uniformly chosen kind of blow-up centre, then a uniform centre of that kind."""
    kinds = ["smooth"]
    if g.edges:
        kinds.append("double")
    if g.arrows:
        kinds.append("arrow")
    kind = rng.choice(kinds)
    if kind == "smooth":
        return SmoothPoint(rng.choice(g.ids))
    if kind == "double":
        a, b, _ = rng.choice(g.edges)
        return DoublePoint(a, b)
    return ArrowPoint(rng.choice(g.arrows).id)


def random_blow_ups(g: DecoratedGraph, rng, steps: int) -> DecoratedGraph:
    for _ in range(steps):
        g = blow_up(g, random_locus(g, rng))
    return g
