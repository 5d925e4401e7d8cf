"""Orbifold pairs of volume zero: structural recognition and finite lists.

``match_case`` recognises the graph shapes that carry volume-zero orbifold
pairs and labels them:

* ``Chain``: a string of rational curves with weights on the ends;
* ``DType``: the D-shaped graph of ``-2`` curves with a weighted curve on the
  end of the long arm;
* ``TwoCenter``: two trivalent rational nodes, each carrying two ends that
  are either ``-1`` curves with weight 2 or bare ``-2`` curves, joined by a
  string;
* ``Star4``: four branches with ``n_i m_i = 2``;
* ``Star3``: three branches whose products ``k_i = n_i m_i`` satisfy
  ``sum 1/k_i >= 1``.

Recognition works on a contracted copy of the minimal orbifold resolution:
``-1`` curves that carry no weighted curve are blown down first, so slightly
non-minimal inputs are still labelled.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from fractions import Fraction
from importlib import resources
from itertools import combinations_with_replacement, product

from .errors import (
    ClassificationMismatch,
    ExceptionalCase,
    OutsideClassification,
    PreconditionViolated,
    UnknownFixture,
)
from .graph import Arrow, DecoratedGraph, Vertex, normalize_minimal_orbifold, parse
from .pairs import volume
from .ratcore import fmt_rat
from .star import ChainShape, NotStar, StarShape, chain_det, detect_star, star_graph

CHAIN = "Chain"
DTYPE = "DType"
TWO_CENTER = "TwoCenter"
STAR4 = "Star4"
STAR3 = "Star3"
NOT_VOLUME_ZERO = "NotVolumeZero"

TWO_CENTER_WORDS = ("1111", "1112", "1122", "1212", "1222", "2222")


@dataclass(frozen=True)
class Vol0Case:
    label: str
    parameters: tuple = ()  # (m_i, n_i) per branch or end, sorted
    word: str | None = None
    volume: Fraction | None = None

    @property
    def is_volume_zero(self) -> bool:
        return self.label != NOT_VOLUME_ZERO

    def describe(self) -> str:
        parts = [" ".join(f"{m}:{n}" for m, n in self.parameters)]
        if self.word:
            parts.append(f"word={self.word}")
        return "; ".join(p for p in parts if p)


def orbifold_weight(a: Arrow) -> int:
    if a.n is not None:
        return a.n
    if a.c > 0 and a.c.numerator == 1:
        return a.c.denominator
    raise PreconditionViolated(f"arrow {a.id} has coefficient {fmt_rat(a.c)}, not of the form 1/n")


# -- private blow-downs ------------------------------------------------------


def _contract(g: DecoratedGraph) -> DecoratedGraph:
    """Blow down ``-1`` curves that carry no weighted curve, until none is left.

    A ``-1`` end curve carrying a single weighted curve is also blown down
    when its neighbour is a bare rational curve of valence 2, since the
    weighted curve then meets that neighbour transversally at an end.
    Arrows of weight ``n = 1`` are treated as absent throughout.
    """
    while True:
        step = _contract_once(g)
        if step is None:
            return g
        g = step


def _contract_once(g: DecoratedGraph):
    if len(g.vertices) == 1:
        return None
    effective = {a.at for a in g.arrows if orbifold_weight(a) >= 2}
    for v in g.vertices:
        if v.self_int != -1 or v.genus:
            continue
        nb = g.neighbors[v.id]
        val = g.valence(v.id)
        eff_here = [a for a in g.arrows_at(v.id) if orbifold_weight(a) >= 2]
        if not eff_here and val == 1:
            return _blow_down(g, v.id)
        if not eff_here and val == 2 and len(nb) == 2:
            x, y = nb
            if y not in g.neighbors[x]:
                return _blow_down(g, v.id)
        if len(eff_here) == 1 and val == 1:
            (w,) = nb
            wv = g.vertex(w)
            if g.valence(w) == 2 and wv.genus == 0 and w not in effective:
                return _blow_down(g, v.id, arrow_to=w)
    return None


def _blow_down(g: DecoratedGraph, vid: str, arrow_to: str | None = None) -> DecoratedGraph:
    nb = list(g.neighbors[vid])
    vertices = tuple(
        Vertex(v.id, v.self_int + 1, v.genus) if v.id in nb else v for v in g.vertices if v.id != vid
    )
    edges = [e for e in g.edges if vid not in e[:2]]
    if len(nb) == 2:
        edges.append((nb[0], nb[1], 1))
    arrows = []
    for a in g.arrows:
        if a.at != vid:
            arrows.append(a)
        elif arrow_to is not None and orbifold_weight(a) >= 2:
            arrows.append(replace(a, at=arrow_to))
    return DecoratedGraph(vertices, tuple(edges), tuple(arrows))


# -- recognition ---------------------------------------------------------------


def star3_family(ks) -> int | None:
    """Index (1-4) of the three-branch family containing ``ks``, else ``None``."""
    a, b, c = sorted(ks)
    if a < 2:
        return None
    if a == 2 and b == 2:
        return 1
    if a == 2 and b == 3 and 3 <= c <= 6:
        return 2
    if (a, b, c) == (2, 4, 4):
        return 3
    if (a, b, c) == (3, 3, 3):
        return 4
    return None


def _branch_data(s: StarShape) -> list:
    out = []
    for b in s.branches:
        n = orbifold_weight(s.graph.arrow(b.arrow)) if b.arrow is not None else 1
        out.append((b.chain.m, n))
    return out


def _end_digit(g: DecoratedGraph, leaf: str) -> str | None:
    """``1`` for a ``-1`` end with weight 2, ``2`` for a bare ``-2`` end."""
    v = g.vertex(leaf)
    if v.genus or g.valence(leaf) != 1:
        return None
    weights = [orbifold_weight(a) for a in g.arrows_at(leaf)]
    eff = [n for n in weights if n >= 2]
    if v.self_int == -1 and eff == [2]:
        return "1"
    if v.self_int == -2 and not eff:
        return "2"
    return None


def _two_center(g: DecoratedGraph):
    if any(m != 1 for _, _, m in g.edges) or len(g.edges) != len(g.vertices) - 1:
        return None
    if any(v.genus for v in g.vertices):
        return None
    nodes = [v.id for v in g.vertices if g.valence(v.id) >= 3]
    if len(nodes) != 2 or any(g.valence(v) != 3 for v in nodes):
        return None
    eff_at = {a.at for a in g.arrows if orbifold_weight(a) >= 2}
    pairs = []
    for node in nodes:
        if node in eff_at:
            return None
        leaves = [w for w in g.neighbors[node] if g.valence(w) == 1]
        if len(leaves) != 2:
            return None
        digits = sorted(_end_digit(g, w) or "x" for w in leaves)
        if "x" in digits:
            return None
        pairs.append("".join(digits))
    # the connecting string must be bare
    for v in g.vertices:
        if v.id not in nodes and g.valence(v.id) == 2 and v.id in eff_at:
            return None
    return "".join(sorted(pairs))


def _is_dtype(s: StarShape) -> bool:
    if s.t != 3 or s.genus or s.d != 2:
        return False
    g = s.graph
    shorts = [b for b in s.branches if b.chain.a == (2,) and (b.arrow is None or _weight(g, b) == 1)]
    for long in s.branches:
        rest = [b for b in s.branches if b is not long]
        if all(b in shorts for b in rest) and long.arrow is not None and set(long.chain.a) == {2}:
            return True
    return False


def _weight(g, branch) -> int:
    return orbifold_weight(g.arrow(branch.arrow))


def structural_case(g: DecoratedGraph) -> Vol0Case:
    """Label ``g`` by shape alone, without computing a volume."""
    for a in g.arrows:
        orbifold_weight(a)
    try:
        g = normalize_minimal_orbifold(g)
    except ExceptionalCase:
        n = tuple(sorted(orbifold_weight(a) for a in g.arrows))
        return Vol0Case(CHAIN, tuple((1, k) for k in n))
    h = _contract(g)
    shape = detect_star(h)
    if isinstance(shape, ChainShape):
        ends = tuple(sorted((1, orbifold_weight(a)) for a in h.arrows))
        return Vol0Case(CHAIN, ends)
    if isinstance(shape, NotStar):
        word = _two_center(h)
        if word is not None:
            return Vol0Case(TWO_CENTER, (), word)
        return Vol0Case(NOT_VOLUME_ZERO)
    if shape.genus > 0:
        return Vol0Case(NOT_VOLUME_ZERO)
    data = tuple(sorted(_branch_data(shape)))
    ks = [m * n for m, n in data]
    if _is_dtype(shape):
        return Vol0Case(DTYPE, data)
    if shape.t == 3 and star3_family(ks) is not None:
        return Vol0Case(STAR3, data)
    if shape.t == 4 and all(k == 2 for k in ks):
        word = "".join(sorted("1" if m == 1 else "2" for m, _ in data))
        return Vol0Case(STAR4, data, word)
    return Vol0Case(NOT_VOLUME_ZERO, data)


def match_case(g: DecoratedGraph, cross_check: bool = True) -> Vol0Case:
    """Structural label of an orbifold pair, checked against its volume.

    With ``cross_check`` the volume is computed by the general Zariski
    pipeline and must be zero exactly when a volume-zero shape is found.
    A volume-zero pair without any weight ``n >= 2`` that fits none of the
    shapes (a simple elliptic or cusp singularity, say) raises
    :class:`OutsideClassification`.
    """
    case = structural_case(g)
    if not cross_check:
        return case
    vol = volume(g)
    case = replace(case, volume=vol)
    if case.is_volume_zero != (vol == 0):
        weighted = any(orbifold_weight(a) >= 2 for a in g.arrows)
        if vol == 0 and not weighted:
            raise OutsideClassification("volume 0 without weighted curves on a non-log-terminal graph")
        raise ClassificationMismatch(f"shape says {case.label} but the volume is {fmt_rat(vol)}")
    return case


# -- finite lists ----------------------------------------------------------------


def enumerate_star3_types(max_k: int = 100) -> list:
    """Sorted triples ``k_1 <= k_2 <= k_3 <= max_k`` of the four families."""
    out = []
    for k in range(2, max_k + 1):
        out.append((2, 2, k))
    out.extend((2, 3, k) for k in range(3, min(6, max_k) + 1))
    if max_k >= 4:
        out.append((2, 4, 4))
    if max_k >= 3:
        out.append((3, 3, 3))
    return sorted(set(out))


def enumerate_weights(ks) -> list:
    """Weight tuples ``(n_1, ...)`` with ``n_i | k_i``, at least one ``n_i >= 2``."""
    choices = [[n for n in range(1, k + 1) if k % n == 0] for k in ks]
    return sorted(t for t in product(*choices) if any(n >= 2 for n in t))


def enumerate_234_weights() -> list:
    """The eleven weight tuples over the ordered triple ``(2, 3, 4)``."""
    return enumerate_weights((2, 3, 4))


@dataclass(frozen=True)
class DeterminantFamily:
    fixed: tuple
    free_min: int | None = None  # the free determinant ranges over [free_min, free_max]
    free_max: int | None = None

    def contains(self, ms) -> bool:
        ms = sorted(ms)
        if self.free_min is None:
            return ms == sorted(self.fixed)
        rest = list(ms)
        for x in self.fixed:
            if x not in rest:
                return False
            rest.remove(x)
        (free,) = rest
        return free >= self.free_min and (self.free_max is None or free <= self.free_max)

    def expand(self, max_m: int) -> list:
        if self.free_min is None:
            return [tuple(sorted(self.fixed))]
        top = max_m if self.free_max is None else min(self.free_max, max_m)
        return [tuple(sorted(self.fixed + (m,))) for m in range(self.free_min, top + 1)]

    def describe(self) -> str:
        if self.free_min is None:
            return "{" + ",".join(map(str, self.fixed)) + "}"
        bound = f"m>={self.free_min}" if self.free_max is None else f"{self.free_min}<=m<={self.free_max}"
        return "{" + ",".join(map(str, self.fixed)) + ",m}, " + bound


HALFWEIGHT_FAMILIES = (
    DeterminantFamily((1, 1, 1)),
    DeterminantFamily((1, 1), 2),
    DeterminantFamily((1, 2), 2),
    DeterminantFamily((1, 3), 3, 6),
    DeterminantFamily((1, 4, 4)),
    DeterminantFamily((2, 2), 2),
    DeterminantFamily((2, 3, 3)),
)


def halfweight_lc_determinants(max_m: int | None = None) -> list:
    """Branch determinants of three-branch log canonical pairs with weights 0 or >= 1/2.

    Without ``max_m`` the seven families are returned; with it, their members
    with every determinant at most ``max_m`` as a sorted list of triples.
    """
    if max_m is None:
        return list(HALFWEIGHT_FAMILIES)
    out = set()
    for fam in HALFWEIGHT_FAMILIES:
        out.update(t for t in fam.expand(max_m) if max(t) <= max_m)
    return sorted(out)


def halfweight_family(ms) -> int | None:
    for i, fam in enumerate(HALFWEIGHT_FAMILIES, start=1):
        if fam.contains(ms):
            return i
    return None


# -- fixtures ----------------------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    name: str
    file: str
    expected: str  # "zero" or "positive"


def fixtures() -> dict:
    root = resources.files("pairvol") / "fixtures" / "half_weight_curves"
    text = (root / "manifest.csv").read_text(encoding="utf-8")
    rows = csv.DictReader(io.StringIO(text))
    return {r["name"]: Fixture(r["name"], r["file"], r["expected"]) for r in rows}


def fixture_graph(name: str) -> DecoratedGraph:
    table = fixtures()
    if name not in table:
        raise UnknownFixture(name)
    root = resources.files("pairvol") / "fixtures" / "half_weight_curves"
    return parse((root / table[name].file).read_text(encoding="utf-8"))


def verify_fixture_vol_half(name: str) -> Fraction:
    """Volume of ``(C^2, C/2)`` for the named plane-curve fixture."""
    g = fixture_graph(name)
    for a in g.arrows:
        if a.c != Fraction(1, 2):
            raise PreconditionViolated(f"fixture {name}: arrow {a.id} is not weighted 1/2")
    return volume(g)


# -- census ------------------------------------------------------------------------


def branch_options(max_m: int, max_n: int, all_chains: bool = False) -> list:
    """``(chain, n)`` branch choices for three-branch stars.

    ``m = 1`` is a ``-1`` curve with ``n >= 2``.  For ``m >= 2`` the chain is
    the single ``-m`` curve, or every ``m/q`` chain when ``all_chains``.
    """
    from math import gcd

    from .star import hj_expansion

    out = [((1,), n) for n in range(2, max_n + 1)]
    for m in range(2, max_m + 1):
        qs = [q for q in range(1, m) if gcd(m, q) == 1] if all_chains else [1]
        for q in qs:
            chain = hj_expansion(m, q)
            out.extend((chain, n) for n in range(1, max_n + 1))
    return out


def three_branch_stars(max_m: int, max_n: int, max_d: int, all_chains: bool = False):
    """Yield negative-definite three-branch orbifold stars within the bounds."""
    options = branch_options(max_m, max_n, all_chains)
    for combo in combinations_with_replacement(range(len(options)), 3):
        branches = [options[i] for i in combo]
        load_ = sum(Fraction(chain_det(c[1:]), chain_det(c)) for c, _ in branches)
        for d in range(1, max_d + 1):
            if d > load_:
                yield d, branches


def vol0_census(max_m: int = 6, max_n: int = 6, max_d: int = 6) -> list:
    """Rows ``(case_label, parameters, volume)`` over three-branch stars."""
    rows = []
    for d, branches in three_branch_stars(max_m, max_n, max_d):
        g = star_graph(d, [(c, n if n > 1 else None) for c, n in branches])
        case = match_case(g)
        params = f"d={d}; " + case.describe()
        rows.append((case.label, params, fmt_rat(case.volume)))
    rows.sort()
    return rows


def write_csv(rows, header, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
