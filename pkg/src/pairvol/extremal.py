"""Extremal volumes of orbifold pairs on rational double points.

The search space is the star-shaped pairs built from an RDP star: ``r``
chains carrying weights ``n_i`` (``n_i = 1`` means no curve), ``s`` extra
``-1`` leaves with weights ``n'_j >= 2``, and a central curve of
self-intersection ``-d``.  Blowing the leaves down must give a canonical
surface (an RDP or a smooth point).  For these

    chi_bar = -2 + sum (1 - 1/(n_i m_i)) + sum (1 - 1/n'_j)

and the volume is ``chi_bar^2 / eps`` when ``chi_bar > 0``.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import gcd
from typing import Iterable

from .errors import BadParameter, CertificateFailure, EmptySet, InvalidGraph
from .graph import DecoratedGraph, validate
from .pairs import discrepancies, opposite, volume
from .ratcore import fmt_rat
from .star import StarShape, chain_det, detect_star, hj_expansion, star_graph, star_pcp


@dataclass(frozen=True)
class RdpStarParams:
    chains: tuple  # r chains, entries listed from the centre outwards
    n: tuple  # r chain weights, 1 for "no curve"
    nprime: tuple  # s leaf weights, each >= 2
    d: int

    @property
    def r(self) -> int:
        return len(self.chains)

    @property
    def s(self) -> int:
        return len(self.nprime)

    @property
    def m(self) -> tuple:
        return tuple(chain_det(c) for c in self.chains)

    @property
    def q(self) -> tuple:
        return tuple(chain_det(c[1:]) for c in self.chains)

    def graph(self) -> DecoratedGraph:
        branches = [(c, n if n > 1 else None) for c, n in zip(self.chains, self.n)]
        branches += [((1,), k) for k in self.nprime]
        return star_graph(self.d, branches)

    def blown_down(self) -> DecoratedGraph:
        return star_graph(self.d - self.s, [(c, None) for c in self.chains])

    @property
    def epsilon(self) -> Fraction:
        return self.d - self.s - sum((Fraction(q, m) for m, q in zip(self.m, self.q)), Fraction(0))


def chi_bar(p: RdpStarParams) -> Fraction:
    total = Fraction(-2)
    for m, n in zip(p.m, p.n):
        total += 1 - Fraction(1, n * m)
    for k in p.nprime:
        total += 1 - Fraction(1, k)
    return total


def closed_form_volume(p: RdpStarParams) -> Fraction:
    x = chi_bar(p)
    return x * x / p.epsilon if x > 0 else Fraction(0)


def pipeline_volume(p: RdpStarParams) -> Fraction:
    """Volume of the built pair via the general Zariski computation."""
    return volume(p.graph())


# -- deficiency minimum ----------------------------------------------------------


def _deficiency(u, ks) -> Fraction:
    return (u - 2) - sum((Fraction(1, k) for k in ks), Fraction(0))


def min_positive_deficiency(u: int, cap: int = 100) -> tuple:
    """Smallest positive ``-2 + sum_{i<=u} (1 - 1/k_i)`` over integers ``k_i >= 2``.

    Branch and bound over nondecreasing tuples whose first ``u - 1`` entries
    are at most ``cap``; the last entry is chosen optimally.  A final check
    proves that tuples with two or more entries above ``cap`` cannot do
    better, and raises :class:`CertificateFailure` otherwise.
    """
    if u < 1:
        raise BadParameter("u must be >= 1")
    if u <= 2:
        return None, None  # the expression is never positive
    best = None
    witness = None

    def last_entry(rest, lo):
        return max(lo, int(1 / rest) + 1) if rest > 0 else None

    def dfs(prefix, value, lo):
        nonlocal best, witness
        remaining = u - len(prefix)
        if remaining == 1:
            k = last_entry(value, lo)
            if k is None:
                return
            v = value - Fraction(1, k)
            if v > 0 and (best is None or v < best):
                best, witness = v, tuple(prefix) + (k,)
            return
        for k in range(lo, cap + 1):
            if best is not None and value - Fraction(remaining, k) >= best:
                break
            nxt = value - Fraction(1, k)
            if nxt > 0:
                dfs(prefix + [k], nxt, k)

    dfs([], Fraction(u - 2), 2)
    _check_cap(u, cap, best)
    return best, witness


def _check_cap(u, cap, best):
    """Tuples with ``j >= 2`` entries above ``cap`` all have value >= ``best`` or <= 0."""
    big = Fraction(1, cap + 1)
    for j in range(2, u + 1):
        threshold = best + j * big
        size = u - j

        def bad(prefix, value, lo):
            remaining = size - len(prefix)
            if remaining == 0:
                return 0 < value < threshold
            if value - Fraction(remaining, cap) <= 0:
                return False
            for k in range(lo, cap + 1):
                if value - Fraction(remaining, k) >= threshold:
                    break
                if bad(prefix + [k], value - Fraction(1, k), k):
                    return True
            return False

        if bad([], Fraction(u - 2), 2):
            raise CertificateFailure(f"cap {cap} too small to certify the minimum for u={u}")


# -- RDP star search ---------------------------------------------------------------


@dataclass(frozen=True)
class SearchBounds:
    m: int = 7  # largest chain determinant
    n: int = 12
    nprime: int = 12
    d: int = 6
    vol_max: Fraction | None = Fraction(1, 8)  # report only volumes below this; None: all

    @classmethod
    def parse(cls, text: str) -> "SearchBounds":
        kw = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, sep, val = part.partition("=")
            if not sep or key not in ("m", "n", "nprime", "d", "vol_max"):
                raise BadParameter(f"bad bound {part!r}")
            if key == "vol_max":
                kw[key] = None if val == "none" else Fraction(val)
            else:
                kw[key] = int(val)
                if kw[key] < 1:
                    raise BadParameter(f"bound {key} must be >= 1")
        return cls(**kw)


@dataclass
class SearchResult:
    volumes: list  # sorted distinct positive volumes
    minimum: Fraction | None
    argmin: list  # RdpStarParams attaining the minimum
    rows: list = field(default_factory=list)
    checked: int = 0  # configurations cross-checked against the general pipeline
    examined: int = 0


def _chains(max_m: int) -> list:
    out = []
    for m in range(2, max_m + 1):
        for q in range(1, m):
            if gcd(m, q) == 1:
                out.append(hj_expansion(m, q))
    return out


def is_canonical(g: DecoratedGraph) -> bool:
    """All discrepancies are non-negative: an RDP or a smooth point."""
    return all(a >= 0 for a in discrepancies(g).values())


def rdp_bases(max_m: int, max_center: int = 2) -> list:
    """``(chains, d0)`` with the blown-down star canonical and negative definite."""
    chains = _chains(max_m)
    out = []
    for r in range(0, 4):
        for combo in combinations_with_replacement(range(len(chains)), r):
            cs = tuple(chains[i] for i in combo)
            for d0 in range(1, max_center + 1):
                g = star_graph(d0, [(c, None) for c in cs])
                try:
                    validate(g)
                except InvalidGraph:
                    continue
                if is_canonical(g):
                    out.append((cs, d0))
    return out


def rdp_star_search(bounds: SearchBounds = SearchBounds(), census: bool = False,
                    verify_all: bool = False, check_every: int = 101) -> SearchResult:
    """Enumerate RDP orbifold stars within ``bounds`` and collect their volumes.

    Volumes come from ``chi_bar^2 / eps``.  Every ``check_every``-th kept
    configuration and every minimiser is recomputed by the general pipeline;
    ``verify_all`` recomputes every enumerated configuration, zero volumes
    included.  With ``vol_max`` set, only volumes below it are kept, and
    configurations with ``r + s >= 5`` are skipped: there ``chi_bar >= 1/2``
    and ``eps <= 2`` force a volume of at least ``1/8``.
    """
    cap = bounds.vol_max
    if cap is not None and cap > Fraction(1, 8):
        raise BadParameter("vol_max above 1/8 would need configurations with r + s >= 5")
    found = set()
    best = None
    argmin = []
    rows = []
    examined = checked = kept = 0
    leaf_tables = {}
    for chains, d0 in rdp_bases(bounds.m, bounds.d):
        r = len(chains)
        ms = [chain_det(c) for c in chains]
        eps = d0 - sum((Fraction(chain_det(c[1:]), m) for c, m in zip(chains, ms)), Fraction(0))
        if cap is not None and eps > 2:
            raise CertificateFailure("eps above 2 on an RDP star")
        for s in range(0, bounds.d - d0 + 1):
            u = r + s
            if u < 3 or (cap is not None and u >= 5):
                continue
            if s not in leaf_tables:
                table = sorted(
                    (sum((Fraction(1, k) for k in nps), Fraction(0)), nps)
                    for nps in combinations_with_replacement(range(2, bounds.nprime + 1), s)
                )
                leaf_tables[s] = ([x for x, _ in table], [t for _, t in table])
            keys, leaves = leaf_tables[s]
            d = d0 + s
            for ns in product(range(1, bounds.n + 1), repeat=r):
                if _redundant(chains, ns):
                    continue
                examined += len(keys)
                room = u - 2 - sum((Fraction(1, n * m) for n, m in zip(ns, ms)), Fraction(0))
                if verify_all:
                    for nps in leaves:
                        p = RdpStarParams(chains, ns, nps, d)
                        checked += 1
                        _cross_check(p, closed_form_volume(p))
                # keys[j] < room exactly when chi_bar > 0; walk down from there
                for j in range(bisect_left(keys, room) - 1, -1, -1):
                    chi = room - keys[j]
                    vol = chi * chi / eps
                    if cap is not None and vol >= cap:
                        break
                    p = RdpStarParams(chains, ns, leaves[j], d)
                    kept += 1
                    if not verify_all and kept % check_every == 0:
                        checked += 1
                        _cross_check(p, vol)
                    found.add(vol)
                    if best is None or vol < best:
                        best, argmin = vol, [p]
                    elif vol == best:
                        argmin.append(p)
                    if census:
                        rows.append(census_row(p, vol))
    for p in argmin:
        checked += 1
        _cross_check(p, best)
    argmin.sort(key=repr)
    if census:
        rows.sort(key=lambda row: (Fraction(row[-2]), row))
    return SearchResult(sorted(found), best, argmin, rows, checked, examined)


def _redundant(chains, ns) -> bool:
    """Skip weight orderings that repeat an equal chain (multiset symmetry)."""
    for i in range(1, len(chains)):
        if chains[i] == chains[i - 1] and ns[i] < ns[i - 1]:
            return True
    return False


def _cross_check(p: RdpStarParams, vol: Fraction) -> None:
    g = p.graph()
    general = volume(g)
    if general != vol:
        raise CertificateFailure(f"closed form {fmt_rat(vol)} != general {fmt_rat(general)} for {p}")
    shape = detect_star(opposite(g))
    if isinstance(shape, StarShape):
        fast, _ = star_pcp(shape)
        if fast != vol:
            raise CertificateFailure(f"star formula {fmt_rat(fast)} != {fmt_rat(vol)} for {p}")


CENSUS_HEADER = ("r", "s", "m_spec", "n_spec", "nprime_spec", "d", "chi_bar", "epsilon", "volume", "flag")


def census_row(p: RdpStarParams, vol: Fraction) -> tuple:
    m_spec = ";".join(f"{m}/{q}" for m, q in zip(p.m, p.q))
    flag = "blown_down_center_-1" if p.d - p.s == 1 else ""
    return (
        p.r,
        p.s,
        m_spec,
        ";".join(map(str, p.n)),
        ";".join(map(str, p.nprime)),
        p.d,
        fmt_rat(chi_bar(p)),
        fmt_rat(p.epsilon),
        fmt_rat(vol),
        flag,
    )


# -- ACC and the family with decreasing volumes --------------------------------------


def acc_max_weight(z: Iterable) -> tuple:
    """All tuples of maximal weight ``sum 1/n_i``, sorted, and that weight."""
    items = [tuple(t) for t in z]
    if not items:
        raise EmptySet("no tuples given")
    weights = [sum((Fraction(1, n) for n in t), Fraction(0)) for t in items]
    top = max(weights)
    return sorted({t for t, w in zip(items, weights) if w == top}), top


def elliptic_weight_two_closed_form(m: int) -> Fraction:
    return Fraction(8, 3) + Fraction(2 * (4 * m + 3), m * (m - 6))


def elliptic_chi(m: int) -> Fraction:
    return Fraction(1, 6) - Fraction(1, m)


def elliptic_graph(m: int) -> DecoratedGraph:
    """Minimally elliptic star: ``-1`` centre with ``-2``, ``-3``, ``-m`` curves."""
    return star_graph(1, [((2,), None), ((3,), None), ((m,), None)])


def elliptic_weight_two_family(m: int) -> tuple:
    """The weight-2 curve through the centre of the ``(2, 3, m)`` elliptic star.

    Returns the minimal orbifold resolution graph and its volume, after
    checking it against both closed forms.
    """
    if m <= 6:
        raise BadParameter("m must be >= 7")
    g = star_graph(2, [((2,), None), ((3,), None), ((m,), None), ((1,), 2)])
    vol = volume(g)
    chi = elliptic_chi(m)
    if vol != elliptic_weight_two_closed_form(m) or vol != (chi + Fraction(1, 2)) ** 2 / chi:
        raise CertificateFailure(f"volume {fmt_rat(vol)} disagrees with the closed forms at m={m}")
    return g, vol
