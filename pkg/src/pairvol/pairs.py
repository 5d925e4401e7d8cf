"""Invariants of a pair (X, sum c_i C_i) given by a decorated resolution graph.

The pair is the graph itself: arrow weights are the coefficients ``c_i``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import CertificateFailure, ClassificationMismatch, ExceptionalCase, NotLogTerminal, ZeroCoefficient
from .graph import (
    Arrow,
    DecoratedGraph,
    arrow_vector,
    boundary_vector,
    canonical_vector,
    intersection_matrix,
    normalize_minimal_orbifold,
)
from .ratcore import solve_symmetric
from .zariski import zariski_decompose

LCT_PROBE = Fraction(1, 1000)


class Classification(str, enum.Enum):
    LOG_TERMINAL = "LogTerminal"
    LOG_CANONICAL = "LogCanonical"
    NOT_LOG_CANONICAL = "NotLogCanonical"

    def __str__(self):
        return self.value


def log_divisor_vector(g: DecoratedGraph, weights=None) -> list:
    """Intersection vector of ``K + E + sum c_i C_i``."""
    return [a + b for a, b in zip(boundary_vector(g), arrow_vector(g, weights))]


def discrepancies(g: DecoratedGraph, weights=None) -> dict:
    """The ``a_i`` with ``K + sum c_i C_i = sum a_i E_i`` numerically on ``E``."""
    rhs = [a + b for a, b in zip(canonical_vector(g), arrow_vector(g, weights))]
    return dict(zip(g.ids, solve_symmetric(intersection_matrix(g), rhs)))


def classify_discrepancies(a: dict) -> Classification:
    values = a.values()
    if all(x > -1 for x in values):
        return Classification.LOG_TERMINAL
    if all(x >= -1 for x in values):
        return Classification.LOG_CANONICAL
    return Classification.NOT_LOG_CANONICAL


def pcp(g: DecoratedGraph, weights=None) -> Fraction:
    """``-P.P`` for the positive part ``P`` of ``K + E + sum c_i C_i``."""
    return zariski_decompose(g, log_divisor_vector(g, weights)).neg_p_squared()


def classify(g: DecoratedGraph, weights=None) -> Classification:
    label = classify_discrepancies(discrepancies(g, weights))
    positive_vanishes = zariski_decompose(g, log_divisor_vector(g, weights)).is_zero_positive
    if positive_vanishes != (label is not Classification.NOT_LOG_CANONICAL):
        raise ClassificationMismatch(f"discrepancies say {label}, positive part vanishing is {positive_vanishes}")
    return label


def opposite(g: DecoratedGraph) -> DecoratedGraph:
    """Replace every coefficient ``c`` by ``1 - c``."""
    arrows = []
    for a in g.arrows:
        if a.c == 0:
            raise ZeroCoefficient(f"arrow {a.id} has coefficient 0")
        arrows.append(Arrow(a.id, a.at, 1 - a.c))
    return replace(g, arrows=tuple(arrows))


def drop_zero_arrows(g: DecoratedGraph) -> DecoratedGraph:
    return replace(g, arrows=tuple(a for a in g.arrows if a.c != 0))


def volume(g: DecoratedGraph, drop_zero: bool = False) -> Fraction:
    """``-P.P`` of the pair with the opposite coefficients."""
    if drop_zero:
        g = drop_zero_arrows(g)
    return pcp(opposite(g))


def normalized_or_raw(g: DecoratedGraph) -> DecoratedGraph:
    try:
        return normalize_minimal_orbifold(g)
    except ExceptionalCase:
        return g


def lct(g: DecoratedGraph, normalize: bool = True) -> Fraction:
    """Log canonical threshold of the reduced curve formed by the nonzero arrows."""
    if normalize:
        g = normalized_or_raw(g)
    curve = [a for a in g.arrows if a.c != 0]
    base = discrepancies(g, weights={})
    if classify_discrepancies(base) is not Classification.LOG_TERMINAL:
        raise NotLogTerminal("the singularity itself is not log terminal")
    if not curve:
        return Fraction(1)
    unit = {a.id: 1 for a in curve}
    slope = solve_symmetric(intersection_matrix(g), arrow_vector(g, unit))
    best = Fraction(1)
    for v, d in zip(g.ids, slope):
        if d >= 0:
            raise CertificateFailure(f"curve class is not strictly negative at {v}")
        best = min(best, (-1 - base[v]) / d)
    if pcp(g, {a.id: best for a in curve}) != 0:
        raise CertificateFailure("pair is not log canonical at the threshold")
    if best < 1:
        probe = min(best + LCT_PROBE, Fraction(1))
        if pcp(g, {a.id: probe for a in curve}) <= 0:
            raise CertificateFailure("pair is still log canonical above the threshold")
    return best


@dataclass(frozen=True)
class PairReport:
    discrepancies: dict
    classification: Classification
    pcp: Fraction
    volume: Fraction | None
    lct: Fraction | None


def report(g: DecoratedGraph, normalize: bool = True, drop_zero: bool = False) -> PairReport:
    if normalize:
        g = normalized_or_raw(g)
    try:
        vol = volume(g, drop_zero=drop_zero)
    except ZeroCoefficient:
        vol = None
    try:
        threshold = lct(g, normalize=False)
    except NotLogTerminal:
        threshold = None
    return PairReport(discrepancies(g), classify(g), pcp(g), vol, threshold)
