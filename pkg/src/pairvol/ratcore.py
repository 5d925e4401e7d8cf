"""Exact rational arithmetic and symmetric integer linear algebra.

Rationals are :class:`fractions.Fraction`.  Linear solves run fraction-free
(Bareiss) on integer data and only divide during back substitution, which
keeps intermediate numbers small and is much faster than eliminating with
Fractions directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import SingularSystem

Rat = Fraction


def fmt_rat(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    if sep and (not den.isdigit() or int(den) == 0):
        raise ValueError(f"bad rational {text!r}")
    return Fraction(int(num), int(den) if sep else 1)


@dataclass(frozen=True)
class SymMatrix:
    """Symmetric integer matrix, stored as a tuple of rows."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("matrix is not square")
            for j in range(i):
                if row[j] != rows[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "entries", rows)

    @property
    def order(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def principal(self, index: Sequence[int]) -> "SymMatrix":
        return SymMatrix(tuple(tuple(self.entries[i][j] for j in index) for i in index))

    def apply(self, x: Sequence) -> list:
        return [sum((a * b for a, b in zip(row, x) if a), Fraction(0)) for row in self.entries]


def _bareiss(a: list, pivoting: bool):
    """In-place fraction-free elimination on an integer (augmented) matrix.

    Yields the leading principal minors in order when ``pivoting`` is False.
    Returns the row permutation-free echelon form implicitly through ``a``.
    """
    n = len(a)
    width = len(a[0]) if a else 0
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            if not pivoting:
                yield k, 0
                return
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    break
            else:
                yield k, 0
                return
        pivot = a[k][k]
        yield k, pivot
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            f = row_i[k]
            if f:
                for j in range(k + 1, width):
                    row_i[j] = (row_i[j] * pivot - f * row_k[j]) // prev
            else:
                for j in range(k + 1, width):
                    row_i[j] = (row_i[j] * pivot) // prev
            row_i[k] = 0
        prev = pivot


def solve_symmetric(m: SymMatrix, b: Sequence, index: Sequence[int] | None = None) -> list:
    """Solve ``(M|S) x = b`` exactly, where ``S`` is ``index`` (default: all).

    ``b`` is indexed like ``S``.  Raises :class:`SingularSystem` if the
    principal submatrix is not invertible.
    """
    if index is None:
        index = range(m.order)
    index = list(index)
    n = len(index)
    if len(b) != n:
        raise ValueError("right-hand side has the wrong length")
    if n == 0:
        return []
    b = [Fraction(v) for v in b]
    den = lcm(*(v.denominator for v in b))
    rows = m.entries
    a = [[rows[i][j] for j in index] + [int(bv * den)] for i, bv in zip(index, b)]
    for k, pivot in _bareiss(a, pivoting=True):
        if pivot == 0:
            raise SingularSystem(f"principal submatrix of order {n} is singular")
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        row = a[i]
        s = Fraction(row[n])
        for j in range(i + 1, n):
            if row[j]:
                s -= row[j] * x[j]
        x[i] = s / row[i]
    if den != 1:
        x = [v / den for v in x]
    return x


def leading_minors(m: SymMatrix) -> list:
    """Leading principal minors, stopping after the first zero."""
    a = [list(row) for row in m.entries]
    return [pivot for _, pivot in _bareiss(a, pivoting=False)]


def is_negative_definite(m: SymMatrix) -> tuple:
    """Return ``(True, None)`` or ``(False, k)``.

    ``k`` is the order (1-based) of the first leading principal minor whose
    sign breaks the alternation ``(-1)^k det > 0``; equivalently the first
    non-negative pivot of symmetric elimination.
    """
    minors = leading_minors(m)
    for k, det in enumerate(minors, start=1):
        if (det > 0) != (k % 2 == 0) or det == 0:
            return False, k
    if len(minors) < m.order:
        return False, len(minors) + 1
    return True, None


def dot(x: Sequence, y: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(x, y)), Fraction(0))
