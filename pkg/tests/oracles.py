"""Independent reference computations used across the suite."""
from fractions import Fraction
from itertools import permutations


def brute_det(rows):
    """Leibniz expansion; fine for the small orders used in tests."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
            if not term:
                break
        total += term
    return total


def sylvester_negative_definite(rows):
    n = len(rows)
    return all((-1) ** k * brute_det([r[:k] for r in rows[:k]]) > 0 for k in range(1, n + 1))


def gauss_solve(rows, b):
    """Plain Gauss-Jordan over Fractions with partial pivoting on nonzero entries."""
    n = len(rows)
    a = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(rows, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def matrix_rows(g):
    idx = {v.id: i for i, v in enumerate(g.vertices)}
    rows = [[0] * len(g.vertices) for _ in g.vertices]
    for i, v in enumerate(g.vertices):
        rows[i][i] = v.self_int
    for a, b, m in g.edges:
        rows[idx[a]][idx[b]] += m
        rows[idx[b]][idx[a]] += m
    return rows
