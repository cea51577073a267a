"""Exact integer / rational linear algebra on small dense matrices.

Matrices are sequences of rows of Python ints (or Fractions). Nothing here
touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def to_rows(m) -> list[list[int]]:
    return [[int(v) for v in row] for row in m]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m):
    return [list(col) for col in zip(*m)] if m else []


def matmul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def content(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive(v) -> tuple[int, ...]:
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return tuple(int(x) // g for x in v)


def clear_denominators(v) -> list[int]:
    """Scale a rational vector by a positive integer to the primitive integral one."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = content(w)
    return [x // g for x in w] if g else w


def det(m) -> int:
    """Bareiss fraction-free determinant."""
    a = to_rows(m)
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def row_echelon(m) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m) -> int:
    if not m or not len(m[0]):
        return 0
    return len(row_echelon(m)[1])


def rational_kernel(m, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x in Q^n : m x = 0}."""
    n = ncols if ncols is not None else len(m[0])
    if not m:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, piv = row_echelon(m)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for r, c in enumerate(piv):
            x[c] = -red[r][f]
        basis.append(x)
    return basis


def solve(a, b) -> list[Fraction] | None:
    """One rational solution of a x = b, or None."""
    n = len(a[0])
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, piv = row_echelon(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for r, c in enumerate(piv):
        x[c] = red[r][n]
    return x


def inverse(m) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    red, piv = row_echelon(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red[:n]]


def integer_kernel(m, ncols: int | None = None) -> list[list[int]]:
    """Z-basis of {x in Z^n : m x = 0}, as rows.

    Column reduction: track a unimodular U with m U = [H | 0]; the columns of
    U above the zero block span the integral kernel.
    """
    n = ncols if ncols is not None else len(m[0])
    a = to_rows(m)
    u = identity(n)
    col = 0
    for row in range(len(a)):
        if col >= n:
            break
        while True:
            nz = [j for j in range(col, n) if a[row][j] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda j: abs(a[row][j]))
            _swap_cols(a, u, col, piv)
            done = True
            for j in range(col + 1, n):
                q = a[row][j] // a[row][col]
                if q:
                    _add_col(a, u, j, col, -q)
                if a[row][j] != 0:
                    done = False
            if done:
                col += 1
                break
    return [[u[i][j] for i in range(n)] for j in range(col, n)]


def _swap_cols(a, u, i, j):
    if i == j:
        return
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in u:
        row[i], row[j] = row[j], row[i]


def _add_col(a, u, target, source, q):
    for row in a:
        row[target] += q * row[source]
    for row in u:
        row[target] += q * row[source]


def diagonalize_form(gram) -> list[Fraction]:
    """Diagonal entries of a rational congruence diagonalization of a symmetric matrix."""
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    diag = []
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                _sym_swap(a, k, j)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is not None:
                    # x_k -> x_k + x_j makes the pivot 2 a_kj + a_jj = 2 a_kj != 0
                    for i in range(n):
                        a[i][k] += a[i][j]
                    for i in range(n):
                        a[k][i] += a[j][i]
        p = a[k][k]
        diag.append(p)
        if p == 0:
            continue
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] -= a[i][k] * a[k][j] / p
        for i in range(k + 1, n):
            a[k][i] = a[i][k] = Fraction(0)
    return diag


def _sym_swap(a, i, j):
    a[i], a[j] = a[j], a[i]
    for row in a:
        row[i], row[j] = row[j], row[i]


def signature(gram) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of the form."""
    d = diagonalize_form(gram)
    return (sum(x > 0 for x in d), sum(x < 0 for x in d), sum(x == 0 for x in d))


def is_negative_definite(gram) -> bool:
    n = len(gram)
    return n == 0 or signature(gram)[1] == n
