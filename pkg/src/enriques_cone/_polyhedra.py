"""Exact polyhedral primitives: phase-one simplex and double description.

Everything runs over Fractions / Python ints, so feasibility verdicts and
infeasibility certificates are exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _arith as ar


def nonneg_solution(a, b) -> list[Fraction] | None:
    """Find y >= 0 with a y = b, or return None if none exists.

    Phase-one simplex with artificial variables and Bland's rule, which
    cannot cycle.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    rows = []
    for row, rhs in zip(a, b):
        row = [Fraction(x) for x in row]
        rhs = Fraction(rhs)
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        rows.append(row + [Fraction(int(i == len(rows))) for i in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m
    # phase-one objective: minimise the sum of artificials
    cost = [Fraction(0)] * n + [Fraction(1)] * m
    while True:
        reduced = []
        for j in range(width):
            if j in basis:
                reduced.append(Fraction(0))
                continue
            reduced.append(cost[j] - sum(cost[basis[i]] * rows[i][j] for i in range(m)))
        entering = next((j for j in range(width) if reduced[j] < 0), None)
        if entering is None:
            break
        leave, best = None, None
        for i in range(m):
            if rows[i][entering] > 0:
                ratio = rows[i][-1] / rows[i][entering]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:  # unbounded; impossible for phase one
            break
        _pivot(rows, leave, entering)
        basis[leave] = entering
    value = sum(rows[i][-1] for i in range(m) if basis[i] >= n)
    if value != 0:
        return None
    y = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            y[j] = rows[i][-1]
    return y


def _pivot(rows, r, c):
    p = rows[r][c]
    rows[r] = [x / p for x in rows[r]]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            rows[i] = [x - f * y for x, y in zip(row, rows[r])]


@dataclass(frozen=True)
class StrictResult:
    """Outcome of deciding whether {x : c_k . x > 0 for all k} is nonempty.

    Exactly one of ``point`` and ``certificate`` is set. The certificate is a
    nonzero y >= 0 with sum_k y_k c_k = 0 (Gordan's alternative).
    """

    point: tuple[int, ...] | None
    certificate: tuple[Fraction, ...] | None

    @property
    def feasible(self) -> bool:
        return self.point is not None


def strict_solution(constraints, dim: int) -> StrictResult:
    c = [list(map(int, row)) for row in constraints]
    if not c:
        return StrictResult(tuple([0] * dim), None) if dim == 0 else StrictResult(tuple([1] + [0] * (dim - 1)), None)
    k = len(c)
    # Gordan: sum y_k c_k = 0, sum y_k = 1, y >= 0
    a = [[c[i][j] for i in range(k)] for j in range(dim)] + [[1] * k]
    y = nonneg_solution(a, [0] * dim + [1])
    if y is not None:
        return StrictResult(None, tuple(y))
    # x = x+ - x-, C x+ - C x- - s = 1
    a = [row + [-v for v in row] + [-int(i == j) for j in range(k)] for i, row in enumerate(c)]
    sol = nonneg_solution(a, [1] * k)
    if sol is None:  # pragma: no cover - excluded by Gordan's theorem
        raise ArithmeticError("neither alternative of Gordan's theorem holds")
    x = [sol[j] - sol[dim + j] for j in range(dim)]
    point = tuple(ar.clear_denominators(x))
    assert all(ar.dot(row, point) > 0 for row in c)
    return StrictResult(point, None)


def check_gordan_certificate(constraints, y) -> bool:
    if not any(v != 0 for v in y) or any(v < 0 for v in y):
        return False
    dim = len(constraints[0])
    return all(sum(yk * row[j] for yk, row in zip(y, constraints)) == 0 for j in range(dim))


def conic_combination(generators, target) -> list[Fraction] | None:
    """Nonnegative coefficients expressing ``target`` in the cone of ``generators``."""
    if not generators:
        return [] if not any(target) else None
    a = [[g[j] for g in generators] for j in range(len(target))]
    return nonneg_solution(a, list(target))


@dataclass(frozen=True)
class ConeRays:
    rays: tuple[tuple[int, ...], ...]
    lineality: tuple[tuple[int, ...], ...]

    @property
    def pointed(self) -> bool:
        return not self.lineality


def double_description(constraints, dim: int) -> ConeRays:
    """Extreme rays of {x in Q^dim : a . x >= 0 for every row a}.

    Constraints are inserted in the given order. If the cone contains a line
    the lineality space is returned and ``rays`` is empty.
    """
    a = [tuple(int(v) for v in row) for row in constraints if any(row)]
    lineality = ar.integer_kernel(a, dim) if a else ar.identity(dim)
    if lineality:
        return ConeRays((), tuple(tuple(v) for v in lineality))
    chosen: list[int] = []
    for i in range(len(a)):
        if ar.rank([a[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
        if len(chosen) == dim:
            break
    inv = ar.inverse([a[i] for i in chosen])
    rays = [tuple(ar.clear_denominators([inv[r][c] for r in range(dim)])) for c in range(dim)]
    processed = list(chosen)
    for i in range(len(a)):
        if i in chosen:
            continue
        row = a[i]
        vals = [ar.dot(row, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        new = pos + zero
        for p in pos:
            zp = {j for j in processed if ar.dot(a[j], p) == 0}
            vp = ar.dot(row, p)
            for q in neg:
                common = [j for j in zp if ar.dot(a[j], q) == 0]
                if len(common) < dim - 2:
                    continue
                if dim > 2 and ar.rank([a[j] for j in common]) != dim - 2:
                    continue
                vq = ar.dot(row, q)
                combo = [vp * qq - vq * pp for pp, qq in zip(p, q)]
                new.append(ar.primitive(combo))
        processed.append(i)
        rays = sorted(set(new))
    return ConeRays(tuple(sorted(rays)), ())
