"""Integral lattices, vectors and isometries with exact arithmetic.

A lattice is a symmetric integer Gram matrix on a fixed basis; vectors are
integer coordinate tuples in that basis. All pairings are Python ints, so
there is no overflow no matter how far a chamber walk wanders.

The model ``E10 = U + E8(-1)`` for the Enriques lattice ``Num(X)`` is the
standard external identification; it is a convention of this package and
is not derived from anything computed here.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from . import _arith as ar

__all__ = [
    "Lattice",
    "Isometry",
    "Involution",
    "LatticeError",
    "make_standard",
    "orthogonal_sum",
    "inner",
    "smith_invariants",
    "enumerate_roots",
    "enumerate_vectors",
    "enumerate_vectors_array",
    "invariant_sublattice",
    "swap_involution",
    "E8_ROOT_BASIS_GRAM",
]


class LatticeError(ValueError):
    """Raised for malformed lattices, vectors or isometries."""


# Gram matrix of a basis of E8 made of roots, chosen so that every one of the
# 240 roots has all coordinates in [-2, 2].
E8_ROOT_BASIS_GRAM = (
    (2, 0, 0, 0, 0, 0, 1, -1),
    (0, 2, 1, -1, 0, 0, 0, 0),
    (0, 1, 2, 0, 0, 0, 0, 1),
    (0, -1, 0, 2, 1, 1, 0, 0),
    (0, 0, 0, 1, 2, 0, -1, -1),
    (0, 0, 0, 1, 0, 2, 1, 0),
    (1, 0, 0, 0, -1, 1, 2, 0),
    (-1, 0, 1, 0, -1, 0, 0, 2),
)


@dataclass(frozen=True)
class Lattice:
    """Integral symmetric bilinear form on Z^rank.

    ``degenerate=True`` admits a singular Gram matrix (spans of curve
    configurations); cone and Weyl operations refuse such lattices.
    """

    gram: tuple[tuple[int, ...], ...]
    degenerate: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(v) for v in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise LatticeError("Gram matrix must be symmetric")
        if not self.degenerate and n and ar.det(g) == 0:
            raise LatticeError("Gram matrix is degenerate; pass degenerate=True for spans")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def determinant(self) -> int:
        return ar.det(self.gram)

    @cached_property
    def signature(self) -> tuple[int, int]:
        pos, neg, _ = ar.signature(self.gram)
        return pos, neg

    @property
    def is_hyperbolic(self) -> bool:
        return not self.degenerate and self.signature == (1, self.rank - 1)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64)

    def check_vector(self, x) -> tuple[int, ...]:
        v = tuple(int(c) for c in x)
        if len(v) != self.rank:
            raise LatticeError(f"vector of length {len(v)} in a rank {self.rank} lattice")
        return v

    @cached_property
    def _sparse_rows(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        # Gram matrices of orthogonal sums are mostly zero
        return tuple(tuple((j, v) for j, v in enumerate(row) if v) for row in self.gram)

    @cached_property
    def _sparse_entries(self) -> tuple[tuple[int, int, int], ...]:
        return tuple((i, j, v) for i, row in enumerate(self._sparse_rows) for j, v in row)

    def dual_coords(self, x) -> tuple[int, ...]:
        """The functional (x, -) as a coordinate row, i.e. G x."""
        return tuple(sum(v * x[j] for j, v in row) for row in self._sparse_rows)

    def inner(self, x, y) -> int:
        return sum(v * x[i] * y[j] for i, j, v in self._sparse_entries)

    def norm(self, x) -> int:
        return self.inner(x, x)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def scaled(self, factor: int) -> "Lattice":
        return Lattice(tuple(tuple(factor * v for v in row) for row in self.gram), self.degenerate)

    def __repr__(self) -> str:
        label = self.name or f"rank {self.rank}"
        return f"Lattice({label}, det={self.determinant if not self.degenerate else 0})"


def orthogonal_sum(*lattices: Lattice) -> Lattice:
    n = sum(l.rank for l in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for lat in lattices:
        for i in range(lat.rank):
            for j in range(lat.rank):
                g[off + i][off + j] = lat.gram[i][j]
        off += lat.rank
    return Lattice(tuple(map(tuple, g)), any(l.degenerate for l in lattices),
                   name="+".join(l.name or "?" for l in lattices))


_DIAG = re.compile(r"^(?:scaled_diag|diag)[\(:]?\[?([-\d,\s]+)\]?\)?$")


def make_standard(name) -> Lattice:
    """Named lattices: ``U``, ``E8minus``, ``E10`` and ``scaled_diag(list)``.

    ``name`` may also be a list/tuple of ints (read as ``scaled_diag``) or a
    ``+``-separated string for orthogonal sums, e.g. ``"U+U"``.
    """
    if isinstance(name, (list, tuple)):
        entries = [int(v) for v in name]
        if not entries:
            raise LatticeError("scaled_diag needs at least one entry")
        g = tuple(tuple(entries[i] if i == j else 0 for j in range(len(entries)))
                  for i in range(len(entries)))
        return Lattice(g, name=f"diag{entries}")
    key = str(name).strip()
    if "+" in key:
        return orthogonal_sum(*(make_standard(part) for part in key.split("+")))
    if key == "U":
        return Lattice(((0, 1), (1, 0)), name="U")
    if key in ("E8minus", "E8(-1)"):
        return Lattice(tuple(tuple(-v for v in row) for row in E8_ROOT_BASIS_GRAM), name="E8minus")
    if key == "E10":
        return Lattice(orthogonal_sum(make_standard("U"), make_standard("E8minus")).gram, name="E10")
    m = _DIAG.match(key)
    if m:
        return make_standard([int(v) for v in m.group(1).split(",") if v.strip()])
    raise LatticeError(f"unknown lattice name {name!r}")


def inner(lattice: Lattice, x, y) -> int:
    return lattice.inner(lattice.check_vector(x), lattice.check_vector(y))


def smith_invariants(lattice: Lattice) -> tuple[tuple[int, ...], int]:
    """Smith normal form diagonal of the Gram matrix and its determinant."""
    if lattice.rank == 0:
        return (), 1
    divisors = tuple(int(d) for d in invariant_factors(Matrix(lattice.gram), domain=ZZ))
    divisors = divisors + (0,) * (lattice.rank - len(divisors))
    return tuple(abs(d) for d in divisors), lattice.determinant if not lattice.degenerate else ar.det(lattice.gram)


def smith_divisors(matrix) -> tuple[int, ...]:
    """Elementary divisors of an arbitrary integer matrix (zeros padded)."""
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return ()
    divs = tuple(abs(int(d)) for d in invariant_factors(Matrix(rows), domain=ZZ))
    return divs + (0,) * (min(len(rows), len(rows[0])) - len(divs))


# ---------------------------------------------------------------- enumeration


def _blocks(gram) -> list[list[int]]:
    """Index sets of the orthogonal blocks (connected components of the Gram support)."""
    n = len(gram)
    seen, out = set(), []
    for s in range(n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if j not in seen and gram[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        out.append(sorted(comp))
    return out


def _box_vectors_by_norm(gram, bound: int, lo: int, hi: int) -> dict[int, np.ndarray]:
    """All x in [-bound, bound]^k with lo <= x.G.x <= hi, bucketed by norm."""
    k = len(gram)
    pos, neg, _ = ar.signature(gram)
    out: dict[int, list[tuple[int, ...]]] = {}
    if neg == k or pos == k:
        sign = -1 if neg == k else 1
        p = [[sign * v for v in row] for row in gram]
        radius = max(-lo, 0) if sign == -1 else max(hi, 0)
        pts = short_vectors_array(p, radius, box=bound)
        norms = sign * np.einsum("ij,jk,ik->i", pts, np.array(p, dtype=np.int64), pts)
        keep = (norms >= lo) & (norms <= hi)
        for nrm in np.unique(norms[keep]):
            out[int(nrm)] = pts[norms == nrm]
        return out
    g = np.array(gram, dtype=np.int64)
    if (2 * bound + 1) ** k > 5_000_000 or bound * bound * np.abs(g).sum() > 2**60:
        raise LatticeError("coordinate box too large for an indefinite block")
    rng = np.arange(-bound, bound + 1, dtype=np.int64)
    pts = np.array(list(itertools.product(rng, repeat=k)), dtype=np.int64).reshape(-1, k)
    norms = np.einsum("ij,jk,ik->i", pts, g, pts)
    keep = (norms >= lo) & (norms <= hi)
    for nrm in np.unique(norms[keep]):
        out[int(nrm)] = pts[norms == nrm]
    return out


def short_vectors(p, radius, box: int | None = None) -> list[tuple[int, ...]]:
    """All integer x with x.P.x <= radius for a positive definite integer P."""
    return [tuple(int(v) for v in row) for row in short_vectors_array(p, radius, box)]


def short_vectors_array(p, radius, box: int | None = None) -> np.ndarray:
    """All integer x with x.P.x <= radius for a positive definite integer P.

    Fincke-Pohst enumeration over an LDL^T factorisation, vectorised level by
    level; the float bound carries a safety margin and every survivor is
    re-checked exactly. ``box`` additionally restricts each coordinate.
    """
    n = len(p)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    pf = np.array(p, dtype=float)
    # P = L D L^T with unit upper-triangular factor applied from the last coordinate
    q = np.zeros((n, n))
    d = np.zeros(n)
    a = pf.copy()
    for i in range(n):
        d[i] = a[i, i]
        if d[i] <= 0:
            raise LatticeError("form is not positive definite")
        for j in range(i + 1, n):
            q[i, j] = a[i, j] / d[i]
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j, k] -= q[i, j] * q[i, k] * d[i]
    # x.P.x = sum_i d_i (x_i + sum_{j>i} q_ij x_j)^2
    r = float(radius) * (1 + 1e-9) + 1e-9
    partial = np.zeros((1, 0), dtype=np.int64)
    acc = np.zeros(1)
    for i in range(n - 1, -1, -1):
        tail = partial  # columns i+1..n-1
        centre = tail @ q[i, i + 1:] if tail.shape[1] else np.zeros(len(tail))
        room = np.maximum(r - acc, 0.0)
        half = np.sqrt(room / d[i])
        lo = np.ceil(-centre - half - 1e-9).astype(np.int64)
        hi = np.floor(-centre + half + 1e-9).astype(np.int64)
        if box is not None:
            lo = np.maximum(lo, -box)
            hi = np.minimum(hi, box)
        counts = np.maximum(hi - lo + 1, 0)
        total = int(counts.sum())
        if total == 0:
            return np.zeros((0, n), dtype=np.int64)
        idx = np.repeat(np.arange(len(tail)), counts)
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        xi = lo[idx] + offsets
        new_acc = acc[idx] + d[i] * (xi + centre[idx]) ** 2
        keep = new_acc <= r
        partial = np.column_stack([xi[keep], tail[idx][keep]]) if tail.shape[1] else xi[keep].reshape(-1, 1)
        acc = new_acc[keep]
    return _exact_filter(p, partial, radius)


def _exact_filter(p, pts: np.ndarray, radius) -> np.ndarray:
    """Rows x of ``pts`` with x.P.x <= radius, checked in exact arithmetic."""
    if not len(pts):
        return pts
    scale = int(np.abs(pts).max()) ** 2 * sum(abs(int(v)) for row in p for v in row)
    if scale < 2**62:
        pa = np.array(p, dtype=np.int64)
        norms = np.einsum("ij,jk,ik->i", pts, pa, pts)
        return pts[norms <= radius]
    pi = [[int(v) for v in row] for row in p]
    keep = [ar.dot(ar.matvec(pi, [int(v) for v in row]), [int(v) for v in row]) <= radius for row in pts]
    return pts[np.array(keep, dtype=bool)]


def enumerate_vectors_array(lattice: Lattice, norm: int, bound: int) -> np.ndarray:
    """Array form of :func:`enumerate_vectors` (int64 rows, lexicographic)."""
    if bound < 0:
        raise LatticeError("bound must be nonnegative")
    g = lattice.gram
    blocks = _blocks(g)
    ranges = []
    for b in blocks:
        sub = [[g[i][j] for j in b] for i in b]
        absmax = bound * bound * sum(abs(v) for row in sub for v in row)
        ranges.append((sub, -absmax, absmax))
    tables = []
    for idx, (sub, lo, hi) in enumerate(ranges):
        rest_lo = sum(r[1] for j, r in enumerate(ranges) if j != idx)
        rest_hi = sum(r[2] for j, r in enumerate(ranges) if j != idx)
        tables.append(_box_vectors_by_norm(sub, bound, max(lo, norm - rest_hi), min(hi, norm - rest_lo)))
    combos: list[tuple[int, list]] = [(0, [])]
    for t in tables:
        combos = [(s + nv, parts + [vecs]) for s, parts in combos for nv, vecs in t.items()]
    chunks = []
    for s, parts in combos:
        if s != norm:
            continue
        block = np.zeros((1, lattice.rank), dtype=np.int64)
        for b, vecs in zip(blocks, parts):
            piece = np.asarray(vecs, dtype=np.int64).reshape(len(vecs), len(b))
            rep = np.repeat(block, len(piece), axis=0)
            rep[:, b] = np.tile(piece, (len(block), 1))
            block = rep
        chunks.append(block)
    if not chunks:
        return np.zeros((0, lattice.rank), dtype=np.int64)
    arr = np.concatenate(chunks)
    return arr[np.lexsort(arr.T[::-1])]


def enumerate_vectors(lattice: Lattice, norm: int, bound: int) -> list[tuple[int, ...]]:
    """All x with (x, x) = norm and max |x_i| <= bound, in lexicographic order.

    The Gram matrix is split into orthogonal blocks; definite blocks are
    enumerated with norm pruning, indefinite ones by an exhaustive box scan,
    and the pieces are recombined by norm.
    """
    return [tuple(int(v) for v in row) for row in enumerate_vectors_array(lattice, norm, bound)]


def enumerate_roots(lattice: Lattice, bound: int) -> list[tuple[int, ...]]:
    """All (-2)-vectors with coordinates in [-bound, bound], lexicographically sorted."""
    if lattice.degenerate:
        raise LatticeError("root enumeration needs a nondegenerate lattice")
    if bound <= 0:
        raise LatticeError("bound must be positive")
    return enumerate_vectors(lattice, -2, bound)


# ---------------------------------------------------------------- isometries


@dataclass(frozen=True)
class Isometry:
    """Integer matrix acting on coordinate columns and preserving the form."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(int(v) for v in row) for row in self.matrix))

    @classmethod
    def validated(cls, lattice: Lattice, matrix) -> "Isometry":
        m = cls(matrix)
        m.check(lattice)
        return m

    @classmethod
    def identity(cls, n: int) -> "Isometry":
        return cls(tuple(map(tuple, ar.identity(n))))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def check(self, lattice: Lattice) -> None:
        m = self.matrix
        if len(m) != lattice.rank or any(len(r) != lattice.rank for r in m):
            raise LatticeError("isometry has the wrong shape")
        lhs = ar.matmul(ar.transpose(m), ar.matmul(lattice.gram, m))
        if lhs != [list(r) for r in lattice.gram]:
            raise LatticeError("matrix does not preserve the form")
        if abs(ar.det(m)) != 1:
            raise LatticeError("isometry must be unimodular")

    def __call__(self, x) -> tuple[int, ...]:
        return tuple(ar.matvec(self.matrix, x))

    def compose(self, other: "Isometry") -> "Isometry":
        """self o other."""
        return Isometry(tuple(map(tuple, ar.matmul(self.matrix, other.matrix))))

    def inverse(self) -> "Isometry":
        inv = ar.inverse(self.matrix)
        return Isometry(tuple(tuple(int(v) for v in row) for row in inv))

    def is_identity(self) -> bool:
        return self.matrix == tuple(map(tuple, ar.identity(self.rank)))


@dataclass(frozen=True)
class Involution(Isometry):
    """An isometry squaring to the identity."""

    def check(self, lattice: Lattice) -> None:
        super().check(lattice)
        if not self.compose(self).is_identity():
            raise LatticeError("matrix is not an involution")


def swap_involution(lattice: Lattice) -> tuple[Lattice, Involution]:
    """(L + L, the involution exchanging the two summands)."""
    n = lattice.rank
    doubled = orthogonal_sum(lattice, lattice)
    m = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        m[i][n + i] = 1
        m[n + i][i] = 1
    return doubled, Involution.validated(doubled, m)


def invariant_sublattice(lattice: Lattice, iota: Involution):
    """Z-basis (as rows) of {x : iota x = x} and the induced Gram matrix.

    Returns ``(basis, sublattice, divisors)`` where ``divisors`` are the Smith
    invariants of the inclusion; they are all 1 because a fixed lattice is
    always saturated.
    """
    iota.check(lattice)
    n = lattice.rank
    diff = [[iota.matrix[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    basis = ar.integer_kernel(diff, n)
    gram = tuple(tuple(lattice.inner(u, v) for v in basis) for u in basis)
    sub = Lattice(gram, degenerate=bool(basis) and ar.det(gram) == 0, name="fixed")
    return tuple(map(tuple, basis)), sub, smith_divisors(basis) if basis else ()


def coordinates_in(basis: Sequence[Sequence[int]], x) -> tuple[int, ...]:
    """Integer coordinates of ``x`` in a basis given as rows (must exist)."""
    sol = ar.solve(ar.transpose(basis), list(x))
    if sol is None or any(v.denominator != 1 for v in sol):
        raise LatticeError("vector is not in the span of the basis over Z")
    return tuple(int(v) for v in sol)


def lex_positive(x: Iterable[int]) -> bool:
    for v in x:
        if v:
            return v > 0
    return False
