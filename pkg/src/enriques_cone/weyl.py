"""Reflections, equivariant reflections and chamber reduction.

For a (-2)-vector ``b`` the reflection is ``x -> x + (x, b) b``. Given an
involution ``theta`` and a root ``b`` with ``(b, theta b) = 0`` the
equivariant reflection is ``R_b = r_b o r_{theta b}``; it commutes with
``theta``, so it acts on the fixed lattice ``L`` where it becomes the
reflection in the wall ``(-, b) = 0``. Inside ``L`` that wall is cut by the
norm -4 vector ``b + theta b``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from . import _arith as ar
from ._polyhedra import check_gordan_certificate
from ._validation import check_fitted, check_vectors
from .cone import (
    Chamber,
    ConeFrame,
    OutsidePositiveCone,
    chamber_contains,
    cone_rays,
    in_pos,
    in_pos_plus,
    pos_strict_point,
    reflection_coefficients,
)
from .lattice import Involution, Isometry, Lattice, LatticeError, coordinates_in, invariant_sublattice, lex_positive

__all__ = [
    "reflect",
    "EquivariantRoot",
    "equi_reflect",
    "ReflectionWord",
    "EnriquesSetup",
    "restrict_equi",
    "Reduction",
    "ReductionBudgetExceeded",
    "chamber_reduce",
    "batch_reduce",
    "sample_pos",
    "word_matrix",
    "perturbed_witness",
    "ChamberReducer",
    "word_ball",
    "verify_fundamental_domain",
    "FundamentalDomainReport",
    "chamber_symmetries",
    "factorize",
    "FactorizationError",
]

DEFAULT_MAX_STEPS = 10_000


def reflect(lattice: Lattice, b, x) -> tuple[int, ...]:
    b = lattice.check_vector(b)
    x = lattice.check_vector(x)
    if lattice.norm(b) != -2:
        raise LatticeError(f"{b} is not a (-2)-vector")
    t = lattice.inner(x, b)
    return tuple(xi + t * bi for xi, bi in zip(x, b))


def _reflect_any(lattice: Lattice, u, x) -> tuple[int, ...]:
    _, coeff = reflection_coefficients(lattice, u)
    t = ar.dot(coeff, x)
    return tuple(xi - t * ui for xi, ui in zip(x, u))


@dataclass(frozen=True)
class EquivariantRoot:
    lattice: Lattice
    b: tuple[int, ...]
    theta: Involution

    def __post_init__(self):
        lat = self.lattice
        b = lat.check_vector(self.b)
        object.__setattr__(self, "b", b)
        if lat.norm(b) != -2:
            raise LatticeError("equivariant roots need (b, b) = -2")
        tb = self.theta(b)
        if tb == b:
            raise LatticeError("theta fixes b")
        if lat.inner(b, tb) != 0:
            raise LatticeError(f"(b, theta b) = {lat.inner(b, tb)}, expected 0")

    @property
    def partner(self) -> tuple[int, ...]:
        return self.theta(self.b)

    @property
    def invariant_class(self) -> tuple[int, ...]:
        """b + theta b, the class cutting the wall inside the fixed lattice."""
        return tuple(x + y for x, y in zip(self.b, self.partner))

    def __call__(self, x) -> tuple[int, ...]:
        return equi_reflect(self, x)


def equi_reflect(r: EquivariantRoot, x) -> tuple[int, ...]:
    lat = r.lattice
    x = lat.check_vector(x)
    tb = r.partner
    s, t = lat.inner(x, r.b), lat.inner(x, tb)
    return tuple(xi + s * bi + t * ci for xi, bi, ci in zip(x, r.b, tb))


@dataclass(frozen=True)
class ReflectionWord:
    """A product of reflections, applied first entry first.

    Each entry is a tuple of mutually orthogonal reflecting vectors: one
    (-2)-root for an ordinary reflection, the pair ``(b, theta b)`` for an
    equivariant one, or a single wall of another negative norm.
    """

    lattice: Lattice
    entries: tuple[tuple[tuple[int, ...], ...], ...] = ()

    def __post_init__(self):
        entries = tuple(tuple(self.lattice.check_vector(v) for v in e) for e in self.entries)
        object.__setattr__(self, "entries", entries)

    def kinds(self) -> tuple[str, ...]:
        out = []
        for e in self.entries:
            if len(e) == 2:
                out.append("equivariant")
            elif self.lattice.norm(e[0]) == -2:
                out.append("plain")
            else:
                out.append("wall")
        return tuple(out)

    def __len__(self) -> int:
        return len(self.entries)

    def __call__(self, x) -> tuple[int, ...]:
        x = self.lattice.check_vector(x)
        for e in self.entries:
            for u in e:
                x = _reflect_any(self.lattice, u, x)
        return x

    def matrix(self) -> Isometry:
        n = self.lattice.rank
        cols = [self(tuple(int(i == j) for i in range(n))) for j in range(n)]
        return Isometry(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))

    def inverse(self) -> "ReflectionWord":
        return ReflectionWord(self.lattice, tuple(reversed(self.entries)))

    def __add__(self, other: "ReflectionWord") -> "ReflectionWord":
        return ReflectionWord(self.lattice, self.entries + other.entries)


@dataclass(frozen=True)
class EnriquesSetup:
    """K3-side lattice with an involution, its fixed lattice and a nodal set.

    ``basis`` holds the fixed-lattice basis as ambient coordinate rows; the
    chamber lives in ``fixed`` and its walls are the classes ``b + theta b``
    of the nodal roots, in ``fixed`` coordinates.
    """

    ns: Lattice
    theta: Involution
    basis: tuple[tuple[int, ...], ...]
    fixed: Lattice
    nodal: tuple[EquivariantRoot, ...]
    chamber: Chamber

    @classmethod
    def build(cls, ns: Lattice, theta, nodal: Sequence, seed=None) -> "EnriquesSetup":
        theta = theta if isinstance(theta, Involution) else Involution(theta)
        theta.check(ns)
        basis, fixed, _ = invariant_sublattice(ns, theta)
        roots = tuple(r if isinstance(r, EquivariantRoot) else EquivariantRoot(ns, r, theta) for r in nodal)
        walls = [coordinates_in(basis, r.invariant_class) for r in roots]
        if seed is None:
            seed = _default_seed(fixed, walls)
        frame = ConeFrame(fixed, seed)
        chamber = Chamber.from_walls(frame, walls, generic=True)
        return cls(ns, theta, basis, fixed, roots, chamber)

    def embed(self, y) -> tuple[int, ...]:
        """Fixed-lattice coordinates -> ambient coordinates."""
        return tuple(sum(c * row[i] for c, row in zip(y, self.basis)) for i in range(self.ns.rank))

    def word(self, indices: Sequence[int]) -> ReflectionWord:
        return ReflectionWord(self.ns, tuple((self.nodal[i].b, self.nodal[i].partner) for i in indices))


def _default_seed(lattice: Lattice, walls) -> tuple[int, ...]:
    """Lexicographically first positive-norm, lex-positive box vector strictly inside every wall.

    Falls back to the first lex-positive positive-norm vector when no small
    vector is strictly inside; the chamber witness is then found separately.
    """
    best = None
    for bound in (1, 2, 3):
        for x in itertools.product(range(-bound, bound + 1), repeat=lattice.rank):
            if not lex_positive(x) or lattice.norm(x) <= 0:
                continue
            if all(lattice.inner(x, b) > 0 for b in walls):
                return tuple(x)
            if best is None:
                best = tuple(x)
        if best is not None and lattice.rank > 4:
            break
    if best is None:
        raise LatticeError("no positive vector found for the frame seed")
    return best


def restrict_equi(r: EquivariantRoot, setup: EnriquesSetup) -> Isometry:
    """Matrix of R_b on the fixed lattice, in the fixed-lattice basis."""
    if r.theta != setup.theta or r.lattice != setup.ns:
        raise LatticeError("root is not compatible with the setup's involution")
    cols = [coordinates_in(setup.basis, equi_reflect(r, v)) for v in setup.basis]
    n = len(setup.basis)
    return Isometry(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))


# ---------------------------------------------------------------- reduction


class ReductionBudgetExceeded(RuntimeError):
    def __init__(self, word, vector):
        super().__init__(f"step budget exhausted after {len(word)} reflections")
        self.word = tuple(word)
        self.vector = vector


@dataclass(frozen=True)
class Reduction:
    """``vector = w(x)`` where ``w`` reflects in ``walls[i]`` for ``i`` in ``word``, in order."""

    word: tuple[int, ...]
    vector: tuple[int, ...]


def perturbed_witness(c: Chamber) -> tuple[int, ...]:
    """K * witness + (1, 2, ..., n), with K large enough to stay strictly inside."""
    n = c.rank
    delta = tuple(range(1, n + 1))
    k = 1
    while True:
        w = tuple(k * a + d for a, d in zip(c.witness, delta))
        if in_pos(c.frame, w) and all(v > 0 for v in c.pairings(w)):
            return w
        k *= 2


def _walk(c: Chamber, x, max_steps: int, start) -> Reduction:
    lat = c.lattice
    walls = c.walls
    gw = [lat.dual_coords(b) for b in walls]
    coeffs = [reflection_coefficients(lat, b)[1] for b in walls]
    p = start
    word: list[int] = []
    while True:
        px = [ar.dot(g, x) for g in gw]
        if all(v >= 0 for v in px):
            return Reduction(tuple(word), tuple(x))
        if len(word) >= max_steps:
            raise ReductionBudgetExceeded(word, tuple(x))
        best, bnum, bden = None, None, None
        for i, v in enumerate(px):
            if v >= 0:
                continue
            pp = ar.dot(gw[i], p)
            num, den = pp, pp - v  # crossing parameter num/den in [0, 1)
            if best is None or num * bden < bnum * den:
                best, bnum, bden = i, num, den
        i = best
        v, pp = px[i], bnum
        p = [-v * a + pp * b for a, b in zip(p, x)]
        g = ar.content(p)
        p = [a // g for a in p]
        t = ar.dot(coeffs[i], x)
        x = [xi - t * bi for xi, bi in zip(x, walls[i])]
        word.append(i)


def _greedy(c: Chamber, x, max_steps: int) -> Reduction:
    lat = c.lattice
    gw = [lat.dual_coords(b) for b in c.walls]
    coeffs = [reflection_coefficients(lat, b)[1] for b in c.walls]
    word: list[int] = []
    while True:
        i = next((i for i, g in enumerate(gw) if ar.dot(g, x) < 0), None)
        if i is None:
            return Reduction(tuple(word), tuple(x))
        if len(word) >= max_steps:
            raise ReductionBudgetExceeded(word, tuple(x))
        t = ar.dot(coeffs[i], x)
        x = [xi - t * bi for xi, bi in zip(x, c.walls[i])]
        word.append(i)


STRATEGIES = ("walk", "greedy")


def chamber_reduce(target, x, strategy: str = "walk", max_steps: int = DEFAULT_MAX_STEPS):
    """Move ``x`` into the chamber by wall reflections.

    ``walk`` follows the segment from a perturbed interior witness to ``x``
    and reflects in the first wall it crosses; ``greedy`` reflects in the
    lowest-index wall with negative pairing. Both end at the unique chamber
    representative of the orbit.

    With an :class:`EnriquesSetup`, ``x`` is in fixed-lattice coordinates
    and the returned word is a :class:`ReflectionWord` of equivariant roots;
    with a :class:`Chamber` it is a tuple of wall indices.
    """
    c = target.chamber if isinstance(target, EnriquesSetup) else target
    x = c.lattice.check_vector(x)
    if not in_pos_plus(c.frame, x):
        raise OutsidePositiveCone(f"{x} is not in Pos+")
    if strategy == "walk":
        red = _walk(c, list(x), max_steps, list(perturbed_witness(c)))
    elif strategy == "greedy":
        red = _greedy(c, list(x), max_steps)
    else:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if isinstance(target, EnriquesSetup):
        return target.word(red.word), red.vector
    return red


def batch_reduce(c: Chamber, xs: np.ndarray, max_steps: int = DEFAULT_MAX_STEPS) -> np.ndarray:
    """Greedy reduction of many vectors at once in int64, with an overflow guard.

    Falls back to exact Python integers row by row if magnitudes get large.
    """
    lat = c.lattice
    walls = np.array(c.walls, dtype=np.int64).reshape(len(c.walls), c.rank)
    gw = np.array([lat.dual_coords(b) for b in c.walls], dtype=np.int64).reshape(walls.shape)
    coeffs = np.array([reflection_coefficients(lat, b)[1] for b in c.walls], dtype=np.int64).reshape(walls.shape)
    x = np.array(xs, dtype=np.int64).reshape(-1, c.rank).copy()
    scale = int(max(np.abs(gw).max(initial=0), np.abs(coeffs).max(initial=0), np.abs(walls).max(initial=0), 1))
    limit = 2**62 // (scale * scale * (c.rank + 1) ** 2)
    active = np.arange(len(x))
    for _ in range(max_steps + 1):
        if not len(active) or not len(walls):
            return x
        if np.abs(x[active]).max() > limit:
            break
        p = x[active] @ gw.T
        neg = p < 0
        has = neg.any(axis=1)
        active = active[has]
        if not len(active):
            return x
        first = neg[has].argmax(axis=1)
        t = np.einsum("ij,ij->i", coeffs[first], x[active])
        x[active] -= t[:, None] * walls[first]
    else:
        raise ReductionBudgetExceeded((), tuple(int(v) for v in x[active[0]]))
    out = x.astype(object)
    for i in active:
        out[i] = chamber_reduce(c, tuple(int(v) for v in x[i]), "greedy", max_steps).vector
    return out


class ChamberReducer(TransformerMixin, BaseEstimator):
    """Estimator wrapper mapping vectors of Pos+ to their chamber representatives.

    ``strategy`` is ``"walk"``, ``"greedy"`` or ``"batch"`` (vectorised
    greedy, representatives only).
    """

    def __init__(self, chamber: Chamber | None = None, strategy: str = "walk", max_steps: int = DEFAULT_MAX_STEPS):
        self.chamber = chamber
        self.strategy = strategy
        self.max_steps = max_steps

    def fit(self, X=None, y=None):
        if not isinstance(self.chamber, Chamber):
            raise TypeError("ChamberReducer needs a Chamber")
        if self.strategy not in STRATEGIES + ("batch",):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        self.n_features_in_ = self.chamber.rank
        return self

    def reduce(self, x) -> Reduction:
        check_fitted(self, "n_features_in_")
        strategy = "greedy" if self.strategy == "batch" else self.strategy
        return chamber_reduce(self.chamber, x, strategy, self.max_steps)

    def transform(self, X):
        check_fitted(self, "n_features_in_")
        rows = check_vectors(X, self.n_features_in_)
        for r in rows:
            if not in_pos_plus(self.chamber.frame, r):
                raise OutsidePositiveCone(f"{r} is not in Pos+")
        if self.strategy == "batch":
            out = batch_reduce(self.chamber, np.array(rows, dtype=object).astype(np.int64), self.max_steps)
            return np.array(out, dtype=object).reshape(len(rows), self.n_features_in_)
        reps = [chamber_reduce(self.chamber, r, self.strategy, self.max_steps).vector for r in rows]
        return np.array(reps, dtype=object).reshape(len(rows), self.n_features_in_)


# ---------------------------------------------------------------- group elements


def _mat_key(m: np.ndarray) -> bytes:
    return m.tobytes()


def word_ball(matrices: Sequence, radius: int) -> list[tuple[tuple[int, ...], np.ndarray]]:
    """Distinct products of at most ``radius`` generators, with a shortest word each.

    Breadth-first over group elements; ``word`` lists generator indices in
    the order they are applied.
    """
    gens = [np.array(m, dtype=np.int64) for m in matrices]
    n = gens[0].shape[0] if gens else 0
    ident = np.eye(n, dtype=np.int64)
    seen = {_mat_key(ident)}
    out = [((), ident)]
    frontier = [((), ident)]
    for _ in range(radius):
        nxt = []
        for word, m in frontier:
            for i, g in enumerate(gens):
                if word and word[-1] == i:
                    continue
                if np.abs(m).max() * np.abs(g).max() * n > 2**62:
                    raise OverflowError("word ball entries too large for int64")
                prod = g @ m
                key = _mat_key(prod)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((word + (i,), prod))
        out.extend(nxt)
        frontier = nxt
    return out


@dataclass
class FundamentalDomainReport:
    coverage_samples: int = 0
    coverage_failures: list = field(default_factory=list)
    words_checked: int = 0
    separated_by_wall: int = 0
    separated_by_lp: int = 0
    overlaps: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)

    @property
    def coverage_ok(self) -> bool:
        return not self.coverage_failures

    @property
    def disjointness_ok(self) -> bool:
        return not self.overlaps and not self.inconclusive

    @property
    def passed(self) -> bool:
        return self.coverage_ok and self.disjointness_ok

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "coverage": {"samples": self.coverage_samples, "failures": self.coverage_failures},
            "disjointness": {
                "words_checked": self.words_checked,
                "separated_by_wall": self.separated_by_wall,
                "separated_by_lp": self.separated_by_lp,
                "overlaps": self.overlaps,
                "inconclusive": self.inconclusive,
            },
        }


def sample_pos(frame: ConeFrame, count: int, seed: int = 0, bound: int = 4) -> list[tuple[int, ...]]:
    """Seeded integral points of Pos: a uniform box vector pushed along the seed into Pos."""
    rng = random.Random(seed)
    lat = frame.lattice
    out = []
    while len(out) < count:
        y = [rng.randint(-bound, bound) for _ in range(lat.rank)]
        k = 0
        while not in_pos(frame, tuple(a + k * s for a, s in zip(y, frame.seed))):
            k += 1
        k += rng.randint(0, 2)
        out.append(tuple(a + k * s for a, s in zip(y, frame.seed)))
    return out


def verify_fundamental_domain(
    target,
    samples: int = 100,
    word_radius: int = 3,
    seed: int = 0,
    generators: Sequence | None = None,
    sample_bound: int = 4,
) -> FundamentalDomainReport:
    """Check coverage by sampling and interior-disjointness over a word ball.

    ``generators`` are the reflecting vectors of the group (default: the
    chamber walls). Disjointness of ``sigma(A)`` and ``A`` is certified
    either by a wall of ``A`` that is nonpositive on every extreme ray of
    ``sigma(A)``, or by an exact Gordan certificate from the LP route.
    """
    c = target.chamber if isinstance(target, EnriquesSetup) else target
    lat = c.lattice
    report = FundamentalDomainReport()
    for x in sample_pos(c.frame, samples, seed, sample_bound):
        report.coverage_samples += 1
        try:
            red = chamber_reduce(c, x, "greedy")
            if not chamber_contains(c, red.vector):
                report.coverage_failures.append({"sample": x, "reduced": red.vector})
        except ReductionBudgetExceeded as exc:
            report.coverage_failures.append({"sample": x, "error": str(exc)})
    gens = list(generators) if generators is not None else list(c.walls)
    if not gens:
        return report
    mats = []
    for u in gens:
        _, coeff = reflection_coefficients(lat, u)
        n = lat.rank
        mats.append([[int(i == j) - u[i] * coeff[j] for j in range(n)] for i in range(n)])
    rays_res = cone_rays(c)
    rays = np.array(rays_res.rays, dtype=np.int64).reshape(-1, lat.rank) if rays_res.pointed else None
    gw = np.array([lat.dual_coords(b) for b in c.walls], dtype=np.int64).reshape(len(c.walls), lat.rank)
    for word, m in word_ball(mats, word_radius):
        if not word:
            continue
        report.words_checked += 1
        if rays is not None and len(gw):
            images = rays @ m.T
            vals = images @ gw.T  # (ray, wall)
            if (vals <= 0).all(axis=0).any():
                report.separated_by_wall += 1
                continue
        sigma = [[int(v) for v in row] for row in m]
        rows = [lat.dual_coords(b) for b in c.walls]
        rows += [lat.dual_coords(ar.matvec(sigma, b)) for b in c.walls]
        point, cert = pos_strict_point(c.frame, rows)
        if point is not None:
            report.overlaps.append({"word": list(word), "point": point})
        elif cert is not None:
            assert check_gordan_certificate(rows + [lat.dual_coords(c.frame.seed)] + cert["cuts"], cert["multipliers"])
            report.separated_by_lp += 1
        else:
            report.inconclusive.append({"word": list(word)})
    return report


# ---------------------------------------------------------------- symmetries


def chamber_symmetries(c: Chamber) -> list[Isometry]:
    """Isometries permuting the walls and the extreme rays of the chamber.

    Backtracking over assignments that preserve all pairings among walls and
    rays; each complete assignment is solved for a linear map on a spanning
    subset and kept if it is an integral isometry preserving Pos.
    """
    lat = c.lattice
    res = cone_rays(c)
    rays = list(res.rays) if res.pointed else []
    objs = [("w", b) for b in c.walls] + [("r", r) for r in rays]
    vecs = [v for _, v in objs]
    kinds = [k for k, _ in objs]
    pair = [[lat.inner(u, v) for v in vecs] for u in vecs]
    n = len(objs)
    span = []
    for i in range(n):
        if ar.rank([vecs[j] for j in span + [i]]) == len(span) + 1:
            span.append(i)
    if len(span) < lat.rank:
        return [Isometry.identity(lat.rank)]
    src = [vecs[i] for i in span]
    inv_src = ar.inverse(ar.transpose(src))  # columns are spanning vectors
    found: list[Isometry] = []

    def solve(assign):
        dst = ar.transpose([vecs[assign[i]] for i in span])
        m = ar.matmul(dst, inv_src)
        if any(v.denominator != 1 for row in m for v in row):
            return None
        mat = tuple(tuple(int(v) for v in row) for row in m)
        g = Isometry(mat)
        try:
            g.check(lat)
        except LatticeError:
            return None
        if not in_pos(c.frame, g(c.witness)):
            return None
        if any(g(vecs[i]) != vecs[assign[i]] for i in range(n)):
            return None
        return g

    def backtrack(assign, used):
        k = len(assign)
        if k == n:
            g = solve(assign)
            if g is not None:
                found.append(g)
            return
        for j in range(n):
            if j in used or kinds[j] != kinds[k] or pair[j][j] != pair[k][k]:
                continue
            if all(pair[assign[i]][j] == pair[i][k] for i in range(k)):
                assign.append(j)
                used.add(j)
                backtrack(assign, used)
                assign.pop()
                used.discard(j)

    backtrack([], set())
    found.sort(key=lambda g: (not g.is_identity(), g.matrix))
    return found


class FactorizationError(ValueError):
    pass


def factorize(target, g, max_steps: int = DEFAULT_MAX_STEPS):
    """Split ``g = w o a`` with ``w`` in the reflection group and ``a`` stabilising the chamber.

    ``w`` is read off by reducing ``g(witness)``. Returns ``(word, a)`` where
    ``word`` is a tuple of wall indices (a :class:`ReflectionWord` for an
    :class:`EnriquesSetup`) and ``a`` an :class:`Isometry`.
    """
    c = target.chamber if isinstance(target, EnriquesSetup) else target
    lat = c.lattice
    g = g if isinstance(g, Isometry) else Isometry(g)
    g.check(lat)
    image = g(c.witness)
    if not in_pos(c.frame, image):
        raise FactorizationError("g does not preserve the positive cone")
    red = chamber_reduce(c, image, "walk", max_steps)
    a = g
    for i in red.word:
        a = Isometry(c.reflection_matrix(i)).compose(a)
    wall_set = set(c.walls)
    if any(a(b) not in wall_set for b in c.walls) or not chamber_contains(c, a(c.witness), strict=True):
        raise FactorizationError("the residual map does not stabilise the chamber")
    word = tuple(reversed(red.word))
    if isinstance(target, EnriquesSetup):
        return target.word(word), a
    return word, a


def word_matrix(c: Chamber, word: Sequence[int]) -> Isometry:
    """Matrix of the wall word, applied first index first."""
    m = Isometry.identity(c.rank)
    for i in word:
        m = Isometry(c.reflection_matrix(i)).compose(m)
    return m
