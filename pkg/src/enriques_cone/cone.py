"""Positive cone, rational boundary rays and polyhedral chambers.

A :class:`ConeFrame` fixes a hyperbolic lattice and a seed vector of positive
norm; the seed picks out the component ``Pos`` of ``{(x, x) > 0}``. ``Pos+``
adds the integral isotropic vectors on the boundary of that component.

Sign convention for rays: a nonzero ``r`` in the closed cone with
``(r, seed) = 0`` would be orthogonal to a positive vector, hence of negative
norm by the signature ``(1, n-1)``; so every ray of a chamber lying in the
closed positive cone has strictly positive pairing with the seed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from . import _arith as ar
from ._polyhedra import ConeRays, conic_combination, double_description, strict_solution
from .lattice import Lattice, LatticeError

__all__ = [
    "ConeFrame",
    "Chamber",
    "RationalRay",
    "OutsidePositiveCone",
    "DegenerateChamber",
    "in_pos",
    "in_pos_plus",
    "chamber_contains",
    "extreme_rays",
    "cone_rays",
    "pos_strict_point",
]


class OutsidePositiveCone(ValueError):
    """A vector was expected in Pos+ but is not."""


class DegenerateChamber(ValueError):
    """The wall system cuts out no open subset of Pos."""


@dataclass(frozen=True)
class ConeFrame:
    lattice: Lattice
    seed: tuple[int, ...]

    def __post_init__(self):
        lat = self.lattice
        if not lat.is_hyperbolic:
            raise LatticeError(f"cone frames need signature (1, n-1), got {lat.signature}")
        seed = lat.check_vector(self.seed)
        object.__setattr__(self, "seed", seed)
        if lat.norm(seed) <= 0:
            raise LatticeError("seed must have positive self-intersection")

    @property
    def rank(self) -> int:
        return self.lattice.rank


@dataclass(frozen=True)
class RationalRay:
    generator: tuple[int, ...]

    def __post_init__(self):
        g = tuple(int(v) for v in self.generator)
        if ar.content(g) != 1:
            raise ValueError("ray generator must be primitive")
        object.__setattr__(self, "generator", g)


def in_pos(frame: ConeFrame, x) -> bool:
    lat = frame.lattice
    x = lat.check_vector(x)
    return lat.norm(x) > 0 and lat.inner(x, frame.seed) > 0


def in_pos_plus(frame: ConeFrame, x) -> bool:
    lat = frame.lattice
    x = lat.check_vector(x)
    n = lat.norm(x)
    return n >= 0 and lat.inner(x, frame.seed) > 0


def reflection_coefficients(lattice: Lattice, u) -> tuple[int, tuple[int, ...]]:
    """(norm, 2 G u / norm) for a wall u; raises unless the reflection is integral."""
    nrm = lattice.norm(u)
    if nrm >= 0:
        raise LatticeError("walls must have negative norm")
    gu = lattice.dual_coords(u)
    if any((2 * c) % nrm for c in gu):
        raise LatticeError(f"reflection in {u} is not integral")
    return nrm, tuple(2 * c // nrm for c in gu)


@dataclass(frozen=True)
class Chamber:
    """{x in Pos+ : (x, b) >= 0 for every wall b}, with an interior witness.

    Walls of norm -2 are ordinary roots; ``generic`` admits other negative
    norms provided the reflection ``x - 2 (x, u) / (u, u) u`` is integral.
    """

    frame: ConeFrame
    walls: tuple[tuple[int, ...], ...]
    witness: tuple[int, ...]
    generic: bool = False

    def __post_init__(self):
        lat = self.frame.lattice
        walls = tuple(lat.check_vector(b) for b in self.walls)
        object.__setattr__(self, "walls", walls)
        object.__setattr__(self, "witness", lat.check_vector(self.witness))
        for b in walls:
            if lat.norm(b) != -2 and not self.generic:
                raise LatticeError(f"wall {b} is not a (-2)-vector; pass generic=True")
            reflection_coefficients(lat, b)
        if not in_pos(self.frame, self.witness):
            raise DegenerateChamber("interior witness is not in Pos")
        if any(lat.inner(self.witness, b) <= 0 for b in walls):
            raise DegenerateChamber("interior witness is not strictly inside every wall")

    @classmethod
    def from_walls(cls, frame: ConeFrame, walls: Sequence, generic: bool | None = None) -> "Chamber":
        lat = frame.lattice
        walls = tuple(lat.check_vector(b) for b in walls)
        if generic is None:
            generic = any(lat.norm(b) != -2 for b in walls)
        witness = find_interior_point(frame, walls)
        return cls(frame, walls, witness, generic)

    @property
    def lattice(self) -> Lattice:
        return self.frame.lattice

    @property
    def rank(self) -> int:
        return self.frame.rank

    def pairings(self, x) -> tuple[int, ...]:
        lat = self.lattice
        gx = lat.dual_coords(x)
        return tuple(ar.dot(gx, b) for b in self.walls)

    def reflect(self, index: int, x) -> tuple[int, ...]:
        """Reflection of ``x`` in wall ``index``."""
        b = self.walls[index]
        nrm, coeff = reflection_coefficients(self.lattice, b)
        t = ar.dot(coeff, x)
        return tuple(xi - t * bi for xi, bi in zip(x, b))

    def reflection_matrix(self, index: int) -> tuple[tuple[int, ...], ...]:
        b = self.walls[index]
        _, coeff = reflection_coefficients(self.lattice, b)
        n = self.rank
        return tuple(tuple(int(i == j) - b[i] * coeff[j] for j in range(n)) for i in range(n))

    def without(self, index: int) -> "Chamber":
        walls = self.walls[:index] + self.walls[index + 1:]
        return Chamber(self.frame, walls, self.witness, self.generic)


def chamber_contains(c: Chamber, x, strict: bool = False) -> bool:
    x = c.lattice.check_vector(x)
    if not in_pos_plus(c.frame, x):
        raise OutsidePositiveCone(f"{x} is not in Pos+")
    p = c.pairings(x)
    return all(v > 0 for v in p) if strict else all(v >= 0 for v in p)


def _rational_isotropic_rays(frame: ConeFrame) -> list[tuple[int, ...]] | None:
    """The two isotropic boundary rays of Pos in rank 2, or None if irrational."""
    (a, b), (_, c) = frame.lattice.gram
    disc = b * b - a * c
    d = isqrt(disc)
    if d * d != disc:
        return None
    if a != 0:
        cands = [(-b + d, a), (-b - d, a)]
    else:
        cands = [(1, 0), (c, -2 * b)]
    out = []
    for v in cands:
        v = ar.primitive(v)
        if frame.lattice.inner(v, frame.seed) < 0:
            v = tuple(-t for t in v)
        out.append(v)
    return out


def cone_rays(c: Chamber) -> ConeRays:
    """Double description of {(x, b) >= 0 for walls b, (x, seed) >= 0}.

    In rank 2 the closed positive cone is itself polyhedral when its
    boundary rays are rational, and it is intersected in.
    """
    lat = c.lattice
    rows = [lat.dual_coords(b) for b in c.walls] + [lat.dual_coords(c.frame.seed)]
    if c.rank == 2:
        iso = _rational_isotropic_rays(c.frame)
        if iso is not None:
            rows += [lat.dual_coords(u) for u in iso]
    return double_description(rows, c.rank)


def extreme_rays(c: Chamber) -> list[RationalRay]:
    if c.rank > 10:
        raise ValueError("extreme ray computation is limited to rank <= 10")
    res = cone_rays(c)
    if not res.pointed:
        raise DegenerateChamber("chamber cone contains a line; it has no extreme rays")
    return [RationalRay(r) for r in res.rays]


def find_interior_point(frame: ConeFrame, walls) -> tuple[int, ...]:
    lat = frame.lattice
    if all(lat.inner(frame.seed, b) > 0 for b in walls):
        return frame.seed
    rows = [lat.dual_coords(b) for b in walls]
    if all(lat.inner(frame.seed, b) >= 0 for b in walls):
        # seed on the closed chamber: push it off its walls by a strict direction
        res = strict_solution(rows, lat.rank)
        if res.feasible:
            m = 1
            while True:
                x = tuple(m * s + v for s, v in zip(frame.seed, res.point))
                if in_pos(frame, x):
                    return x
                m *= 2
    point, _ = pos_strict_point(frame, rows)
    if point is None:
        raise DegenerateChamber("walls cut out no open subset of Pos")
    return point


def pos_strict_point(frame: ConeFrame, rows, max_cuts: int = 200):
    """A point x of Pos with row . x > 0 for every row, or a proof there is none.

    Returns ``(point, None)``, ``(None, certificate)`` where the certificate is
    a Gordan multiplier vector over ``rows`` plus the supporting cuts used, or
    ``(None, None)`` if the cut budget ran out. Cuts are linear functionals
    (x, z) > 0 with z in the closed positive cone, so they are valid on Pos.
    """
    lat = frame.lattice
    seed = frame.seed
    sigma = lat.norm(seed)
    system = [tuple(r) for r in rows] + [lat.dual_coords(seed)]
    cuts: list[tuple[int, ...]] = []
    for _ in range(max_cuts):
        res = strict_solution(system + cuts, lat.rank)
        if not res.feasible:
            return None, {"multipliers": res.certificate, "cuts": cuts}
        x = res.point
        if lat.norm(x) > 0:
            return x, None
        alpha = Fraction(lat.inner(x, seed))
        v = [Fraction(xi) - alpha / sigma * si for xi, si in zip(x, seed)]
        vv = -sum(Fraction(a) * b for a, b in zip(ar.matvec(lat.gram, v), v))
        beta = vv / alpha
        z = ar.clear_denominators([beta * si + vi for si, vi in zip(seed, v)])
        cuts.append(lat.dual_coords(z))
    return None, None


def conic_hull_contains(rays: Sequence[RationalRay], x) -> bool:
    return conic_combination([r.generator for r in rays], list(x)) is not None
