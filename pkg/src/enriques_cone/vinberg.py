"""Vinberg's algorithm for the (-2)-reflection group of a hyperbolic lattice.

Roots are taken in increasing order of ``k = (b, h)`` for a timelike
controller ``h``. Roots with ``k = 0`` form a finite root system in
``h^perp``; its simple system for the lexicographic order is accepted first.
Later roots are accepted when they pair nonnegatively with everything
accepted so far. The run stops as soon as the accepted walls cut out a
finite-volume cone.

Candidate roots of a given key come from a Fincke-Pohst enumeration of the
positive definite integer form ``Q'(x) = 2 (x, h)^2 - (h, h) (x, x)``, on
which every root with ``(b, h) = k`` has value ``2 k^2 + 2 (h, h)``.

An isotropic controller ``e`` is handled by running with ``h = N e + h0``
for a fixed timelike ``h0`` with ``(h0, e) > 0``, increasing ``N`` until
every accepted root satisfies ``(b, e) >= 0``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from sklearn.base import BaseEstimator

from ._validation import check_fitted
from .cone import Chamber, ConeFrame, DegenerateChamber, cone_rays
from .diagrams import CoxeterDiagram, coxeter_diagram
from .lattice import Lattice, LatticeError, lex_positive, short_vectors

__all__ = [
    "VinbergRun",
    "vinberg_roots",
    "finite_volume_check",
    "VinbergChamber",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 5_000
STATUSES = ("running", "finite_volume", "budget_exhausted")


@dataclass
class VinbergRun:
    lattice: Lattice
    controller: tuple[int, ...]
    accepted: list[tuple[int, ...]] = field(default_factory=list)
    status: str = "running"
    keys: list[int] = field(default_factory=list)
    examined: int = 0
    working_controller: tuple[int, ...] | None = None

    def frame(self) -> ConeFrame:
        return ConeFrame(self.lattice, self.working_controller or self.controller)

    def chamber(self) -> Chamber:
        return Chamber.from_walls(self.frame(), self.accepted)

    def truncated(self, count: int) -> "VinbergRun":
        return VinbergRun(
            self.lattice,
            self.controller,
            self.accepted[:count],
            "running",
            self.keys[:count],
            self.examined,
            self.working_controller,
        )

    def as_dict(self) -> dict:
        return {
            "controller": list(self.controller),
            "working_controller": list(self.working_controller or self.controller),
            "status": self.status,
            "roots": [list(b) for b in self.accepted],
            "keys": list(self.keys),
            "examined": self.examined,
        }


def _positive_form(lattice: Lattice, h) -> list[list[int]]:
    gh = lattice.dual_coords(h)
    hh = lattice.norm(h)
    g = lattice.gram
    n = lattice.rank
    return [[2 * gh[i] * gh[j] - hh * g[i][j] for j in range(n)] for i in range(n)]


class _RootShells:
    """Roots with (b, h) = k, computed by enlarging one Fincke-Pohst ball."""

    def __init__(self, lattice: Lattice, h):
        self.lattice = lattice
        self.h = h
        self.hh = lattice.norm(h)
        self.q = _positive_form(lattice, h)
        self.radius = -1
        self.shells: dict[int, list[tuple[int, ...]]] = {}

    def shell(self, k: int) -> list[tuple[int, ...]]:
        need = 2 * k * k + 2 * self.hh
        if need > self.radius:
            kk = max(k, 1)
            radius = max(need, 2 * (2 * kk) ** 2 + 2 * self.hh)
            shells: dict[int, list] = {}
            for x in short_vectors(self.q, radius):
                if self.lattice.norm(x) != -2:
                    continue
                key = self.lattice.inner(x, self.h)
                if key >= 0:
                    shells.setdefault(key, []).append(x)
            self.shells = {key: sorted(v) for key, v in shells.items()}
            self.radius = radius
        return self.shells.get(k, [])


def _simple_system(roots: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Indecomposable lex-positive roots of a finite root system, in lex order."""
    pos = sorted(r for r in roots if lex_positive(r))
    posset = set(pos)
    simple = []
    for r in pos:
        if not any(tuple(a - b for a, b in zip(r, s)) in posset for s in pos if s != r):
            simple.append(r)
    return simple


def _finite_volume(lattice: Lattice, seed, walls) -> bool:
    if not walls:
        return False
    try:
        c = Chamber.from_walls(ConeFrame(lattice, seed), walls)
    except DegenerateChamber:
        return False
    res = cone_rays(c)
    return res.pointed and all(lattice.norm(r) >= 0 for r in res.rays)


def _run_timelike(lattice: Lattice, h, budget: int, max_key: int | None) -> VinbergRun:
    run = VinbergRun(lattice, tuple(h), working_controller=tuple(h))
    shells = _RootShells(lattice, h)
    k = 0
    while True:
        if max_key is not None and k > max_key:
            run.status = "running"
            return run
        cands = shells.shell(k)
        if k == 0:
            batch = _simple_system(cands)
            run.examined += len(cands)
            run.accepted.extend(batch)
            run.keys.extend([0] * len(batch))
            if run.examined > budget:
                run.status = "budget_exhausted"
                return run
        else:
            for b in cands:
                run.examined += 1
                if run.examined > budget:
                    run.status = "budget_exhausted"
                    return run
                if all(lattice.inner(b, a) >= 0 for a in run.accepted):
                    run.accepted.append(b)
                    run.keys.append(k)
        if cands and _finite_volume(lattice, h, run.accepted):
            run.status = "finite_volume"
            return run
        k += 1
        if run.examined + k > budget:  # empty shells also consume budget
            run.status = "budget_exhausted"
            return run


def _auxiliary_timelike(lattice: Lattice, e) -> tuple[int, ...]:
    """A small timelike h0 with (h0, e) > 0: t e + (unit vector), else a box search."""
    n = lattice.rank
    for t in range(1, 50):
        for i in range(n):
            x = tuple(t * a + int(i == j) for j, a in enumerate(e))
            if lattice.norm(x) > 0 and lattice.inner(x, e) > 0:
                return x
    for x in itertools.product(range(-2, 3), repeat=n):
        if lattice.norm(x) > 0 and lattice.inner(x, e) > 0:
            return tuple(x)
    raise LatticeError("could not find an auxiliary timelike vector")


def vinberg_roots(
    lattice: Lattice,
    controller,
    budget: int = DEFAULT_BUDGET,
    max_key: int | None = None,
    auxiliary=None,
) -> VinbergRun:
    if not lattice.is_hyperbolic:
        raise LatticeError(f"Vinberg's algorithm needs signature (1, n-1), got {lattice.signature}")
    c = lattice.check_vector(controller)
    nrm = lattice.norm(c)
    if nrm < 0 or not any(c):
        raise LatticeError("controller must be nonzero with nonnegative norm")
    if nrm > 0:
        return _run_timelike(lattice, c, budget, max_key)
    h0 = lattice.check_vector(auxiliary) if auxiliary is not None else _auxiliary_timelike(lattice, c)
    if lattice.norm(h0) <= 0 or lattice.inner(h0, c) <= 0:
        raise LatticeError("auxiliary vector must be timelike on the controller's side")
    for scale in range(1, 64):
        h = tuple(scale * a + b for a, b in zip(c, h0))
        run = _run_timelike(lattice, h, budget, max_key)
        if all(lattice.inner(b, c) >= 0 for b in run.accepted):
            run.controller = c
            return run
    raise LatticeError("no working controller found near the isotropic controller")


def finite_volume_check(run: VinbergRun) -> bool:
    """True iff every extreme ray of the accepted wall cone has norm >= 0.

    A cone containing a line (too few walls to be pointed) is not of finite
    volume.
    """
    if not run.accepted:
        raise DegenerateChamber("no accepted roots")
    return _finite_volume(run.lattice, run.working_controller or run.controller, run.accepted)


class VinbergChamber(BaseEstimator):
    """Estimator front end: ``fit(lattice)`` runs the algorithm and stores the chamber."""

    def __init__(self, controller=None, budget: int = DEFAULT_BUDGET, auxiliary=None):
        self.controller = controller
        self.budget = budget
        self.auxiliary = auxiliary

    def fit(self, X: Lattice, y=None):
        if not isinstance(X, Lattice):
            raise TypeError("fit expects a Lattice")
        controller = self.controller
        if controller is None:
            controller = _auxiliary_timelike(X, (1,) + (0,) * (X.rank - 1)) if X.rank else None
        run = vinberg_roots(X, controller, self.budget, auxiliary=self.auxiliary)
        self.run_ = run
        self.roots_ = tuple(run.accepted)
        self.finite_volume_ = run.status == "finite_volume"
        self.chamber_ = run.chamber()
        self.diagram_ = coxeter_diagram(X, run.accepted)
        return self

    def diagram(self) -> CoxeterDiagram:
        check_fitted(self, "diagram_")
        return self.diagram_
