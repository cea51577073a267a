"""Orbits of isotropic rays and (-2)-classes under a chamber's reflection group.

A vector of Pos+ is sent to its chamber representative by reduction; two
vectors share an orbit exactly when their representatives agree. For
(-2)-classes the representative is a wall: a positive root keeps being
reflected down until it becomes a wall, and walls joined by a chain of
pairing-1 edges are conjugate (the product of two such reflections has order
3), so the orbit label is the component of the wall in that graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import networkx as nx
import numpy as np
from sklearn.base import BaseEstimator

from . import _arith as ar
from ._validation import check_fitted, check_vectors
from .cone import Chamber, ConeFrame, OutsidePositiveCone, RationalRay, in_pos_plus
from .lattice import LatticeError, enumerate_vectors_array
from .weyl import DEFAULT_MAX_STEPS, ReductionBudgetExceeded, batch_reduce, chamber_reduce, chamber_symmetries

__all__ = [
    "primitive_isotropic",
    "OrbitTable",
    "classify_mod_W",
    "classify_roots_mod_W",
    "OrbitClassifier",
]


def primitive_isotropic(frame: ConeFrame, bound: int) -> list[RationalRay]:
    """Primitive e with (e, e) = 0, (e, seed) > 0 and all |coords| <= bound, lexicographic."""
    if bound <= 0:
        return []
    lat = frame.lattice
    arr = enumerate_vectors_array(lat, 0, bound)
    if not len(arr):
        return []
    g = np.gcd.reduce(np.abs(arr), axis=1)
    seedpair = arr @ np.array(lat.dual_coords(frame.seed), dtype=np.int64)
    keep = (g == 1) & (seedpair > 0)
    return [RationalRay(tuple(int(v) for v in row)) for row in arr[keep]]


@dataclass
class OrbitTable:
    """Orbit representatives with member counts; ``labels[i]`` indexes ``representatives``."""

    representatives: list[tuple[int, ...]] = field(default_factory=list)
    counts: list[int] = field(default_factory=list)
    labels: list[int] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    merged_by_symmetry: bool = False

    def __len__(self) -> int:
        return len(self.representatives)

    def as_dict(self) -> dict:
        return {
            "orbits": len(self.representatives),
            "representatives": [list(r) for r in self.representatives],
            "counts": list(self.counts),
            "failures": self.failures,
            "merged_by_symmetry": self.merged_by_symmetry,
        }


def _primitive(v) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return tuple(int(x) // g for x in v) if g > 1 else tuple(int(x) for x in v)


def _tabulate(keys: list, merged: bool) -> OrbitTable:
    order = sorted({k for k in keys if k is not None})
    index = {k: i for i, k in enumerate(order)}
    table = OrbitTable(representatives=list(order), counts=[0] * len(order), merged_by_symmetry=merged)
    for k in keys:
        if k is None:
            table.labels.append(-1)
        else:
            table.labels.append(index[k])
            table.counts[index[k]] += 1
    return table


def _as_int64(vectors, rank: int) -> np.ndarray | None:
    """Vectors as an int64 array when that is lossless and small enough to pair safely."""
    try:
        arr = np.asarray(vectors)
        if arr.dtype == object or arr.dtype.kind not in "iu":
            arr = np.array([[int(v) for v in row] for row in vectors], dtype=object)
            if arr.size and max(abs(int(v)) for v in arr.ravel()) >= 2**20:
                return None
            arr = arr.astype(np.int64)
    except (OverflowError, ValueError, TypeError):
        return None
    arr = arr.reshape(-1, rank) if arr.size else np.zeros((0, rank), dtype=np.int64)
    if arr.size and np.abs(arr).max() >= 2**20:
        return None
    return arr.astype(np.int64)


def _canonical_under(symmetries, rep):
    return min(s(rep) for s in symmetries) if symmetries else rep


def classify_mod_W(
    chamber: Chamber,
    vectors,
    merge_symmetries: bool = False,
    strategy: str = "batch",
    max_steps: int = DEFAULT_MAX_STEPS,
) -> OrbitTable:
    """Group vectors of Pos+ by the primitive generator of their chamber representative.

    With ``merge_symmetries`` the representatives are further identified
    under the chamber's symmetry group (lexicographically least image).
    """
    arr = _as_int64(vectors, chamber.rank)
    rows = None
    if arr is not None:
        lat = chamber.lattice
        g = np.array(lat.gram, dtype=np.int64)
        norms = np.einsum("ij,jk,ik->i", arr, g, arr)
        seedpair = arr @ np.array(lat.dual_coords(chamber.frame.seed), dtype=np.int64)
        bad = np.flatnonzero((norms < 0) | (seedpair <= 0))
        if len(bad):
            raise OutsidePositiveCone(f"{tuple(int(v) for v in arr[bad[0]])} is not in Pos+")
    else:
        rows = [chamber.lattice.check_vector(v) for v in vectors]
        for v in rows:
            if not in_pos_plus(chamber.frame, v):
                raise OutsidePositiveCone(f"{v} is not in Pos+")
    keys: list = []
    failures = []
    if strategy == "batch" and arr is not None and len(arr):
        try:
            reps = batch_reduce(chamber, arr, max_steps)
            if reps.dtype == object:
                keys = [_primitive(r) for r in reps]
            else:
                gg = np.gcd.reduce(np.abs(reps), axis=1)
                gg[gg == 0] = 1
                keys = [tuple(r) for r in (reps // gg[:, None]).tolist()]
        except (ReductionBudgetExceeded, OverflowError):
            keys = []
    if not keys and rows is None and arr is not None:
        rows = [tuple(int(v) for v in r) for r in arr.tolist()]
    if not keys and rows:
        base = "greedy" if strategy == "batch" else strategy
        for i, v in enumerate(rows):
            try:
                keys.append(_primitive(chamber_reduce(chamber, v, base, max_steps).vector))
            except ReductionBudgetExceeded as exc:
                keys.append(None)
                failures.append({"index": i, "vector": list(v), "partial_word": list(exc.word)})
    if merge_symmetries:
        syms = chamber_symmetries(chamber)
        cache: dict = {}
        keys = [None if k is None else cache.setdefault(k, _canonical_under(syms, k)) for k in keys]
    table = _tabulate(keys, merge_symmetries)
    table.failures = failures
    return table


def _wall_components(chamber: Chamber) -> list[int]:
    lat = chamber.lattice
    g = nx.Graph()
    g.add_nodes_from(range(len(chamber.walls)))
    for i, a in enumerate(chamber.walls):
        for j in range(i + 1, len(chamber.walls)):
            if lat.inner(a, chamber.walls[j]) == 1:
                g.add_edge(i, j)
    comp = [0] * len(chamber.walls)
    for k, c in enumerate(sorted(nx.connected_components(g), key=min)):
        for i in c:
            comp[i] = min(c)
    return comp


def root_to_wall(chamber: Chamber, b, max_steps: int = DEFAULT_MAX_STEPS) -> int | None:
    """Index of a wall W-conjugate to the (-2)-class ``b``, or None if the descent stalls.

    ``b`` is first made positive (pairing with the witness); then any wall
    with negative pairing lowers the height. A stall means the root pairs
    nonnegatively with every wall, impossible for a finite-volume chamber.
    """
    lat = chamber.lattice
    b = lat.check_vector(b)
    if lat.norm(b) != -2:
        raise LatticeError(f"{b} is not a (-2)-vector")
    if lat.inner(b, chamber.witness) < 0:
        b = tuple(-v for v in b)
    walls = {w: i for i, w in enumerate(chamber.walls)}
    gw = [lat.dual_coords(a) for a in chamber.walls]
    x = list(b)
    for _ in range(max_steps):
        key = tuple(x)
        if key in walls:
            return walls[key]
        for i, g in enumerate(gw):
            t = ar.dot(g, x)
            if t < 0:
                a = chamber.walls[i]
                x = [xi + t * ai for xi, ai in zip(x, a)]
                break
        else:
            return None
    raise ReductionBudgetExceeded((), tuple(x))


def classify_roots_mod_W(chamber: Chamber, roots, merge_symmetries: bool = False) -> OrbitTable:
    """Orbits of (-2)-classes (up to sign) under the chamber's reflection group."""
    comp = _wall_components(chamber)
    keys: list = []
    failures = []
    for idx, b in enumerate(roots):
        try:
            w = root_to_wall(chamber, b)
        except ReductionBudgetExceeded:
            w = None
        if w is None:
            keys.append(None)
            failures.append({"index": idx, "vector": list(b)})
        else:
            keys.append(chamber.walls[comp[w]])
    if merge_symmetries:
        syms = chamber_symmetries(chamber)
        wall_index = {w: i for i, w in enumerate(chamber.walls)}

        def canon(k):
            return min(chamber.walls[comp[wall_index[s(k)]]] for s in syms)

        cache: dict = {}
        keys = [None if k is None else cache.setdefault(k, canon(k)) for k in keys]
    table = _tabulate(keys, merge_symmetries)
    table.failures = failures
    return table


class OrbitClassifier(BaseEstimator):
    """Estimator front end for :func:`classify_mod_W`.

    ``fit`` learns the orbit representatives present in ``X``; ``predict``
    returns, for new vectors, the index of their orbit among those, or -1.
    """

    def __init__(self, chamber: Chamber | None = None, merge_symmetries: bool = False, strategy: str = "batch"):
        self.chamber = chamber
        self.merge_symmetries = merge_symmetries
        self.strategy = strategy

    def _table(self, X) -> OrbitTable:
        rows = check_vectors(X, self.chamber.rank)
        return classify_mod_W(self.chamber, rows, self.merge_symmetries, self.strategy)

    def fit(self, X, y=None):
        if not isinstance(self.chamber, Chamber):
            raise TypeError("OrbitClassifier needs a Chamber")
        table = self._table(X)
        self.table_ = table
        self.representatives_ = list(table.representatives)
        self.counts_ = list(table.counts)
        self.labels_ = np.array(table.labels)
        self.n_features_in_ = self.chamber.rank
        return self

    def predict(self, X) -> np.ndarray:
        check_fitted(self, "representatives_")
        table = self._table(X)
        index = {r: i for i, r in enumerate(self.representatives_)}
        return np.array([-1 if lab < 0 else index.get(table.representatives[lab], -1) for lab in table.labels])

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).labels_
