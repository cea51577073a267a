"""The double Kummer curve configuration, its involution and Enriques quotient.

Curves are named ``E_j``, ``F_i``, ``C_ij`` (1 <= i, j <= 4) on the K3 side
and ``H_j``, ``D_ij`` (i < j) on the quotient. Pairings on the quotient are
computed from pullbacks: ``(D, D') = (pi* D, pi* D') / 2``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import networkx as nx

from . import _arith as ar
from .diagrams import identify_component
from .lattice import Lattice

__all__ = [
    "CurveConfig",
    "ConfigInvolution",
    "AffineFiber",
    "double_kummer_config",
    "theta_on_config",
    "enriques_quotient_config",
    "quotient_pullbacks",
    "kernel_relations",
    "find_affine_fibers",
    "blowup_config",
    "KODAIRA",
]

IDX = range(1, 5)


@dataclass(frozen=True)
class CurveConfig:
    """Named curves with self-intersections and symmetric pairwise intersections."""

    names: tuple[str, ...]
    self_int: tuple[int, ...]
    pairs: Mapping[frozenset, int] = field(default_factory=dict)
    metadata: Mapping[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("curve names must be distinct")
        if len(self.self_int) != len(self.names):
            raise ValueError("one self-intersection per curve")
        known = set(self.names)
        clean = {}
        for key, v in self.pairs.items():
            key = frozenset(key)
            if len(key) != 2:
                raise ValueError("self-pairs belong in self_int")
            if not key <= known:
                raise KeyError(f"unknown curves in {sorted(key)}")
            if v < 0:
                raise ValueError("intersection multiplicities must be >= 0")
            if v:
                clean[key] = int(v)
        object.__setattr__(self, "pairs", clean)
        object.__setattr__(self, "_pos", {n: i for i, n in enumerate(self.names)})

    def index(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise KeyError(f"unknown curve {name!r}") from None

    def pairing(self, a: str, b: str) -> int:
        if a == b:
            return self.self_int[self.index(a)]
        self.index(a), self.index(b)
        return self.pairs.get(frozenset((a, b)), 0)

    def gram(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.pairing(a, b) for b in self.names) for a in self.names)

    def lattice(self) -> Lattice:
        """The span of the curve classes as a (possibly degenerate) form."""
        g = self.gram()
        return Lattice(g, degenerate=ar.det(g) == 0 if g else True)

    def graph(self, names: Iterable[str] | None = None) -> nx.Graph:
        names = list(self.names if names is None else names)
        g = nx.Graph()
        g.add_nodes_from(names)
        for a, b in itertools.combinations(names, 2):
            v = self.pairing(a, b)
            if v:
                g.add_edge(a, b, label=v)
        return g

    def __len__(self) -> int:
        return len(self.names)

    def as_dict(self) -> dict:
        return {
            "curves": [{"name": n, "self": s} for n, s in zip(self.names, self.self_int)],
            "pairs": [[*sorted(k), v] for k, v in sorted(self.pairs.items(), key=lambda kv: sorted(kv[0]))],
        }


def _config(entries: Sequence[tuple[str, int]], pairs: Mapping, metadata=None) -> CurveConfig:
    return CurveConfig(tuple(n for n, _ in entries), tuple(s for _, s in entries), dict(pairs), metadata or {})


def double_kummer_config() -> CurveConfig:
    """24 (-2)-curves: E_j meets C_ij and F_i meets C_ij, once each."""
    names = [f"E_{j}" for j in IDX] + [f"F_{i}" for i in IDX] + [f"C_{i}{j}" for i in IDX for j in IDX]
    pairs = {}
    for i in IDX:
        for j in IDX:
            pairs[frozenset((f"E_{j}", f"C_{i}{j}"))] = 1
            pairs[frozenset((f"F_{i}", f"C_{i}{j}"))] = 1
    meta = {
        "points": {f"P_{i}{j}": f"E_{j} ∩ C_{i}{j}" for i in IDX for j in IDX},
        "coordinates_on_E_j": {"P_1j": "1", "P_2j": "t", "P_3j": "inf", "P_4j": "0"},
    }
    return _config([(n, -2) for n in names], pairs, meta)


def kernel_relations(config: CurveConfig | None = None) -> list[dict[str, int]]:
    """The fibre-class identities 2F_i + sum_j C_ij = 2F_1 + sum_j C_1j and likewise for E_j.

    Each relation is returned as a coefficient dictionary lying in the
    kernel of the Gram map.
    """
    rels = []

    def fibre_f(i):
        d = {f"F_{i}": 2}
        for j in IDX:
            d[f"C_{i}{j}"] = 1
        return d

    def fibre_e(j):
        d = {f"E_{j}": 2}
        for i in IDX:
            d[f"C_{i}{j}"] = 1
        return d

    def diff(a, b):
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, 0) - v
        return {k: v for k, v in out.items() if v}

    for i in (2, 3, 4):
        rels.append(diff(fibre_f(i), fibre_f(1)))
    for j in (2, 3, 4):
        rels.append(diff(fibre_e(j), fibre_e(1)))
    return rels


@dataclass(frozen=True)
class ConfigInvolution:
    """Partial involution on curve names; names outside ``mapping`` have no image in the config."""

    mapping: Mapping[str, str]

    def __post_init__(self):
        for a, b in self.mapping.items():
            if self.mapping.get(b) != a:
                raise ValueError(f"not involutive at {a!r}")

    def __call__(self, name: str) -> str | None:
        return self.mapping.get(name)

    def defined(self, name: str) -> bool:
        return name in self.mapping

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(self.mapping)

    def preserves(self, config: CurveConfig) -> bool:
        dom = [n for n in config.names if n in self.mapping]
        return all(config.pairing(a, b) == config.pairing(self(a), self(b)) for a in dom for b in dom)

    def orbits(self) -> list[tuple[str, ...]]:
        seen, out = set(), []
        for a in self.mapping:
            if a not in seen:
                orb = tuple(sorted({a, self.mapping[a]}))
                seen.update(orb)
                out.append(orb)
        return out


def theta_on_config() -> ConfigInvolution:
    """E_j <-> F_j and C_ij <-> C_ji for i != j; C_ii is left undefined."""
    m = {}
    for j in IDX:
        m[f"E_{j}"], m[f"F_{j}"] = f"F_{j}", f"E_{j}"
    for i in IDX:
        for j in IDX:
            if i != j:
                m[f"C_{i}{j}"] = f"C_{j}{i}"
    return ConfigInvolution(m)


def quotient_pullbacks() -> dict[str, dict[str, int]]:
    """pi* of each quotient curve as a combination of K3-side curves."""
    out = {}
    for j in IDX:
        out[f"H_{j}"] = {f"E_{j}": 1, f"F_{j}": 1}
    for i, j in itertools.combinations(IDX, 2):
        out[f"D_{i}{j}"] = {f"C_{i}{j}": 1, f"C_{j}{i}": 1}
    return out


def _pair_classes(config: CurveConfig, a: Mapping[str, int], b: Mapping[str, int]) -> int:
    return sum(x * y * config.pairing(p, q) for p, x in a.items() for q, y in b.items())


def enriques_quotient_config() -> CurveConfig:
    """H_1..H_4 and D_ij (i < j), pairings halved from the pullbacks."""
    k3 = double_kummer_config()
    pull = quotient_pullbacks()
    names = list(pull)
    selfs, pairs = [], {}
    for a in names:
        v = Fraction(_pair_classes(k3, pull[a], pull[a]), 2)
        assert v.denominator == 1
        selfs.append(int(v))
    for a, b in itertools.combinations(names, 2):
        v = Fraction(_pair_classes(k3, pull[a], pull[b]), 2)
        assert v.denominator == 1
        pairs[frozenset((a, b))] = int(v)
    meta = {"Q_ij": "pi(P_ij), on H_j and D_ij (indices sorted)"}
    return CurveConfig(tuple(names), tuple(selfs), pairs, meta)


KODAIRA = {"A~1": "I2 or III", "A~2": "I3 or IV", "E~6": "IV*", "E~7": "III*", "E~8": "II*"}


def kodaira_type(name: str) -> str:
    if name in KODAIRA:
        return KODAIRA[name]
    if name.startswith("A~"):
        return f"I{int(name[2:]) + 1}"
    if name.startswith("D~"):
        return f"I{int(name[2:]) - 4}*"
    return "?"


@dataclass(frozen=True)
class AffineFiber:
    type: str
    support: tuple[str, ...]
    multiplicities: tuple[int, ...]

    @property
    def kodaira(self) -> str:
        return kodaira_type(self.type)

    def fiber_class(self) -> dict[str, int]:
        return dict(zip(self.support, self.multiplicities))

    def check(self, config: CurveConfig) -> bool:
        f = self.fiber_class()
        if _pair_classes(config, f, f) != 0:
            return False
        return all(_pair_classes(config, f, {c: 1}) == 0 for c in self.support)

    def as_dict(self) -> dict:
        return {
            "type": self.type,
            "kodaira": self.kodaira,
            "support": list(self.support),
            "multiplicities": list(self.multiplicities),
        }


def _sub_gram(config: CurveConfig, names) -> list[list[int]]:
    return [[config.pairing(a, b) for b in names] for a in names]


def find_affine_fibers(config: CurveConfig, max_size: int = 10) -> list[AffineFiber]:
    """Connected sets of (-2)-curves spanning an affine Dynkin diagram.

    Connected subsets are grown one neighbour at a time while the Gram
    matrix stays negative definite; an extension whose determinant vanishes
    is semidefinite with a one-dimensional kernel, i.e. an affine diagram,
    and its primitive positive kernel vector gives the marks. Results are sorted by type then support.
    """
    if any(s != -2 for s in config.self_int):
        raise ValueError("affine fibre search needs (-2)-curves only")
    graph = config.graph()
    order = {n: i for i, n in enumerate(config.names)}
    found: dict[frozenset, AffineFiber] = {}
    seen: set[frozenset] = set()
    stack = [frozenset([n]) for n in config.names]
    seen.update(stack)
    while stack:
        s = stack.pop()
        nbrs = {m for n in s for m in graph[n]} - s
        for m in nbrs:
            t = s | {m}
            if t in seen or len(t) > max_size:
                continue
            seen.add(t)
            # -G restricted to s is positive definite, so the sign of det(-G_t)
            # decides: > 0 definite, = 0 semidefinite with a 1-dim kernel.
            d = ar.det([[-v for v in row] for row in _sub_gram(config, sorted(s, key=order.get) + [m])])
            if d > 0:
                stack.append(t)
            elif d == 0:
                names = sorted(t, key=order.get)
                g = _sub_gram(config, names)
                ker = ar.integer_kernel(g, len(names))[0]
                if all(v < 0 for v in ker):
                    ker = [-v for v in ker]
                if not all(v > 0 for v in ker):
                    continue
                kind = identify_component(graph.subgraph(names)) or f"?{len(names)}"
                fib = AffineFiber(kind, tuple(names), tuple(int(v) for v in ker))
                found[t] = fib
    return sorted(found.values(), key=lambda f: (f.type, [order[n] for n in f.support]))


def blowup_config(
    base: CurveConfig,
    center_on: str | None,
    then: int = 0,
    through: Sequence[str] = (),
    exceptional: str = "E_inf",
    second: str = "E_32",
) -> CurveConfig:
    """Two-step blow-up bookkeeping.

    First a point on ``center_on`` (and on every curve in ``through``, all
    meeting there transversally) is blown up: the proper transforms lose 1
    in self-intersection and 1 in their mutual intersections, and a
    (-1)-curve ``exceptional`` meeting each of them once is added. Then
    ``then`` general points of the exceptional curve are blown up, giving
    ``second`` + ``1..then`` and lowering the exceptional curve by ``then``.
    ``center_on=None`` returns the input unchanged.
    """
    if center_on is None:
        return base
    curves = [center_on, *through]
    for c in curves:
        base.index(c)
    for a, b in itertools.combinations(curves, 2):
        if base.pairing(a, b) < 1:
            raise ValueError(f"{a} and {b} do not meet, so no common point can be blown up")
    if then < 0:
        raise ValueError("then must be >= 0")
    names = list(base.names) + [exceptional]
    selfs = [s - 1 if n in curves else s for n, s in zip(base.names, base.self_int)] + [-1 - then]
    pairs = dict(base.pairs)
    for a, b in itertools.combinations(curves, 2):
        pairs[frozenset((a, b))] = base.pairing(a, b) - 1
    for c in curves:
        pairs[frozenset((c, exceptional))] = 1
    for k in range(1, then + 1):
        name = f"{second}{k}"
        names.append(name)
        selfs.append(-1)
        pairs[frozenset((name, exceptional))] = 1
    return CurveConfig(tuple(names), tuple(selfs), pairs, dict(base.metadata))
