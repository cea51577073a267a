"""Coxeter/Dynkin diagrams of (-2)-root sets and recognition of standard shapes.

Vertices are roots; two roots are joined when their pairing is nonzero and
the edge carries that pairing as ``label``. For (-2)-roots with pairwise
pairings in {0, 1} the graph is the simply laced Dynkin diagram; label 2 is
the affine double bond of type A~1.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import networkx as nx
from networkx.algorithms.isomorphism import categorical_edge_match

__all__ = ["CoxeterDiagram", "coxeter_diagram", "reference_diagram", "identify", "identify_component"]

_edge_match = categorical_edge_match("label", None)


@dataclass(frozen=True)
class CoxeterDiagram:
    vertices: tuple[tuple[int, ...], ...]
    pairings: tuple[tuple[int, ...], ...]

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        for i, row in enumerate(self.pairings):
            for j in range(i + 1, len(row)):
                if row[j] != 0:
                    g.add_edge(i, j, label=row[j])
        return g

    @property
    def edges(self) -> list[tuple[int, int, int]]:
        return [(i, j, d["label"]) for i, j, d in sorted(self.graph().edges(data=True))]

    @property
    def valid_chamber(self) -> bool:
        """Diagonal -2 and nonnegative off-diagonal pairings."""
        n = len(self.vertices)
        return all(
            self.pairings[i][j] == -2 if i == j else self.pairings[i][j] >= 0 for i in range(n) for j in range(n)
        )

    def name(self) -> str:
        return identify(self.graph())

    def is_isomorphic(self, other: "CoxeterDiagram | nx.Graph") -> bool:
        g = other.graph() if isinstance(other, CoxeterDiagram) else other
        return nx.is_isomorphic(self.graph(), g, edge_match=_edge_match)

    def as_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "edges": [list(e) for e in self.edges],
            "name": self.name(),
        }


def coxeter_diagram(lattice, roots) -> CoxeterDiagram:
    roots = tuple(lattice.check_vector(b) for b in roots)
    gram = tuple(tuple(lattice.inner(a, b) for b in roots) for a in roots)
    return CoxeterDiagram(roots, gram)


def _path(n: int) -> nx.Graph:
    g = nx.path_graph(n)
    nx.set_edge_attributes(g, 1, "label")
    return g


def _tree(p: int, q: int, r: int) -> nx.Graph:
    """Star with arms of p-1, q-1, r-1 vertices around a centre."""
    g = nx.Graph()
    g.add_node(0)
    nxt = 1
    for arm in (p, q, r):
        prev = 0
        for _ in range(arm - 1):
            g.add_edge(prev, nxt, label=1)
            prev = nxt
            nxt += 1
    return g


def _d_affine(n: int) -> nx.Graph:
    """D~n, n >= 4: a path of n-3 edges with two leaves at each end."""
    g = _path(n - 1)  # vertices 0..n-2
    g.add_edge(1, n - 1, label=1)
    g.add_edge(n - 3, n, label=1)
    return g


def _cycle(n: int) -> nx.Graph:
    g = nx.cycle_graph(n)
    nx.set_edge_attributes(g, 1, "label")
    return g


@lru_cache(maxsize=None)
def reference_diagram(name: str) -> nx.Graph:
    """Graph of a named diagram: ``A5``, ``D4``, ``E8``, ``A~7``, ``D~4``, ``E~6``, ``T(2,3,7)``."""
    if name.startswith("T(") and name.endswith(")"):
        p, q, r = (int(v) for v in name[2:-1].split(","))
        return _tree(p, q, r)
    affine = "~" in name
    letter, n = name[0], int(name.replace("~", "")[1:])
    if not affine:
        if letter == "A":
            return _path(n)
        if letter == "D" and n >= 4:
            return _tree(2, 2, n - 2)
        if letter == "E" and n >= 6:
            return _tree(2, 3, n - 3)
    else:
        if letter == "A" and n == 1:
            g = nx.Graph()
            g.add_edge(0, 1, label=2)
            return g
        if letter == "A" and n >= 2:
            return _cycle(n + 1)
        if letter == "D" and n >= 4:
            return _d_affine(n)
        if letter == "E" and n in (6, 7, 8):
            return _tree(*{6: (3, 3, 3), 7: (2, 4, 4), 8: (2, 3, 6)}[n])
    raise ValueError(f"unknown diagram {name!r}")


def _candidates(n: int) -> list[str]:
    out = [f"A{n}"]
    if n >= 4:
        out.append(f"D{n}")
    if n in (6, 7, 8):
        out.append(f"E{n}")
    if n >= 2:
        out.append(f"A~{n - 1}")
    if n - 1 >= 4:
        out.append(f"D~{n - 1}")
    if n - 1 in (6, 7, 8):
        out.append(f"E~{n - 1}")
    for p in range(2, n + 1):
        for q in range(p, n + 1):
            r = n + 2 - p - q
            if r >= q:
                out.append(f"T({p},{q},{r})")
    return out


def identify_component(g: nx.Graph) -> str | None:
    """Name of a connected diagram, or None if it matches no listed shape."""
    for name in _candidates(g.number_of_nodes()):
        ref = reference_diagram(name)
        if ref.number_of_edges() == g.number_of_edges() and nx.is_isomorphic(g, ref, edge_match=_edge_match):
            return name
    return None


def identify(g: nx.Graph) -> str:
    """Component names joined by ``+``; unrecognised components become ``?n``."""
    names = []
    for comp in sorted(nx.connected_components(g), key=lambda c: (-len(c), min(c))):
        sub = g.subgraph(comp)
        names.append(identify_component(sub) or f"?{len(comp)}")
    return "+".join(names) if names else "empty"
