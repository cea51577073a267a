import networkx as nx
import pytest

from enriques_cone.diagrams import coxeter_diagram, identify, reference_diagram
from enriques_cone.lattice import make_standard

NAMES = ["A1", "A4", "D5", "E6", "E7", "E8", "A~1", "A~2", "A~7", "D~4", "D~6", "E~6", "E~7", "E~8", "T(2,3,7)"]


@pytest.mark.parametrize("name", NAMES)
def test_reference_round_trip(name):
    assert identify(reference_diagram(name)) == name


def test_vertex_counts():
    assert reference_diagram("T(2,3,7)").number_of_nodes() == 10
    assert reference_diagram("E~8").number_of_nodes() == 9
    assert reference_diagram("D~6").number_of_nodes() == 7


def test_small_diagrams():
    e8 = make_standard("E8minus")
    one = coxeter_diagram(e8, [(1,) + (0,) * 7])
    assert one.graph().number_of_nodes() == 1 and not one.edges
    b1, b2 = (1,) + (0,) * 7, (0, 1) + (0,) * 6
    assert e8.inner(b1, b2) == 0
    two = coxeter_diagram(e8, [b1, b2])
    assert two.graph().number_of_nodes() == 2 and not two.edges
    assert two.name() == "A1+A1"


def test_e10_diagram(e10, e10_run):
    d = coxeter_diagram(e10, e10_run.accepted)
    assert d.name() == "T(2,3,7)"
    assert d.is_isomorphic(reference_diagram("T(2,3,7)"))
    assert d.valid_chamber
    degrees = sorted(dict(d.graph().degree()).values())
    assert degrees.count(3) == 1 and degrees.count(1) == 3


def test_unknown_component():
    g = nx.complete_graph(4)
    assert identify(g).startswith("?")
