import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from enriques_cone.cone import Chamber, ConeFrame, OutsidePositiveCone
from enriques_cone.lattice import enumerate_roots, make_standard
from enriques_cone.orbits import (
    OrbitClassifier,
    classify_mod_W,
    classify_roots_mod_W,
    primitive_isotropic,
    root_to_wall,
)


def test_primitive_isotropic_examples(e10):
    u = make_standard("U")
    f = ConeFrame(u, (1, 1))
    assert sorted(r.generator for r in primitive_isotropic(f, 1)) == [(0, 1), (1, 0)]
    assert primitive_isotropic(f, 0) == []
    fe = ConeFrame(e10, (1, 1) + (0,) * 8)
    gens = {r.generator for r in primitive_isotropic(fe, 1)}
    assert (1,) + (0,) * 9 in gens and (0, 1) + (0,) * 8 in gens
    assert all(e10.norm(g) == 0 for g in gens)


def test_single_and_reflected(e10_chamber):
    c = e10_chamber
    e = (1,) + (0,) * 9
    assert len(classify_mod_W(c, [e])) == 1
    e2 = c.reflect(8, e)
    assert e2 != e
    assert len(classify_mod_W(c, [e, e2])) == 1


def test_e10_isotropic_single_orbit(e10_chamber):
    rays = [r.generator for r in primitive_isotropic(e10_chamber.frame, 1)]
    table = classify_mod_W(e10_chamber, rays)
    assert len(table) == 1 and table.counts == [len(rays)]
    assert not table.failures
    greedy = classify_mod_W(e10_chamber, rays, strategy="greedy")
    assert greedy.representatives == table.representatives


def test_rejects_outside(e10_chamber):
    with pytest.raises(OutsidePositiveCone):
        classify_mod_W(e10_chamber, [(-1,) + (0,) * 9])


def test_roots_reduce_to_walls(e10_chamber):
    roots = enumerate_roots(e10_chamber.lattice, 1)[:300]
    table = classify_roots_mod_W(e10_chamber, roots)
    assert len(table) == 1 and not table.failures
    for i, w in enumerate(e10_chamber.walls):
        assert root_to_wall(e10_chamber, w) == i


def test_root_orbits_follow_odd_edges():
    # U + <-2>: walls 1 and 2 pair to 1, wall 0 meets both with pairing 0 or 2
    lat = make_standard("U+diag:-2")
    walls = [(0, 0, 1), (-1, 1, 0), (1, 0, -1)]
    c = Chamber.from_walls(ConeFrame(lat, (2, 1, 0)), walls)
    table = classify_roots_mod_W(c, enumerate_roots(lat, 2))
    assert len(table) == 2 and not table.failures
    labels = classify_roots_mod_W(c, walls).labels
    assert labels[1] == labels[2] != labels[0]


def test_merge_symmetries():
    from conftest import small_chamber

    c = small_chamber("diag:2,-2,-2")
    rays = [r.generator for r in primitive_isotropic(c.frame, 3)]
    plain = classify_mod_W(c, rays)
    merged = classify_mod_W(c, rays, merge_symmetries=True)
    assert len(merged) <= len(plain)
    assert merged.merged_by_symmetry


def test_classifier_estimator(e10_chamber):
    rays = np.array([r.generator for r in primitive_isotropic(e10_chamber.frame, 1)])
    clf = OrbitClassifier(e10_chamber)
    with pytest.raises(NotFittedError):
        clf.predict(rays)
    labels = clf.fit_predict(rays)
    assert set(labels.tolist()) == {0}
    assert clf.predict(rays[:5]).tolist() == [0] * 5
