import pytest

from enriques_cone.cone import (
    Chamber,
    ConeFrame,
    DegenerateChamber,
    OutsidePositiveCone,
    chamber_contains,
    cone_rays,
    extreme_rays,
    find_interior_point,
    in_pos,
    in_pos_plus,
)
from enriques_cone.lattice import LatticeError, make_standard

U = make_standard("U")


def test_pos_membership(e10):
    f = ConeFrame(U, (1, 1))
    assert in_pos(f, (1, 1))
    assert not in_pos(f, (-1, -1))
    assert in_pos_plus(f, (1, 0))
    assert not in_pos_plus(f, (0, 0))
    fe = ConeFrame(e10, (1, 1) + (0,) * 8)
    iso = (1,) + (0,) * 9
    assert not in_pos(fe, iso)
    assert in_pos_plus(fe, iso)


def test_frame_rejects_bad_seed():
    with pytest.raises(LatticeError):
        ConeFrame(U, (1, 0))
    with pytest.raises(LatticeError):
        ConeFrame(make_standard("E8minus"), (1,) + (0,) * 7)


def test_one_wall_chamber_in_u():
    c = Chamber.from_walls(ConeFrame(U, (1, 1)), [(1, -1)])
    rays = cone_rays(c)
    assert rays.pointed
    assert sorted(rays.rays) == [(0, 1), (1, 1)]
    assert all(U.norm(r) >= 0 for r in rays.rays)


def test_empty_chamber_in_u():
    c = Chamber.from_walls(ConeFrame(U, (1, 1)), [])
    assert sorted(cone_rays(c).rays) == [(0, 1), (1, 0)]
    assert sorted(r.generator for r in extreme_rays(c)) == [(0, 1), (1, 0)]


def test_contains_strict_and_wall(e10_chamber):
    c = e10_chamber
    assert chamber_contains(c, c.witness, strict=True)
    with pytest.raises(OutsidePositiveCone):
        chamber_contains(c, c.walls[0])
    # a point on exactly one wall: reflect the witness halfway
    w = c.witness
    b = c.walls[0]
    t = c.lattice.inner(w, b)
    on_wall = tuple(2 * x + t * y for x, y in zip(w, b))
    assert c.lattice.inner(on_wall, b) == 0
    assert chamber_contains(c, on_wall)
    assert not chamber_contains(c, on_wall, strict=True)


def test_bad_witness_rejected():
    f = ConeFrame(U, (1, 1))
    with pytest.raises(DegenerateChamber):
        Chamber(f, ((1, -1),), (2, 1))


def test_interior_point_is_strict(e10_run):
    c = e10_run.chamber()
    p = find_interior_point(c.frame, c.walls)
    assert in_pos(c.frame, p)
    assert all(c.lattice.inner(p, b) > 0 for b in c.walls)


def test_e10_rays_nonnegative(e10_chamber):
    rays = cone_rays(e10_chamber)
    assert rays.pointed and len(rays.rays) == 10
    assert sorted(e10_chamber.lattice.norm(r) for r in rays.rays) == [0, 2, 4, 6, 10, 12, 18, 20, 30, 42]
