import random

import numpy as np
import pytest
from sklearn.base import clone

from enriques_cone.cone import Chamber, ConeFrame, OutsidePositiveCone, chamber_contains
from enriques_cone.lattice import Isometry, LatticeError, make_standard, swap_involution
from enriques_cone.weyl import (
    ChamberReducer,
    EnriquesSetup,
    EquivariantRoot,
    FactorizationError,
    ReductionBudgetExceeded,
    ReflectionWord,
    chamber_reduce,
    chamber_symmetries,
    equi_reflect,
    factorize,
    reflect,
    restrict_equi,
    sample_pos,
    verify_fundamental_domain,
    word_matrix,
)

U = make_standard("U")


def test_reflection_examples():
    b = (1, -1)
    assert reflect(U, b, b) == (-1, 1)
    assert reflect(U, b, (1, 1)) == (1, 1)
    assert reflect(U, b, (1, 0)) == (0, 1)


def test_equivariant_examples():
    big, theta = swap_involution(U)
    r = EquivariantRoot(big, (1, -1, 0, 0), theta)
    assert r.partner == (0, 0, 1, -1)
    assert equi_reflect(r, r.b) == (-1, 1, 0, 0)
    assert equi_reflect(r, (1, 0, 0, 0)) == (0, 1, 0, 0)
    rng = random.Random(3)
    for _ in range(100):
        x = tuple(rng.randint(-5, 5) for _ in range(4))
        assert equi_reflect(r, x) == reflect(big, r.b, reflect(big, r.partner, x))


def test_equivariant_root_rejects():
    big, theta = swap_involution(U)
    with pytest.raises(LatticeError):
        EquivariantRoot(big, (1, 0, 0, 0), theta)
    with pytest.raises(LatticeError):
        EquivariantRoot(big, (1, -1, 1, -1), theta)


def _u_setup():
    big, theta = swap_involution(U)
    return EnriquesSetup.build(big, theta, [(1, -1, 0, 0)])


def test_setup_and_restriction():
    setup = _u_setup()
    assert setup.fixed.rank == 2
    r = setup.nodal[0]
    m = restrict_equi(r, setup)
    assert m.compose(m).is_identity()
    wall = setup.chamber.walls[0]
    assert setup.fixed.norm(wall) == -4
    assert m(wall) == tuple(-v for v in wall)
    # the wall hyperplane is fixed pointwise
    lat = setup.fixed
    for y in [(1, 0), (0, 1), (1, 1), (2, -1)]:
        if lat.inner(y, wall) == 0:
            assert m(y) == y


def test_restriction_matches_ambient():
    setup = _u_setup()
    r = setup.nodal[0]
    m = restrict_equi(r, setup)
    for y in [(1, 0), (0, 1), (3, -2)]:
        assert setup.embed(m(y)) == r(setup.embed(y))
        x = setup.embed(y)
        fb = setup.ns.inner(x, r.b)
        assert r(x) == tuple(a + fb * c for a, c in zip(x, r.invariant_class))


def test_reflection_word_algebra(e10_chamber):
    c = e10_chamber
    w = ReflectionWord(c.lattice, tuple((c.walls[i],) for i in (0, 3, 5)))
    x = c.witness
    assert w.inverse()(w(x)) == x
    assert w.matrix().compose(w.inverse().matrix()).is_identity()
    assert w.kinds() == ("plain",) * 3
    assert (w + w.inverse())(x) == x


def test_reduce_identity_and_round_trip(e10_chamber):
    c = e10_chamber
    red = chamber_reduce(c, c.witness)
    assert red.word == () and red.vector == c.witness
    rng = random.Random(11)
    for _ in range(40):
        word = [rng.randrange(10) for _ in range(rng.randint(1, 6))]
        x = word_matrix(c, word)(c.witness)
        for strategy in ("walk", "greedy"):
            red = chamber_reduce(c, x, strategy)
            assert red.vector == c.witness
            assert word_matrix(c, red.word)(x) == red.vector


def test_reduce_errors(e10_chamber):
    c = e10_chamber
    with pytest.raises(OutsidePositiveCone):
        chamber_reduce(c, tuple(-v for v in c.witness))
    far = word_matrix(c, [0, 1, 2, 3, 4, 5, 6, 7, 8, 9] * 3)(c.witness)
    with pytest.raises(ReductionBudgetExceeded) as info:
        chamber_reduce(c, far, "greedy", max_steps=2)
    assert len(info.value.word) == 2


def test_reduce_on_setup():
    setup = _u_setup()
    x = (1, 3)
    w, xr = chamber_reduce(setup, x)
    assert isinstance(w, ReflectionWord)
    assert chamber_contains(setup.chamber, xr)
    assert set(w.kinds()) <= {"equivariant"}


def test_chamber_reducer_estimator(e10_chamber):
    xs = sample_pos(e10_chamber.frame, 30, seed=2)
    walk = ChamberReducer(e10_chamber).fit().transform(xs)
    batch = ChamberReducer(e10_chamber, strategy="batch").fit().transform(np.array(xs))
    assert walk.tolist() == batch.tolist()
    assert clone(ChamberReducer(e10_chamber, strategy="greedy")).strategy == "greedy"
    with pytest.raises(ValueError):
        ChamberReducer(e10_chamber, strategy="nope").fit()


def test_sampling_is_seeded(e10_chamber):
    a = sample_pos(e10_chamber.frame, 20, seed=5)
    assert a == sample_pos(e10_chamber.frame, 20, seed=5)
    assert a != sample_pos(e10_chamber.frame, 20, seed=6)


def test_verify_u_one_wall():
    c = Chamber.from_walls(ConeFrame(U, (1, 1)), [(1, -1)])
    rep = verify_fundamental_domain(c, samples=50, word_radius=3)
    assert rep.passed


def test_verify_broken_chamber(e10_chamber):
    broken = e10_chamber.without(9)
    rep = verify_fundamental_domain(broken, samples=20, word_radius=1, generators=e10_chamber.walls)
    assert not rep.disjointness_ok
    assert [9] in [o["word"] for o in rep.overlaps]


def test_factorize_examples(e10_chamber):
    c = e10_chamber
    syms = chamber_symmetries(c)
    assert len(syms) == 1 and syms[0].is_identity()
    g = Isometry(c.reflection_matrix(4))
    word, a = factorize(c, g)
    assert word == (4,) and a.is_identity()
    with pytest.raises(FactorizationError):
        factorize(c, Isometry(tuple(tuple(-v for v in row) for row in Isometry.identity(10).matrix)))


def test_factorize_with_symmetry():
    from conftest import small_chamber

    c = small_chamber("diag:2,-4,-4")
    syms = chamber_symmetries(c)
    assert len(syms) == 8
    for s in syms:
        g = Isometry(c.reflection_matrix(0)).compose(s)
        word, a = factorize(c, g)
        assert a == s and word == (0,)
        assert word_matrix(c, word).compose(a) == g


def test_factorize_on_setup():
    setup = _u_setup()
    m = restrict_equi(setup.nodal[0], setup)
    w, a = factorize(setup, m)
    assert len(w) == 1 and w.kinds() == ("equivariant",)
    assert a.is_identity()
