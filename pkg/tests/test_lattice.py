import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from enriques_cone.lattice import (
    Involution,
    Isometry,
    Lattice,
    LatticeError,
    enumerate_roots,
    enumerate_vectors,
    inner,
    invariant_sublattice,
    make_standard,
    orthogonal_sum,
    short_vectors,
    smith_invariants,
    swap_involution,
)


def test_standard_grams():
    assert make_standard("U").gram == ((0, 1), (1, 0))
    assert make_standard([2, -2]).gram == ((2, 0), (0, -2))
    e10 = make_standard("E10")
    assert e10.signature == (1, 9)
    assert e10.determinant == -1
    assert e10.is_even()


def test_unknown_name():
    with pytest.raises(LatticeError):
        make_standard("nope")


def test_pairings():
    u = make_standard("U")
    assert inner(u, (1, 0), (0, 1)) == 1
    assert u.norm((1, -1)) == -2
    with pytest.raises(LatticeError):
        u.check_vector((1, 0, 0))


def test_smith():
    assert smith_invariants(make_standard("U")) == ((1, 1), -1)
    assert smith_invariants(make_standard("E8minus"))[1] == 1
    assert smith_invariants(make_standard([2, -2])) == ((2, 2), -4)


def test_root_counts():
    assert set(enumerate_roots(make_standard("U"), 1)) == {(1, -1), (-1, 1)}
    assert set(enumerate_roots(make_standard([2, -2]), 1)) == {(0, 1), (0, -1)}
    assert len(enumerate_roots(make_standard("E8minus"), 2)) == 240


def test_e8_roots_against_brute_force_box():
    # independent count on a smaller box using a plain numpy sweep
    e8 = make_standard("E8minus")
    g = np.array(e8.gram)
    grid = np.array(np.meshgrid(*[np.arange(-1, 2)] * 8, indexing="ij")).reshape(8, -1).T
    norms = np.einsum("ij,jk,ik->i", grid, g, grid)
    assert int((norms == -2).sum()) == len(enumerate_roots(e8, 1))


@given(st.integers(0, 2), st.sampled_from([0, 2, 4]))
@settings(max_examples=10, deadline=None)
def test_enumerate_vectors_norm_and_bound(bound, norm):
    u2 = make_standard("U+U")
    vs = enumerate_vectors(u2, norm, bound)
    assert vs == sorted(vs)
    for v in vs:
        assert u2.norm(v) == norm and max(abs(x) for x in v) <= bound


def test_short_vectors_definite():
    g = [[2, 1], [1, 2]]
    vs = [v for v in short_vectors(g, 2) if any(v)]
    assert sorted(vs) == sorted([(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)])


def test_isometry_checks():
    u = make_standard("U")
    swap = Isometry.validated(u, ((0, 1), (1, 0)))
    assert swap.compose(swap).is_identity()
    with pytest.raises(LatticeError):
        Isometry.validated(u, ((1, 1), (0, 1)))
    assert Isometry(((2, 1), (1, 1))).inverse().matrix == ((1, -1), (-1, 2))


def test_invariant_sublattice_examples():
    u = make_standard("U")
    basis, sub, _ = invariant_sublattice(u, Involution(((1, 0), (0, 1))))
    assert sub.gram == u.gram and len(basis) == 2
    basis, sub, _ = invariant_sublattice(u, Involution(((-1, 0), (0, -1))))
    assert sub.rank == 0
    big, sw = swap_involution(u)
    basis, sub, divisors = invariant_sublattice(big, sw)
    assert sub.rank == 2
    assert sorted(abs(x) for row in sub.gram for x in row) == [0, 0, 2, 2]
    assert abs(sub.determinant) == 4
    assert set(divisors) <= {1}


def test_orthogonal_sum_block():
    s = orthogonal_sum(make_standard("U"), make_standard([-2]))
    assert s.gram == ((0, 1, 0), (1, 0, 0), (0, 0, -2))
    assert s.signature == (1, 2)


def test_degenerate_flag():
    with pytest.raises(LatticeError):
        Lattice(((1, 1), (1, 1)))
    assert Lattice(((1, 1), (1, 1)), degenerate=True).rank == 2
