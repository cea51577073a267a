import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from enriques_cone.lattice import make_standard
from enriques_cone.vinberg import VinbergChamber, finite_volume_check, vinberg_roots


def test_u_one_root():
    run = vinberg_roots(make_standard("U"), (1, 1))
    assert run.accepted == [(1, -1)]
    assert finite_volume_check(run)


def test_diag_one_root():
    run = vinberg_roots(make_standard([2, -2]), (1, 0))
    assert run.accepted == [(0, 1)]


def test_e10(e10_run, e10):
    assert len(e10_run.accepted) == 10
    assert all(e10.norm(b) == -2 for b in e10_run.accepted)
    assert e10_run.status == "finite_volume"
    assert finite_volume_check(e10_run)
    for i, a in enumerate(e10_run.accepted):
        for b in e10_run.accepted[i + 1:]:
            assert e10.inner(a, b) >= 0


def test_truncated_run_not_finite(e10_run):
    assert not finite_volume_check(e10_run.truncated(3))


def test_timelike_controller_agrees(e10, e10_run):
    other = vinberg_roots(e10, (1, 1) + (0,) * 8)
    assert len(other.accepted) == 10
    assert finite_volume_check(other)


def test_budget_exhaustion_reported():
    run = vinberg_roots(make_standard("E10"), (1,) + (0,) * 9, budget=5)
    assert run.status == "budget_exhausted"


def test_bad_controller():
    with pytest.raises(Exception):
        vinberg_roots(make_standard("U"), (1, -1))


def test_estimator_api(e10):
    est = VinbergChamber()
    with pytest.raises(NotFittedError):
        est.diagram()
    est.fit(e10)
    assert len(est.roots_) == 10 and est.finite_volume_
    assert est.diagram_.name() == "T(2,3,7)"
    assert clone(est).get_params() == est.get_params()
    assert isinstance(np.asarray(est.roots_), np.ndarray)
