"""Dense simplex against scipy's HiGHS on random small LPs."""

import numpy as np
import pytest
from scipy.optimize import linprog as sp_linprog

from paretoagg import _simplex


def _random_lp(r):
    nv = int(r.integers(1, 7))
    nu = int(r.integers(0, 6))
    ne = int(r.integers(0, 3))
    c = r.normal(size=nv)
    A_ub = r.normal(size=(nu, nv)) if nu else None
    b_ub = r.normal(size=nu) + 1.0 if nu else None
    A_eq = r.normal(size=(ne, nv)) if ne else None
    b_eq = r.normal(size=ne) if ne else None
    return c, A_ub, b_ub, A_eq, b_eq


def test_bounded_example():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    res = _simplex.linprog([-1, -1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    assert res.success
    np.testing.assert_allclose(res.x, [1.6, 1.2], atol=1e-12)
    assert res.fun == pytest.approx(-2.8)
    # strong duality
    assert np.dot(res.duals_ub, [4, 6]) == pytest.approx(res.fun)


def test_infeasible_has_farkas():
    res = _simplex.linprog([1.0], A_ub=[[1.0]], b_ub=[-1.0])
    assert res.status == "infeasible"
    z = res.farkas_ub
    assert np.all(z >= 0) and z @ [-1.0] < 0 and z @ np.array([[1.0]]) >= 0


def test_unbounded():
    assert _simplex.linprog([-1.0], A_ub=[[-1.0]], b_ub=[0.0]).status == "unbounded"


def test_redundant_equalities():
    res = _simplex.linprog([1, 2], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
    assert res.success
    np.testing.assert_allclose(res.x, [1, 0], atol=1e-12)


def test_against_scipy():
    r = np.random.default_rng(7)
    for _ in range(300):
        c, A_ub, b_ub, A_eq, b_eq = _random_lp(r)
        ref = sp_linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                         bounds=(0, None), method="highs")
        res = _simplex.linprog(c, A_ub, b_ub, A_eq, b_eq)
        if ref.status == 0:
            assert res.success
            assert res.fun == pytest.approx(ref.fun, abs=1e-7, rel=1e-7)
        elif ref.status == 2:
            assert res.status in ("infeasible", "unbounded")
        if res.status == "infeasible":
            # Farkas certificate independently of the reference
            parts_A = [M for M in (A_ub, A_eq) if M is not None]
            parts_b = [v for v in (b_ub, b_eq) if v is not None]
            z = np.concatenate([p for p in (res.farkas_ub, res.farkas_eq) if p is not None])
            A = np.vstack(parts_A)
            b = np.concatenate(parts_b)
            assert z @ b < -1e-12
            assert np.all(z @ A >= -1e-9)
            if A_ub is not None:
                assert np.all(res.farkas_ub >= -1e-12)
