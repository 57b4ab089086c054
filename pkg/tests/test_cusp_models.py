import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspbend.cusp_models import (
    BOUNDARY,
    EXTERIOR,
    INTERIOR,
    OUTSIDE_CHART,
    CuspGroupElement,
    CuspParameter,
    ModelDomain,
    ParaboloidModel,
    cusp_type,
    h_element,
    h_product,
    hyperplane_centralizer_element,
    leaf_coordinate,
    leaf_point,
    paraboloid_eval,
    parabolic_element,
    zprime_element,
)
from cuspbend.projlin import ProjMap, ProjPoint, act, compose, proj_equiv


def test_cusp_type():
    assert cusp_type(CuspParameter([0, 0, 0])) == 0
    assert cusp_type(CuspParameter([2, 1, 0])) == 2
    assert cusp_type(CuspParameter([1, 1, 1])) == 3


def test_cusp_parameter_validation():
    with pytest.raises(ValueError):
        CuspParameter([1, 2, 0])          # increasing
    with pytest.raises(ValueError):
        CuspParameter([1, -1, 0])


def test_cusp_parameter_json_roundtrip():
    psi = CuspParameter([F(3, 2), F(1), F(0)])
    assert CuspParameter.from_json(psi.to_json()) == psi


def test_h_element_identity():
    psi = CuspParameter([F(1), F(0), F(0)])
    e = h_element(psi, [F(1)], [F(0)])
    assert np.array_equal(e.matrix.entries, ProjMap.identity(3).entries)
    assert e.sigma == 0


def test_h_element_sigma_parabolic():
    # sigma = (9 + 16) / 2 with no diagonal part
    psi = CuspParameter([0, 0, 0])
    e = h_element(psi, [], [F(3), F(4)])
    assert e.sigma == F(25, 2)
    assert e.matrix.entries[0][3] == F(25, 2)


def test_h_element_sigma_with_log():
    psi = CuspParameter([1.0, 0.0, 0.0])
    e = h_element(psi, [math.e], [0.0])
    assert abs(e.sigma - (-1.0)) <= 1e-15


def test_h_element_exact_log_supplied():
    psi = CuspParameter([F(2), F(0), F(0)])
    e = h_element(psi, [F(3)], [F(1)], log_d=[F(1, 7)])   # stand-in exact log
    assert e.sigma == F(1, 2) - F(2) * F(1, 7)


def test_h_element_errors():
    psi = CuspParameter([F(1), F(0), F(0)])
    with pytest.raises(ValueError):
        h_element(psi, [], [F(0)])                        # wrong d length
    with pytest.raises(ValueError):
        h_element(psi, [F(-1)], [F(0)])                   # nonpositive diagonal
    with pytest.raises(ValueError):
        h_element(psi, [F(2)], [F(0)])                    # exact d != 1, no log
    with pytest.raises(ValueError):
        h_element(CuspParameter([1, 1]), [1.0, 1.0], [])  # type n has no block model


def test_h_product_matches_matrix_multiply():
    psi = CuspParameter([0.0, 0.0, 0.0])
    a = h_element(psi, [], [1.0, 0.0])
    b = h_element(psi, [], [2.0, 0.0])
    prod = h_product(a, b)
    assert abs(prod.sigma - 4.5) <= 1e-15
    assert np.allclose(np.asarray(prod.matrix.entries, dtype=float),
                       np.asarray(compose(a.matrix, b.matrix).entries, dtype=float))


def test_h_product_identity_and_inverse():
    psi = CuspParameter([F(1), F(0), F(0)])
    a = h_element(psi, [F(1)], [F(3, 2)])
    ident = h_element(psi, [F(1)], [F(0)])
    assert np.array_equal(h_product(a, ident).matrix.entries, a.matrix.entries)
    assert np.array_equal(h_product(a, a.inverse()).matrix.entries,
                          ProjMap.identity(3).entries)


def test_h_product_psi_mismatch():
    a = h_element(CuspParameter([0.0, 0.0]), [], [1.0])
    b = h_element(CuspParameter([1.0, 0.0]), [1.0], [])
    with pytest.raises(ValueError):
        h_product(a, b)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5),
                min_size=2, max_size=2),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5),
                min_size=2, max_size=2))
def test_h_product_closure_exact(v1, v2):
    psi = CuspParameter([F(1), F(0), F(0), F(0)])
    a = h_element(psi, [F(1)], v1)
    b = h_element(psi, [F(1)], v2)
    assert np.array_equal(h_product(a, b).matrix.entries,
                          compose(a.matrix, b.matrix).entries)


def test_leaf_coordinate_examples():
    dom = ModelDomain(CuspParameter([1.0, 0.0, 0.0]))
    c, tag = leaf_coordinate(dom, ProjPoint([0.5, 1.0, 1.0, 1.0]))
    assert abs(c) <= 1e-15 and tag == BOUNDARY

    dom0 = ModelDomain(CuspParameter([0.0, 0.0, 0.0]))
    xs = [0.3, -1.2]
    first = 1.0 + 0.5 * sum(x * x for x in xs)
    c, tag = leaf_coordinate(dom0, ProjPoint([first] + xs + [1.0]))
    assert abs(c - 1.0) <= 1e-12 and tag == INTERIOR


def test_leaf_coordinate_domain_errors():
    dom = ModelDomain(CuspParameter([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        leaf_coordinate(dom, ProjPoint([0.5, 0.0, 1.0, 1.0]))
    c, tag = leaf_coordinate(dom, ProjPoint([1.0, 2.0, 0.0, 0.0]))
    assert c is None and tag == OUTSIDE_CHART


def test_leaf_point_examples():
    dom = ModelDomain(CuspParameter([F(2), F(1), F(0), F(0)]))
    p = leaf_point(dom, F(0), [F(1), F(1), F(0)])
    assert p.coords[0] == 0

    dom0 = ModelDomain(CuspParameter([0.0] * 3))
    xs = [0.7, -0.4]
    p = leaf_point(dom0, 1.0, xs)
    assert abs(p.coords[0] - (1.0 + 0.5 * sum(x * x for x in xs))) <= 1e-15


def test_leaf_roundtrip_random():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        t = int(rng.integers(0, n))
        psi = CuspParameter(sorted(rng.uniform(0.2, 3.0, t), reverse=True)
                            + [0.0] * (n - t))
        dom = ModelDomain(psi)
        c = float(rng.uniform(0.0, 4.0))
        xs = list(rng.uniform(0.2, 3.0, t)) + list(rng.uniform(-2.0, 2.0, n - 1 - t))
        c2, tag = leaf_coordinate(dom, leaf_point(dom, c, xs))
        assert abs(c2 - c) <= 1e-12
        assert tag == (INTERIOR if c > 1e-9 else BOUNDARY)


def test_model_domain_requires_type_below_n():
    with pytest.raises(ValueError):
        ModelDomain(CuspParameter([1.0, 1.0]))


def test_paraboloid_eval_examples():
    m = ParaboloidModel(2)
    val, tag = paraboloid_eval(m, ProjPoint([F(1), F(0), F(0)]))
    assert val == 0 and tag == BOUNDARY
    val, tag = paraboloid_eval(m, ProjPoint([F(1), F(0), F(1)]))
    assert val == F(-2) and tag == INTERIOR
    val, tag = paraboloid_eval(m, ProjPoint([F(0), F(1), F(0)]))
    assert val == F(1) and tag == EXTERIOR


def test_paraboloid_signature():
    # n positive and one negative eigenvalue
    for n in range(2, 7):
        q = np.asarray(ParaboloidModel(n).form.to_float().entries)
        vals = np.linalg.eigvalsh(q)
        assert int(np.sum(vals > 0)) == n
        assert int(np.sum(vals < 0)) == 1


def test_parabolic_element_matches_type0_and_preserves_form():
    m = ParaboloidModel(3)
    assert np.array_equal(parabolic_element(m, [F(0), F(0)]).entries,
                          ProjMap.identity(3).entries)
    rng = np.random.default_rng(3)
    q = m.form.entries
    for _ in range(25):
        v = [F(int(rng.integers(-6, 7)), int(rng.integers(1, 5))) for _ in range(2)]
        h = parabolic_element(m, v)
        assert np.array_equal(h.entries.T @ q @ h.entries, q)


def test_hyperplane_centralizer():
    assert np.array_equal(hyperplane_centralizer_element(2, tparam=0.0, n=3).entries,
                          np.asarray(ProjMap.identity(3, exact=False).entries))
    c = hyperplane_centralizer_element(2, tparam=0.5, n=4)
    par_fixed = parabolic_element(ParaboloidModel(4), [0.0, 1.0, 2.0])   # slot 2 empty
    assert proj_equiv(compose(c, par_fixed), compose(par_fixed, c), 1e-12)
    par_moving = parabolic_element(ParaboloidModel(4), [1.0, 0.0, 0.0])
    assert not proj_equiv(compose(c, par_moving), compose(par_moving, c), 1e-9)
    d = hyperplane_centralizer_element(3, tparam=0.8, n=4)
    assert proj_equiv(compose(c, d), compose(d, c), 1e-15)
    with pytest.raises(ValueError):
        hyperplane_centralizer_element(1, tparam=1.0, n=3)
    with pytest.raises(ValueError):
        hyperplane_centralizer_element(5, tparam=1.0, n=3)
    exact = hyperplane_centralizer_element(2, mu=F(2), n=3)
    assert exact.entries[1][1] == F(2)


def test_zprime_element():
    n = 4
    assert np.array_equal(zprime_element(F(1), F(3), n).entries,
                          ProjMap.identity(n).entries)
    z = zprime_element(F(2), F(3), n)
    e2 = ProjPoint([0, 1, 0, 0, 0])
    assert proj_equiv(act(z, e2), e2)
    fixed = ProjPoint([F(1), F(0), F(0), F(0), F(3)])       # e1 + k e_{n+1}
    assert proj_equiv(act(z, fixed), fixed)
    diag = ProjMap.diagonal([F(1), F(2), F(5), F(7), F(1)])
    assert np.array_equal(compose(z, diag).entries, compose(diag, z).entries)
    z2 = zprime_element(F(3), F(3), n)
    assert np.array_equal(compose(z, z2).entries,
                          zprime_element(F(6), F(3), n).entries)
    with pytest.raises(ValueError):
        zprime_element(0, F(1), n)


def test_leafwise_invariance_sample():
    rng = np.random.default_rng(23)
    psi = CuspParameter([1.5, 0.7, 0.0, 0.0])
    dom = ModelDomain(psi)
    for _ in range(100):
        g = h_element(psi, list(np.exp(rng.uniform(-1, 1, 2))),
                      list(rng.uniform(-2, 2, 1)))
        c = float(rng.uniform(0.0, 3.0))
        xs = list(rng.uniform(0.2, 3.0, 2)) + list(rng.uniform(-2.0, 2.0, 1))
        p = leaf_point(dom, c, xs)
        c2, _ = leaf_coordinate(dom, act(g.matrix, p))
        assert abs(c2 - c) <= 1e-9


def test_group_element_json_recomputes_sigma():
    psi = CuspParameter([0.0, 0.0, 0.0])
    e = h_element(psi, [], [3.0, 4.0])
    back = CuspGroupElement.from_json(psi, e.to_json())
    assert abs(back.sigma - 12.5) <= 1e-15
