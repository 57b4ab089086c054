import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspbend.projlin import (
    DimensionMismatch,
    ExactModeError,
    ProjMap,
    ProjPoint,
    SingularMatrix,
    act,
    compose,
    eigen,
    inverse,
    matrix_from_json,
    matrix_to_json,
    parse_scalar,
    proj_equiv,
    scalar_to_json,
)


def test_compose_identity():
    m = ProjMap([[1, 2], [3, 5]])
    assert np.array_equal(compose(ProjMap.identity(1), m).entries, m.entries)


def test_compose_inverse_is_identity_up_to_scale():
    m = ProjMap([[F(1), F(2)], [F(3), F(5)]])
    assert proj_equiv(compose(m, inverse(m)), ProjMap.identity(1))


def test_compose_diagonals():
    got = compose(ProjMap.diagonal([1, 2, 1]), ProjMap.diagonal([1, 3, 1]))
    assert np.array_equal(got.entries, ProjMap.diagonal([F(1), F(6), F(1)]).entries)


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        compose(ProjMap.identity(2), ProjMap.identity(3))


def test_inverse_identity_and_diagonal():
    assert np.array_equal(inverse(ProjMap.identity(2)).entries,
                          ProjMap.identity(2).entries)
    inv = inverse(ProjMap.diagonal([F(1), F(2), F(4)]))
    assert proj_equiv(inv, ProjMap.diagonal([F(1), F(1, 2), F(1, 4)]))


def test_inverse_singular_exact():
    with pytest.raises(SingularMatrix):
        inverse(ProjMap([[F(1), F(2)], [F(2), F(4)]]))


def test_inverse_of_bent_generator_multiplies_back_exactly():
    from cuspbend.cusp_classify import RectangularCuspData, bent_cusp_generators
    data = RectangularCuspData(3, b=[F(1), F(2)], mu=[F(2), F(1)])
    for g in bent_cusp_generators(data):
        assert np.array_equal(compose(inverse(g), g).entries,
                              ProjMap.identity(3).entries)


def test_inverse_singular_float_condition():
    with pytest.raises(SingularMatrix):
        inverse(ProjMap([[1.0, 1.0], [1.0, 1.0 + 1e-16]]))


def test_act_identity_and_diagonal():
    p = ProjPoint([1, 1])
    assert proj_equiv(act(ProjMap.identity(1), p), p)
    assert proj_equiv(act(ProjMap.diagonal([2.0, 1.0]), p), ProjPoint([2, 1]))


def test_act_parabolic_fixes_distinguished_point():
    from cuspbend.cusp_models import ParaboloidModel, parabolic_element
    h = parabolic_element(ParaboloidModel(3), [F(2), F(-1)])
    e1 = ProjPoint([1, 0, 0, 0])
    assert proj_equiv(act(h, e1), e1)


def test_proj_equiv_scale_and_negation():
    m = ProjMap([[1.0, 2.0], [3.0, 4.0]])
    assert proj_equiv(m, ProjMap(3.0 * np.asarray(m.entries)))
    assert proj_equiv(m, ProjMap(-2.0 * np.asarray(m.entries)))
    assert not proj_equiv(ProjMap.identity(2, exact=False),
                          ProjMap.diagonal([1.0, 1.0, 2.0]))


def test_proj_equiv_exact():
    m = ProjMap([[F(1), F(2)], [F(0), F(1)]])
    assert proj_equiv(m, ProjMap([[F(3), F(6)], [F(0), F(3)]]))
    assert not proj_equiv(m, ProjMap([[F(1), F(2)], [F(1), F(1)]]))


def test_eigen_diagonal():
    pairs = eigen(ProjMap.diagonal([1.0, 2.0, 3.0]))
    values = [p.value for p in pairs]
    assert values == [3.0, 2.0, 1.0]
    for pair, idx in zip(pairs, (2, 1, 0)):
        vec = np.zeros(3)
        vec[idx] = 1.0
        assert np.allclose(np.abs(pair.vector), vec)
        assert pair.residual <= 1e-12
        assert pair.multiplicity == 1


def test_eigen_unipotent_generator():
    from cuspbend.cusp_classify import RectangularCuspData, standard_cusp_generators
    g = standard_cusp_generators(RectangularCuspData(3, b=[1.0, 1.0], s=[0.0, 0.0]))[0]
    pairs = eigen(g.to_float())
    assert all(abs(p.value - 1.0) <= 1e-9 for p in pairs)
    assert all(p.multiplicity == 4 for p in pairs)


def test_eigen_bent_generator_has_multiplier():
    from cuspbend.cusp_classify import RectangularCuspData, bent_cusp_generators
    s = 0.7
    g = bent_cusp_generators(RectangularCuspData(3, b=[1.0, 1.0], s=[s, 0.0]))[0]
    pairs = eigen(g.to_float())
    hits = [p for p in pairs if abs(p.value - math.exp(s)) <= 1e-9]
    assert len(hits) == 1
    assert hits[0].multiplicity == 1


def test_eigen_refuses_exact_mode():
    with pytest.raises(ExactModeError):
        eigen(ProjMap.diagonal([F(1), F(2)]))


def test_matrix_json_roundtrip():
    m = ProjMap([[F(1, 2), F(3)], [F(0), F(1)]])
    data = matrix_to_json(m)
    assert data == [["1/2", "3"], ["0", "1"]]
    back = matrix_from_json(data)
    assert np.array_equal(back.entries, m.entries)
    mf = ProjMap([[0.5, 3.0], [0.0, 1.0]])
    assert matrix_from_json(matrix_to_json(mf)).entries.dtype == np.float64


def test_scalar_json():
    assert scalar_to_json(F(3, 2)) == "3/2"
    assert parse_scalar("3/2") == F(3, 2)
    assert parse_scalar(7) == F(7)
    assert parse_scalar(0.25) == 0.25


small_fraction = st.fractions(min_value=-3, max_value=3, max_denominator=5)


def exact_matrix(size):
    return st.lists(st.lists(small_fraction, min_size=size, max_size=size),
                    min_size=size, max_size=size).map(ProjMap)


@settings(max_examples=50, deadline=None)
@given(exact_matrix(3), exact_matrix(3), exact_matrix(3))
def test_compose_associative_exact(a, b, c):
    lhs = compose(compose(a, b), c)
    rhs = compose(a, compose(b, c))
    assert np.array_equal(lhs.entries, rhs.entries)


@settings(max_examples=50, deadline=None)
@given(exact_matrix(3), small_fraction.filter(lambda x: x != 0))
def test_proj_equiv_scale_invariance_exact(m, scale):
    scaled = ProjMap([[x * scale for x in row] for row in m.entries])
    assert proj_equiv(m, scaled)


def test_act_composition_random():
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(2, 5))
        a = ProjMap(rng.uniform(-1, 1, (n + 1, n + 1)))
        b = ProjMap(rng.uniform(-1, 1, (n + 1, n + 1)))
        p = ProjPoint(rng.uniform(0.5, 1.5, n + 1))
        assert proj_equiv(act(compose(a, b), p), act(a, act(b, p)), 1e-10)
