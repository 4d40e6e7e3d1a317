import numpy as np
import pytest
from hypothesis import given, strategies as st

from cubechains.cube_cat import (coface, compose, cotransverse_endos, gamma, identity,
                                 symmetry, to_bits)
from cubechains.metric import (INFINITY, as_point, check_properties, d1, t_eval, t_eval_many,
                               t_map)

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def test_distance_examples():
    assert d1((0, 0, 0), (1, 1, 1)) == 3
    assert d1((1, 0), (0, 1)) == INFINITY
    assert d1((0.2, 0.3), (0.5, 0.3)) == pytest.approx(0.3, abs=1e-12)
    with pytest.raises(ValueError):
        d1((0,), (0, 1))


def test_point_validation():
    with pytest.raises(ValueError):
        as_point((0.5, 1.5))


@given(unit, unit)
def test_extension_examples(x1, x2):
    assert t_eval(identity(2), (x1, x2)) == (x1, x2)
    assert t_eval(gamma(1, 2), (x1, x2)) == (max(x1, x2), min(x1, x2))
    assert t_eval(symmetry(1, 2), (x1, x2)) == (x2, x1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_vertex_agreement_exhaustive(n):
    for f in cotransverse_endos(n):
        for v in range(1 << n):
            assert t_eval(f, to_bits(v, n)) == tuple(float(b) for b in to_bits(f.table[v], n))


def test_extension_of_general_maps_inserts_constants():
    f = compose(coface(2, 1, 3), gamma(1, 2))
    assert t_map(f, (0.2, 0.7)) == (0.7, 1.0, 0.2)
    assert t_map(coface(1, 0, 1), ()) == (0.0,)


def test_t_eval_requires_endomorphism():
    with pytest.raises(ValueError):
        t_eval(coface(1, 0, 2), (0.5,))


ENDOS3 = cotransverse_endos(3)


@given(st.sampled_from(ENDOS3), st.sampled_from(ENDOS3),
       st.tuples(unit, unit, unit), st.tuples(unit, unit, unit))
def test_functorial_monotone_non_expansive(f, g, x, u):
    y = tuple(a + (1 - a) * b for a, b in zip(x, u))
    assert np.allclose(t_eval(compose(f, g), x), t_eval(f, t_eval(g, x)), atol=1e-12, rtol=0)
    tx, ty = t_eval(f, x), t_eval(f, y)
    assert all(a <= b + 1e-12 for a, b in zip(tx, ty))
    assert d1(tx, ty) <= d1(x, y) + 1e-12


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(5)
    X = rng.random((50, 3))
    for f in ENDOS3[:20]:
        M = t_eval_many(f, X)
        for row, out in zip(X, M):
            assert tuple(out) == t_eval(f, tuple(row))


def test_property_suite_is_clean_and_seeded():
    a = check_properties(dims=2, samples=200, seed=7)
    b = check_properties(dims=2, samples=200, seed=7)
    assert a.ok and a.to_dict() == b.to_dict()
    assert a.endos_checked == 1 + 4 and a.pairs_checked == 1 + 16

