from math import comb

import pytest
from hypothesis import given, strategies as st

from cubechains.cube_cat import (BAR_BOX, BOX, BOX_S, BUILTIN_NAMES, GENERATED, HAT_BOX,
                                 HAT_BOX_S, CategorySpec, CubeMap, CubeVertex,
                                 EnumerationInfeasible, NotCotransverse, box_maps, builtin,
                                 coface, compose, cotransverse_endos, enumerate_cotransverse,
                                 factorize, factorizations_exhaustive, from_bits, gamma,
                                 generate_category, identity, in_hat_square, is_box_map,
                                 is_closed, is_cotransverse, is_thick, non_thick_fixture,
                                 symmetry, to_bits)
from cubechains.verify import brute_force_cotransverse

ALL_MAPS = [f for n in range(4) for m in range(n + 1) for f in sorted(enumerate_cotransverse(m, n))]


def test_vertex_encoding_first_coordinate_is_most_significant():
    assert to_bits(from_bits((1, 0, 1)), 3) == (1, 0, 1)
    assert from_bits((1, 0)) == 2
    assert CubeVertex((0, 1)) <= CubeVertex((1, 1))
    assert not CubeVertex((1, 0)) <= CubeVertex((0, 1))


def test_cubemap_rejects_non_monotone_tables():
    with pytest.raises(ValueError):
        CubeMap(1, 1, (1, 0))
    with pytest.raises(ValueError):
        CubeMap(1, 2, (0,))


def test_named_maps_are_cotransverse():
    for f in (symmetry(1, 2), gamma(1, 2), identity(3), coface(2, 1, 3)):
        assert is_cotransverse(f)


def test_gamma_after_coface_relation():
    assert compose(gamma(1, 2), coface(1, 0, 2)) == coface(2, 0, 2)


def test_symmetry_is_an_involution():
    s = symmetry(1, 2)
    assert compose(s, s) == identity(2)


def test_vertex_selection_hom():
    assert len(enumerate_cotransverse(0, 3)) == 8
    assert enumerate_cotransverse(1, 1) == frozenset({identity(1)})


@pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (2, 4), (3, 66)])
def test_endo_counts(n, count):
    assert len(cotransverse_endos(n)) == count


@pytest.mark.parametrize("m,n", [(m, n) for n in range(4) for m in range(n + 1)])
def test_hom_count_splits_as_endos_times_box_maps(m, n):
    expected = len(cotransverse_endos(m)) * comb(n, m) * 2 ** (n - m)
    assert len(enumerate_cotransverse(m, n)) == expected
    assert len(box_maps(m, n)) == comb(n, m) * 2 ** (n - m)


@pytest.mark.parametrize("m,n", [(0, 1), (1, 1), (1, 2), (2, 2), (0, 2)])
def test_enumeration_matches_brute_force(m, n):
    assert {f.table for f in enumerate_cotransverse(m, n)} == brute_force_cotransverse(m, n)


def test_square_endos_contain_the_named_maps():
    endos = set(cotransverse_endos(2))
    assert {identity(2), symmetry(1, 2), gamma(1, 2)} <= endos
    assert CubeMap.from_function(2, 2, lambda x: (min(x), max(x))) in endos


def test_enumeration_cap():
    with pytest.raises(EnumerationInfeasible):
        enumerate_cotransverse(4, 4)
    with pytest.raises(EnumerationInfeasible):
        builtin(HAT_BOX_S, 4)


@pytest.mark.parametrize("f", ALL_MAPS, ids=lambda f: f.key())
def test_factorization_unique_and_correct(f):
    fac = factorize(f)
    assert compose(fac.phi, fac.psi) == f
    assert fac.psi.src == fac.psi.dst == f.src
    assert is_box_map(fac.phi)
    assert factorizations_exhaustive(f) == [fac]


def test_factorization_examples():
    d = coface(2, 1, 3)
    assert factorize(d).psi == identity(2) and factorize(d).phi == d
    s = symmetry(1, 2)
    assert factorize(s).psi == s and factorize(s).phi == identity(2)
    f = compose(coface(3, 1, 3), gamma(1, 2))
    assert factorize(f).psi == gamma(1, 2)
    assert factorize(f).phi == coface(3, 1, 3)


def test_factorize_rejects_non_cotransverse():
    f = CubeMap(1, 2, (0, 3))
    with pytest.raises(NotCotransverse):
        factorize(f)


@given(st.sampled_from(ALL_MAPS), st.data())
def test_composition_is_associative(f, data):
    g = data.draw(st.sampled_from([g for g in ALL_MAPS if g.src == f.dst]))
    h = data.draw(st.sampled_from([h for h in ALL_MAPS if h.src == g.dst]))
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
    assert compose(identity(f.dst), f) == f == compose(f, identity(f.src))
    assert is_cotransverse(compose(g, f))


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_are_closed_and_thick(name):
    cat = builtin(name, 3)
    assert is_closed(cat) is None
    res = is_thick(cat)
    assert res.thick and "up to max_dim 3" in res.note


def test_builtin_inclusions():
    box, box_s, hat, hat_s, bar = (builtin(n, 3) for n in (BOX, BOX_S, HAT_BOX, HAT_BOX_S, BAR_BOX))
    assert box.is_subcategory_of(box_s) and box_s.is_subcategory_of(bar)
    assert bar.is_subcategory_of(hat_s)
    assert box.is_subcategory_of(hat) and hat.is_subcategory_of(hat_s)
    assert not hat.contains_symmetry() and hat_s.contains_symmetry()
    assert gamma(1, 2) in hat and symmetry(1, 2) not in hat


def test_box_homs_are_box_maps():
    box = builtin(BOX, 3)
    for n in range(4):
        for m in range(n + 1):
            assert set(box.hom(m, n)) == set(box_maps(m, n))


def test_non_thick_fixture_counterexample():
    res = is_thick(non_thick_fixture(3))
    assert not res.thick
    f, psi = res.counterexample
    assert psi == gamma(1, 2)
    assert gamma(1, 2) not in non_thick_fixture(3)


def test_hat_square_membership():
    assert not in_hat_square(symmetry(1, 2))
    assert in_hat_square(gamma(1, 2))
    for n in range(1, 4):
        for i in range(1, n + 1):
            assert in_hat_square(coface(i, 0, n)) and in_hat_square(coface(i, 1, n))


def test_generated_category_rejects_bad_generators():
    with pytest.raises(NotCotransverse):
        generate_category(CategorySpec("bad", GENERATED, (CubeMap(1, 2, (0, 3)),), 2))


def test_generated_from_all_endos_gives_everything():
    gens = tuple(f for n in range(2, 4) for f in cotransverse_endos(n))
    cat = generate_category(CategorySpec("all", GENERATED, gens, 3))
    assert set(cat.maps()) == set(builtin(HAT_BOX_S, 3).maps())
