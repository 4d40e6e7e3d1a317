import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_invariants

from cubechains import corpus
from cubechains.chains import chain_category
from cubechains.cube_cat import HAT_BOX, HAT_BOX_S, builtin
from cubechains.nerve import (FiniteCategory, NerveTooLarge, category_homology, check_dd_zero,
                              homology, invariant_factors, nerve)
from cubechains.presheaf import FreeASet, standard_cube


def idempotent_category():
    return FiniteCategory(1, [(0, 0), (0, 0)], [0],
                          {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1})


def terminal_category():
    return FiniteCategory(1, [(0, 0)], [0], {(0, 0): 0})


def test_terminal_category_nerve():
    S = nerve(terminal_category(), 3)
    assert S.counts() == [1, 0, 0, 0]
    assert homology(S).is_point()


def test_square_chain_nerve(fixtures):
    C = chain_category(fixtures["square"], "00", "11", 2)
    S = nerve(C.to_finite_category(), 4)
    assert S.counts() == [3, 2, 0, 0, 0]


def test_idempotent_nerve_is_infinite_but_acyclic():
    S = nerve(idempotent_category(), 5)
    assert S.counts() == [1] * 6
    assert check_dd_zero(S)
    res = homology(S)
    assert res.is_point() and res.truncated_at == 5 and res.euler_consistent
    assert res.to_dict()["not_computed"] == "degrees >= 5"


def test_hollow_square_has_two_components(fixtures):
    C = chain_category(fixtures["hollow_square"], "00", "11", 2)
    res = homology(nerve(C.to_finite_category(), 4))
    assert res.pi0 == 2 and res.betti[0] == 2
    assert all(res.betti[k] == 0 for k in (1, 2, 3))


def test_boundary_of_cube_chains_form_a_circle(fixtures):
    K = fixtures["tensor3_boundary"]
    C = chain_category(K, "0|0|0", "1|1|1", 3)
    res = category_homology(C.to_finite_category(), 4, shortcuts=False)
    assert res.betti == {0: 1, 1: 1, 2: 0, 3: 0}


def circle_category():
    # two parallel arrows x -> y: the nerve is a circle
    return FiniteCategory(2, [(0, 0), (1, 1), (0, 1), (0, 1)], [0, 1],
                          lambda f, g: g if f in (0, 1) else f)


def test_parallel_arrows_give_a_circle():
    res = homology(nerve(circle_category(), 3))
    assert res.betti == {0: 1, 1: 1, 2: 0}


def test_components_and_shortcut_methods():
    res = category_homology(circle_category(), 3)
    assert [c["method"] for c in res.components] == ["nerve"]
    res = category_homology(terminal_category(), 3)
    assert res.components[0]["method"] == "terminal_object"


def test_initial_object_shortcut():
    # x <- z -> y : z is initial
    C = FiniteCategory(3, [(0, 0), (1, 1), (2, 2), (2, 0), (2, 1)], [0, 1, 2],
                       lambda f, g: g if f in (0, 1, 2) else f)
    assert category_homology(C, 3).components[0]["method"] == "initial_object"
    assert category_homology(C, 3, shortcuts=False).is_point()


@pytest.mark.parametrize("name", [HAT_BOX, HAT_BOX_S])
def test_shortcut_agrees_with_full_nerve(name):
    L = FreeASet(standard_cube(2), builtin(name, 2))
    F = chain_category(L, L.vertex("00"), L.vertex("11"), 2).to_finite_category()
    full = category_homology(F, 4, shortcuts=False)
    fast = category_homology(F, 4)
    assert full.signature() == fast.signature()
    assert full.components[0]["method"] == "nerve"
    assert fast.components[0]["method"] == "terminal_object"


def test_size_guard():
    with pytest.raises(NerveTooLarge):
        nerve(idempotent_category(), 5, max_simplices=3)


def test_dd_zero_on_free_nerve(hat_box):
    L = FreeASet(standard_cube(2), hat_box)
    S = nerve(chain_category(L, L.vertex("00"), L.vertex("11"), 2).to_finite_category(), 4)
    assert check_dd_zero(S)


def test_invariant_factors_examples():
    assert invariant_factors([{0: 2, 1: 4}, {0: 6, 1: 8}]) == [2, 4]
    assert invariant_factors([{0: 2}, {1: 3}]) == [1, 6]
    assert invariant_factors([]) == []
    assert invariant_factors([{0: 10 ** 30}, {0: 10 ** 30 + 1}]) == [1]


entries = st.sampled_from([0, 0, 0, 1, -1, 2, -3, 4, 6, 12])


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_invariant_factors_match_sympy(r, c, data):
    M = [[data.draw(entries) for _ in range(c)] for _ in range(r)]
    rows = [{j: v for j, v in enumerate(row) if v} for row in M]
    expected = [abs(int(x)) for x in sympy_invariants(Matrix(M), domain=ZZ) if x != 0]
    assert invariant_factors(rows) == expected


def test_cyclic_group_of_order_two_has_torsion():
    # one object, g∘g = id: the nerve is the infinite real projective space
    G = FiniteCategory(1, [(0, 0), (0, 0)], [0], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0})
    res = homology(nerve(G, 5))
    assert res.betti == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}
    assert res.torsion == {0: [], 1: [2], 2: [], 3: [2], 4: []}
    assert res.euler_consistent


def test_corpus_nerves_satisfy_dd_zero(fixtures):
    for K in fixtures.values():
        for a, b in corpus.vertex_pairs(K)[:20]:
            C = chain_category(K, a, b, 3)
            if C.objects:
                assert check_dd_zero(nerve(C.to_finite_category(), 4))
