from itertools import combinations

import pytest

from cubechains import corpus
from cubechains.chains import (ChainCategory, Composition, CubeChain, all_nbar_maps,
                               canonical_comma_object, chain_category, chain_objects,
                               comma_initial, compose_witness, compositions,
                               enumerate_nbar_maps, generated_nbar_maps, identity_witness,
                               lift_functor, phi_AB, witness_cells)
from cubechains.cube_cat import (BOX, HAT_BOX, HAT_BOX_S, builtin, coface, compose, gamma,
                                 identity, top, vertex_map)
from cubechains.presheaf import FreeASet, standard_cube


def comp(*parts):
    return Composition(tuple(parts))


def test_compositions():
    assert compositions(3) == sorted([comp(3), comp(1, 2), comp(2, 1), comp(1, 1, 1)])
    assert compositions(1) == [comp(1)]
    assert len(compositions(5)) == 16
    assert compositions(0) == [comp()]
    assert comp(1, 2).vtx == (0, 1, 3)
    assert comp(1, 1, 1).refines(comp(1, 2)) and not comp(2, 1).refines(comp(1, 2))


def test_chain_objects_examples(fixtures):
    K = fixtures["square"]
    obs = chain_objects(K, "00", "11", 2)
    assert len(obs) == 3
    assert CubeChain(comp(2), ("**",)) in obs
    assert len(chain_objects(fixtures["hollow_square"], "00", "11", 2)) == 2
    assert len(chain_objects(standard_cube(1), "0", "1", 1)) == 1
    assert chain_objects(K, "00", "00", 0) == [CubeChain(comp(), ())]
    assert chain_objects(K, "00", "11", 0) == []


def test_nbar_map_examples():
    box, hat_s = builtin(BOX, 3), builtin(HAT_BOX_S, 3)
    assert len(enumerate_nbar_maps(box, comp(1, 1), comp(2))) == 2
    for n in (1, 2, 3):
        assert enumerate_nbar_maps(box, comp(n), comp(n)) == [identity_witness(comp(n))]
    assert len(enumerate_nbar_maps(hat_s, comp(2), comp(2))) == len(hat_s.endos(2))
    assert enumerate_nbar_maps(hat_s, comp(2), comp(1, 1)) == []


def insert_constant(positions, value, n):
    """The box map [n - k] -> [n] fixing ``positions`` to ``value``, built
    from cofaces."""
    f = identity(n - len(positions))
    for j in sorted(positions):
        f = compose(coface(j, value, f.dst + 1), f)
    return f


@pytest.mark.parametrize("m1,m2", [(1, 1), (1, 2), (2, 1)])
def test_merge_map_equations(m1, m2):
    n = m1 + m2
    for A_set in combinations(range(1, n + 1), m1):
        B_set = [j for j in range(1, n + 1) if j not in A_set]
        first, second = phi_AB(A_set, B_set)
        assert first == insert_constant(B_set, 0, n)
        assert second == insert_constant(A_set, 1, n)
        assert first.table[-1] == second.table[0]


SMALL = [c for n in range(1, 4) for c in compositions(n)]


@pytest.mark.parametrize("name", [BOX, HAT_BOX, HAT_BOX_S])
@pytest.mark.parametrize("na", SMALL, ids=lambda c: str(c.parts))
def test_maps_between_glued_cubes_are_generated(name, na):
    A = builtin(name, 3)
    generated = generated_nbar_maps(A, na)
    for nb in compositions(na.length):
        glued = set(all_nbar_maps(A, na, nb))
        formula = {witness_cells(w) for w in enumerate_nbar_maps(A, na, nb)}
        closure = {witness_cells(w) for w in generated.get(nb, ())}
        assert glued == formula == closure
        if not na.refines(nb):
            assert not glued


def _laws(C: ChainCategory):
    laws = C.check_laws()
    assert laws["identity"] and laws["associativity"] and laws["exhaustive"]
    assert C.check_commutation()


def test_square_chain_category(fixtures):
    C = chain_category(fixtures["square"], "00", "11", 2)
    assert len(C.objects) == 3 and len(C.morphisms) - len(C.objects) == 2
    top_ob = C.index[CubeChain(comp(2), ("**",))]
    assert all(m.dst == top_ob for m in C.morphisms if m.src != m.dst)
    _laws(C)


def test_empty_chain_only_between_equal_vertices(fixtures):
    K = fixtures["square"]
    C = chain_category(K, "00", "00", 0)
    assert len(C.objects) == 1 and len(C.morphisms) == 1
    assert not chain_category(K, "00", "11", 0).objects


@pytest.mark.parametrize("name", [HAT_BOX, HAT_BOX_S])
@pytest.mark.parametrize("kname", ["square", "hollow_square", "cube3"])
def test_free_chain_categories_obey_laws(name, kname, fixtures):
    K = fixtures[kname]
    L = FreeASet(K, builtin(name, 3))
    n = K.max_dim if K.max_dim else 2
    a, b = K.cells(0)[0], K.cells(0)[-1]
    C = chain_category(L, L.vertex(a), L.vertex(b), max(n, 2))
    _laws(C)


def test_composition_of_witnesses_is_associative(hat_box_s):
    L = FreeASet(standard_cube(3), hat_box_s)
    C = chain_category(L, L.vertex("000"), L.vertex("111"), 3)
    w = C.morphisms[5].witness
    assert compose_witness(identity_witness(C.objects[C.morphisms[5].src].comp), w) == w


@pytest.mark.parametrize("kname", list(corpus.corpus()))
def test_box_chain_categories_have_trivial_endos(kname, fixtures):
    K = fixtures[kname]
    for a, b in corpus.vertex_pairs(K):
        for n in range(4):
            C = chain_category(K, a, b, n)
            for i in range(len(C.objects)):
                assert C.endomorphisms(i) == [C.identity[i]]


@pytest.mark.parametrize("name", [HAT_BOX, HAT_BOX_S])
@pytest.mark.parametrize("kname", ["square", "hollow_square", "cube3", "tensor3_boundary"])
def test_lift_functor_and_comma_initial(name, kname, fixtures):
    K = fixtures[kname]
    A = builtin(name, 3)
    a, b = K.cells(0)[0], K.cells(0)[-1]
    n = len(a.replace("|", ""))
    F = lift_functor(K, A, a, b, n)
    assert all(F.check_laws().values())
    for c in range(len(F.target.objects)):
        assert comma_initial(F, c).unique


def test_comma_initial_examples(hat_box_s):
    K = standard_cube(2)
    F = lift_functor(K, hat_box_s, "00", "11", 2)
    g = gamma(1, 2)
    c = F.target.index[CubeChain(comp(2), ((g, "**"),))]
    d0, u0 = canonical_comma_object(F, c)
    assert F.source.objects[d0] == CubeChain(comp(2), ("**",))
    assert F.target.morphisms[u0].witness == ((g,),)
    for d in range(len(F.source.objects)):
        image = F.target.index[CubeChain(F.source.objects[d].comp,
                                         tuple((identity(F.source.objects[d].comp.parts[i]), x)
                                               for i, x in enumerate(F.source.objects[d].cells)))]
        d1, u1 = canonical_comma_object(F, image)
        assert d1 == d and u1 == F.target.identity[image]


def test_vertex_maps_glue(hat_box_s):
    # the top vertex of a block is the bottom vertex of the next one
    from cubechains.chains import GluedCube
    G = GluedCube(hat_box_s, comp(1, 2))
    assert G.act(vertex_map(0, 2), (1, identity(2))) == (0, vertex_map(1, 1))
