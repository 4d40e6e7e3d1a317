from math import comb

import pytest

from cubechains import corpus
from cubechains.cube_cat import (BOX, HAT_BOX, HAT_BOX_S, builtin, coface, compose,
                                 cotransverse_endos, factorize, gamma, identity,
                                 non_thick_fixture)
from cubechains.presheaf import (CoskeletalASet, FreeASet, NotThick, PrecubicalSet, boundary,
                                 colimit_classes, empty_precubical, grid, standard_cube, tensor,
                                 validate)


@pytest.mark.parametrize("n", range(4))
def test_standard_cube_counts(n):
    K = standard_cube(n)
    assert K.counts() == [comb(n, m) * 2 ** (n - m) for m in range(n + 1)]
    assert validate(K).ok


def test_small_cubes():
    assert standard_cube(0).cells(0) == ("()",)
    K = standard_cube(2)
    assert K.face("**", 1, 0) == "0*" and K.face("**", 2, 1) == "*1"
    assert K.init("**") == "00" and K.final("**") == "11"


def test_boundary_truncation():
    H = boundary(standard_cube(2), 2)
    assert H.counts() == [4, 4]
    assert boundary(standard_cube(1), 1).counts() == [2]
    assert boundary(standard_cube(2), 0).counts() == [0]
    assert empty_precubical().counts() == [0]


def test_face_validation_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        PrecubicalSet({0: ["a", "b"], 1: ["e"]}, {"e": {(1, 0): "a", (1, 1): "e"}})


def test_non_commuting_square_fails_validation():
    cells = {0: ["a", "b", "c", "d"], 1: ["l", "r", "t", "u"], 2: ["s"]}
    faces = {"l": {(1, 0): "a", (1, 1): "b"}, "r": {(1, 0): "c", (1, 1): "d"},
             "t": {(1, 0): "a", (1, 1): "c"}, "u": {(1, 0): "b", (1, 1): "d"},
             # ∂_2^1 should start at c, not a
             "s": {(1, 0): "t", (1, 1): "u", (2, 0): "l", (2, 1): "t"}}
    rep = validate(PrecubicalSet(cells, faces))
    assert not rep.ok and rep.violation["law"] == "composition"


def test_tensor_and_grid():
    I = standard_cube(1)
    T = tensor(tensor(I, I), I)
    assert T.counts() == standard_cube(3).counts()
    assert validate(T).ok
    G = grid(3, 3, corpus.FLAG_HOLES)
    assert G.counts() == [16, 24, 7]
    assert validate(G).ok


def test_precubical_action_applies_faces():
    K = standard_cube(2)
    assert K.act(coface(1, 1, 2), "**") == "1*"
    assert K.act(compose(coface(1, 0, 2), coface(1, 1, 1)), "**") == "01"
    with pytest.raises(ValueError):
        K.act(gamma(1, 2), "**")


@pytest.mark.parametrize("name", [HAT_BOX, HAT_BOX_S])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_free_aset_counts_and_laws(name, n):
    A = builtin(name, 3)
    L = FreeASet(standard_cube(n), A)
    assert L.counts() == [len(A.endos(m)) * comb(n, m) * 2 ** (n - m) for m in range(n + 1)]
    assert validate(L).ok


def test_free_aset_requires_thick_category():
    with pytest.raises(NotThick):
        FreeASet(standard_cube(2), non_thick_fixture(3))


def test_free_aset_over_box_is_the_base():
    K = corpus.flag_grid()
    L = FreeASet(K, builtin(BOX, 2))
    assert L.counts() == K.counts()


def test_free_action_uses_factorization():
    L = FreeASet(standard_cube(2), builtin(HAT_BOX_S, 2))
    cell = L.embed("**")
    g = gamma(1, 2)
    assert L.act(g, cell) == (g, "**")
    assert L.act(coface(1, 0, 2), (g, "**")) == (identity(1), "*0")
    assert factorize(compose(g, coface(1, 0, 2))).phi == coface(2, 0, 2)


@pytest.mark.parametrize("name", [HAT_BOX, HAT_BOX_S])
@pytest.mark.parametrize("kname", ["square", "hollow_square", "cube3"])
def test_canonical_cells_match_colimit(name, kname, fixtures):
    K = fixtures[kname]
    A = builtin(name, 3)
    L = FreeASet(K, A)
    for m in range(K.max_dim + 1):
        classes = colimit_classes(K, A, m)
        assert len(classes) == len(L.cells(m))
        for cls in classes:
            canon = {(factorize(k).psi, K.act(factorize(k).phi, c)) for k, c in cls}
            assert len(canon) == 1


def test_coskeletal_action_is_precomposition():
    A = builtin(HAT_BOX_S, 2)
    u = ("p", "q", "r", "s")
    X = CoskeletalASet(None, A, {0: [("p",), ("q",), ("r",), ("s",)],
                                 1: [("p", "q"), ("p", "r"), ("q", "s"), ("r", "s")],
                                 2: [u, ("p", "r", "q", "s")]})
    assert X.dim(u) == 2 and X.cell_id(("p",)) == "p"
    assert X.act(coface(1, 0, 2), u) == ("p", "q")
    assert X.init(u) == ("p",) and X.final(u) == ("s",)
    # u and u∘σ alone are not closed under the connection γ_1
    rep = validate(X)
    assert not rep.ok and rep.violation["law"] == "closure"


def test_every_endo_acts_on_free_cells(hat_box_s):
    L = FreeASet(standard_cube(3), hat_box_s)
    top = L.embed("***")
    assert {L.act(f, top) for f in cotransverse_endos(3)} == set(L.cells(3))
