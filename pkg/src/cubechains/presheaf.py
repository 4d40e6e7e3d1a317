"""Finite presheaves on categories of cubes.

Three realizations of the :class:`ASet` interface live here:

* :class:`PrecubicalSet`: explicit cells and face maps (presheaf on □);
* :class:`FreeASet`: the free A-set on a precubical set, with cells in
  canonical form ``(endo, base cell)``;
* :class:`CoskeletalASet`: cells are vertex functions into a 1-skeleton,
  acted on by precomposition.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Hashable, Iterable, Mapping

from .cube_cat import (BOX, CubeCategory, CubeMap, builtin, compose, face_positions,
                       factorize, identity, is_box_map, is_thick, top, vertex_map)

Cell = Hashable


class ASet(ABC):
    """A finite presheaf on a truncated category of cubes."""

    category: CubeCategory
    max_dim: int

    @abstractmethod
    def cells(self, n: int) -> tuple:
        ...

    @abstractmethod
    def act(self, f: CubeMap, c: Cell) -> Cell:
        """``f^*(c)`` for ``f : [m] -> [n]`` and ``c`` an n-cell."""

    @abstractmethod
    def dim(self, c: Cell) -> int:
        ...

    @abstractmethod
    def cell_id(self, c: Cell) -> str:
        ...

    @abstractmethod
    def vertex(self, name: str) -> Cell:
        """The 0-cell named ``name``."""

    def init(self, c: Cell) -> Cell:
        return self.act(vertex_map(0, self.dim(c)), c)

    def final(self, c: Cell) -> Cell:
        n = self.dim(c)
        return self.act(vertex_map(top(n), n), c)

    def counts(self) -> list[int]:
        return [len(self.cells(n)) for n in range(self.max_dim + 1)]

    def all_cells(self) -> Iterable[Cell]:
        for n in range(self.max_dim + 1):
            yield from self.cells(n)


# -- precubical sets ----------------------------------------------------------

class PrecubicalSet(ASet):
    """Cells with face maps ``faces[c][(i, eps)] = ∂_i^eps(c)``."""

    def __init__(self, cells: Mapping[int, Iterable[str]],
                 faces: Mapping[str, Mapping[tuple[int, int], str]],
                 labels: Mapping[str, str] | None = None):
        self._cells = {int(n): tuple(sorted(cs)) for n, cs in cells.items() if cs}
        self.faces = {c: dict(fs) for c, fs in faces.items() if fs}
        self.labels = dict(labels or {})
        self._dim: dict[str, int] = {}
        for n, cs in self._cells.items():
            for c in cs:
                if c in self._dim:
                    raise ValueError(f"cell {c!r} appears in two dimensions")
                self._dim[c] = n
        for n, cs in self._cells.items():
            for c in cs:
                fs = self.faces.get(c, {})
                for i in range(1, n + 1):
                    for e in (0, 1):
                        if (i, e) not in fs:
                            raise ValueError(f"cell {c!r} lacks face ∂_{i}^{e}")
                        if self._dim.get(fs[(i, e)]) != n - 1:
                            raise ValueError(
                                f"face ∂_{i}^{e}({c!r}) = {fs[(i, e)]!r} is not an {n - 1}-cell")
        self.max_dim = max(self._cells, default=0)
        self._cat: CubeCategory | None = None
        self._act_cache: dict[tuple[CubeMap, str], str] = {}

    @property
    def category(self) -> CubeCategory:
        if self._cat is None:
            self._cat = builtin(BOX, self.max_dim)
        return self._cat

    def __eq__(self, other) -> bool:
        return (isinstance(other, PrecubicalSet) and self._cells == other._cells
                and self.faces == other.faces and self.labels == other.labels)

    def __repr__(self) -> str:
        return f"PrecubicalSet(counts={self.counts()})"

    def cells(self, n: int) -> tuple:
        return self._cells.get(n, ())

    def dim(self, c: str) -> int:
        return self._dim[c]

    def cell_id(self, c: str) -> str:
        return c

    def vertex(self, name: str) -> str:
        if self._dim.get(name) != 0:
            raise KeyError(f"no vertex {name!r}")
        return name

    def face(self, c: str, i: int, eps: int) -> str:
        return self.faces[c][(i, eps)]

    def act(self, f: CubeMap, c: str) -> str:
        key = (f, c)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        if f.dst != self._dim[c]:
            raise ValueError(f"map into [{f.dst}] applied to {self._dim[c]}-cell {c!r}")
        if not is_box_map(f):
            raise ValueError(f"{f!r} is not a box map")
        out = c
        for j, v in reversed(face_positions(f)):
            out = self.faces[out][(j, v)]
        self._act_cache[key] = out
        return out


def standard_cube(n: int) -> PrecubicalSet:
    """□[n]; a cell is written over ``{0,1,*}`` with ``*`` for free
    coordinates, the 0-cube being ``()``."""
    if n < 0:
        raise ValueError("negative dimension")
    if n == 0:
        return PrecubicalSet({0: ["()"]}, {})
    cells: dict[int, list[str]] = {}
    faces: dict[str, dict[tuple[int, int], str]] = {}
    for word in product("01*", repeat=n):
        s = "".join(word)
        free = [k for k, ch in enumerate(s) if ch == "*"]
        cells.setdefault(len(free), []).append(s)
        fs = {}
        for i, k in enumerate(free, start=1):
            for e in (0, 1):
                fs[(i, e)] = s[:k] + str(e) + s[k + 1:]
        faces[s] = fs
    return PrecubicalSet(cells, faces)


def empty_precubical() -> PrecubicalSet:
    return PrecubicalSet({}, {})


def tensor(K: PrecubicalSet, L: PrecubicalSet, sep: str = "|") -> PrecubicalSet:
    """Precubical tensor product: cells ``a|b`` of dimension ``dim a + dim b``."""
    cells: dict[int, list[str]] = {}
    faces: dict[str, dict[tuple[int, int], str]] = {}
    for p in range(K.max_dim + 1):
        for q in range(L.max_dim + 1):
            for a in K.cells(p):
                for b in L.cells(q):
                    name = f"{a}{sep}{b}"
                    cells.setdefault(p + q, []).append(name)
                    fs = {}
                    for i in range(1, p + 1):
                        for e in (0, 1):
                            fs[(i, e)] = f"{K.face(a, i, e)}{sep}{b}"
                    for i in range(1, q + 1):
                        for e in (0, 1):
                            fs[(p + i, e)] = f"{a}{sep}{L.face(b, i, e)}"
                    faces[name] = fs
    return PrecubicalSet(cells, faces)


def grid(width: int, height: int, holes: Iterable[tuple[int, int]] = ()) -> PrecubicalSet:
    """A ``width x height`` grid of squares with some squares removed.

    Vertices ``i,j``; edges ``h:i,j`` (to ``i+1,j``) and ``v:i,j`` (to
    ``i,j+1``); squares ``s:i,j`` with lower-left corner ``i,j``.
    """
    holes = set(holes)
    cells: dict[int, list[str]] = {0: [], 1: [], 2: []}
    faces: dict[str, dict[tuple[int, int], str]] = {}
    for i in range(width + 1):
        for j in range(height + 1):
            cells[0].append(f"{i},{j}")
            if i < width:
                e = f"h:{i},{j}"
                cells[1].append(e)
                faces[e] = {(1, 0): f"{i},{j}", (1, 1): f"{i + 1},{j}"}
            if j < height:
                e = f"v:{i},{j}"
                cells[1].append(e)
                faces[e] = {(1, 0): f"{i},{j}", (1, 1): f"{i},{j + 1}"}
            if i < width and j < height and (i, j) not in holes:
                s = f"s:{i},{j}"
                cells[2].append(s)
                faces[s] = {(1, 0): f"v:{i},{j}", (1, 1): f"v:{i + 1},{j}",
                            (2, 0): f"h:{i},{j}", (2, 1): f"h:{i},{j + 1}"}
    return PrecubicalSet(cells, faces)


# -- free A-sets --------------------------------------------------------------

class NotThick(ValueError):
    pass


class FreeASet(ASet):
    """The free A-set on a precubical set ``base``.

    An m-cell is a pair ``(g, c)`` with ``g`` an endomorphism of ``[m]`` in
    the category and ``c`` an m-cell of ``base``; it stands for the cell
    ``c ∘ g``.
    """

    def __init__(self, base: PrecubicalSet, category: CubeCategory, check: bool = True):
        if base.max_dim > category.max_dim:
            raise ValueError(f"base has dimension {base.max_dim} > category cap {category.max_dim}")
        if check:
            res = is_thick(category)
            if not res.thick:
                f, psi = res.counterexample
                raise NotThick(f"{category.name} is not thick: {f!r} has endo factor {psi!r}")
        self.base = base
        self.category = category
        self.max_dim = base.max_dim
        self._act_cache: dict = {}

    def __repr__(self) -> str:
        return f"FreeASet({self.category.name}, counts={self.counts()})"

    @lru_cache(maxsize=None)
    def cells(self, n: int) -> tuple:
        return tuple((g, c) for g in self.category.endos(n) for c in self.base.cells(n))

    def dim(self, c) -> int:
        return c[0].src

    def cell_id(self, c) -> str:
        g, b = c
        return b if g.src == 0 else f"{b}@{','.join(map(str, g.table))}"

    def vertex(self, name: str):
        return (identity(0), self.base.vertex(name))

    def embed(self, c: str):
        """The base cell ``c`` as the cell ``(id, c)``."""
        return (identity(self.base.dim(c)), c)

    def act(self, f: CubeMap, cell):
        key = (f, cell)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        g, c = cell
        fac = factorize(compose(g, f))
        out = (fac.psi, self.base.act(fac.phi, c))
        self._act_cache[key] = out
        return out


# -- coskeletal A-sets --------------------------------------------------------

class CoskeletalASet(ASet):
    """Cells are vertex functions ``{0,1}^n -> skeleton vertices``.

    The admissible cells in each dimension are supplied by the caller (see
    ``hda.cosk1_fill``); the action is precomposition with vertex tables.
    """

    def __init__(self, skeleton, category: CubeCategory,
                 cells_by_dim: Mapping[int, Iterable[tuple[str, ...]]]):
        self.skeleton = skeleton
        self.category = category
        self._cells = {n: tuple(sorted(cs)) for n, cs in cells_by_dim.items()}
        self.max_dim = max((n for n, cs in self._cells.items() if cs), default=0)
        if self.max_dim > category.max_dim:
            raise ValueError("cells above the category's dimension cap")
        self._sets = {n: frozenset(cs) for n, cs in self._cells.items()}

    def __repr__(self) -> str:
        return f"CoskeletalASet(counts={self.counts()})"

    def cells(self, n: int) -> tuple:
        return self._cells.get(n, ())

    def has_cell(self, u) -> bool:
        return u in self._sets.get(self.dim(u), ())

    def dim(self, u) -> int:
        return len(u).bit_length() - 1

    def cell_id(self, u) -> str:
        return u[0] if len(u) == 1 else "<" + ",".join(u) + ">"

    def vertex(self, name: str):
        u = (name,)
        if u not in self._sets.get(0, ()):
            raise KeyError(f"no vertex {name!r}")
        return u

    def act(self, f: CubeMap, u):
        return tuple(u[v] for v in f.table)


# -- truncation ---------------------------------------------------------------

def boundary(X: ASet, n: int) -> ASet:
    """Drop every cell of dimension ``>= n``."""
    if n < 0:
        raise ValueError("negative truncation")
    if isinstance(X, PrecubicalSet):
        keep = {d: X.cells(d) for d in range(min(n, X.max_dim + 1))}
        return PrecubicalSet(keep, {c: X.faces.get(c, {}) for cs in keep.values() for c in cs},
                             {e: l for e, l in X.labels.items() if X.dim(e) < n})
    if isinstance(X, FreeASet):
        return FreeASet(boundary(X.base, n), X.category, check=False)
    if isinstance(X, CoskeletalASet):
        return CoskeletalASet(X.skeleton, X.category,
                              {d: X.cells(d) for d in range(min(n, X.max_dim + 1))})
    raise TypeError(f"cannot truncate {type(X).__name__}")


# -- validation ---------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    checked: int
    violation: dict | None = None

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "violation": self.violation}


def validate(X: ASet) -> ValidationReport:
    """Check the contravariant functor laws on every stored hom-set pair."""
    A = X.category
    N = X.max_dim
    cellsets = {n: frozenset(X.cells(n)) for n in range(N + 1)}
    checked = 0
    for p in range(N + 1):
        for c in X.cells(p):
            checked += 1
            if X.act(identity(p), c) != c:
                return ValidationReport(False, checked, {
                    "law": "identity", "cell": X.cell_id(c)})
            for n in range(p + 1):
                for g in A.hom(n, p):
                    gc = X.act(g, c)
                    if gc not in cellsets[n]:
                        return ValidationReport(False, checked, {
                            "law": "closure", "map": g.key(), "cell": X.cell_id(c)})
                    for m in range(n + 1):
                        for f in A.hom(m, n):
                            checked += 1
                            if X.act(compose(g, f), c) != X.act(f, gc):
                                return ValidationReport(False, checked, {
                                    "law": "composition", "f": f.key(), "g": g.key(),
                                    "cell": X.cell_id(c)})
    return ValidationReport(True, checked)


# -- colimit oracle -----------------------------------------------------------

def colimit_classes(K: PrecubicalSet, A: CubeCategory, m: int) -> list[set]:
    """m-cells of the free A-set computed as a raw colimit.

    Elements are pairs ``(k, c)`` with ``k in A([m],[p])``, ``c in K_p`` for
    every ``p``; the relation ``(d∘k, c) ~ (k, d^*(c))`` for box maps ``d``
    is closed up with union-find. Independent of the canonical form.
    """
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    box = builtin(BOX, A.max_dim)
    for p in range(m, K.max_dim + 1):
        for k in A.hom(m, p):
            for c in K.cells(p):
                parent[(k, c)] = (k, c)
    for p in range(m, K.max_dim + 1):
        for q in range(p, K.max_dim + 1):
            for d in box.hom(p, q):
                for k in A.hom(m, p):
                    dk = compose(d, k)
                    for c in K.cells(q):
                        union((dk, c), (k, K.act(d, c)))
    classes: dict = {}
    for x in parent:
        classes.setdefault(find(x), set()).add(x)
    return sorted(classes.values(), key=lambda s: min(s))
