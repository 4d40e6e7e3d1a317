"""Cube chains of an A-set and the category they form.

An object of ``Ch_{α,β}(X, n)`` is stored as a tuple of cells glued end to
start; a morphism ``a -> b`` is a *witness*: for every block of ``b`` a
chain of maps ``h_i : [m_i] -> [N]`` in the category, from ``0_N`` to
``1_N``, whose action on the block's cell reproduces the cells of ``a``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Sequence

from .cube_cat import CubeCategory, CubeMap, compose, identity, top, vertex_map
from .presheaf import ASet, FreeASet, PrecubicalSet

Witness = tuple[tuple[CubeMap, ...], ...]


# -- compositions -------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Composition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive: {self.parts}")

    @property
    def length(self) -> int:
        return sum(self.parts)

    @property
    def elements(self) -> int:
        return len(self.parts)

    @property
    def vtx(self) -> tuple[int, ...]:
        out = [0]
        for p in self.parts:
            out.append(out[-1] + p)
        return tuple(out)

    def refines(self, coarser: "Composition") -> bool:
        """``vtx(coarser) ⊆ vtx(self)`` with equal length."""
        return self.length == coarser.length and set(coarser.vtx) <= set(self.vtx)

    def blocks_over(self, coarser: "Composition") -> list[tuple[int, ...]]:
        """Split ``self.parts`` into the sub-compositions of each coarser block."""
        out, i = [], 0
        for N in coarser.parts:
            acc, sub = 0, []
            while acc < N:
                sub.append(self.parts[i])
                acc += self.parts[i]
                i += 1
            if acc != N:
                raise ValueError(f"{self.parts} does not refine {coarser.parts}")
            out.append(tuple(sub))
        return out


def compositions(n: int) -> list[Composition]:
    """All compositions of ``n``; ``n = 0`` gives the empty composition."""
    if n < 0:
        raise ValueError("negative length")
    if n == 0:
        return [Composition(())]
    out = []
    for k in range(n):
        for cuts in combinations(range(1, n), k):
            bounds = (0,) + cuts + (n,)
            out.append(Composition(tuple(b - a for a, b in zip(bounds, bounds[1:]))))
    return sorted(out)


# -- chain objects ------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CubeChain:
    comp: Composition
    cells: tuple

    def ids(self, X: ASet) -> list[str]:
        return [X.cell_id(c) for c in self.cells]


def _by_init(X: ASet) -> dict[int, dict]:
    idx: dict[int, dict] = {}
    for d in range(1, X.max_dim + 1):
        slot: dict = {}
        for c in X.cells(d):
            slot.setdefault(X.init(c), []).append(c)
        idx[d] = slot
    return idx


def chain_objects(X: ASet, alpha, beta, n: int) -> list[CubeChain]:
    """All glued cell tuples from ``alpha`` to ``beta`` of total dimension ``n``."""
    if n == 0:
        return [CubeChain(Composition(()), ())] if alpha == beta else []
    idx = _by_init(X)
    out: list[CubeChain] = []

    def walk(v, remaining: int, parts: list[int], cells: list) -> None:
        if remaining == 0:
            if v == beta:
                out.append(CubeChain(Composition(tuple(parts)), tuple(cells)))
            return
        for d in range(1, min(remaining, X.max_dim) + 1):
            for c in idx[d].get(v, ()):
                parts.append(d)
                cells.append(c)
                walk(X.final(c), remaining - d, parts, cells)
                parts.pop()
                cells.pop()

    walk(alpha, n, [], [])
    return sorted(out, key=lambda ch: (ch.comp, tuple(X.cell_id(c) for c in ch.cells)))


# -- maps between n-cubes -----------------------------------------------------

def _block_chains(A: CubeCategory, sub: Sequence[int], N: int,
                  accept=None) -> list[tuple[CubeMap, ...]]:
    # chains of A[N] from 0_N to 1_N with composition `sub`; `accept(i, v)`
    # supplies the candidates for the i-th cell
    out: list[tuple[CubeMap, ...]] = []
    end = top(N)

    def walk(i: int, v: int, acc: list[CubeMap]) -> None:
        if i == len(sub):
            if v == end:
                out.append(tuple(acc))
            return
        m = sub[i]
        for h in (accept(i, v) if accept else A.hom(m, N)):
            if h.table[0] != v:
                continue
            acc.append(h)
            walk(i + 1, h.table[-1], acc)
            acc.pop()

    walk(0, 0, [])
    return out


def enumerate_nbar_maps(A: CubeCategory, na: Composition, nb: Composition) -> list[Witness]:
    """All maps ``A[na] -> A[nb]`` in blockwise Yoneda form.

    Empty when ``vtx(nb)`` is not contained in ``vtx(na)``.
    """
    if not na.refines(nb):
        return []
    per_block = [_block_chains(A, sub, N) for sub, N in zip(na.blocks_over(nb), nb.parts)]
    return [tuple(w) for w in product(*per_block)]


def identity_witness(comp: Composition) -> Witness:
    return tuple((identity(N),) for N in comp.parts)


def compose_witness(w_ab: Witness, w_bc: Witness) -> Witness:
    """Witness of ``a -> c`` from ``a -> b`` and ``b -> c`` (chain substitution)."""
    out = []
    t = 0
    for block in w_bc:
        acc: list[CubeMap] = []
        for h2 in block:
            acc.extend(compose(h2, h1) for h1 in w_ab[t])
            t += 1
        out.append(tuple(acc))
    if t != len(w_ab):
        raise ValueError("witnesses are not composable")
    return tuple(out)


def witness_source(w: Witness) -> Composition:
    return Composition(tuple(h.src for block in w for h in block))


def witness_target(w: Witness) -> Composition:
    return Composition(tuple(block[0].dst for block in w))


def act_witness(X: ASet, w: Witness, cells: Sequence) -> tuple:
    """Pull the target chain's cells back along ``w``."""
    return tuple(X.act(h, c) for block, c in zip(w, cells) for h in block)


def phi_AB(A_set: Sequence[int], B_set: Sequence[int]) -> tuple[CubeMap, CubeMap]:
    """The merging map ``A[m1] * A[m2] -> A[m1+m2]`` for a partition
    ``A ⊔ B = {1..m1+m2}``, as its two cells."""
    A_set, B_set = sorted(A_set), sorted(B_set)
    n = len(A_set) + len(B_set)
    if sorted(A_set + B_set) != list(range(1, n + 1)) or not A_set or not B_set:
        raise ValueError("not a partition into two non-empty parts")

    def insert(free, fixed_val):
        def fn(x):
            it = iter(x)
            return tuple(next(it) if j in free else fixed_val for j in range(1, n + 1))
        return fn

    first = CubeMap.from_function(len(A_set), n, insert(set(A_set), 0))
    second = CubeMap.from_function(len(B_set), n, insert(set(B_set), 1))
    return first, second


def delta_iAB(comp: Composition, i: int, A_set: Sequence[int], B_set: Sequence[int]) -> Witness:
    """Merge block ``i`` (1-based) of the finer composition, split as
    ``(|A|, |B|)``, into one block of the coarser composition."""
    h1, h2 = phi_AB(A_set, B_set)
    blocks = [(identity(N),) for N in comp.parts]
    blocks[i - 1] = (h1, h2)
    return tuple(blocks)


def delta_f(fs: Sequence[CubeMap]) -> Witness:
    return tuple((f,) for f in fs)


def generated_nbar_maps(A: CubeCategory, na: Composition) -> dict[Composition, set[Witness]]:
    """Closure of the merge and blockwise-endo generators starting from
    ``A[na]``, grouped by target composition."""
    found: dict[Composition, set[Witness]] = {na: {identity_witness(na)}}
    frontier = [identity_witness(na)]
    while frontier:
        nxt = []
        for w in frontier:
            tgt = witness_target(w)
            gens = [delta_f(fs) for fs in product(*(A.endos(N) for N in tgt.parts))]
            for i in range(1, tgt.elements):
                m1, m2 = tgt.parts[i - 1], tgt.parts[i]
                for A_set in combinations(range(1, m1 + m2 + 1), m1):
                    B_set = [j for j in range(1, m1 + m2 + 1) if j not in A_set]
                    coarse = Composition(tgt.parts[:i - 1] + (m1 + m2,) + tgt.parts[i + 1:])
                    gens.append(delta_iAB(coarse, i, A_set, B_set))
            for g in gens:
                h = compose_witness(w, g)
                bucket = found.setdefault(witness_target(h), set())
                if h not in bucket:
                    bucket.add(h)
                    nxt.append(h)
        frontier = nxt
    return found


class GluedCube(ASet):
    """The A-set ``A[n_1] * ... * A[n_p]``: cells ``(block, map)`` with the
    top vertex of each block identified with the bottom of the next."""

    def __init__(self, A: CubeCategory, comp: Composition):
        if comp.parts and max(comp.parts) > A.max_dim:
            raise ValueError("block dimension above the category cap")
        self.category = A
        self.comp = comp
        self.max_dim = max(comp.parts, default=0)

    def _canon(self, j: int, h: CubeMap):
        if h.src == 0 and h.table[0] == 0 and j > 0:
            return (j - 1, vertex_map(top(self.comp.parts[j - 1]), self.comp.parts[j - 1]))
        return (j, h)

    def cells(self, m: int) -> tuple:
        out = []
        for j, N in enumerate(self.comp.parts):
            for h in self.category.hom(m, N):
                c = self._canon(j, h)
                if c == (j, h):
                    out.append(c)
        if not self.comp.parts and m == 0:
            out.append((0, identity(0)))
        return tuple(out)

    def act(self, f: CubeMap, c):
        j, h = c
        return self._canon(j, compose(h, f))

    def dim(self, c) -> int:
        return c[1].src

    def cell_id(self, c) -> str:
        return f"{c[0]}:{c[1].key()}"

    def vertex(self, name: str):
        raise KeyError(name)

    def bottom(self):
        return (0, vertex_map(0, self.comp.parts[0] if self.comp.parts else 0))

    def top_vertex(self):
        if not self.comp.parts:
            return self.bottom()
        j = self.comp.elements - 1
        return (j, vertex_map(top(self.comp.parts[j]), self.comp.parts[j]))


def all_nbar_maps(A: CubeCategory, na: Composition, nb: Composition) -> list[tuple]:
    """Every A-set map ``A[na] -> A[nb]`` (no refinement assumed), as the
    list of cells of ``A[nb]`` it picks; found by chain search in the glued
    cube rather than by the blockwise formula."""
    G = GluedCube(A, nb)
    chains = chain_objects(G, G.bottom(), G.top_vertex(), nb.length)
    return [ch.cells for ch in chains if ch.comp == na]


def witness_cells(w: Witness) -> tuple:
    return tuple((j, h) for j, block in enumerate(w) for h in block)


# -- the chain category -------------------------------------------------------

@dataclass(frozen=True)
class Morphism:
    src: int
    dst: int
    witness: Witness


class ChainCategory:
    """``Ch_{α,β}(X, n)`` with explicit hom-sets.

    Composition is computed on demand and memoized; ``compose(f, g)`` is
    ``g ∘ f`` for ``f : a -> b`` and ``g : b -> c``.
    """

    def __init__(self, X: ASet, alpha, beta, n: int):
        self.aset = X
        self.alpha, self.beta, self.n = alpha, beta, n
        self.objects: list[CubeChain] = chain_objects(X, alpha, beta, n)
        self.index = {ob: i for i, ob in enumerate(self.objects)}
        self.morphisms: list[Morphism] = []
        self.hom: dict[tuple[int, int], list[int]] = {}
        self._lookup: dict[tuple[int, int, Witness], int] = {}
        self._comp_cache: dict[tuple[int, int], int] = {}
        self._pre: dict = {}
        self._build()
        self.identity = [self._lookup[(i, i, identity_witness(ob.comp))]
                         for i, ob in enumerate(self.objects)]

    def __repr__(self) -> str:
        return (f"ChainCategory(objects={len(self.objects)}, "
                f"morphisms={len(self.morphisms)}, n={self.n})")

    def _preimage(self, cell, m: int) -> dict:
        key = (cell, m)
        hit = self._pre.get(key)
        if hit is None:
            X = self.aset
            N = X.dim(cell)
            hit = {}
            for h in X.category.hom(m, N):
                hit.setdefault(X.act(h, cell), []).append(h)
            self._pre[key] = hit
        return hit

    def _hom_witnesses(self, a: CubeChain, b: CubeChain) -> list[Witness]:
        per_block = []
        pos = 0
        for sub, cell in zip(a.comp.blocks_over(b.comp), b.cells):
            src_cells = a.cells[pos:pos + len(sub)]
            pos += len(sub)

            def accept(i, v, sub=sub, cell=cell, src_cells=src_cells):
                return self._preimage(cell, sub[i]).get(src_cells[i], ())

            chains = _block_chains(self.aset.category, sub, self.aset.dim(cell), accept)
            if not chains:
                return []
            per_block.append(chains)
        return [tuple(w) for w in product(*per_block)]

    def _build(self) -> None:
        by_comp: dict[Composition, list[int]] = {}
        for i, ob in enumerate(self.objects):
            by_comp.setdefault(ob.comp, []).append(i)
        for cb, bs in by_comp.items():
            for ca, as_ in by_comp.items():
                if not ca.refines(cb):
                    continue
                for ib in bs:
                    for ia in as_:
                        ws = self._hom_witnesses(self.objects[ia], self.objects[ib])
                        if ws:
                            ids = []
                            for w in sorted(ws):
                                mid = len(self.morphisms)
                                self.morphisms.append(Morphism(ia, ib, w))
                                self._lookup[(ia, ib, w)] = mid
                                ids.append(mid)
                            self.hom[(ia, ib)] = ids

    def morphism_id(self, src: int, dst: int, w: Witness) -> int:
        return self._lookup[(src, dst, w)]

    def compose(self, f: int, g: int) -> int:
        key = (f, g)
        hit = self._comp_cache.get(key)
        if hit is None:
            mf, mg = self.morphisms[f], self.morphisms[g]
            if mf.dst != mg.src:
                raise ValueError("morphisms are not composable")
            hit = self._lookup[(mf.src, mg.dst, compose_witness(mf.witness, mg.witness))]
            self._comp_cache[key] = hit
        return hit

    def hom_set(self, a: int, b: int) -> list[int]:
        return self.hom.get((a, b), [])

    def endomorphisms(self, a: int) -> list[int]:
        return self.hom_set(a, a)

    def check_commutation(self) -> bool:
        X = self.aset
        for m in self.morphisms:
            a, b = self.objects[m.src], self.objects[m.dst]
            if act_witness(X, m.witness, b.cells) != a.cells:
                return False
        return True

    def check_laws(self, max_triples: int | None = None) -> dict:
        """Identity and associativity on all composable triples (or the first
        ``max_triples`` in a fixed order)."""
        out = {"identity": True, "associativity": True, "triples": 0, "exhaustive": True}
        for mid, m in enumerate(self.morphisms):
            if (self.compose(self.identity[m.src], mid) != mid
                    or self.compose(mid, self.identity[m.dst]) != mid):
                out["identity"] = False
                return out
        outs: dict[int, list[int]] = {}
        for mid, m in enumerate(self.morphisms):
            outs.setdefault(m.src, []).append(mid)
        for f, mf in enumerate(self.morphisms):
            for g in outs.get(mf.dst, ()):
                fg = self.compose(f, g)
                for h in outs.get(self.morphisms[g].dst, ()):
                    if max_triples is not None and out["triples"] >= max_triples:
                        out["exhaustive"] = False
                        return out
                    out["triples"] += 1
                    if self.compose(fg, h) != self.compose(f, self.compose(g, h)):
                        out["associativity"] = False
                        return out
        return out

    def to_finite_category(self):
        from .nerve import FiniteCategory
        return FiniteCategory(len(self.objects),
                              [(m.src, m.dst) for m in self.morphisms],
                              list(self.identity), self.compose)


def chain_category(X: ASet, alpha, beta, n: int) -> ChainCategory:
    return ChainCategory(X, alpha, beta, n)


# -- the lifting functor ------------------------------------------------------

@dataclass
class LiftFunctor:
    """``Ch(K) -> Ch(L_A(K))`` on objects and morphisms."""

    source: ChainCategory
    target: ChainCategory
    obj_map: list[int]
    mor_map: list[int]

    def check_laws(self) -> dict:
        S, T = self.source, self.target
        ok_id = all(self.mor_map[S.identity[i]] == T.identity[self.obj_map[i]]
                    for i in range(len(S.objects)))
        ok_ends = all(T.morphisms[self.mor_map[k]].src == self.obj_map[m.src]
                      and T.morphisms[self.mor_map[k]].dst == self.obj_map[m.dst]
                      for k, m in enumerate(S.morphisms))
        outs: dict[int, list[int]] = {}
        for k, m in enumerate(S.morphisms):
            outs.setdefault(m.src, []).append(k)
        ok_comp = all(self.mor_map[S.compose(f, g)] == T.compose(self.mor_map[f], self.mor_map[g])
                      for f, mf in enumerate(S.morphisms) for g in outs.get(mf.dst, ()))
        injective = len(set(self.obj_map)) == len(self.obj_map)
        faithful = all(
            len(S.hom_set(a, b)) == len({self.mor_map[k] for k in S.hom_set(a, b)})
            for (a, b) in S.hom)
        full = all(
            len(S.hom_set(a, b)) == len(T.hom_set(self.obj_map[a], self.obj_map[b]))
            for a in range(len(S.objects)) for b in range(len(S.objects)))
        return {"identities": ok_id, "endpoints": ok_ends, "composition": ok_comp,
                "injective_on_objects": injective, "faithful": faithful, "full": full}


def lift_functor(K: PrecubicalSet, A: CubeCategory, alpha: str, beta: str, n: int,
                 free: FreeASet | None = None) -> LiftFunctor:
    L = free if free is not None else FreeASet(K, A)
    S = chain_category(K, K.vertex(alpha), K.vertex(beta), n)
    T = chain_category(L, L.vertex(alpha), L.vertex(beta), n)
    obj_map = []
    for ob in S.objects:
        image = CubeChain(ob.comp, tuple(L.embed(c) for c in ob.cells))
        obj_map.append(T.index[image])
    mor_map = [T.morphism_id(obj_map[m.src], obj_map[m.dst], m.witness) for m in S.morphisms]
    return LiftFunctor(S, T, obj_map, mor_map)


# -- comma-category initial objects -------------------------------------------

@dataclass
class CommaResult:
    chain: int
    initial: tuple[int, int] | None
    comma_objects: int
    unique: bool
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        return {"chain": self.chain, "initial": list(self.initial) if self.initial else None,
                "comma_objects": self.comma_objects, "unique": self.unique,
                "counterexample": self.counterexample}


def canonical_comma_object(F: LiftFunctor, c: int) -> tuple[int, int]:
    """Split each cell ``(g_i, c_i)`` of the chain into the endo part, which
    becomes the comparison map, and the base cell, which becomes the chain."""
    T = F.target
    ob = T.objects[c]
    base = CubeChain(ob.comp, tuple(cell[1] for cell in ob.cells))
    d0 = F.source.index[base]
    u0 = T.morphism_id(c, F.obj_map[d0], tuple((cell[0],) for cell in ob.cells))
    return d0, u0


def comma_initial(F: LiftFunctor, c: int) -> CommaResult:
    """Verify that ``c ↓ F`` has the canonical object as initial object: it
    admits exactly one morphism to every object of the comma category."""
    S, T = F.source, F.target
    try:
        d0, u0 = canonical_comma_object(F, c)
    except KeyError:
        return CommaResult(c, None, 0, False, {"reason": "canonical object not found"})
    count = 0
    for d in range(len(S.objects)):
        for u in T.hom_set(c, F.obj_map[d]):
            count += 1
            hits = [v for v in S.hom_set(d0, d) if T.compose(u0, F.mor_map[v]) == u]
            if len(hits) != 1:
                return CommaResult(c, (d0, u0), count, False,
                                   {"object": [d, u], "morphisms": len(hits)})
    return CommaResult(c, (d0, u0), count, True)
