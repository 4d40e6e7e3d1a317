"""Binary cube posets, cotransverse maps and categories of cubes.

A vertex of ``[n] = {0<1}^n`` is encoded as an ``int`` whose bit ``n - i``
holds coordinate ``x_i`` (so ``x_1`` is the most significant bit and the
integer order of vertices agrees with lexicographic order of bit tuples).
A :class:`CubeMap` is a full vertex table indexed by that encoding.

Everything in this module is immutable and pure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

ENUM_MAX_SRC = 3

BOX = "box"
BOX_S = "box_s"
HAT_BOX = "hat_box"
HAT_BOX_S = "hat_box_s"
BAR_BOX = "bar_box"
BUILTIN_NAMES = (BOX, BOX_S, HAT_BOX, HAT_BOX_S, BAR_BOX)

GENERATED = "generated"
ALL_COTRANSVERSE = "all_cotransverse"
HAT_SQUARE = "hat_square"
KINDS = (GENERATED, ALL_COTRANSVERSE, HAT_SQUARE)


class EnumerationInfeasible(ValueError):
    """Raised when an exhaustive enumeration would exceed the size caps."""


class NotCotransverse(ValueError):
    pass


# -- vertices -----------------------------------------------------------------

def coord_mask(i: int, n: int) -> int:
    """Bit mask of coordinate ``i`` (1-based) in ``[n]``."""
    return 1 << (n - i)


def to_bits(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> (n - i)) & 1 for i in range(1, n + 1))


def from_bits(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
        v = (v << 1) | b
    return v


def leq(x: int, y: int) -> bool:
    """Product order on vertices of the same cube."""
    return x & ~y == 0


def popcount(v: int) -> int:
    return bin(v).count("1")


def top(n: int) -> int:
    return (1 << n) - 1


def _covers(x: int, y: int) -> bool:
    # y covers x: x < y and they differ in exactly one coordinate
    d = x ^ y
    return d != 0 and d & (d - 1) == 0 and y & d != 0


@dataclass(frozen=True)
class CubeVertex:
    """A vertex of ``[dim]`` as an explicit bit tuple."""

    bits: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.bits)

    @property
    def code(self) -> int:
        return from_bits(self.bits)

    def __le__(self, other: "CubeVertex") -> bool:
        if self.dim != other.dim:
            raise ValueError("comparing vertices of different dimensions")
        return leq(self.code, other.code)

    def __lt__(self, other: "CubeVertex") -> bool:
        return self <= other and self != other

    def __ge__(self, other: "CubeVertex") -> bool:
        return other <= self

    def __gt__(self, other: "CubeVertex") -> bool:
        return other < self


# -- maps ---------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class CubeMap:
    """A strictly increasing map ``[src] -> [dst]`` given by its vertex table."""

    src: int
    dst: int
    table: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        if self.src < 0 or self.dst < 0:
            raise ValueError("negative dimension")
        if len(self.table) != 1 << self.src:
            raise ValueError(f"table length {len(self.table)} != 2^{self.src}")
        hi = 1 << self.dst
        if any(not 0 <= v < hi for v in self.table):
            raise ValueError(f"table entry outside [{self.dst}]")
        t = self.table
        for x in range(len(t)):
            for y in range(len(t)):
                if x != y and leq(x, y) and not (t[x] != t[y] and leq(t[x], t[y])):
                    raise ValueError("map is not strictly increasing")

    @classmethod
    def _raw(cls, src: int, dst: int, table: tuple[int, ...]) -> "CubeMap":
        obj = object.__new__(cls)
        object.__setattr__(obj, "src", src)
        object.__setattr__(obj, "dst", dst)
        object.__setattr__(obj, "table", table)
        return obj

    def __call__(self, v: int) -> int:
        return self.table[v]

    def __repr__(self) -> str:
        return f"CubeMap({self.src}->{self.dst}: {self.key()})"

    def key(self) -> str:
        """Compact printable form, e.g. ``2>2[0,2,1,3]``."""
        return f"{self.src}>{self.dst}[{','.join(map(str, self.table))}]"

    def bit_table(self) -> list[list[int]]:
        return [list(to_bits(v, self.dst)) for v in self.table]

    @classmethod
    def from_bit_table(cls, src: int, dst: int, rows: Iterable[Sequence[int]]) -> "CubeMap":
        rows = list(rows)
        if any(len(r) != dst for r in rows):
            raise ValueError("table row of wrong length")
        return cls(src, dst, tuple(from_bits(r) for r in rows))

    @classmethod
    def from_function(cls, src: int, dst: int, fn) -> "CubeMap":
        """Build from a function on bit tuples."""
        return cls(src, dst, tuple(from_bits(fn(to_bits(v, src))) for v in range(1 << src)))

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_identity(self) -> bool:
        return self.src == self.dst and all(v == i for i, v in enumerate(self.table))

    def coordinate(self, j: int) -> tuple[int, ...]:
        """Values of output coordinate ``j`` over all source vertices."""
        m = coord_mask(j, self.dst)
        return tuple(1 if v & m else 0 for v in self.table)


def compose(g: CubeMap, f: CubeMap) -> CubeMap:
    """``g ∘ f``: first ``f``, then ``g``."""
    if f.dst != g.src:
        raise ValueError(f"cannot compose {g.src}->{g.dst} after {f.src}->{f.dst}")
    gt = g.table
    return CubeMap._raw(f.src, g.dst, tuple(gt[v] for v in f.table))


def identity(n: int) -> CubeMap:
    return CubeMap._raw(n, n, tuple(range(1 << n)))


def coface(i: int, alpha: int, n: int) -> CubeMap:
    """``δ_i^α : [n-1] -> [n]`` inserting ``alpha`` at coordinate ``i``."""
    if not 1 <= i <= n or alpha not in (0, 1):
        raise ValueError(f"no coface δ_{i}^{alpha} into [{n}]")
    return CubeMap.from_function(n - 1, n, lambda x: x[: i - 1] + (alpha,) + x[i - 1:])


def symmetry(i: int, n: int) -> CubeMap:
    """``σ_i`` swaps coordinates ``i`` and ``i+1``."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"no σ_{i} on [{n}]")
    return CubeMap.from_function(
        n, n, lambda x: x[: i - 1] + (x[i], x[i - 1]) + x[i + 1:])


def gamma(i: int, n: int) -> CubeMap:
    """``γ_i`` replaces ``(x_i, x_{i+1})`` by ``(max, min)``."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"no γ_{i} on [{n}]")
    return CubeMap.from_function(
        n, n, lambda x: x[: i - 1] + (max(x[i - 1], x[i]), min(x[i - 1], x[i])) + x[i + 1:])


def vertex_map(v: int, n: int) -> CubeMap:
    """The map ``[0] -> [n]`` picking vertex ``v``."""
    return CubeMap._raw(0, n, (v,))


def is_cotransverse(f: CubeMap) -> bool:
    """Every pair at directed distance 1 lands at directed distance 1."""
    t = f.table
    for x in range(len(t)):
        for i in range(1, f.src + 1):
            m = coord_mask(i, f.src)
            if not x & m and not _covers(t[x], t[x | m]):
                return False
    return True


def is_box_map(f: CubeMap) -> bool:
    """Membership in the box category: a composite of cofaces."""
    if not is_cotransverse(f):
        return False
    return factorize(f).psi.is_identity()


# -- enumeration --------------------------------------------------------------

@lru_cache(maxsize=None)
def box_maps(m: int, n: int) -> tuple[CubeMap, ...]:
    """All composites of cofaces ``[m] -> [n]``, sorted."""
    if m > n:
        return ()
    out = []
    for const in combinations(range(1, n + 1), n - m):
        for values in product((0, 1), repeat=n - m):
            fixed = dict(zip(const, values))
            def fn(x, fixed=fixed):
                it = iter(x)
                return tuple(fixed[j] if j in fixed else next(it) for j in range(1, n + 1))
            out.append(CubeMap.from_function(m, n, fn))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _cotransverse_tables(m: int, n: int) -> tuple[tuple[int, ...], ...]:
    order = sorted(range(1 << m), key=lambda v: (popcount(v), v))
    preds = {x: [x ^ coord_mask(i, m) for i in range(1, m + 1) if x & coord_mask(i, m)]
             for x in order}
    table = [0] * (1 << m)
    found: list[tuple[int, ...]] = []

    def extend(k: int) -> None:
        if k == len(order):
            found.append(tuple(table))
            return
        x = order[k]
        ps = preds[x]
        if not ps:
            candidates: Iterable[int] = range(1 << n)
        else:
            base = table[ps[0]]
            candidates = [base | coord_mask(j, n) for j in range(1, n + 1)
                          if not base & coord_mask(j, n)]
        for y in candidates:
            if all(_covers(table[p], y) for p in ps):
                table[x] = y
                extend(k + 1)

    extend(0)
    return tuple(sorted(found))


def enumerate_cotransverse(m: int, n: int) -> frozenset[CubeMap]:
    """All cotransverse maps ``[m] -> [n]``.

    Built by backtracking over vertices in rank order: a map is cotransverse
    iff every cube edge goes to a cube edge, which also forces strict
    monotonicity.
    """
    if m < 0 or n < 0:
        raise ValueError("negative dimension")
    if m > ENUM_MAX_SRC:
        raise EnumerationInfeasible(
            f"enumeration infeasible for source dimension {m} > {ENUM_MAX_SRC}; "
            "use a generated category instead")
    if m > n:
        return frozenset()
    return frozenset(CubeMap._raw(m, n, t) for t in _cotransverse_tables(m, n))


def cotransverse_endos(n: int) -> tuple[CubeMap, ...]:
    return tuple(sorted(enumerate_cotransverse(n, n)))


# -- factorization ------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    psi: CubeMap
    phi: CubeMap


@lru_cache(maxsize=1 << 16)
def factorize(f: CubeMap) -> Factorization:
    """Unique factorization ``f = phi ∘ psi`` with ``phi`` a box map.

    Output coordinates that are constant along ``f`` become the inserted
    coordinates of ``phi``; ``psi`` is ``f`` projected onto the others.
    """
    m, n = f.src, f.dst
    active = []
    const = {}
    for j in range(1, n + 1):
        col = f.coordinate(j)
        if all(b == col[0] for b in col):
            const[j] = col[0]
        else:
            active.append(j)
    if len(active) != m:
        raise NotCotransverse(
            f"{f!r} has {len(active)} non-constant coordinates, expected {m}")

    def embed(x):
        it = iter(x)
        return tuple(const[j] if j in const else next(it) for j in range(1, n + 1))

    phi = CubeMap.from_function(m, n, embed)
    masks = [coord_mask(j, n) for j in active]
    psi_table = []
    for v in f.table:
        w = 0
        for mk in masks:
            w = (w << 1) | (1 if v & mk else 0)
        psi_table.append(w)
    return Factorization(CubeMap._raw(m, m, tuple(psi_table)), phi)


def face_positions(phi: CubeMap) -> list[tuple[int, int]]:
    """Constant coordinates ``(j, value)`` of a box map, increasing in ``j``."""
    out = []
    for j in range(1, phi.dst + 1):
        col = phi.coordinate(j)
        if all(b == col[0] for b in col):
            out.append((j, col[0]))
    return out


def in_hat_square(f: CubeMap) -> bool:
    """Membership in the transverse category: every injective box
    restriction of ``f`` is itself a box map."""
    for p in range(f.src + 1):
        for d in box_maps(p, f.src):
            g = compose(f, d)
            if g.is_injective() and not is_box_map(g):
                return False
    return True


# -- categories ---------------------------------------------------------------

@dataclass(frozen=True)
class CategorySpec:
    name: str
    kind: str = GENERATED
    generators: tuple[CubeMap, ...] = ()
    max_dim: int = 3

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown category kind {self.kind!r}")
        if self.max_dim < 0:
            raise ValueError("max_dim must be non-negative")


class CubeCategory:
    """A category of cubes truncated at ``max_dim``.

    ``homsets[(m, n)]`` is a frozenset of :class:`CubeMap` for
    ``0 <= m <= n <= max_dim``.
    """

    def __init__(self, name: str, kind: str, max_dim: int,
                 homsets: dict[tuple[int, int], frozenset[CubeMap]],
                 generators: tuple[CubeMap, ...] = ()):
        self.name = name
        self.kind = kind
        self.max_dim = max_dim
        self.homsets = homsets
        self.generators = generators
        self._sorted: dict[tuple[int, int], tuple[CubeMap, ...]] = {}

    def __repr__(self) -> str:
        return f"CubeCategory({self.name!r}, max_dim={self.max_dim})"

    def hom(self, m: int, n: int) -> tuple[CubeMap, ...]:
        key = (m, n)
        if key not in self._sorted:
            self._sorted[key] = tuple(sorted(self.homsets.get(key, ())))
        return self._sorted[key]

    def endos(self, n: int) -> tuple[CubeMap, ...]:
        return self.hom(n, n)

    def __contains__(self, f: CubeMap) -> bool:
        return f in self.homsets.get((f.src, f.dst), ())

    def maps(self) -> Iterator[CubeMap]:
        for key in sorted(self.homsets):
            yield from self.hom(*key)

    def size(self) -> int:
        return sum(len(s) for s in self.homsets.values())

    def contains_symmetry(self) -> bool:
        return any(symmetry(i, n) in self
                   for n in range(2, self.max_dim + 1) for i in range(1, n))

    def is_subcategory_of(self, other: "CubeCategory") -> bool:
        return all(f in other for f in self.maps())


def _closure(generators: Sequence[CubeMap], max_dim: int) -> dict[tuple[int, int], frozenset[CubeMap]]:
    gens_from: dict[int, list[CubeMap]] = {n: [] for n in range(max_dim + 1)}
    for n in range(1, max_dim + 1):
        for i in range(1, n + 1):
            for a in (0, 1):
                gens_from[n - 1].append(coface(i, a, n))
    for g in generators:
        if g.dst <= max_dim:
            gens_from[g.src].append(g)
    homsets: dict[tuple[int, int], set[CubeMap]] = {
        (m, n): set() for n in range(max_dim + 1) for m in range(n + 1)}
    for m in range(max_dim + 1):
        start = identity(m)
        homsets[(m, m)].add(start)
        frontier = [start]
        while frontier:
            nxt = []
            for f in frontier:
                for g in gens_from[f.dst]:
                    h = compose(g, f)
                    bucket = homsets[(m, h.dst)]
                    if h not in bucket:
                        bucket.add(h)
                        nxt.append(h)
            frontier = nxt
    return {k: frozenset(v) for k, v in homsets.items()}


def generate_category(spec: CategorySpec) -> CubeCategory:
    """Build the hom-sets of a category of cubes up to ``spec.max_dim``."""
    N = spec.max_dim
    if spec.kind == GENERATED:
        for g in spec.generators:
            if not is_cotransverse(g):
                raise NotCotransverse(f"generator {g!r} is not cotransverse")
        homsets = _closure(spec.generators, N)
    else:
        homsets = {}
        for n in range(N + 1):
            for m in range(n + 1):
                maps = enumerate_cotransverse(m, n)
                if spec.kind == HAT_SQUARE:
                    maps = frozenset(f for f in maps if in_hat_square(f))
                homsets[(m, n)] = maps
    return CubeCategory(spec.name, spec.kind, N, homsets, tuple(spec.generators))


def builtin_spec(name: str, max_dim: int = 3) -> CategorySpec:
    dims = range(2, max_dim + 1)
    if name == BOX:
        return CategorySpec(BOX, GENERATED, (), max_dim)
    if name == BOX_S:
        gens = tuple(symmetry(i, n) for n in dims for i in range(1, n))
        return CategorySpec(BOX_S, GENERATED, gens, max_dim)
    if name == BAR_BOX:
        gens = tuple(g(i, n) for n in dims for i in range(1, n) for g in (symmetry, gamma))
        return CategorySpec(BAR_BOX, GENERATED, gens, max_dim)
    if name == HAT_BOX_S:
        return CategorySpec(HAT_BOX_S, ALL_COTRANSVERSE, (), max_dim)
    if name == HAT_BOX:
        return CategorySpec(HAT_BOX, HAT_SQUARE, (), max_dim)
    raise KeyError(f"unknown built-in category {name!r}; expected one of {BUILTIN_NAMES}")


@lru_cache(maxsize=None)
def builtin(name: str, max_dim: int = 3) -> CubeCategory:
    """Cached built-in category by name."""
    return generate_category(builtin_spec(name, max_dim))


def non_thick_fixture(max_dim: int = 3) -> CubeCategory:
    """Cofaces plus the single generator ``δ_3^1 ∘ γ_1 : [2] -> [3]``."""
    g = compose(coface(3, 1, 3), gamma(1, 2))
    return generate_category(CategorySpec("box+d31g1", GENERATED, (g,), max_dim))


# -- thickness ----------------------------------------------------------------

@dataclass(frozen=True)
class ThickResult:
    thick: bool
    max_dim: int
    counterexample: tuple[CubeMap, CubeMap] | None = None

    @property
    def note(self) -> str:
        return f"thick up to max_dim {self.max_dim}" if self.thick else \
            f"not thick (checked up to max_dim {self.max_dim})"


def is_thick(cat: CubeCategory) -> ThickResult:
    """Check that every map's endomorphism factor lies in ``cat``.

    The verdict only covers dimensions up to ``cat.max_dim``.
    """
    for f in cat.maps():
        psi = factorize(f).psi
        if psi not in cat:
            return ThickResult(False, cat.max_dim, (f, psi))
    return ThickResult(True, cat.max_dim)


def is_closed(cat: CubeCategory) -> tuple[CubeMap, CubeMap] | None:
    """Return a composable pair whose composite is missing, or None."""
    N = cat.max_dim
    for n in range(N + 1):
        for m in range(n + 1):
            for f in cat.hom(m, n):
                for p in range(n, N + 1):
                    for g in cat.hom(n, p):
                        if compose(g, f) not in cat:
                            return (g, f)
    return None


def factorizations_exhaustive(f: CubeMap) -> list[Factorization]:
    """All pairs (cotransverse endo, box map) composing to ``f``; oracle for
    uniqueness of :func:`factorize`."""
    out = []
    for psi in cotransverse_endos(f.src):
        for phi in box_maps(f.src, f.dst):
            if compose(phi, psi) == f:
                out.append(Factorization(psi, phi))
    return out
