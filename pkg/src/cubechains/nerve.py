"""Nerves of finite categories and their integral homology.

The normalized chain complex of the nerve is truncated at a dimension ``D``;
boundary ranks and torsion come from an exact sparse Smith normal form over
Python integers.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable, Mapping

DEFAULT_TRUNCATION = 4
MAX_SIMPLICES = 2_000_000


class NerveTooLarge(RuntimeError):
    pass


class FiniteCategory:
    """Objects ``0..n-1``; morphisms by id with ``(src, dst)`` and a
    composition ``compose(f, g) = g ∘ f``."""

    def __init__(self, n_objects: int, morphisms: list[tuple[int, int]],
                 identities: list[int],
                 compose: Callable[[int, int], int] | Mapping[tuple[int, int], int]):
        self.n_objects = n_objects
        self.morphisms = list(morphisms)
        self.identities = list(identities)
        if callable(compose):
            self._compose = compose
        else:
            table = dict(compose)
            self._compose = lambda f, g: table[(f, g)]
        self._is_id = set(self.identities)
        self.out: dict[int, list[int]] = defaultdict(list)
        for mid, (s, _) in enumerate(self.morphisms):
            self.out[s].append(mid)

    def compose(self, f: int, g: int) -> int:
        return self._compose(f, g)

    def is_identity(self, f: int) -> bool:
        return f in self._is_id

    def components(self) -> list[list[int]]:
        parent = list(range(self.n_objects))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, d in self.morphisms:
            rs, rd = find(s), find(d)
            if rs != rd:
                parent[max(rs, rd)] = min(rs, rd)
        groups: dict[int, list[int]] = {}
        for x in range(self.n_objects):
            groups.setdefault(find(x), []).append(x)
        return [groups[k] for k in sorted(groups)]

    def full_subcategory(self, objects: Iterable[int]) -> "FiniteCategory":
        objs = sorted(objects)
        oidx = {o: i for i, o in enumerate(objs)}
        keep = [m for m, (s, d) in enumerate(self.morphisms) if s in oidx and d in oidx]
        midx = {m: i for i, m in enumerate(keep)}
        return FiniteCategory(
            len(objs), [(oidx[self.morphisms[m][0]], oidx[self.morphisms[m][1]]) for m in keep],
            [midx[self.identities[o]] for o in objs],
            lambda f, g: midx[self.compose(keep[f], keep[g])])

    def hom_counts(self) -> dict[tuple[int, int], int]:
        counts: dict[tuple[int, int], int] = defaultdict(int)
        for s, d in self.morphisms:
            counts[(s, d)] += 1
        return counts

    def terminal_object(self) -> int | None:
        counts = self.hom_counts()
        for t in range(self.n_objects):
            if all(counts.get((x, t), 0) == 1 for x in range(self.n_objects)):
                return t
        return None

    def initial_object(self) -> int | None:
        counts = self.hom_counts()
        for t in range(self.n_objects):
            if all(counts.get((t, x), 0) == 1 for x in range(self.n_objects)):
                return t
        return None


# -- nerve --------------------------------------------------------------------

@dataclass
class SimplicialComplexData:
    """Nondegenerate simplices of a nerve up to ``truncation``.

    ``simplices[0]`` are objects (as 1-tuples), ``simplices[k]`` for ``k >= 1``
    are strings of ``k`` composable non-identity morphism ids.
    """

    category: FiniteCategory
    truncation: int
    simplices: list[list[tuple[int, ...]]]
    index: list[dict[tuple[int, ...], int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.index:
            self.index = [{s: i for i, s in enumerate(level)} for level in self.simplices]

    def counts(self) -> list[int]:
        return [len(level) for level in self.simplices]

    def faces(self, k: int, s: tuple[int, ...]) -> list[tuple[int, tuple[int, ...]]]:
        """Signed nondegenerate faces of a k-simplex."""
        C = self.category
        if k == 1:
            src, dst = C.morphisms[s[0]]
            return [(1, (dst,)), (-1, (src,))]
        out = [(1, s[1:])]
        for i in range(1, k):
            comp = C.compose(s[i - 1], s[i])
            if C.is_identity(comp):
                continue
            out.append(((-1) ** i, s[:i - 1] + (comp,) + s[i + 1:]))
        out.append(((-1) ** k, s[:-1]))
        return out

    def boundary_rows(self, k: int) -> list[dict[int, int]]:
        """``∂_k`` as one sparse row per k-simplex (the transpose of the
        usual matrix; ranks and invariant factors agree)."""
        rows = []
        idx = self.index[k - 1]
        for s in self.simplices[k]:
            row: dict[int, int] = defaultdict(int)
            for sign, face in self.faces(k, s):
                row[idx[face]] += sign
            rows.append({c: v for c, v in row.items() if v})
        return rows


def nerve(C: FiniteCategory, D: int = DEFAULT_TRUNCATION,
          max_simplices: int = MAX_SIMPLICES) -> SimplicialComplexData:
    """Normalized nerve of ``C`` up to dimension ``D``."""
    if D < 1:
        raise ValueError("truncation must be at least 1")
    nonid_out = {x: [m for m in C.out.get(x, ()) if not C.is_identity(m)]
                 for x in range(C.n_objects)}
    levels: list[list[tuple[int, ...]]] = [[(x,) for x in range(C.n_objects)]]
    current = [((m,), C.morphisms[m][1]) for x in range(C.n_objects) for m in nonid_out[x]]
    total = C.n_objects
    for k in range(1, D + 1):
        levels.append([s for s, _ in current])
        total += len(current)
        if total > max_simplices:
            raise NerveTooLarge(f"nerve exceeds {max_simplices} simplices at dimension {k}")
        if k == D:
            break
        nxt = []
        for s, end in current:
            for m in nonid_out[end]:
                nxt.append((s + (m,), C.morphisms[m][1]))
        current = nxt
    return SimplicialComplexData(C, D, levels)


# -- Smith normal form --------------------------------------------------------

def _diagonalize(rows: list[dict[int, int]]) -> list[int]:
    """Absolute values of a diagonal form reached by unimodular row and
    column operations, pivoting on entries of least absolute value."""
    R: dict[int, dict[int, int]] = {i: dict(r) for i, r in enumerate(rows) if r}
    cols: dict[int, set[int]] = defaultdict(set)
    for i, r in R.items():
        for c in r:
            cols[c].add(i)

    def add_row(j: int, r: int, factor: int) -> None:
        rj = R[j]
        for k, v in R[r].items():
            nv = rj.get(k, 0) + factor * v
            if nv:
                if k not in rj:
                    cols[k].add(j)
                rj[k] = nv
            elif k in rj:
                del rj[k]
                cols[k].discard(j)

    diag: list[int] = []
    stack = sorted(R, key=lambda i: len(R[i]), reverse=True)
    while stack:
        r = stack.pop()
        row = R.get(r)
        if not row:
            R.pop(r, None)
            continue
        c = min(row, key=lambda k: (abs(row[k]), len(cols[k])))
        p = row[c]
        smaller = None
        for j in list(cols[c]):
            if j == r:
                continue
            q = R[j][c] // p
            add_row(j, r, -q)
            if c in R[j]:
                smaller = j
            if not R[j]:
                del R[j]
        if smaller is not None:
            stack.append(r)
            stack.append(smaller)
            continue
        rest = [k for k in row if k != c and row[k] % p]
        if rest:
            # column c now lives only in row r, so this column operation
            # touches row r alone
            k = rest[0]
            row[k] -= (row[k] // p) * p
            stack.append(r)
            continue
        for k in row:
            cols[k].discard(r)
        del R[r]
        diag.append(abs(p))
    return diag


def invariant_factors(rows: list[dict[int, int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix given by sparse rows,
    in divisibility order."""
    diag = _diagonalize(rows)
    units = sum(1 for d in diag if d == 1)
    rest = sorted(d for d in diag if d != 1)
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            g = gcd(rest[i], rest[j])
            rest[i], rest[j] = g, rest[i] * rest[j] // g
    units += sum(1 for d in rest if d == 1)
    return [1] * units + [d for d in rest if d != 1]


# -- homology -----------------------------------------------------------------

@dataclass
class HomologyResult:
    betti: dict[int, int]
    torsion: dict[int, list[int]]
    pi0: int
    truncated_at: int
    components: list[dict] = field(default_factory=list)
    euler_consistent: bool = True

    def to_dict(self) -> dict:
        return {
            "pi0": self.pi0,
            "H": {str(k): {"betti": self.betti[k], "torsion": list(self.torsion[k])}
                  for k in sorted(self.betti)},
            "truncated_at": self.truncated_at,
            "not_computed": f"degrees >= {self.truncated_at}",
            "components": self.components,
            "euler_consistent": self.euler_consistent,
        }

    def signature(self) -> tuple:
        """Comparable summary: pi0 and (betti, torsion) per computed degree."""
        return (self.pi0, tuple((k, self.betti[k], tuple(self.torsion[k]))
                                for k in sorted(self.betti)))

    def is_point(self) -> bool:
        return self.pi0 == 1 and all(
            self.betti[k] == (1 if k == 0 else 0) and not self.torsion[k] for k in self.betti)


def homology(S: SimplicialComplexData) -> HomologyResult:
    """Betti numbers and torsion in degrees ``0..D-1``."""
    D = S.truncation
    if D < 2:
        raise ValueError("truncation must be at least 2 to report homology")
    counts = S.counts()
    ranks = {0: 0}
    factors: dict[int, list[int]] = {}
    for k in range(1, D + 1):
        inv = invariant_factors(S.boundary_rows(k))
        ranks[k] = len(inv)
        factors[k] = [d for d in inv if d > 1]
    betti = {k: counts[k] - ranks[k] - ranks[k + 1] for k in range(D)}
    torsion = {k: factors[k + 1] for k in range(D)}
    chi_cells = sum((-1) ** k * counts[k] for k in range(D))
    chi_hom = sum((-1) ** k * betti[k] for k in range(D)) + (-1) ** (D - 1) * ranks[D]
    return HomologyResult(betti, torsion, betti[0], D, euler_consistent=chi_cells == chi_hom)


def check_dd_zero(S: SimplicialComplexData) -> bool:
    """``∂_{k-1} ∘ ∂_k = 0`` for every stored pair of degrees."""
    for k in range(2, S.truncation + 1):
        lower = S.boundary_rows(k - 1)
        for row in S.boundary_rows(k):
            acc: dict[int, int] = defaultdict(int)
            for face, v in row.items():
                for c, w in lower[face].items():
                    acc[c] += v * w
            if any(acc.values()):
                return False
    return True


def _point(D: int) -> tuple[dict[int, int], dict[int, list[int]]]:
    return ({k: 1 if k == 0 else 0 for k in range(D)}, {k: [] for k in range(D)})


def category_homology(C: FiniteCategory, D: int = DEFAULT_TRUNCATION,
                      shortcuts: bool = True,
                      max_simplices: int = MAX_SIMPLICES) -> HomologyResult:
    """Homology of the nerve of ``C``, component by component.

    With ``shortcuts`` a component with a terminal or an initial object is
    reported as a point without building its nerve (its classifying space is
    contractible); the method used is recorded per component.
    """
    if D < 2:
        raise ValueError("truncation must be at least 2 to report homology")
    betti = {k: 0 for k in range(D)}
    torsion: dict[int, list[int]] = {k: [] for k in range(D)}
    comps = C.components()
    info = []
    consistent = True
    for objs in comps:
        sub = C.full_subcategory(objs)
        method = "nerve"
        if shortcuts:
            if sub.terminal_object() is not None:
                method = "terminal_object"
            elif sub.initial_object() is not None:
                method = "initial_object"
        if method == "nerve":
            res = homology(nerve(sub, D, max_simplices))
            b, t = res.betti, res.torsion
            consistent = consistent and res.euler_consistent
        else:
            b, t = _point(D)
        for k in range(D):
            betti[k] += b[k]
            torsion[k].extend(t[k])
        info.append({"objects": len(objs), "morphisms": len(sub.morphisms), "method": method})
    for k in torsion:
        torsion[k].sort()
    return HomologyResult(betti, torsion, len(comps), D, info, consistent)
