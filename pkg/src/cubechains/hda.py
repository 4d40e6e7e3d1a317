"""Labelled 1-skeleta, synchronized parallel composition, coskeletal
filling over symmetric transverse maps, and model comparison by chain
categories."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .chains import chain_category
from .cube_cat import HAT_BOX_S, builtin, coord_mask, cotransverse_endos, top
from .nerve import DEFAULT_TRUNCATION, HomologyResult, category_homology
from .presheaf import CoskeletalASet, FreeASet, standard_cube, tensor

TAU = "τ"
MAX_COMPARE_DIM = 3


class CyclicSkeleton(ValueError):
    pass


class ModelTooLarge(ValueError):
    pass


@dataclass
class LabelledSkeleton:
    """A directed graph with optional edge labels.

    ``edges`` maps an edge id to ``(src, dst, label)``. The reachability
    order must be a partial order and at most one edge may join an ordered
    pair of vertices.
    """

    vertices: list[str]
    edges: dict[str, tuple[str, str, str | None]] = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = sorted(self.vertices)
        self.edges = dict(sorted(self.edges.items()))
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        seen = {}
        for eid, (s, d, _) in self.edges.items():
            if s not in vs or d not in vs:
                raise ValueError(f"edge {eid} has an unknown endpoint")
            if s == d:
                raise CyclicSkeleton(f"self-loop {eid}")
            if (s, d) in seen:
                raise ValueError(f"parallel edges {seen[(s, d)]} and {eid}")
            seen[(s, d)] = eid
        self._pairs = seen
        self.succ: dict[str, list[str]] = {v: [] for v in self.vertices}
        for s, d in sorted(seen):
            self.succ[s].append(d)
        self._check_acyclic()

    def _check_acyclic(self) -> None:
        state = dict.fromkeys(self.vertices, 0)
        for root in self.vertices:
            if state[root]:
                continue
            stack = [(root, iter(self.succ[root]))]
            state[root] = 1
            while stack:
                v, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    state[v] = 2
                    stack.pop()
                elif state[nxt] == 1:
                    raise CyclicSkeleton(f"directed cycle through {nxt}")
                elif state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(self.succ[nxt])))

    @property
    def labelled(self) -> bool:
        return any(lab is not None for _, _, lab in self.edges.values())

    def edge_between(self, s: str, d: str) -> str | None:
        return self._pairs.get((s, d))

    def label(self, s: str, d: str) -> str | None:
        return self.edges[self._pairs[(s, d)]][2]

    def minimal_vertices(self) -> list[str]:
        targets = {d for _, d, _ in self.edges.values()}
        return [v for v in self.vertices if v not in targets]

    def maximal_vertices(self) -> list[str]:
        sources = {s for s, _, _ in self.edges.values()}
        return [v for v in self.vertices if v not in sources]


def _bits(v: int, n: int) -> str:
    return "".join("1" if v & coord_mask(i, n) else "0" for i in range(1, n + 1)) or "()"


def labelled_cube_skeleton(labels: Sequence[str]) -> LabelledSkeleton:
    n = len(labels)
    verts = [_bits(v, n) for v in range(1 << n)]
    edges = {}
    for v in range(1 << n):
        for i in range(1, n + 1):
            m = coord_mask(i, n)
            if not v & m:
                s, d = _bits(v, n), _bits(v | m, n)
                edges[f"{s}>{d}"] = (s, d, labels[i - 1])
    return LabelledSkeleton(verts, edges)


@dataclass
class SyncAlgebra:
    """Unordered label pairs that may fire together, with the label of the
    joint step."""

    pairs: dict[frozenset, str] = field(default_factory=dict)

    @classmethod
    def parse(cls, text: str | None) -> "SyncAlgebra":
        """Parse ``"a~b"`` or ``"a~b:res"`` items separated by commas."""
        pairs: dict[frozenset, str] = {}
        for item in (text or "").split(","):
            item = item.strip()
            if not item:
                continue
            pair, _, result = item.partition(":")
            left, sep, right = pair.partition("~")
            if not sep or not left.strip() or not right.strip():
                raise ValueError(f"bad sync item {item!r}; expected a~b[:label]")
            label = result.strip() or TAU
            pairs[frozenset((left.strip(), right.strip()))] = label
        return cls(pairs)

    def result(self, a: str | None, b: str | None) -> str | None:
        if a is None or b is None:
            return None
        return self.pairs.get(frozenset((a, b)))

    def __bool__(self) -> bool:
        return bool(self.pairs)

    def to_text(self) -> str:
        items = []
        for key, res in sorted(self.pairs.items(), key=lambda kv: sorted(kv[0])):
            ab = sorted(key)
            items.append(f"{ab[0]}~{ab[-1]}:{res}")
        return ",".join(items)


def parallel_compose(X: LabelledSkeleton, Y: LabelledSkeleton,
                     sync: SyncAlgebra | None = None) -> LabelledSkeleton:
    sync = sync or SyncAlgebra()

    def vid(x, y):
        return f"{x}|{y}"

    verts = [vid(x, y) for x in X.vertices for y in Y.vertices]
    edges = {}
    for eid, (s, d, lab) in X.edges.items():
        for y in Y.vertices:
            edges[f"{eid}|{y}"] = (vid(s, y), vid(d, y), lab)
    for fid, (s, d, lab) in Y.edges.items():
        for x in X.vertices:
            edges[f"{x}|{fid}"] = (vid(x, s), vid(x, d), lab)
    for eid, (s, d, a) in X.edges.items():
        for fid, (s2, d2, b) in Y.edges.items():
            res = sync.result(a, b)
            if res is not None:
                edges[f"{eid}|{fid}"] = (vid(s, s2), vid(d, d2), res)
    return LabelledSkeleton(verts, edges)


# -- coskeletal filling -------------------------------------------------------

def _strict_fillings(S: LabelledSkeleton, n: int) -> list[tuple[str, ...]]:
    """Vertex functions on {0,1}^n sending cube edges to skeleton edges,
    with a single label per direction when ``S`` is labelled."""
    size = 1 << n
    preds = [[(v ^ coord_mask(i, n), i) for i in range(1, n + 1) if v & coord_mask(i, n)]
             for v in range(size)]
    labelled = S.labelled
    out = []
    u: list[str] = [""] * size

    def walk(v: int, dir_label: dict) -> None:
        if v == size:
            out.append(tuple(u))
            return
        if not preds[v]:
            cands = S.vertices
        else:
            first = preds[v][0][0]
            cands = S.succ[u[first]]
        for w in cands:
            new = dict(dir_label)
            ok = True
            for p, i in preds[v]:
                eid = S.edge_between(u[p], w)
                if eid is None:
                    ok = False
                    break
                if labelled:
                    lab = S.edges[eid][2]
                    if new.setdefault(i, lab) != lab:
                        ok = False
                        break
            if ok:
                u[v] = w
                walk(v + 1, new)

    walk(0, {})
    return out


def cosk1_fill(S: LabelledSkeleton, D: int) -> CoskeletalASet:
    """Fill ``S`` with every cube (up to dimension ``D``) whose edges and
    direction labels it supports, closed under symmetric transverse
    precomposition."""
    if D < 1:
        raise ValueError("filling dimension must be at least 1")
    A = builtin(HAT_BOX_S, D)
    cells = {}
    for n in range(D + 1):
        orbit = set()
        strict = _strict_fillings(S, n)
        for f in cotransverse_endos(n):
            for u in strict:
                orbit.add(tuple(u[w] for w in f.table))
        cells[n] = orbit
    return CoskeletalASet(S, A, cells)


def endo_orbits(X: CoskeletalASet, n: int) -> list[frozenset]:
    """Classes of n-cells under the equivalence generated by ``u ~ u∘f``
    for cotransverse endos ``f`` (endos form a monoid, so orbits alone are
    not symmetric)."""
    cells = X.cells(n)
    parent = {u: u for u in cells}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u in cells:
        for f in cotransverse_endos(n):
            a, b = find(u), find(X.act(f, u))
            if a != b:
                parent[max(a, b)] = min(a, b)
    classes: dict = {}
    for u in cells:
        classes.setdefault(find(u), set()).add(u)
    return [frozenset(c) for _, c in sorted(classes.items())]


# -- model comparison ---------------------------------------------------------

def _sum_homology(results: Iterable[HomologyResult], D: int) -> dict:
    betti = {k: 0 for k in range(D)}
    torsion: dict[int, list[int]] = {k: [] for k in range(D)}
    pi0 = 0
    for r in results:
        pi0 += r.pi0
        for k in range(D):
            betti[k] += r.betti[k]
            torsion[k].extend(r.torsion[k])
    return {"pi0": pi0, "H": {str(k): {"betti": betti[k], "torsion": sorted(torsion[k])}
                              for k in range(D)}}


def _model_report(X, alpha, beta, top_n: int, D: int) -> dict:
    per_n = {}
    results = []
    for n in range(top_n + 1):
        C = chain_category(X, X.vertex(alpha), X.vertex(beta), n)
        res = category_homology(C.to_finite_category(), D)
        results.append(res)
        entry = res.to_dict()
        entry["objects"] = len(C.objects)
        entry["morphisms"] = len(C.morphisms)
        per_n[str(n)] = entry
    return {"per_n": per_n, "aggregate": _sum_homology(results, D), "counts": X.counts()}


def compare_models(left: Sequence[str], right: Sequence[str],
                   sync: SyncAlgebra | None = None, maxdim: int | None = None,
                   truncation: int = DEFAULT_TRUNCATION) -> dict:
    """Chain-category homology of the coskeletal model of ``left || right``
    and, without synchronization, of the free model on the product cube."""
    sync = sync or SyncAlgebra()
    total = len(left) + len(right)
    D = total if maxdim is None else maxdim
    if total > MAX_COMPARE_DIM or D > MAX_COMPARE_DIM:
        raise ModelTooLarge(f"model comparison is limited to total dimension {MAX_COMPARE_DIM}")
    D = max(D, 1)
    S = parallel_compose(labelled_cube_skeleton(left), labelled_cube_skeleton(right), sync)
    alpha = f"{_bits(0, len(left))}|{_bits(0, len(right))}"
    beta = f"{_bits(top(len(left)), len(left))}|{_bits(top(len(right)), len(right))}"
    report = {
        "left": list(left), "right": list(right), "sync": sync.to_text(),
        "maxdim": D, "truncated_at": truncation, "from": alpha, "to": beta,
        "coskeletal_model": "simplified labelled coskeleton",
        "note": "agreement in computed degrees is necessary, not sufficient, "
                "for homotopy equivalence",
    }
    models = {"coskeletal": _model_report(cosk1_fill(S, D), alpha, beta, D, truncation)}
    if not sync:
        K = tensor(standard_cube(len(left)), standard_cube(len(right)))
        models["free"] = _model_report(FreeASet(K, builtin(HAT_BOX_S, max(D, 1))),
                                       alpha, beta, D, truncation)
    report["models"] = models
    if "free" in models:
        per_n = {}
        for n in models["coskeletal"]["per_n"]:
            a, b = models["coskeletal"]["per_n"][n], models["free"]["per_n"][n]
            per_n[n] = {"pi0": a["pi0"] == b["pi0"],
                        "H": {k: a["H"][k] == b["H"][k] for k in a["H"]}}
        report["agreement"] = {
            "per_n": per_n,
            "aggregate": models["coskeletal"]["aggregate"] == models["free"]["aggregate"],
        }
        report["agree"] = all(v["pi0"] and all(v["H"].values()) for v in per_n.values())
    else:
        report["agreement"] = None
        report["agree"] = None
    return report

