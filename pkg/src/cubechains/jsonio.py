"""JSON encoders and decoders.

Every document carries ``"schema": "cubechains/1"`` and is written with
sorted keys, so re-emitting a parsed document reproduces it byte for byte.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any

from .chains import ChainCategory, Witness
from .cube_cat import (BUILTIN_NAMES, CategorySpec, CubeCategory, CubeMap, builtin,
                       generate_category)
from .hda import LabelledSkeleton
from .nerve import FiniteCategory, HomologyResult
from .presheaf import ASet, CoskeletalASet, FreeASet, PrecubicalSet

SCHEMA = "cubechains/1"


class SchemaError(ValueError):
    pass


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def envelope(kind: str, body: dict) -> dict:
    return {"schema": SCHEMA, "type": kind, **body}


def _check(doc: dict, kind: str | None = None) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError("expected a JSON object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise SchemaError(f"unsupported schema {schema!r}")
    if kind is not None and doc.get("type", kind) != kind:
        raise SchemaError(f"expected a {kind} document, got {doc.get('type')!r}")
    return doc


def load_file(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_file(path: str, doc: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


# -- cube maps and categories -------------------------------------------------

def cubemap_to_json(f: CubeMap) -> dict:
    return {"src": f.src, "dst": f.dst, "table": f.bit_table()}


def cubemap_from_json(doc: dict) -> CubeMap:
    try:
        return CubeMap.from_bit_table(int(doc["src"]), int(doc["dst"]), doc["table"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad cube map: {exc}") from exc


_KEY = re.compile(r"^(\d+)>(\d+)\[([\d,]*)\]$")


def cubemap_from_key(key: str) -> CubeMap:
    m = _KEY.match(key)
    if not m:
        raise SchemaError(f"bad cube map key {key!r}")
    table = tuple(int(t) for t in m.group(3).split(",") if t)
    return CubeMap(int(m.group(1)), int(m.group(2)), table)


def category_to_json(cat: CubeCategory) -> dict:
    return {"name": cat.name, "kind": cat.kind, "max_dim": cat.max_dim,
            "generators": [cubemap_to_json(g) for g in cat.generators]}


def category_from_json(doc: dict | str, max_dim: int | None = None) -> CubeCategory:
    """A category from its spec document, or a built-in by name."""
    if isinstance(doc, str):
        return builtin(doc, 3 if max_dim is None else max_dim)
    _check(doc)
    N = int(doc.get("max_dim", 3)) if max_dim is None else max_dim
    name = doc["name"]
    gens = tuple(cubemap_from_json(g) for g in doc.get("generators", ()))
    if name in BUILTIN_NAMES and doc.get("kind") in (None, builtin(name, N).kind):
        return builtin(name, N)
    return generate_category(CategorySpec(name, doc.get("kind", "generated"), gens, N))


# -- precubical sets and skeleta ----------------------------------------------

def precubical_to_json(K: PrecubicalSet) -> dict:
    return {
        "cells": {str(n): list(K.cells(n)) for n in range(K.max_dim + 1) if K.cells(n)},
        "faces": {c: {f"{i},{e}": v for (i, e), v in sorted(fs.items())}
                  for c, fs in K.faces.items() if fs},
        "labels": dict(K.labels),
    }


def precubical_from_json(doc: dict) -> PrecubicalSet:
    try:
        faces = {}
        for c, fs in doc.get("faces", {}).items():
            parsed = {}
            for k, v in fs.items():
                i, e = k.split(",")
                parsed[(int(i), int(e))] = v
            faces[c] = parsed
        return PrecubicalSet({int(n): cs for n, cs in doc["cells"].items()}, faces,
                             doc.get("labels", {}))
    except (KeyError, AttributeError) as exc:
        raise SchemaError(f"bad precubical set: {exc}") from exc


def skeleton_to_json(S: LabelledSkeleton) -> dict:
    return {
        "cells": {"0": list(S.vertices), "1": list(S.edges)},
        "faces": {e: {"1,0": s, "1,1": d} for e, (s, d, _) in S.edges.items()},
        "labels": {e: lab for e, (_, _, lab) in S.edges.items() if lab is not None},
    }


def skeleton_from_json(doc: dict) -> LabelledSkeleton:
    cells = doc.get("cells", {})
    if any(int(n) > 1 and cs for n, cs in cells.items()):
        raise SchemaError("a skeleton has cells in dimensions 0 and 1 only")
    labels = doc.get("labels", {})
    edges = {}
    for e in cells.get("1", []):
        fs = doc["faces"][e]
        edges[e] = (fs["1,0"], fs["1,1"], labels.get(e))
    return LabelledSkeleton(list(cells.get("0", [])), edges)


# -- A-sets -------------------------------------------------------------------

def aset_to_json(X: ASet) -> dict:
    if isinstance(X, PrecubicalSet):
        return envelope("aset", {"kind": "precubical", "precubical": precubical_to_json(X)})
    if isinstance(X, FreeASet):
        return envelope("aset", {"kind": "free", "base": precubical_to_json(X.base),
                                 "category": category_to_json(X.category)})
    if isinstance(X, CoskeletalASet):
        return envelope("aset", {
            "kind": "coskeletal",
            "skeleton": skeleton_to_json(X.skeleton),
            "category": category_to_json(X.category),
            "cells": {str(n): [list(u) for u in X.cells(n)] for n in range(X.max_dim + 1)},
        })
    raise TypeError(f"cannot encode {type(X).__name__}")


def aset_from_json(doc: dict) -> ASet:
    """Decode an A-set document; a bare precubical document is accepted."""
    _check(doc)
    kind = doc.get("kind")
    if kind is None and "cells" in doc:
        return precubical_from_json(doc)
    if kind == "precubical":
        return precubical_from_json(doc["precubical"])
    if kind == "free":
        return FreeASet(precubical_from_json(doc["base"]), category_from_json(doc["category"]))
    if kind == "coskeletal":
        cells = {int(n): [tuple(u) for u in us] for n, us in doc["cells"].items()}
        return CoskeletalASet(skeleton_from_json(doc["skeleton"]),
                              category_from_json(doc["category"]), cells)
    raise SchemaError(f"unknown A-set kind {kind!r}")


# -- chain categories ---------------------------------------------------------

def _witness_to_json(w: Witness) -> list[list[str]]:
    return [[h.key() for h in block] for block in w]


@dataclass
class ChainCategoryRecord:
    """Serializable form of a chain category: objects as compositions with
    cell ids, morphisms as witnesses, and the full composition table."""

    source: str
    start: str
    end: str
    n: int
    objects: list[dict]
    morphisms: list[dict]
    identities: list[int]
    composition: list[list[int]]

    def to_json(self) -> dict:
        return envelope("chain_category", {
            "aset": self.source, "from": self.start, "to": self.end, "n": self.n,
            "objects": self.objects, "morphisms": self.morphisms,
            "identities": self.identities, "composition": self.composition})

    @classmethod
    def from_json(cls, doc: dict) -> "ChainCategoryRecord":
        _check(doc, "chain_category")
        try:
            return cls(doc["aset"], doc["from"], doc["to"], int(doc["n"]), doc["objects"],
                       doc["morphisms"], list(doc["identities"]),
                       [list(t) for t in doc["composition"]])
        except KeyError as exc:
            raise SchemaError(f"missing field {exc}") from exc

    def witness(self, mid: int) -> Witness:
        return tuple(tuple(cubemap_from_key(k) for k in block)
                     for block in self.morphisms[mid]["witness"])

    def to_finite_category(self) -> FiniteCategory:
        table = {(f, g): h for f, g, h in self.composition}
        return FiniteCategory(len(self.objects),
                              [(m["src"], m["dst"]) for m in self.morphisms],
                              self.identities, table)


def chain_category_record(C: ChainCategory, source: str = "") -> ChainCategoryRecord:
    X = C.aset
    objects = [{"composition": list(ob.comp.parts), "cells": ob.ids(X)} for ob in C.objects]
    morphisms = [{"src": m.src, "dst": m.dst, "witness": _witness_to_json(m.witness)}
                 for m in C.morphisms]
    outs: dict[int, list[int]] = {}
    for mid, m in enumerate(C.morphisms):
        outs.setdefault(m.src, []).append(mid)
    table = [[f, g, C.compose(f, g)]
             for f, m in enumerate(C.morphisms) for g in outs.get(m.dst, ())]
    return ChainCategoryRecord(source or repr(X), X.cell_id(C.alpha), X.cell_id(C.beta), C.n,
                               objects, morphisms, list(C.identity), table)


# -- homology -----------------------------------------------------------------

def homology_to_json(res: HomologyResult) -> dict:
    return envelope("homology", res.to_dict())


def homology_from_json(doc: dict) -> HomologyResult:
    _check(doc, "homology")
    H = doc["H"]
    betti = {int(k): int(v["betti"]) for k, v in H.items()}
    torsion = {int(k): [int(t) for t in v["torsion"]] for k, v in H.items()}
    return HomologyResult(betti, torsion, int(doc["pi0"]), int(doc["truncated_at"]),
                          list(doc.get("components", [])),
                          bool(doc.get("euler_consistent", True)))
