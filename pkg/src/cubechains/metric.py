"""Directed L1 Lawvere metric on cubes and the max-min extension of
cotransverse maps to the solid cube ``[0,1]^n``."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cube_cat import (CubeMap, coord_mask, compose, cotransverse_endos, factorize,
                       face_positions, to_bits)

INFINITY = math.inf
TOL = 1e-12

Point = tuple[float, ...]


def as_point(coords: Sequence[float]) -> Point:
    p = tuple(float(c) for c in coords)
    if any(c < -TOL or c > 1 + TOL for c in p):
        raise ValueError(f"point {p} outside the unit cube")
    return p


def d1(x: Sequence[float], y: Sequence[float]) -> float:
    """Sum of coordinate increments if ``x <= y``, else infinity."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(y)}")
    if all(a <= b for a, b in zip(x, y)):
        return float(sum(b - a for a, b in zip(x, y)))
    return INFINITY


def _preimages(f: CubeMap) -> list[list[tuple[int, ...]]]:
    # for each output coordinate i, the source patterns eps with f(eps)_i = 1,
    # each reduced to the tuple of coordinates k where eps_k = 1
    out = []
    for i in range(1, f.dst + 1):
        m = coord_mask(i, f.dst)
        pats = []
        for v, w in enumerate(f.table):
            if w & m:
                bits = to_bits(v, f.src)
                pats.append(tuple(k for k, b in enumerate(bits) if b))
        out.append(pats)
    return out


def t_eval(f: CubeMap, x: Sequence[float]) -> Point:
    """Evaluate the max-min extension of a cotransverse endomorphism.

    An empty max is 0 and an empty min is 1, so vertices go where ``f``
    sends them even for tables the formula does not anticipate.
    """
    if f.src != f.dst:
        raise ValueError("t_eval is defined for endomorphisms; use t_map")
    if len(x) != f.src:
        raise ValueError(f"point of dimension {len(x)} for map on [{f.src}]")
    out = []
    for pats in _preimages(f):
        out.append(max((min((x[k] for k in ks), default=1.0) for ks in pats), default=0.0))
    return tuple(float(v) for v in out)


def t_coface_composite(phi: CubeMap, x: Sequence[float]) -> Point:
    """Coordinate insertion for a box map."""
    consts = dict(face_positions(phi))
    it = iter(x)
    return tuple(float(consts[j]) if j in consts else float(next(it))
                 for j in range(1, phi.dst + 1))


def t_map(f: CubeMap, x: Sequence[float]) -> Point:
    """Extension of any cotransverse map, via its endo/box factorization."""
    fac = factorize(f)
    return t_coface_composite(fac.phi, t_eval(fac.psi, x))


def t_eval_many(f: CubeMap, X: np.ndarray) -> np.ndarray:
    """Vectorized :func:`t_eval` over the rows of ``X``."""
    if f.src != f.dst:
        raise ValueError("t_eval_many is defined for endomorphisms")
    X = np.asarray(X, dtype=float)
    out = np.zeros((X.shape[0], f.dst))
    for i, pats in enumerate(_preimages(f)):
        col = np.zeros(X.shape[0])
        for ks in pats:
            val = X[:, list(ks)].min(axis=1) if ks else np.ones(X.shape[0])
            col = np.maximum(col, val)
        out[:, i] = col
    return out


# -- property suite -----------------------------------------------------------

@dataclass
class MetricReport:
    dims: int
    samples: int
    seed: int
    endos_checked: int = 0
    pairs_checked: int = 0
    violations: dict[str, int] = field(default_factory=lambda: {
        "vertex_agreement": 0, "functoriality": 0,
        "non_expansive": 0, "monotone": 0})
    examples: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def to_dict(self) -> dict:
        return {"dims": self.dims, "samples": self.samples, "seed": self.seed,
                "endos_checked": self.endos_checked, "pairs_checked": self.pairs_checked,
                "violations": dict(self.violations), "examples": self.examples[:10],
                "ok": self.ok}


def _d1_rows(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    comparable = np.all(X <= Y, axis=1)
    return np.where(comparable, np.sum(Y - X, axis=1), np.inf)


def check_properties(dims: int = 3, samples: int = 1000, seed: int = 0,
                     tol: float = TOL) -> MetricReport:
    """Vertex agreement, functoriality, non-expansiveness and monotonicity of
    the extension, for every cotransverse endo (pair) up to ``dims``."""
    rng = np.random.default_rng(seed)
    rep = MetricReport(dims, samples, seed)
    for n in range(1, dims + 1):
        endos = cotransverse_endos(n)
        verts = np.array([to_bits(v, n) for v in range(1 << n)], dtype=float)
        X = rng.random((samples, n))
        Y = X + (1.0 - X) * rng.random((samples, n))
        images = {}
        for f in endos:
            rep.endos_checked += 1
            want = np.array([to_bits(w, n) for w in f.table], dtype=float)
            if not np.array_equal(t_eval_many(f, verts), want):
                rep.violations["vertex_agreement"] += 1
                rep.examples.append({"check": "vertex_agreement", "map": f.key()})
            TX, TY = t_eval_many(f, X), t_eval_many(f, Y)
            images[f] = TX
            bad = np.any(TX > TY + tol, axis=1)
            if bad.any():
                rep.violations["monotone"] += int(bad.sum())
                rep.examples.append({"check": "monotone", "map": f.key()})
            dx, dy = _d1_rows(X, Y), _d1_rows(TX, TY)
            bad = ~(dy <= dx + tol)
            if bad.any():
                rep.violations["non_expansive"] += int(bad.sum())
                rep.examples.append({"check": "non_expansive", "map": f.key()})
        for f in endos:
            for g in endos:
                rep.pairs_checked += 1
                lhs = t_eval_many(compose(f, g), X)
                rhs = t_eval_many(f, images[g])
                bad = np.any(np.abs(lhs - rhs) > tol, axis=1)
                if bad.any():
                    rep.violations["functoriality"] += int(bad.sum())
                    rep.examples.append({"check": "functoriality",
                                         "f": f.key(), "g": g.key()})
    return rep
