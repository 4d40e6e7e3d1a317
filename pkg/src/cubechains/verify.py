"""The acceptance checks, each a function of a :class:`RunConfig`.

Every check returns a :class:`CheckResult`; failures carry a serialized
counterexample. Checks scale with ``max_dim`` and pass vacuously for the
parts that need more dimensions than the configuration allows.
"""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from . import corpus
from .chains import chain_category, comma_initial, lift_functor
from .cube_cat import (BAR_BOX, BOX, BOX_S, BUILTIN_NAMES, GENERATED, HAT_BOX, HAT_BOX_S,
                       CategorySpec, CubeCategory, CubeMap, builtin, coface, cotransverse_endos,
                       enumerate_cotransverse, factorize, factorizations_exhaustive, gamma,
                       generate_category, identity, in_hat_square, is_thick, non_thick_fixture,
                       symmetry)
from .hda import (SyncAlgebra, compare_models, cosk1_fill,
                  labelled_cube_skeleton, parallel_compose)
from .jsonio import (ChainCategoryRecord, aset_from_json, aset_to_json, category_from_json,
                     category_to_json, chain_category_record, cubemap_from_json,
                     cubemap_to_json, dumps, homology_from_json, homology_to_json,
                     precubical_from_json, precubical_to_json, skeleton_from_json,
                     skeleton_to_json)
from .metric import check_properties
from .nerve import DEFAULT_TRUNCATION, FiniteCategory, category_homology, check_dd_zero, nerve
from .presheaf import FreeASet

MAX_DIM_CAP = 4
ENV_MAXDIM = "CUBECHAINS_MAXDIM"
CHAIN_LENGTH = 3
NON_THICK = "non_thick_fixture"


@dataclass
class RunConfig:
    max_dim: int = 3
    truncation: int = DEFAULT_TRUNCATION
    seed: int = 0
    samples: int = 1000
    category: str | None = None

    def __post_init__(self):
        if not 0 <= self.max_dim <= MAX_DIM_CAP:
            raise ValueError(f"max_dim must lie in 0..{MAX_DIM_CAP}")
        if self.truncation < 2:
            raise ValueError("nerve truncation must be at least 2")

    @classmethod
    def from_env(cls, **kw) -> "RunConfig":
        if kw.get("max_dim") is None:
            kw.pop("max_dim", None)
            env = os.environ.get(ENV_MAXDIM)
            if env:
                kw["max_dim"] = int(env)
        return cls(**{k: v for k, v in kw.items() if v is not None})

    @property
    def dims(self) -> int:
        """Working dimension of the enumerative checks (the enumerators stop at 3)."""
        return min(self.max_dim, 3)

    def to_dict(self) -> dict:
        return {"max_dim": self.max_dim, "truncation": self.truncation, "seed": self.seed,
                "samples": self.samples, "category": self.category}


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    counterexample: dict | None = None
    seconds: float = 0.0

    def to_dict(self) -> dict:
        # timing is left out so that reports are reproducible byte for byte
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "details": self.details, "counterexample": self.counterexample}


def resolve_category(name: str, max_dim: int) -> CubeCategory:
    if name == NON_THICK:
        return non_thick_fixture(max_dim)
    if name in BUILTIN_NAMES:
        return builtin(name, max_dim)
    from .jsonio import load_file
    return category_from_json(load_file(name), max_dim)


# -- 1. cotransverse enumeration ----------------------------------------------

def brute_force_cotransverse(m: int, n: int) -> set[tuple[int, ...]]:
    """Tables of all order-preserving vertex maps that send edges to edges,
    by testing every function ``{0,1}^m -> {0,1}^n``."""
    out = set()
    edges = [(v, v | (1 << k)) for v in range(1 << m) for k in range(m) if not v & (1 << k)]
    for table in product(range(1 << n), repeat=1 << m):
        if all(bin(table[a] ^ table[b]).count("1") == 1 and table[a] & table[b] == table[a]
               for a, b in edges):
            out.add(table)
    return out


def check_enumeration(cfg: RunConfig) -> CheckResult:
    N = min(cfg.dims, 2)
    details: dict = {"dims": N, "hom_sizes": {}}
    hat = builtin(HAT_BOX_S, max(N, 0))
    for n in range(N + 1):
        for m in range(n + 1):
            brute = brute_force_cotransverse(m, n)
            enum = {f.table for f in enumerate_cotransverse(m, n)}
            gen = {f.table for f in hat.hom(m, n)}
            details["hom_sizes"][f"{m},{n}"] = len(brute)
            if not brute == enum == gen:
                return CheckResult(1, "cotransverse enumeration", False, details, {
                    "hom": [m, n], "brute_force": sorted(brute), "enumerated": sorted(enum),
                    "generated": sorted(gen)})
    if N >= 2:
        endos = {f.table for f in hat.endos(2)}
        required = {"id": identity(2), "sigma_1": symmetry(1, 2), "gamma_1": gamma(1, 2),
                    "min_max": CubeMap.from_function(2, 2, lambda x: (min(x), max(x)))}
        missing = [k for k, f in required.items() if f.table not in endos]
        details["endos_2"] = sorted(endos)
        details["endos_2_size"] = len(endos)
        if missing or len(endos) != 4:
            return CheckResult(1, "cotransverse enumeration", False, details,
                               {"missing": missing, "size": len(endos)})
    return CheckResult(1, "cotransverse enumeration", True, details)


# -- 2. factorization ---------------------------------------------------------

def check_factorization(cfg: RunConfig) -> CheckResult:
    N = cfg.dims
    checked = 0
    for n in range(N + 1):
        for m in range(n + 1):
            for f in sorted(enumerate_cotransverse(m, n)):
                checked += 1
                fac = factorize(f)
                found = factorizations_exhaustive(f)
                if found != [fac]:
                    return CheckResult(2, "endo/box factorization", False, {"checked": checked}, {
                        "map": f.key(), "factorize": [fac.psi.key(), fac.phi.key()],
                        "exhaustive": [[x.psi.key(), x.phi.key()] for x in found]})
    return CheckResult(2, "endo/box factorization", True, {"dims": N, "maps_checked": checked})


# -- 3. thickness -------------------------------------------------------------

def check_thickness(cfg: RunConfig) -> CheckResult:
    N = cfg.dims
    details: dict = {"dims": N, "verdicts": {}}
    for name in (BOX, BOX_S, HAT_BOX, BAR_BOX, HAT_BOX_S):
        res = is_thick(builtin(name, N))
        details["verdicts"][name] = res.note
        if not res.thick:
            f, psi = res.counterexample
            return CheckResult(3, "thickness", False, details,
                               {"category": name, "map": f.key(), "endo_factor": psi.key()})
    if N >= 3:
        res = is_thick(non_thick_fixture(N))
        details["verdicts"][NON_THICK] = res.note
        expected = gamma(1, 2)
        if res.thick or res.counterexample[1] != expected:
            return CheckResult(3, "thickness", False, details, {
                "category": NON_THICK,
                "endo_factor": res.counterexample[1].key() if res.counterexample else None,
                "expected": expected.key()})
        details["fixture_counterexample"] = {"map": res.counterexample[0].key(),
                                             "endo_factor": res.counterexample[1].key()}
    if cfg.category:
        cat = resolve_category(cfg.category, N)
        res = is_thick(cat)
        details["verdicts"][cat.name] = res.note
        if not res.thick:
            f, psi = res.counterexample
            return CheckResult(3, "thickness", False, details,
                               {"category": cat.name, "map": f.key(), "endo_factor": psi.key()})
    return CheckResult(3, "thickness", True, details)


# -- 4. greatest thick category -----------------------------------------------

def thick_catalog(N: int) -> dict[str, CubeCategory]:
    """Candidate categories: the box category, box with the connections, and
    box with the connections plus a single further endomorphism of [2] or [3]."""
    cofaces = [coface(i, a, n) for n in range(1, N + 1) for i in range(1, n + 1) for a in (0, 1)]
    gammas = [gamma(i, n) for n in range(2, N + 1) for i in range(1, n)]
    cats = {"box": builtin(BOX, N),
            "box+gamma": generate_category(CategorySpec("box+gamma", GENERATED,
                                                        tuple(cofaces + gammas), N))}
    for n in range(2, N + 1):
        for e in cotransverse_endos(n):
            if e.is_identity():
                continue
            name = f"box+gamma+{e.key()}"
            cats[name] = generate_category(CategorySpec(name, GENERATED,
                                                        tuple(cofaces + gammas + [e]), N))
    return cats


def check_greatest_thick(cfg: RunConfig) -> CheckResult:
    N = cfg.dims
    hat = builtin(HAT_BOX, N)
    kept = []
    details: dict = {"dims": N}
    for name, cat in thick_catalog(N).items():
        if cat.contains_symmetry() or not is_thick(cat).thick:
            continue
        kept.append(name)
        if not cat.is_subcategory_of(hat):
            extra = next(f for f in cat.maps() if f not in hat)
            return CheckResult(4, "greatest thick category", False, details,
                               {"category": name, "map_outside": extra.key()})
    details["thick_symmetry_free"] = kept
    if N >= 2:
        s1 = in_hat_square(symmetry(1, 2))
        details["sigma_1_in_hat_box"] = s1
        if s1:
            return CheckResult(4, "greatest thick category", False, details,
                               {"map": symmetry(1, 2).key()})
    return CheckResult(4, "greatest thick category", True, details)


# -- 5. metric extension ------------------------------------------------------

def check_metric(cfg: RunConfig) -> CheckResult:
    rep = check_properties(dims=cfg.dims, samples=cfg.samples, seed=cfg.seed)
    d = rep.to_dict()
    return CheckResult(5, "max-min extension", rep.ok,
                       {k: d[k] for k in ("dims", "samples", "seed", "endos_checked",
                                          "pairs_checked", "violations")},
                       None if rep.ok else {"examples": d["examples"]})


# -- 6. chain categories ------------------------------------------------------

_NERVES_CHECKED: list[bool] = []


def _full_homology(C, D):
    F = C.to_finite_category()
    S = nerve(F, D)
    _NERVES_CHECKED.append(check_dd_zero(S))
    return category_homology(F, D, shortcuts=False)


def check_chain_categories(cfg: RunConfig) -> CheckResult:
    D = cfg.truncation
    details: dict = {}
    N = cfg.dims
    if N >= 2:
        K = corpus.square()
        C = chain_category(K, "00", "11", 2)
        nonid = len(C.morphisms) - len(C.objects)
        h = _full_homology(C, D)
        details["square"] = {"objects": len(C.objects), "non_identity": nonid,
                             **h.to_dict()}
        if len(C.objects) != 3 or nonid != 2 or not h.is_point():
            return CheckResult(6, "chain categories", False, details, {"case": "square"})
        H = corpus.hollow_square()
        C = chain_category(H, "00", "11", 2)
        h = _full_homology(C, D)
        details["hollow_square"] = h.to_dict()
        if h.pi0 != 2:
            return CheckResult(6, "chain categories", False, details, {"case": "hollow_square"})
    if N >= 3:
        C = chain_category(corpus.cube3(), "000", "111", 3)
        h = _full_homology(C, D)
        details["cube3"] = {"objects": len(C.objects), "morphisms": len(C.morphisms),
                            **h.to_dict()}
        if not h.is_point():
            return CheckResult(6, "chain categories", False, details, {"case": "cube3"})
    return CheckResult(6, "chain categories", True, details)


# -- 7. chains of a precubical set versus its free extensions -----------------

def check_free_equivalence(cfg: RunConfig) -> CheckResult:
    N = cfg.dims
    D = cfg.truncation
    details: dict = {"cases": 0, "nonempty": 0, "comma_checks": 0, "disconnected_cases": 0,
                     "higher_homology_cases": 0, "nerve_methods": {}}
    for kname, K in corpus.corpus().items():
        if K.max_dim > N:
            continue
        for aname in (HAT_BOX, HAT_BOX_S):
            L = FreeASet(K, builtin(aname, N))
            for a, b in corpus.vertex_pairs(K):
                for n in range(CHAIN_LENGTH + 1):
                    details["cases"] += 1
                    F = lift_functor(K, L.category, a, b, n, free=L)
                    if not F.source.objects and not F.target.objects:
                        continue
                    details["nonempty"] += 1
                    hk = category_homology(F.source.to_finite_category(), D, shortcuts=False)
                    hl = category_homology(F.target.to_finite_category(), D)
                    if hk.pi0 > 1:
                        details["disconnected_cases"] += 1
                    if any(hk.betti[k] or hk.torsion[k] for k in hk.betti if k > 0):
                        details["higher_homology_cases"] += 1
                    for comp in hl.components:
                        m = comp["method"]
                        details["nerve_methods"][m] = details["nerve_methods"].get(m, 0) + 1
                    case = {"aset": kname, "category": aname, "from": a, "to": b, "n": n}
                    if hk.signature() != hl.signature():
                        return CheckResult(7, "free extension equivalence", False, details, {
                            **case, "precubical": hk.to_dict(), "free": hl.to_dict()})
                    laws = F.check_laws()
                    if not all(laws.values()):
                        return CheckResult(7, "free extension equivalence", False, details,
                                           {**case, "functor_laws": laws})
                    for c in range(len(F.target.objects)):
                        details["comma_checks"] += 1
                        res = comma_initial(F, c)
                        if not res.unique:
                            return CheckResult(7, "free extension equivalence", False, details,
                                               {**case, "comma": res.to_dict()})
    return CheckResult(7, "free extension equivalence", True, details)


# -- 8. trivial endomorphisms over the box category ---------------------------

def check_box_endos(cfg: RunConfig) -> CheckResult:
    N = cfg.dims
    checked = 0
    for kname, K in corpus.corpus().items():
        if K.max_dim > N:
            continue
        for a, b in corpus.vertex_pairs(K):
            for n in range(CHAIN_LENGTH + 1):
                C = chain_category(K, a, b, n)
                for i in range(len(C.objects)):
                    checked += 1
                    if C.endomorphisms(i) != [C.identity[i]]:
                        return CheckResult(8, "box endomorphisms", False, {"objects": checked}, {
                            "aset": kname, "from": a, "to": b, "n": n,
                            "object": C.objects[i].ids(K),
                            "endomorphisms": len(C.endomorphisms(i))})
    return CheckResult(8, "box endomorphisms", True, {"objects_checked": checked})


# -- 9. parallel composition models -------------------------------------------

def check_parallel_models(cfg: RunConfig) -> CheckResult:
    if cfg.dims < 2:
        return CheckResult(9, "parallel composition models", True,
                           {"skipped": "needs max_dim >= 2"})
    D = cfg.truncation
    plain = compare_models(["a"], ["b"], SyncAlgebra(), truncation=D)
    synced = compare_models(["a"], ["ā"], SyncAlgebra.parse("a~ā"), truncation=D)
    cos, free = plain["models"]["coskeletal"]["aggregate"], plain["models"]["free"]["aggregate"]
    sync_pi0 = synced["models"]["coskeletal"]["aggregate"]["pi0"]
    details = {"a||b": {"coskeletal": cos, "free": free, "agree": plain["agree"]},
               "a||abar with sync": {"coskeletal_pi0": sync_pi0}}
    ok = plain["agree"] and cos == free and sync_pi0 == 2
    return CheckResult(9, "parallel composition models", ok, details,
                       None if ok else {"plain": plain, "synced": synced})


# -- 10. infrastructure -------------------------------------------------------

def _roundtrip(doc: dict, parse: Callable, emit: Callable) -> bool:
    text = dumps(doc)
    return dumps(emit(parse(json.loads(text)))) == text


def check_infrastructure(cfg: RunConfig) -> CheckResult:
    N = cfg.dims
    D = cfg.truncation
    failures = []
    # every boundary pair of every nerve built here and in check 6
    idem = FiniteCategory(1, [(0, 0), (0, 0)], [0], {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1})
    nerves = [nerve(idem, max(D, 5))]
    for kname, K in corpus.corpus().items():
        if K.max_dim > N:
            continue
        for a, b in corpus.vertex_pairs(K):
            for n in range(1, CHAIN_LENGTH + 1):
                C = chain_category(K, a, b, n)
                if C.objects:
                    nerves.append(nerve(C.to_finite_category(), D))
    dd = all(check_dd_zero(S) for S in nerves) and all(_NERVES_CHECKED)
    if not dd:
        failures.append("boundary_of_boundary")
    # JSON round trips
    docs = []
    for n in range(N + 1):
        for m in range(n + 1):
            for f in sorted(enumerate_cotransverse(m, n)):
                docs.append(("cube_map", cubemap_to_json(f), cubemap_from_json, cubemap_to_json))
    for name in BUILTIN_NAMES:
        docs.append(("category", category_to_json(builtin(name, N)),
                     lambda d: category_from_json(d), category_to_json))
    for kname, K in corpus.corpus().items():
        docs.append(("precubical", precubical_to_json(K), precubical_from_json,
                     precubical_to_json))
        if K.max_dim <= N:
            docs.append(("free", aset_to_json(FreeASet(K, builtin(HAT_BOX_S, N))),
                         aset_from_json, aset_to_json))
    if N >= 2:
        S = parallel_compose(labelled_cube_skeleton(["a"]), labelled_cube_skeleton(["ā"]),
                             SyncAlgebra.parse("a~ā"))
        docs.append(("skeleton", skeleton_to_json(S), skeleton_from_json, skeleton_to_json))
        docs.append(("coskeletal", aset_to_json(cosk1_fill(S, 2)), aset_from_json,
                     aset_to_json))
        L = FreeASet(corpus.square(), builtin(HAT_BOX_S, N))
        C = chain_category(L, L.vertex("00"), L.vertex("11"), 2)
        rec = chain_category_record(C, "free hat_box_s square")
        docs.append(("chain_category", rec.to_json(), ChainCategoryRecord.from_json,
                     lambda r: r.to_json()))
        h = category_homology(rec.to_finite_category(), D)
        docs.append(("homology", homology_to_json(h), homology_from_json, homology_to_json))
    bad = [kind for kind, doc, parse, emit in docs if not _roundtrip(doc, parse, emit)]
    if bad:
        failures.append("json_roundtrip")
    details = {"nerves_checked": len(nerves) + len(_NERVES_CHECKED),
               "json_documents": len(docs), "json_failures": sorted(set(bad))}
    return CheckResult(10, "infrastructure", not failures, details,
                       {"failed": failures} if failures else None)


CHECKS = (check_enumeration, check_factorization, check_thickness, check_greatest_thick,
          check_metric, check_chain_categories, check_free_equivalence, check_box_endos,
          check_parallel_models, check_infrastructure)


def run_all(cfg: RunConfig | None = None) -> list[CheckResult]:
    cfg = cfg or RunConfig()
    _NERVES_CHECKED.clear()
    results = []
    for check in CHECKS:
        t = time.perf_counter()
        res = check(cfg)
        res.seconds = time.perf_counter() - t
        results.append(res)
    return results


def report(cfg: RunConfig, results: list[CheckResult]) -> dict:
    return {"schema": "cubechains/1", "type": "verification", "config": cfg.to_dict(),
            "passed": all(r.passed for r in results),
            "checks": [r.to_dict() for r in results],
            "note": "homology agreement in computed degrees is a necessary condition for "
                    "homotopy equivalence of classifying spaces, not a proof of it"}


def human_report(results: list[CheckResult]) -> str:
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] {r.number:2d}. {r.name} ({r.seconds:.2f}s)")
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return "\n".join(lines)

