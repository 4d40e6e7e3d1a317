"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage or input error, 3 a
feasibility bound was hit.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import jsonio
from .chains import chain_category, comma_initial, lift_functor
from .cube_cat import (BUILTIN_NAMES, EnumerationInfeasible, NotCotransverse, factorize,
                       is_thick)
from .hda import (CyclicSkeleton, ModelTooLarge, SyncAlgebra, compare_models, cosk1_fill,
                  labelled_cube_skeleton, parallel_compose)
from .metric import check_properties, t_map
from .nerve import DEFAULT_TRUNCATION, NerveTooLarge, category_homology
from .presheaf import FreeASet, NotThick, PrecubicalSet, validate
from .verify import ENV_MAXDIM, MAX_DIM_CAP, RunConfig, human_report, report, \
    resolve_category, run_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def default_maxdim() -> int:
    env = os.environ.get(ENV_MAXDIM)
    if env is None:
        return 3
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"{ENV_MAXDIM} must be an integer, got {env!r}")
    if not 0 <= value <= MAX_DIM_CAP:
        raise UsageError(f"{ENV_MAXDIM} must lie in 0..{MAX_DIM_CAP}")
    return value


def _maxdim(args) -> int:
    return default_maxdim() if args.maxdim is None else args.maxdim


def _emit(doc, out: str | None) -> None:
    if out:
        jsonio.write_file(out, doc)
    else:
        sys.stdout.write(jsonio.dumps(doc))


def _load(path: str) -> dict:
    try:
        return jsonio.load_file(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})")


def _load_precubical(path: str) -> PrecubicalSet:
    X = jsonio.aset_from_json(_load(path))
    if not isinstance(X, PrecubicalSet):
        raise UsageError(f"{path} does not describe a precubical set")
    return X


def _category(name: str, maxdim: int):
    if name in BUILTIN_NAMES or name == "non_thick_fixture":
        return resolve_category(name, maxdim)
    return jsonio.category_from_json(_load(name), maxdim)


# -- cubecat ------------------------------------------------------------------

def cmd_cubecat_enum(args) -> int:
    cat = _category(args.cat, _maxdim(args))
    pairs = ([(args.m, args.n)] if args.m is not None and args.n is not None else
             [(m, n) for n in range(cat.max_dim + 1) for m in range(n + 1)])
    homs = {}
    for m, n in pairs:
        if not 0 <= m <= n <= cat.max_dim:
            raise UsageError(f"need 0 <= m <= n <= {cat.max_dim}")
        maps = cat.hom(m, n)
        homs[f"{m},{n}"] = {"size": len(maps),
                            "maps": [jsonio.cubemap_to_json(f) for f in maps] if args.list else None}
    _emit(jsonio.envelope("hom_sets", {"category": cat.name, "max_dim": cat.max_dim,
                                       "homs": homs}), args.out)
    return EXIT_OK


def cmd_cubecat_factorize(args) -> int:
    f = jsonio.cubemap_from_json(_load(args.map))
    fac = factorize(f)
    _emit(jsonio.envelope("factorization", {
        "map": jsonio.cubemap_to_json(f), "endo": jsonio.cubemap_to_json(fac.psi),
        "box_map": jsonio.cubemap_to_json(fac.phi)}), args.out)
    return EXIT_OK


def cmd_cubecat_thick(args) -> int:
    cat = _category(args.cat, _maxdim(args))
    res = is_thick(cat)
    body = {"category": cat.name, "thick": res.thick, "max_dim": res.max_dim, "note": res.note,
            "counterexample": None}
    if res.counterexample:
        f, psi = res.counterexample
        body["counterexample"] = {"map": jsonio.cubemap_to_json(f),
                                  "endo_factor": jsonio.cubemap_to_json(psi)}
    _emit(jsonio.envelope("thickness", body), args.out)
    return EXIT_OK if res.thick else EXIT_FAIL


# -- metric -------------------------------------------------------------------

def cmd_metric_eval(args) -> int:
    f = jsonio.cubemap_from_json(_load(args.map))
    try:
        x = [float(t) for t in args.point.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad point {args.point!r}")
    if len(x) != f.src:
        raise UsageError(f"point has {len(x)} coordinates, map expects {f.src}")
    if any(not 0.0 <= t <= 1.0 for t in x):
        raise UsageError("point must lie in the unit cube")
    _emit(jsonio.envelope("point", {"map": jsonio.cubemap_to_json(f), "point": x,
                                    "image": list(t_map(f, x))}), args.out)
    return EXIT_OK


def cmd_metric_check(args) -> int:
    if not 0 <= args.dims <= 3:
        raise UsageError("--dims must lie in 0..3")
    rep = check_properties(dims=args.dims, samples=args.samples, seed=args.seed)
    _emit(jsonio.envelope("metric_check", rep.to_dict()), args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


# -- aset ---------------------------------------------------------------------

def cmd_aset_free(args) -> int:
    K = _load_precubical(args.base)
    cat = _category(args.cat, max(_maxdim(args), K.max_dim))
    X = FreeASet(K, cat)
    doc = jsonio.aset_to_json(X)
    doc["counts"] = X.counts()
    _emit(doc, args.out)
    return EXIT_OK


def cmd_aset_cosk(args) -> int:
    S = jsonio.skeleton_from_json(_load(args.skeleton))
    X = cosk1_fill(S, _maxdim(args))
    doc = jsonio.aset_to_json(X)
    doc["counts"] = X.counts()
    _emit(doc, args.out)
    return EXIT_OK


def cmd_aset_validate(args) -> int:
    X = jsonio.aset_from_json(_load(args.aset))
    rep = validate(X)
    _emit(jsonio.envelope("validation", rep.to_dict()), args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


# -- chains -------------------------------------------------------------------

def _vertex(X, name: str):
    try:
        return X.vertex(name)
    except KeyError:
        raise UsageError(f"no vertex {name!r}")


def cmd_chains_build(args) -> int:
    X = jsonio.aset_from_json(_load(args.aset))
    C = chain_category(X, _vertex(X, args.start), _vertex(X, args.end), args.n)
    rec = jsonio.chain_category_record(C, os.path.basename(args.aset))
    _emit(rec.to_json(), args.out)
    return EXIT_OK


def cmd_chains_homology(args) -> int:
    rec = jsonio.ChainCategoryRecord.from_json(_load(args.cat))
    res = category_homology(rec.to_finite_category(), args.maxdeg,
                            shortcuts=not args.no_shortcuts)
    _emit(jsonio.homology_to_json(res), args.out)
    return EXIT_OK


def cmd_chains_compare(args) -> int:
    K = _load_precubical(args.base)
    cat = _category(args.cat, max(_maxdim(args), K.max_dim))
    _vertex(K, args.start)
    _vertex(K, args.end)
    F = lift_functor(K, cat, args.start, args.end, args.n)
    D = args.maxdeg
    hk = category_homology(F.source.to_finite_category(), D, shortcuts=not args.no_shortcuts)
    hl = category_homology(F.target.to_finite_category(), D, shortcuts=not args.no_shortcuts)
    comma = [comma_initial(F, c) for c in range(len(F.target.objects))]
    bad = [r.to_dict() for r in comma if not r.unique]
    agree = hk.signature() == hl.signature()
    _emit(jsonio.envelope("chain_comparison", {
        "category": cat.name, "from": args.start, "to": args.end, "n": args.n,
        "precubical": hk.to_dict(), "free": hl.to_dict(), "agree": agree,
        "functor_laws": F.check_laws(), "comma_objects_checked": len(comma),
        "comma_failures": bad[:10]}), args.out)
    return EXIT_OK if agree and not bad else EXIT_FAIL


# -- hda ----------------------------------------------------------------------

def _labels(text: str) -> list[str]:
    return [t.strip() for t in (text or "").split(",") if t.strip()]


def cmd_hda_compose(args) -> int:
    left, right = _labels(args.left), _labels(args.right)
    try:
        sync = SyncAlgebra.parse(args.sync)
    except ValueError as exc:
        raise UsageError(str(exc))
    S = parallel_compose(labelled_cube_skeleton(left), labelled_cube_skeleton(right), sync)
    maxdim = args.maxdim if args.maxdim is not None else None
    rep = compare_models(left, right, sync, maxdim=maxdim, truncation=args.maxdeg)
    rep["skeleton"] = jsonio.skeleton_to_json(S)
    _emit(jsonio.envelope("hda_comparison", rep), args.report)
    return EXIT_OK if rep["agree"] is not False else EXIT_FAIL


# -- verification -------------------------------------------------------------

def cmd_verify_paper(args) -> int:
    cfg = RunConfig(max_dim=_maxdim(args), truncation=args.truncation, seed=args.seed,
                    samples=args.samples, category=args.category)
    results = run_all(cfg)
    doc = report(cfg, results)
    if args.report:
        jsonio.write_file(args.report, doc)
    if args.json:
        sys.stdout.write(jsonio.dumps(doc))
        print(human_report(results), file=sys.stderr)
    else:
        print(human_report(results))
    return EXIT_OK if doc["passed"] else EXIT_FAIL


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cubechains",
                                description="Categories of cubes, A-sets and cube chains.")
    sub = p.add_subparsers(dest="group", required=True)

    def maxdim_arg(sp, help_text="dimension cap (default 3, or $" + ENV_MAXDIM + ")"):
        sp.add_argument("--maxdim", type=int, default=None, help=help_text)

    def out_arg(sp):
        sp.add_argument("--out", default=None, help="write JSON here instead of stdout")

    cube = sub.add_parser("cubecat", help="categories of cubes").add_subparsers(
        dest="cmd", required=True)
    sp = cube.add_parser("enum", help="list hom-sets of a category")
    sp.add_argument("--cat", default="hat_box_s", help="built-in name or spec JSON path")
    sp.add_argument("--m", type=int, default=None, help="source dimension")
    sp.add_argument("--n", type=int, default=None, help="target dimension")
    sp.add_argument("--list", action="store_true", help="include the maps, not just sizes")
    maxdim_arg(sp)
    out_arg(sp)
    sp.set_defaults(func=cmd_cubecat_enum)
    sp = cube.add_parser("factorize", help="endo/box factorization of a map")
    sp.add_argument("--map", required=True, help="cube map JSON path")
    out_arg(sp)
    sp.set_defaults(func=cmd_cubecat_factorize)
    sp = cube.add_parser("thick-check", help="check thickness up to --maxdim")
    sp.add_argument("--cat", required=True,
                    help="built-in name, 'non_thick_fixture', or spec JSON path")
    maxdim_arg(sp)
    out_arg(sp)
    sp.set_defaults(func=cmd_cubecat_thick)

    met = sub.add_parser("metric", help="max-min extension to the solid cube").add_subparsers(
        dest="cmd", required=True)
    sp = met.add_parser("t-eval", help="evaluate the extension of a map at a point")
    sp.add_argument("--map", required=True, help="cube map JSON path")
    sp.add_argument("--point", required=True, help="comma-separated coordinates in [0,1]")
    out_arg(sp)
    sp.set_defaults(func=cmd_metric_eval)
    sp = met.add_parser("check", help="seeded property suite")
    sp.add_argument("--dims", type=int, default=3, help="largest cube dimension (<= 3)")
    sp.add_argument("--samples", type=int, default=1000, help="random points per map")
    sp.add_argument("--seed", type=int, default=0, help="random seed")
    out_arg(sp)
    sp.set_defaults(func=cmd_metric_check)

    aset = sub.add_parser("aset", help="A-sets").add_subparsers(dest="cmd", required=True)
    sp = aset.add_parser("free", help="free A-set on a precubical set")
    sp.add_argument("--base", required=True, help="precubical set JSON path")
    sp.add_argument("--cat", default="hat_box_s", help="built-in name or spec JSON path")
    maxdim_arg(sp)
    out_arg(sp)
    sp.set_defaults(func=cmd_aset_free)
    sp = aset.add_parser("cosk", help="coskeletal filling of a labelled skeleton")
    sp.add_argument("--skeleton", required=True, help="skeleton JSON path")
    maxdim_arg(sp, "largest filled dimension (default 3, or $" + ENV_MAXDIM + ")")
    out_arg(sp)
    sp.set_defaults(func=cmd_aset_cosk)
    sp = aset.add_parser("validate", help="check the presheaf laws")
    sp.add_argument("--aset", required=True, help="A-set JSON path")
    out_arg(sp)
    sp.set_defaults(func=cmd_aset_validate)

    ch = sub.add_parser("chains", help="cube chain categories").add_subparsers(
        dest="cmd", required=True)
    sp = ch.add_parser("build", help="build a chain category")
    sp.add_argument("--aset", required=True, help="A-set JSON path")
    sp.add_argument("--from", dest="start", required=True, help="initial vertex")
    sp.add_argument("--to", dest="end", required=True, help="final vertex")
    sp.add_argument("--n", type=int, required=True, help="total dimension of the chains")
    out_arg(sp)
    sp.set_defaults(func=cmd_chains_build)
    sp = ch.add_parser("homology", help="homology of the nerve of a built category")
    sp.add_argument("--cat", required=True, help="chain category JSON path")
    sp.add_argument("--maxdeg", type=int, default=DEFAULT_TRUNCATION,
                    help="nerve truncation D; degrees below D are reported")
    sp.add_argument("--no-shortcuts", action="store_true",
                    help="always build the nerve, even with a terminal or initial object")
    out_arg(sp)
    sp.set_defaults(func=cmd_chains_homology)
    sp = ch.add_parser("compare", help="chains of a precubical set versus its free A-set")
    sp.add_argument("--base", required=True, help="precubical set JSON path")
    sp.add_argument("--cat", default="hat_box_s", help="built-in name or spec JSON path")
    sp.add_argument("--from", dest="start", required=True, help="initial vertex")
    sp.add_argument("--to", dest="end", required=True, help="final vertex")
    sp.add_argument("--n", type=int, required=True, help="total dimension of the chains")
    sp.add_argument("--maxdeg", type=int, default=DEFAULT_TRUNCATION, help="nerve truncation D")
    sp.add_argument("--no-shortcuts", action="store_true",
                    help="always build the nerve, even with a terminal or initial object")
    maxdim_arg(sp)
    out_arg(sp)
    sp.set_defaults(func=cmd_chains_compare)

    hda = sub.add_parser("hda", help="parallel composition models").add_subparsers(
        dest="cmd", required=True)
    sp = hda.add_parser("compose", help="compare coskeletal and free models of left || right")
    sp.add_argument("--left", required=True, help="comma-separated labels of the left cube")
    sp.add_argument("--right", required=True, help="comma-separated labels of the right cube")
    sp.add_argument("--sync", default="", help="items a~b[:label], comma-separated")
    sp.add_argument("--maxdim", type=int, default=None,
                    help="largest filled dimension (default: total number of labels)")
    sp.add_argument("--maxdeg", type=int, default=DEFAULT_TRUNCATION, help="nerve truncation D")
    sp.add_argument("--report", default=None, help="write JSON here instead of stdout")
    sp.set_defaults(func=cmd_hda_compose)

    sp = sub.add_parser("verify-paper", help="run the full verification suite")
    maxdim_arg(sp)
    sp.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION, help="nerve truncation D")
    sp.add_argument("--seed", type=int, default=0, help="seed for the metric checks")
    sp.add_argument("--samples", type=int, default=1000, help="random points per map")
    sp.add_argument("--category", default=None,
                    help="extra category to check for thickness (name or spec path)")
    sp.add_argument("--report", default=None, help="also write the JSON report here")
    sp.add_argument("--json", action="store_true",
                    help="print the JSON report on stdout (summary goes to stderr)")
    sp.set_defaults(func=cmd_verify_paper, group="verify-paper")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (EnumerationInfeasible, NerveTooLarge, ModelTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (UsageError, jsonio.SchemaError, NotCotransverse, NotThick, CyclicSkeleton,
            KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
