"""Command-line front end.  Every subcommand emits one JSON report.

Exit codes: 0 success, 2 bad input, 3 cap exceeded, 4 a guaranteed outcome
failed (an implementation bug, never a user error).
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import characters as ch
from . import products as pr
from . import spectral as sp
from . import subgroups as sg
from . import words as wd
from .config import DEFAULT_CAPS, Caps
from .errors import CapExceeded, InputError, QuasirandomError
from .parallel import pmap, warm
from .specs import parse_group_spec, parse_subset_spec, resolve_subset, trial_rngs

SCHEMA_VERSION = "1.0"


@dataclass
class RunConfig:
    seed: int = 0
    caps: Caps = field(default_factory=lambda: DEFAULT_CAPS)
    workers: int = 1
    format: str = "json"
    out: str | None = None


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _provenance(cfg: RunConfig) -> dict:
    # the worker count is deliberately absent: it never changes results
    return {
        "package": "quasirandom",
        "version": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
        "seed": cfg.seed,
        "caps": cfg.caps.as_dict(),
    }


def _group(args, cfg):
    spec = parse_group_spec(args.group)
    return spec, spec.build(cfg.caps)


def _need_enum(G):
    if not getattr(G, "enumerable", False):
        raise CapExceeded(f"{G.name} is above the enumeration cap; this command needs enumeration")
    warm(G)
    return G


# subcommand handlers: each returns (inputs, results) -------------------------


def cmd_describe(args, cfg, rng):
    spec, G = _group(args, cfg)
    res = {"name": G.name, "order": G.n, "backend": G.backend_name, "meta": G.meta}
    if getattr(G, "enumerable", False) and G.has_table:
        cc = ch.conjugacy_classes(G)
        res.update(classes=cc.count, class_sizes=cc.sizes, exponent=G.exponent,
                   abelian=G.is_abelian(), perfect=G.is_perfect(), generators=G.gens)
    else:
        res.update(classes=None)
    return {"group": str(spec)}, res


def cmd_chartab(args, cfg, rng):
    spec, G = _group(args, cfg)
    tab = ch.character_table(_need_enum(G))
    k = int(tab.degrees[1:].min()) if G.n > 1 else None
    res = {"order": G.n, "class_sizes": tab.class_sizes, "class_orders": tab.classes.orders,
           "degrees": tab.degrees, "k": k, "prime": tab.prime, "residuals": tab.residuals}
    return {"group": str(spec)}, res, tab.to_tsv()


def cmd_k(args, cfg, rng):
    spec, G = _group(args, cfg)
    return {"group": str(spec)}, {"order": G.n, "k": ch.min_nontrivial_degree(_need_enum(G))}


def cmd_mix(args, cfg, rng):
    spec, G = _group(args, cfg)
    _need_enum(G)
    k = ch.min_nontrivial_degree(G) if G.n > 1 else None
    bspec = parse_subset_spec(args.B)
    inputs = {"group": str(spec), "B": str(bspec), "trials": args.trials,
              "matrix_free": args.matrix_free}
    dense = False if args.matrix_free else None
    rngs = trial_rngs(bspec, rng, args.trials)
    Bs = [resolve_subset(bspec, G, r) for r in rngs]

    def one(B):
        chk = sp.verify_mixing_bound(G, B, k=k, strict=True, dense=dense)
        return chk.to_dict()

    runs = pmap(one, Bs, cfg.workers)
    res = {"k": k, "all_hold": all(r["holds"] for r in runs)}
    if args.A or args.C:
        if not (args.A and args.C):
            raise InputError("--A and --C must be given together")
        aspec, cspec = parse_subset_spec(args.A), parse_subset_spec(args.C)
        inputs.update(A=str(aspec), C=str(cspec))
        arng = trial_rngs(aspec, rng, args.trials)
        crng = trial_rngs(cspec, rng, args.trials)
        triples = [(resolve_subset(aspec, G, a), B, resolve_subset(cspec, G, c))
                   for a, B, c in zip(arng, Bs, crng)]
        wit = pmap(lambda t: sp.mixing_triple_witness(G, *t, k=k, certify=args.certify).to_dict(),
                   triples, cfg.workers)
        for r, w in zip(runs, wit):
            r["triple"] = w
        res["all_witnessed"] = all(w["status"] == "witness" for w in wit)
    res["runs"] = runs
    return inputs, res


def cmd_cover(args, cfg, rng):
    spec, G = _group(args, cfg)
    _need_enum(G)
    k = ch.min_nontrivial_degree(G) if G.n > 1 else 1
    bspec = parse_subset_spec(args.B)
    Bs = [resolve_subset(bspec, G, r) for r in trial_rngs(bspec, rng, args.trials)]
    is_psl = G.meta.get("family") == "PSL"

    def one(B):
        out = pr.triple_product_covers(B, k=k).to_dict()
        if is_psl:
            out["psl"] = pr.psl_covering_check(G, B).to_dict()
        return out

    runs = pmap(one, Bs, cfg.workers)
    res = {"k": k, "threshold": pr.gowers_threshold(G.n, k),
           "all_cover": all(r["covers"] for r in runs), "runs": runs}
    if is_psl:
        res["psl_threshold"] = pr.psl_threshold(G)
    if len(runs) == 1:
        res["covers"] = runs[0]["covers"]
    return {"group": str(spec), "B": str(bspec), "trials": args.trials}, res


def cmd_productfree(args, cfg, rng):
    spec, G = _group(args, cfg)
    _need_enum(G)
    found = pr.product_free_search(G, rng, restarts=args.restarts, workers=cfg.workers)
    res = {"search": found.to_dict()}
    if G.n > 1:
        k = ch.min_nontrivial_degree(G)
        res["bound"] = pr.gowers_threshold(G.n, k)
        res["k"] = k
    if args.exact:
        res["alpha"] = pr.alpha_exact(G).to_dict()
    return {"group": str(spec), "restarts": args.restarts, "exact": args.exact}, res


def cmd_profile(args, cfg, rng):
    spec, G = _group(args, cfg)
    prof = pr.quasirandomness_profile(_need_enum(G), rng, trials=args.trials,
                                      restarts=args.restarts, workers=cfg.workers)
    return {"group": str(spec), "trials": args.trials, "restarts": args.restarts}, prof.to_dict()


def cmd_minindex(args, cfg, rng):
    spec, G = _group(args, cfg)
    rep = sg.min_proper_subgroup_index(_need_enum(G))
    res = rep.to_dict()
    if G.n > 1:
        k = ch.min_nontrivial_degree(G)
        res.update(k=k, bound_holds=rep.index <= pr.C0 * k * k)
    return {"group": str(spec)}, res


def cmd_growth(args, cfg, rng):
    spec, G = _group(args, cfg)
    _need_enum(G)
    xspec = parse_subset_spec(args.X)
    X = resolve_subset(xspec, G, trial_rngs(xspec, rng, 1)[0])
    return {"group": str(spec), "X": str(xspec)}, pr.cover_exponent(G, X).to_dict()


def cmd_fpf(args, cfg, rng):
    spec, G = _group(args, cfg)
    return {"group": str(spec)}, pr.fpf_triple_check(_need_enum(G)).to_dict()


def cmd_word_values(args, cfg, rng):
    spec, G = _group(args, cfg)
    vs = wd.word_value_set(_need_enum(G), args.words, mode=args.mode, samples=args.samples, rng=rng)
    return {"group": str(spec), "words": args.words, "mode": args.mode}, vs.to_dict()


def cmd_word_waring(args, cfg, rng):
    spec, G = _group(args, cfg)
    rep = wd.waring_check(_need_enum(G), args.words, sparse_trials=args.sparse_trials,
                          distinct=args.distinct, rng=rng, workers=cfg.workers)
    return ({"group": str(spec), "words": args.words, "sparse_trials": args.sparse_trials,
             "distinct": args.distinct}, rep.to_dict())


def cmd_word_rs(args, cfg, rng):
    spec, G = _group(args, cfg)
    rep = wd.rs_fraction(G, mode=args.mode, samples=args.samples, rng=rng)
    return {"group": str(spec), "mode": args.mode, "samples": args.samples}, rep.to_dict()


def cmd_word_genprob(args, cfg, rng):
    spec, G = _group(args, cfg)
    rep = wd.random_pair_generates(_need_enum(G), args.words, trials=args.trials, rng=rng,
                                   workers=cfg.workers)
    return {"group": str(spec), "words": args.words, "trials": args.trials}, rep.to_dict()


# argument parsing ------------------------------------------------------------


def _common(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="master random seed")
    p.add_argument("--workers", type=int, default=d(1), help="threads for independent trials")
    p.add_argument("--cap-enum", type=int, default=d(DEFAULT_CAPS.enum))
    p.add_argument("--cap-dense", type=int, default=d(DEFAULT_CAPS.dense))
    p.add_argument("--cap-table", type=int, default=d(DEFAULT_CAPS.table))
    p.add_argument("--cap-work", type=int, default=d(DEFAULT_CAPS.work))
    p.add_argument("--format", choices=["json", "tsv"], default=d("json"))
    p.add_argument("--out", default=d(None), help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quasirandom", description=__doc__.splitlines()[0])
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, group=True):
        p = sub.add_parser(name, help=help_)
        _common(p, suppress=True)
        if group:
            p.add_argument("group", help="group spec, e.g. PSL(2,7), Alt(5), table:k4.txt")
        p.set_defaults(func=fn)
        return p

    add("describe", cmd_describe, "order, classes and basic invariants")
    add("chartab", cmd_chartab, "character table (JSON summary or TSV)")
    add("k", cmd_k, "minimal degree of a nontrivial irreducible representation")
    p = add("mix", cmd_mix, "spectral bound for a symmetric set B")
    p.add_argument("B", help="subset spec for B (must be symmetric)")
    p.add_argument("--A", help="subset spec for A (witness search)")
    p.add_argument("--C", help="subset spec for C (witness search)")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--matrix-free", action="store_true", help="use Lanczos instead of the dense path")
    p.add_argument("--certify", action="store_true", help="attach the spectral certificate")
    p = add("cover", cmd_cover, "is B^3 the whole group?")
    p.add_argument("B")
    p.add_argument("--trials", type=int, default=1)
    p = add("productfree", cmd_productfree, "search for large product-free sets")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--exact", action="store_true", help="also compute alpha exactly (order <= 200)")
    p = add("profile", cmd_profile, "k, product-free, covering and minimal-index witnesses")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--restarts", type=int, default=32)
    add("minindex", cmd_minindex, "minimal index of a proper subgroup")
    p = add("growth", cmd_growth, "least t with X^t = G")
    p.add_argument("X")
    add("fpf", cmd_fpf, "fixed-point-free elements and F^3 = G")

    wp = sub.add_parser("word", help="word maps")
    wsub = wp.add_subparsers(dest="word_command", required=True)

    def wadd(name, fn, help_, words=True):
        p = wsub.add_parser(name, help=help_)
        _common(p, suppress=True)
        p.add_argument("group")
        if words:
            p.add_argument("words", nargs="+", help="words such as x1^2 or [x1,x2]")
        p.set_defaults(func=fn, command=f"word {name}")
        return p

    p = wadd("values", cmd_word_values, "exact or sampled value sets")
    p.add_argument("--mode", choices=["auto", "exact", "sampled"], default="auto")
    p.add_argument("--samples", type=int, default=10**6)
    p = wadd("waring", cmd_word_waring, "W^3 = L for word value sets")
    p.add_argument("--sparse-trials", type=int, default=0)
    p.add_argument("--distinct", action="store_true")
    p = wadd("rs", cmd_word_rs, "fraction of regular semisimple elements", words=False)
    p.add_argument("--mode", choices=["auto", "exact", "sampled"], default="auto")
    p.add_argument("--samples", type=int, default=10**5)
    p = wadd("genprob", cmd_word_genprob, "probability that two random values generate")
    p.add_argument("--trials", type=int, default=200)
    return parser


def _config(args) -> RunConfig:
    caps = Caps(enum=args.cap_enum, table=args.cap_table, dense=args.cap_dense, work=args.cap_work)
    if args.workers < 1:
        raise InputError("--workers must be at least 1")
    return RunConfig(seed=args.seed, caps=caps, workers=args.workers, format=args.format, out=args.out)


def run(argv) -> tuple[dict | None, str | None, int]:
    """Parse and execute; returns (report, text for stdout, exit code).

    With ``--out`` the text goes to that file and nothing is returned for stdout.
    """
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        rng = np.random.default_rng(cfg.seed)
        out = args.func(args, cfg, rng)
        inputs, results = out[0], out[1]
        doc = _jsonable({
            "schema_version": SCHEMA_VERSION,
            "subcommand": args.command,
            "inputs": inputs,
            "results": results,
            "provenance": _provenance(cfg),
        })
        if cfg.format == "tsv":
            if len(out) < 3:
                raise InputError("TSV output is only available for chartab")
            text = out[2]
        else:
            text = json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
    except QuasirandomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None, None, exc.exit_code
    if cfg.out:
        Path(cfg.out).write_text(text)
        return doc, None, 0
    return doc, text, 0


def main(argv=None) -> int:
    _, text, code = run(sys.argv[1:] if argv is None else argv)
    if text is not None:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
