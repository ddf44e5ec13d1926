"""Command-line front end.

Commands: analyze, subgroups, check, verify, corpus, cache. Exit codes:
0 success, 1 predicate does not hold (check), 2 usage/parse/cap errors,
3 verification violations, 4 skip rate above threshold.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .config import EngineConfig, config_from_env
from .dsl import build_from_expr
from .embeddings import (
    KIND_TAGS,
    embedding_predicate,
    has_supplement,
    is_quasinormal,
    is_s_quasinormal,
)
from .errors import FgtError, LatticeCapExceeded, ParseError, UnknownFormation
from .formations import (
    CLASS_TAGS,
    chief_series,
    f_hypercentre,
    formation,
    is_f_central,
    is_in_class,
    standard_formations,
)
from .groups import conjugacy_classes, parse_cycles
from .kernels import BACKEND
from .subgroups import (
    Subgroup,
    all_subgroups,
    generated_subgroup,
    named_subgroup,
    whole_subgroup,
)
from .theorems import (
    THEOREMS,
    InstanceRecord,
    build_corpus,
    resolve_theorem_ids,
    run_instances,
    vacuity_audit,
    verify_many,
)

log = logging.getLogger("fgt")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = config_from_env(
            max_order=getattr(args, "max_order", None),
            cache_dir=getattr(args, "cache_dir", None),
            jobs=getattr(args, "jobs", None),
            seed=getattr(args, "seed", None),
            skip_threshold=getattr(args, "skip_threshold", None),
            output=getattr(args, "format", None),
            families=tuple(args.families.split(","))
            if getattr(args, "families", None) else None,
            extra_exprs=tuple(getattr(args, "extra", None) or ()) or None,
        )
        return args.func(args, cfg)
    except FgtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fgt",
        description="finite group engine and verification harness "
                    f"(v{__version__}, {BACKEND} kernels)")
    parser.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default=None):
        p.add_argument("--format", choices=("json", "csv", "table"),
                       default=fmt_default)
        p.add_argument("--cache-dir", default=None)
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("analyze", help="structure report for one group")
    p.add_argument("expr")
    p.add_argument("--formation", action="append", default=None,
                   help="formation tags (default: standard set for the group)")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("subgroups", help="list the subgroup lattice")
    p.add_argument("expr")
    p.add_argument("--normal-only", action="store_true")
    common(p)
    p.set_defaults(func=cmd_subgroups)

    p = sub.add_parser("check", help="evaluate an embedding predicate")
    p.add_argument("expr")
    p.add_argument("predicate",
                   help="qn sqn wfsqn fsqn fqn cn fns fhn fnn supp:<class>")
    p.add_argument("--gens", default=None,
                   help="subgroup generators: cycles '(1 2)(3 4)' or indices '1,5'")
    p.add_argument("--elements", default=None,
                   help="subgroup generator element indices, comma separated")
    p.add_argument("--index", type=int, default=None,
                   help="subgroup by position in the sorted lattice")
    p.add_argument("--formation", default="U")
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--pi", default=None, help="comma separated primes")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("selector", help="theorem id, prefix (L2.2), or 'all'")
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--families", default=None)
    p.add_argument("--extra", action="append", default=None,
                   help="additional corpus expressions")
    p.add_argument("--out", default="reports")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--skip-threshold", type=float, default=None)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", help="print the corpus for a config")
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--families", default=None)
    p.add_argument("--extra", action="append", default=None)
    common(p)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("cache", help="manage the lattice cache")
    p.add_argument("action", choices=("warm", "validate", "purge"))
    p.add_argument("--max-order", type=int, default=None)
    p.add_argument("--families", default=None)
    common(p)
    p.set_defaults(func=cmd_cache)
    return parser


# -- analyze -------------------------------------------------------------------


def cmd_analyze(args, cfg: EngineConfig) -> int:
    g = build_from_expr(args.expr, table_cap=cfg.table_cap)
    forms = ([formation(t) for t in args.formation] if args.formation
             else standard_formations(g))
    info = {
        "expr": g.name,
        "order": g.order,
        "prime_factorization": g.prime_factorization,
        "abelian": g.is_abelian(),
        "exponent": g.exponent(),
        "class_sizes": sorted(len(c) for c in conjugacy_classes(g)),
    }
    named = {}
    named["center"] = named_subgroup(g, "center").order
    named["fitting"] = named_subgroup(g, "fitting").order
    for p in g.primes():
        named[f"O_{p}"] = named_subgroup(g, "O_p", p=p).order
        named[f"O_{p}'"] = named_subgroup(g, "O_p'", p=p).order
        named[f"O^{p}"] = named_subgroup(g, "O^p", p=p).order
    try:
        named["frattini"] = named_subgroup(
            g, "frattini", lattice_cap=cfg.lattice_cap).order
    except LatticeCapExceeded:
        named["frattini"] = None  # needs the full lattice
    info["named_subgroups"] = named
    series = chief_series(g)
    info["chief_factor_orders"] = series.factor_orders()
    centrality = {}
    hypercentre = {}
    for form in forms:
        centrality[form.tag] = [is_f_central(g, f, form)
                                for f in series.factors]
        hypercentre[form.tag] = f_hypercentre(g, form).order
    info["chief_factor_central"] = centrality
    info["hypercentre_order"] = hypercentre
    classes = {
        "nilpotent": is_in_class(g, "nilpotent"),
        "soluble": is_in_class(g, "soluble"),
        "supersoluble": is_in_class(g, "supersoluble"),
        "sylow_tower_supersoluble": is_in_class(g, "sylow_tower_supersoluble"),
    }
    for p in g.primes():
        classes[f"p_nilpotent:{p}"] = is_in_class(g, "p_nilpotent", p=p)
        classes[f"p_supersoluble:{p}"] = is_in_class(g, "p_supersoluble", p=p)
    info["classes"] = classes
    if (args.format or "table") == "json":
        print(json.dumps(info, indent=2, sort_keys=True, default=str))
    else:
        _print_analysis(info)
    return 0


def _print_analysis(info):
    print(f"group {info['expr']}  order {info['order']}  "
          f"factorization {info['prime_factorization']}")
    print(f"abelian: {info['abelian']}  exponent: {info['exponent']}")
    print(f"conjugacy class sizes: {info['class_sizes']}")
    print("named subgroup orders:")
    for k, v in info["named_subgroups"].items():
        print(f"  {k:10} {v if v is not None else '(lattice cap exceeded)'}")
    print(f"chief factor orders: {info['chief_factor_orders']}")
    print("formation centrality of chief factors, and hypercentre order:")
    for tag, flags in info["chief_factor_central"].items():
        z = info["hypercentre_order"][tag]
        print(f"  {tag:8} central={flags}  Z={z}")
    print("class memberships:")
    for k, v in sorted(info["classes"].items()):
        print(f"  {k:22} {v}")


# -- subgroups -----------------------------------------------------------------


def cmd_subgroups(args, cfg: EngineConfig) -> int:
    g = build_from_expr(args.expr, table_cap=cfg.table_cap)
    lattice = all_subgroups(g, lattice_cap=cfg.lattice_cap,
                            count_cap=cfg.subgroup_count_cap)
    normal = lattice.normal_flags()
    sqn = lattice.sqn_flags()
    rows = []
    for i, h in enumerate(lattice.subgroups):
        if args.normal_only and not normal[i]:
            continue
        rows.append({
            "index": i,
            "order": h.order,
            "mask": hex(h.mask),
            "normal": normal[i],
            "s_quasinormal": sqn[i],
            "members": h.members() if h.order <= 12 else None,
        })
    fmt = args.format or "table"
    if fmt == "json":
        print(json.dumps({"expr": g.name, "count": len(lattice),
                          "subgroups": rows}, indent=2))
    elif fmt == "csv":
        print("index,order,mask,normal,s_quasinormal")
        for r in rows:
            print(f"{r['index']},{r['order']},{r['mask']},"
                  f"{int(r['normal'])},{int(r['s_quasinormal'])}")
    else:
        print(f"{len(lattice)} subgroups of {g.name}")
        for r in rows:
            members = "" if r["members"] is None else f"  {r['members']}"
            print(f"  [{r['index']:3}] order {r['order']:4} "
                  f"normal={int(r['normal'])} sqn={int(r['s_quasinormal'])}"
                  f"{members}")
    return 0


# -- check ---------------------------------------------------------------------


def _resolve_subgroup(g, args, cfg) -> Subgroup:
    if args.index is not None:
        lattice = all_subgroups(g, lattice_cap=cfg.lattice_cap,
                                count_cap=cfg.subgroup_count_cap)
        if not 0 <= args.index < len(lattice):
            raise ParseError(f"lattice index {args.index} out of range "
                             f"(0..{len(lattice) - 1})")
        return lattice.subgroups[args.index]
    spec = args.gens if args.gens is not None else args.elements
    if spec is None:
        raise ParseError("select a subgroup with --gens, --elements or --index")
    spec = spec.strip()
    if "(" in spec:
        if g.perms is None:
            raise ParseError("cycle selectors need a permutation-built group; "
                             "use --elements or --index")
        perm_index = {p: i for i, p in enumerate(g.perms)}
        elems = []
        for part in _split_cycle_list(spec):
            img = parse_cycles(part, n_points=g.n_points)
            if img not in perm_index:
                raise ParseError(f"permutation {part!r} is not in the group")
            elems.append(perm_index[img])
    else:
        elems = [int(x) for x in spec.replace(",", " ").split()]
        bad = [x for x in elems if not 0 <= x < g.order]
        if bad:
            raise ParseError(f"element indices out of range: {bad}")
    return generated_subgroup(g, elems)


def _split_cycle_list(spec):
    # generators separated by commas at paren depth zero
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(spec):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(spec[start:i])
            start = i + 1
    parts.append(spec[start:])
    return [p.strip() for p in parts if p.strip()]


def cmd_check(args, cfg: EngineConfig) -> int:
    g = build_from_expr(args.expr, table_cap=cfg.table_cap)
    h = _resolve_subgroup(g, args, cfg)
    tag = args.predicate
    pi = ({int(x) for x in args.pi.replace(",", " ").split()}
          if args.pi else None)
    if tag == "qn":
        holds = is_quasinormal(g, h, lattice_cap=cfg.lattice_cap)
        payload = {"holds": holds}
    elif tag == "sqn":
        holds = is_s_quasinormal(g, h, lattice_cap=cfg.lattice_cap)
        payload = {"holds": holds}
    elif tag.startswith("supp:"):
        parts = tag.split(":")
        cls = parts[1]
        p = args.p
        if len(parts) > 2 and parts[2]:
            nums = [int(x) for x in parts[2].split(",")]
            if cls in ("pi_closed", "C_pi"):
                pi = set(nums)
            else:
                p = nums[0]
        if cls not in CLASS_TAGS:
            raise ParseError(f"unknown supplement class {cls!r}")
        v = has_supplement(g, h, cls, p=p, pi=pi, lattice_cap=cfg.lattice_cap)
        holds = v.holds
        payload = v.to_json_dict()
    elif tag in KIND_TAGS:
        form = formation(args.formation)
        v = embedding_predicate(g, h, tag, form, lattice_cap=cfg.lattice_cap)
        holds = v.holds
        payload = v.to_json_dict()
    else:
        raise ParseError(f"unknown predicate tag {tag!r}")
    payload.update({"group": g.name, "subgroup_order": h.order,
                    "subgroup_mask": hex(h.mask), "predicate": tag})
    if (args.format or "table") == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        state = "holds" if holds else "does not hold"
        print(f"{tag} {state} for subgroup of order {h.order} in {g.name}")
        if payload.get("witness"):
            print(f"  witness: {payload['witness']}")
    return 0 if holds else 1


# -- verify ----------------------------------------------------------------------


def cmd_verify(args, cfg: EngineConfig) -> int:
    ids = resolve_theorem_ids(args.selector)
    corpus = build_corpus(cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.time()
    if cfg.jobs > 1:
        reports = _verify_parallel(ids, corpus, cfg)
    else:
        reports = verify_many(ids, corpus, cfg)
    elapsed = time.time() - started
    worst_skip = 0.0
    violations = 0
    for tid in ids:
        rep = reports[tid]
        path = out_dir / f"{tid}.json"
        path.write_text(rep.to_json())
        audit = vacuity_audit(rep, floor=cfg.vacuity_floor)
        violations += rep.violations
        worst_skip = max(worst_skip, rep.skip_rate)
        flag = " LOW-SIGNAL" if audit["low_signal"] else ""
        status = "FAIL" if rep.violations else "ok"
        print(f"{tid:8} {status:4} instances={len(rep.instances):4} "
              f"violations={rep.violations} nontrivial={rep.nontrivial:4} "
              f"skipped={rep.skipped}{flag}")
    print(f"corpus {len(corpus)} groups, {elapsed:.1f}s, reports in {out_dir}")
    if violations:
        print("violations found: engine bug signal", file=sys.stderr)
        return 3
    if worst_skip > cfg.skip_threshold:
        print(f"skip rate {worst_skip:.0%} above threshold "
              f"{cfg.skip_threshold:.0%}", file=sys.stderr)
        return 4
    return 0


def _verify_parallel(ids, corpus, cfg):
    """Group-level parallelism; assembly stays in corpus order so reports
    are identical to a sequential run."""
    from .theorems import THEOREMS, VerificationReport

    tasks = [(expr, ids, cfg) for expr in corpus]
    buckets = {tid: {} for tid in ids}
    with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
        for expr, recs in ex.map(_verify_worker, tasks, chunksize=4):
            for tid, records in recs.items():
                buckets[tid][expr] = records
    out = {}
    for tid in ids:
        records = []
        for expr in corpus:
            records.extend(buckets[tid][expr])
        out[tid] = VerificationReport(tid, list(corpus), cfg.snapshot(),
                                      records)
    return out


def _verify_worker(task):
    expr, ids, cfg = task
    from .theorems import THEOREMS, _group_for, _lattice_store, _persist_lattice

    store = _lattice_store(cfg)
    g = _group_for(expr, cfg, store)
    recs = {tid: run_instances(THEOREMS[tid], g, expr, cfg) for tid in ids}
    _persist_lattice(g, store)
    return expr, recs


# -- corpus / cache ---------------------------------------------------------------


def cmd_corpus(args, cfg: EngineConfig) -> int:
    corpus = build_corpus(cfg)
    if (args.format or "table") == "json":
        print(json.dumps({"max_order": cfg.max_order,
                          "families": list(cfg.families),
                          "corpus": corpus}, indent=2))
    else:
        for expr in corpus:
            print(expr)
        print(f"# {len(corpus)} groups up to order {cfg.max_order}",
              file=sys.stderr)
    return 0


def cmd_cache(args, cfg: EngineConfig) -> int:
    from .cache import LatticeCache

    if not cfg.cache_dir:
        print("error: no cache directory configured "
              "(--cache-dir or FGT_CACHE_DIR)", file=sys.stderr)
        return 2
    store = LatticeCache(cfg.cache_dir, seed=cfg.seed)
    if args.action == "purge":
        removed = store.purge()
        print(f"purged {removed} entries")
        return 0
    corpus = build_corpus(cfg)
    groups = (build_from_expr(e, table_cap=cfg.table_cap) for e in corpus)
    if args.action == "warm":
        written = store.warm(groups, lattice_cap=cfg.lattice_cap,
                             count_cap=cfg.subgroup_count_cap)
        print(f"wrote {written} entries ({len(store.entries())} present)")
        return 0
    issues = store.validate(groups)
    if issues:
        for line in issues:
            print(f"purged: {line}")
    print(f"validated {len(store.entries())} entries, "
          f"{len(issues)} purged")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
