"""Verification suites: each structure statement becomes a hypothesis and
conclusion predicate checked over a corpus of concrete groups.

Every suite is registered under a stable id. Reports count violations
(hypothesis true, conclusion false); since all encoded statements are
proven results, a violation signals an engine bug, never a mathematical
discovery. Instances that exceed a configured cap are recorded as skipped
with a reason and never counted as passes.
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field

from . import __version__, kernels
from .config import EngineConfig
from .dsl import build_from_expr, parse_expr
from .errors import (
    ConfigError,
    FgtError,
    LatticeCapExceeded,
    OrderCapExceeded,
    SubgroupCountCapExceeded,
)
from .formations import (
    Formation,
    chief_series,
    f_hypercentre,
    formation,
    is_in_class,
    standard_formations,
)
from .groups import Group, conjugacy_classes, factorize, subgroup_as_group
from .embeddings import (
    embedding_predicate,
    has_supplement,
    is_s_quasinormal,
    replay_witness,
    s_quasinormal_oracle_p,
)
from .quotients import push_forward, quotient
from .subgroups import (
    Subgroup,
    all_subgroups,
    core_of,
    is_normal_mask,
    is_subnormal,
    maximal_subgroups,
    normal_subgroups,
    normalizer,
    trivial_subgroup,
    whole_subgroup,
)

# -- corpus ---------------------------------------------------------------


def build_corpus(cfg: EngineConfig) -> list[str]:
    """Deterministic list of constructor expressions, deduplicated by an
    isomorphism-invariant fingerprint (collisions may keep isomorphic
    duplicates, which is harmless)."""
    if cfg.max_order > cfg.lattice_cap:
        raise ConfigError(
            f"max_order {cfg.max_order} above lattice cap {cfg.lattice_cap}")
    m = cfg.max_order
    fams = set(cfg.families)
    exprs: list[str] = []
    if "cyclic" in fams:
        exprs.extend(f"C({n})" for n in range(1, m + 1))
    if "abelian" in fams:
        exprs.extend(_abelian_exprs(m))
    if "dihedral" in fams:
        exprs.extend(f"D({2 * n})" for n in range(3, m // 2 + 1))
    if "dicyclic" in fams:
        exprs.extend(f"Dic({4 * n})" for n in range(2, m // 4 + 1))
    if "symmetric" in fams:
        exprs.extend(f"S({k})" for k in (3, 4) if _fact(k) <= m)
    if "alternating" in fams:
        exprs.extend(f"A({k})" for k in (4, 5) if _fact(k) // 2 <= m)
    if "elementary" in fams:
        for p in (2, 3, 5, 7):
            k = 2
            while p**k <= m:
                exprs.append(f"E({p},{k})")
                k += 1
    if "special" in fams:
        exprs.extend(s for s, o in (("Q8", 8), ("SL23", 24), ("M16", 16))
                     if o <= m)
    if "products" in fams:
        exprs.extend(_product_exprs(m))
    exprs.extend(cfg.extra_exprs)
    out = []
    seen_fp = set()
    ordered = []
    for e in exprs:
        expr = parse_expr(e)
        g = build_from_expr(expr, table_cap=cfg.table_cap)
        if g.order > m:
            continue
        ordered.append((g.order, expr.canonical(), g.fingerprint()))
    ordered.sort(key=lambda t: (t[0], t[1]))
    for order, canon, fp in ordered:
        if fp in seen_fp:
            continue
        seen_fp.add(fp)
        out.append(canon)
    return out


def _fact(k):
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _abelian_exprs(m):
    """All abelian types of each order up to m with at least two cyclic
    factors, in primary decomposition (prime-power factors, ascending)."""
    out = []
    for n in range(4, m + 1):
        for factors in _abelian_types(n):
            if len(factors) >= 2:
                out.append("x".join(f"C({q})" for q in factors))
    return out


def _abelian_types(n):
    per_prime = []
    for p, k in factorize(n):
        parts = [[p**e for e in part] for part in _partitions(k)]
        per_prime.append(parts)
    for combo in itertools.product(*per_prime):
        factors = sorted(q for block in combo for q in block)
        yield factors


def _partitions(k):
    if k == 0:
        yield []
        return
    for first in range(k, 0, -1):
        for rest in _partitions(k - first):
            if not rest or rest[0] <= first:
                yield [first] + rest


def _product_exprs(m):
    nonab = ([f"D({2 * n})" for n in range(3, m // 4 + 1)]
             + [f"Dic({4 * n})" for n in range(2, m // 8 + 1)]
             + [s for s, o in (("S(3)", 6), ("S(4)", 24), ("A(4)", 12),
                               ("A(5)", 60), ("Q8", 8), ("SL23", 24),
                               ("M16", 16)) if o <= m // 2])
    sizes = {}
    for e in nonab:
        sizes[e] = _expr_order(e)
    atoms = [(f"C({c})", c) for c in range(2, m // 6 + 1)]
    atoms += [(e, sizes[e]) for e in nonab]
    out = []
    for a in sorted(nonab, key=lambda e: (sizes[e], e)):
        for b, ob in sorted(atoms, key=lambda t: (t[1], t[0])):
            if sizes[a] * ob <= m:
                out.append(f"{a}x{b}")
    return out


def _expr_order(e):
    if e.startswith("D(") or e.startswith("Dic("):
        return int(e[e.index("(") + 1:-1])
    return {"S(3)": 6, "S(4)": 24, "A(4)": 12, "A(5)": 60, "Q8": 8,
            "SL23": 24, "M16": 16}[e]


# -- report types -----------------------------------------------------------


@dataclass
class InstanceRecord:
    group: str
    params: dict
    hypothesis: bool | None = None
    conclusion: bool | None = None
    nontrivial: bool = False
    skipped: str | None = None
    witnesses: dict = field(default_factory=dict)
    elapsed: float = 0.0  # not serialized; reports stay byte-reproducible

    def to_json_dict(self) -> dict:
        d = {"group": self.group, "params": self.params}
        if self.skipped is not None:
            d["skipped"] = self.skipped
        else:
            d["hypothesis"] = self.hypothesis
            d["conclusion"] = self.conclusion
            d["nontrivial"] = self.nontrivial
        if self.witnesses:
            d["witnesses"] = self.witnesses
        return d


@dataclass
class VerificationReport:
    theorem: str
    corpus: list[str]
    config: dict
    instances: list[InstanceRecord]
    engine: str = __version__

    @property
    def violations(self) -> int:
        return sum(1 for r in self.instances
                   if r.skipped is None and r.hypothesis and not r.conclusion)

    @property
    def nontrivial(self) -> int:
        return sum(1 for r in self.instances
                   if r.skipped is None and r.nontrivial)

    @property
    def skipped(self) -> int:
        return sum(1 for r in self.instances if r.skipped is not None)

    @property
    def skip_rate(self) -> float:
        return self.skipped / len(self.instances) if self.instances else 0.0

    def to_json_dict(self) -> dict:
        records = sorted(
            self.instances,
            key=lambda r: (r.group, json.dumps(r.params, sort_keys=True)))
        return {
            "schema": 1,
            "theorem": self.theorem,
            "engine": self.engine,
            "config": self.config,
            "corpus_size": len(self.corpus),
            "instances": [r.to_json_dict() for r in records],
            "violations": self.violations,
            "nontrivial": self.nontrivial,
            "skipped": self.skipped,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=1) + "\n"


@dataclass(frozen=True)
class TheoremSpec:
    id: str
    title: str
    quantifier: str
    vacuity: str
    params_fn: callable
    eval_fn: callable
    pair_scan: bool = False  # restricted to cfg.pair_scan_max_order

    def instances(self, g: Group, cfg: EngineConfig) -> list[dict]:
        if self.pair_scan and g.order > cfg.pair_scan_max_order:
            return []
        return self.params_fn(g, cfg)


THEOREMS: dict[str, TheoremSpec] = {}


def _register(spec: TheoremSpec):
    THEOREMS[spec.id] = spec
    return spec


@dataclass
class Outcome:
    hypothesis: bool
    conclusion: bool
    nontrivial: bool
    witnesses: dict = field(default_factory=dict)


# -- shared helpers ----------------------------------------------------------


def _hx(mask: int) -> str:
    return hex(mask)


def _lat(g, cfg):
    return all_subgroups(g, lattice_cap=cfg.lattice_cap,
                         count_cap=cfg.subgroup_count_cap)


def _wfsqn(g, h, form, cfg) -> bool:
    return embedding_predicate(g, h, "weakly_fs_quasinormal", form,
                               lattice_cap=cfg.lattice_cap).holds


def _supp(g, h, tag, p, cfg) -> bool:
    return has_supplement(g, h, tag, p=p, lattice_cap=cfg.lattice_cap).holds


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _builtin(form: Formation) -> bool:
    fam = form.tag.split(":")[0]
    return fam in ("U", "N", "U_p", "N_p")


def _form_params(g, families):
    return [{"formation": f.tag} for f in standard_formations(g, families)]


def _is_cyclic_mask(g: Group, mask: int) -> bool:
    size = mask.bit_count()
    return any(g.elem_order[x] == size for x in kernels.iter_bits(mask))


def _is_abelian_mask(g: Group, mask: int) -> bool:
    elems = list(kernels.iter_bits(mask))
    t = g.table
    return all(t[a][b] == t[b][a]
               for i, a in enumerate(elems) for b in elems[:i])


def _sylow_first(g, p, cfg) -> Subgroup:
    return _lat(g, cfg).sylow(p)[0]


def _sylows_of_mask(g, mask, p, cfg) -> list[Subgroup]:
    part = 1
    size = mask.bit_count()
    while size % p == 0:
        part *= p
        size //= p
    return [h for h in _lat(g, cfg).restrict(mask) if h.order == part]


def _to_local(elems, mask: int) -> int:
    out = 0
    for i, e in enumerate(elems):
        if (mask >> e) & 1:
            out |= 1 << i
    return out


def _to_parent(elems, mask: int) -> int:
    out = 0
    for i, e in enumerate(elems):
        if (mask >> i) & 1:
            out |= 1 << e
    return out


def _sqn_in_quotient(qm, h_mask, cfg) -> bool:
    q = qm.target
    if q.is_abelian():
        return True  # every subgroup of an abelian group is normal
    pm = 0
    for x in kernels.iter_bits(h_mask):
        pm |= 1 << qm.proj[x]
    return is_s_quasinormal(q, Subgroup(q, pm), lattice_cap=cfg.lattice_cap)


def _wfsqn_in_quotient(qm, h_mask, form, cfg) -> bool:
    q = qm.target
    pm = 0
    for x in kernels.iter_bits(h_mask):
        pm |= 1 << qm.proj[x]
    return _wfsqn(q, Subgroup(q, pm), form, cfg)


def _sqn_in_subgroup(g, k_mask, j_mask, cfg) -> bool:
    """J S-quasinormal inside the subgroup K (J <= K required)."""
    if _normal_in_mask(g, k_mask, j_mask):
        return True
    sub, elems = subgroup_as_group(g, k_mask)
    return is_s_quasinormal(sub, Subgroup(sub, _to_local(elems, j_mask)),
                            lattice_cap=cfg.lattice_cap)


def _normal_in_mask(g, ambient_mask, sub_mask) -> bool:
    if g.is_abelian():
        return True
    for x in kernels.iter_bits(ambient_mask):
        if kernels.conjugate(g.flat, g.inv_arr, g.order, sub_mask, x) != sub_mask:
            return False
    return True


def _member_quotient(g, n_sub, form, cfg) -> bool:
    return form.member(quotient(g, n_sub).target)


# -- L2.1: hypercentre vs quotients and subgroups -----------------------------


def _eval_l21a(g, params, cfg):
    form = formation(params["formation"])
    if g.is_abelian() and _builtin(form):
        # prime chief factors with full centralizer are central in all
        # registered classes, so both sides are the full group
        return Outcome(True, True, False)
    z = f_hypercentre(g, form)
    normals = normal_subgroups(g, cfg.subgroup_count_cap)
    for n_sub in normals:
        qm = quotient(g, n_sub)
        zq = f_hypercentre(qm.target, form)
        img = push_forward(qm, z)
        if img.mask & ~zq.mask:
            return Outcome(True, False, True, {
                "N": _hx(n_sub.mask), "Z": _hx(z.mask),
                "image": _hx(img.mask), "Z_quotient": _hx(zq.mask)})
    nontrivial = z.order > 1 and len(normals) > 2
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.1a", "hypercentre image lands in the quotient hypercentre",
    "forall (group, saturated formation, normal subgroup)",
    "hypercentre nontrivial and a proper nontrivial normal subgroup exists",
    lambda g, cfg: _form_params(g, ("U", "U_p", "N_p", "N")),
    _eval_l21a))


def _eval_l21b(g, params, cfg):
    form = formation(params["formation"])
    if g.is_abelian() and _builtin(form):
        return Outcome(True, True, False)
    z = f_hypercentre(g, form)
    lattice = _lat(g, cfg)
    for h in lattice.subgroups:
        inter = z.mask & h.mask
        if inter == 1:
            continue
        sub, elems = subgroup_as_group(g, h.mask)
        zh = f_hypercentre(sub, form)
        if inter & ~_to_parent(elems, zh.mask):
            return Outcome(True, False, True, {
                "H": _hx(h.mask), "Z": _hx(z.mask),
                "Z_H": _hx(_to_parent(elems, zh.mask))})
    return Outcome(True, True, z.order > 1 and len(lattice) > 2)


_register(TheoremSpec(
    "L2.1b", "hypercentre meets subgroups inside their own hypercentre",
    "forall (group, subgroup-closed saturated formation, subgroup)",
    "hypercentre nontrivial and the lattice is nontrivial",
    lambda g, cfg: _form_params(g, ("U", "U_p", "N_p", "N")),
    _eval_l21b))


# -- L2.2: S-quasinormality calculus ------------------------------------------


def _sqn_list(g, cfg):
    return _lat(g, cfg).s_quasinormal_subgroups()


def _eval_l221(g, params, cfg):
    bad = None
    nontrivial = False
    for h in _sqn_list(g, cfg):
        if not is_normal_mask(g, h.mask):
            nontrivial = True
        if not is_subnormal(g, h):
            bad = h
            break
    if bad is not None:
        return Outcome(True, False, True, {"H": _hx(bad.mask)})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.2.1", "S-quasinormal subgroups are subnormal",
    "forall (group, S-quasinormal subgroup)",
    "some S-quasinormal subgroup is not normal",
    lambda g, cfg: [{}], _eval_l221))


def _eval_l222(g, params, cfg):
    if g.is_abelian():
        return Outcome(True, True, False)
    sqn = _sqn_list(g, cfg)
    nontrivial = any(not is_normal_mask(g, h.mask) for h in sqn)
    for n_sub in normal_subgroups(g):
        qm = quotient(g, n_sub)
        for h in sqn:
            if not _sqn_in_quotient(qm, h.mask, cfg):
                return Outcome(True, False, True, {
                    "H": _hx(h.mask), "N": _hx(n_sub.mask)})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.2.2", "S-quasinormality passes to quotients",
    "forall (group, S-quasinormal subgroup, normal subgroup)",
    "some S-quasinormal subgroup is not normal",
    lambda g, cfg: [{}], _eval_l222))


def _eval_l223(g, params, cfg):
    if g.is_abelian():
        return Outcome(True, True, False)
    lattice = _lat(g, cfg)
    flags = lattice.sqn_flags()
    nontrivial = False
    for n_sub in normal_subgroups(g):
        if n_sub.order == 1 or n_sub.is_whole():
            continue
        qm = quotient(g, n_sub)
        for i, h in enumerate(lattice.subgroups):
            if h.mask & n_sub.mask != n_sub.mask:
                continue
            nontrivial = True
            above = _sqn_in_quotient(qm, h.mask, cfg)
            if above != flags[i]:
                return Outcome(True, False, True, {
                    "H": _hx(h.mask), "N": _hx(n_sub.mask),
                    "in_quotient": above, "in_group": flags[i]})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.2.3", "S-quasinormality above the kernel matches the quotient",
    "forall (group, normal subgroup, overgroup of it)",
    "a proper nontrivial normal subgroup with overgroups exists",
    lambda g, cfg: [{}], _eval_l223))


def _eval_l224(g, params, cfg):
    if g.is_abelian():
        return Outcome(True, True, False)
    lattice = _lat(g, cfg)
    sqn = _sqn_list(g, cfg)
    nontrivial = False
    for h in sqn:
        for k in lattice.subgroups:
            inter = h.mask & k.mask
            if inter not in (1, h.mask):
                nontrivial = True
            if not _sqn_in_subgroup(g, k.mask, inter, cfg):
                return Outcome(True, False, True, {
                    "H": _hx(h.mask), "K": _hx(k.mask)})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.2.4", "S-quasinormal subgroups restrict to subgroups",
    "forall (group, S-quasinormal subgroup, subgroup)",
    "some intersection is proper and nontrivial",
    lambda g, cfg: [{}], _eval_l224))


def _eval_l225(g, params, cfg):
    nontrivial = False
    for h in _sqn_list(g, cfg):
        core = core_of(g, h)
        if core.mask == h.mask:
            continue
        nontrivial = True
        sub, elems = subgroup_as_group(g, h.mask)
        local_core = Subgroup(sub, _to_local(elems, core.mask))
        q = quotient(sub, local_core).target
        if not is_in_class(q, "nilpotent"):
            return Outcome(True, False, True, {"H": _hx(h.mask),
                                               "core": _hx(core.mask)})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.2.5", "S-quasinormal subgroups are nilpotent over their core",
    "forall (group, S-quasinormal subgroup)",
    "some S-quasinormal subgroup differs from its core",
    lambda g, cfg: [{}], _eval_l225))


def _eval_l226(g, params, cfg):
    nontrivial = False
    for h in _lat(g, cfg).subgroups:
        if len(factorize(h.order)) > 1:
            continue
        direct = is_s_quasinormal(g, h, lattice_cap=cfg.lattice_cap)
        oracle = s_quasinormal_oracle_p(g, h)
        if not is_normal_mask(g, h.mask):
            nontrivial = True
        if direct != oracle:
            return Outcome(True, False, True, {
                "H": _hx(h.mask), "direct": direct, "oracle": oracle})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.2.6", "for p-subgroups, S-quasinormality is normalization by O^p",
    "forall (group, p-subgroup)",
    "some p-subgroup is not normal",
    lambda g, cfg: [{}], _eval_l226))


def _eval_l227(g, params, cfg):
    if g.is_abelian():
        return Outcome(True, True, False)
    lattice = _lat(g, cfg)
    flags = lattice.sqn_flags()
    sqn = _sqn_list(g, cfg)
    nontrivial = False
    for i, h in enumerate(sqn):
        for k in sqn[:i + 1]:
            inter = h.mask & k.mask
            if inter not in (h.mask, k.mask):
                nontrivial = True
            if not flags[lattice.index[inter]]:
                return Outcome(True, False, True, {
                    "H": _hx(h.mask), "K": _hx(k.mask)})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.2.7", "intersections of S-quasinormal subgroups are S-quasinormal",
    "forall (group, pair of S-quasinormal subgroups)",
    "some pair has intersection distinct from both",
    lambda g, cfg: [{}], _eval_l227))


# -- L2.3: weakly F_s-quasinormal calculus ------------------------------------


def _eval_l231(g, params, cfg):
    form = formation(params["formation"])
    if g.is_abelian() and _builtin(form):
        return Outcome(True, True, False)
    lattice = _lat(g, cfg)
    normals = normal_subgroups(g)
    nontrivial = False
    for h in lattice.subgroups:
        pairs = [n for n in normals if _gcd(h.order, n.order) == 1]
        if not pairs:
            continue
        if not _wfsqn(g, h, form, cfg):
            continue
        for n_sub in pairs:
            if h.order > 1 and n_sub.order > 1:
                nontrivial = True
            qm = quotient(g, n_sub)
            if not _wfsqn_in_quotient(qm, h.mask, form, cfg):
                return Outcome(True, False, True, {
                    "H": _hx(h.mask), "N": _hx(n_sub.mask)})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.3.1", "weak Fs-quasinormality passes to coprime quotients",
    "forall (group, formation, subgroup, coprime normal subgroup)",
    "a coprime pair with both parts nontrivial fires",
    lambda g, cfg: _form_params(g, ("U", "U_p", "N_p")),
    _eval_l231))


def _eval_l232(g, params, cfg):
    form = formation(params["formation"])
    if g.is_abelian() and _builtin(form):
        return Outcome(True, True, False)
    lattice = _lat(g, cfg)
    nontrivial = False
    for n_sub in normal_subgroups(g):
        qm = quotient(g, n_sub)
        for h in lattice.subgroups:
            if h.mask & n_sub.mask != n_sub.mask:
                continue
            if 1 < n_sub.order < h.order:
                nontrivial = True
            above = _wfsqn_in_quotient(qm, h.mask, form, cfg)
            below = _wfsqn(g, h, form, cfg)
            if above != below:
                return Outcome(True, False, True, {
                    "H": _hx(h.mask), "N": _hx(n_sub.mask),
                    "in_quotient": above, "in_group": below})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.3.2", "weak Fs-quasinormality above the kernel matches the quotient",
    "forall (group, formation, normal subgroup, overgroup of it)",
    "a nontrivial kernel with strictly larger overgroup fires",
    lambda g, cfg: _form_params(g, ("U", "U_p", "N_p")),
    _eval_l232))


def _eval_l233(g, params, cfg):
    form = formation(params["formation"])
    if not form.s_closed:
        return Outcome(False, True, False)
    if g.is_abelian() and _builtin(form):
        return Outcome(True, True, False)
    lattice = _lat(g, cfg)
    nontrivial = False
    for h in lattice.subgroups:
        if not _wfsqn(g, h, form, cfg):
            continue
        for k in lattice.subgroups:
            if k.mask == g.full_mask() or h.mask & k.mask != h.mask:
                continue
            if 1 < h.order < k.order:
                nontrivial = True
            sub, elems = subgroup_as_group(g, k.mask)
            ok = _wfsqn(sub, Subgroup(sub, _to_local(elems, h.mask)),
                        form, cfg)
            if not ok:
                return Outcome(True, False, True, {
                    "H": _hx(h.mask), "K": _hx(k.mask)})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "L2.3.3", "weak Fs-quasinormality restricts to intermediate subgroups",
    "forall (group, subgroup-closed formation, subgroup, intermediate)",
    "a proper nontrivial intermediate pair fires",
    lambda g, cfg: _form_params(g, ("U", "U_p", "N_p")),
    _eval_l233))


# -- L2.4-L2.7: auxiliary criteria ---------------------------------------------


def _params_l24(g, cfg):
    primes = g.primes()
    out = []
    for r in range(1, len(primes)):
        for pi in itertools.combinations(primes, r):
            for p in primes:
                if p not in pi:
                    out.append({"pi": list(pi), "p": p})
    return out


def _eval_l24(g, params, cfg):
    pi = set(params["pi"])
    p = params["p"]
    concl = is_in_class(g, "pi_closed", pi=pi)
    if not is_in_class(g, "C_pi", pi=pi):
        return Outcome(False, concl, False)
    lattice = _lat(g, cfg)
    # nontrivial p-subgroups only: for the trivial subgroup the maximal
    # subgroup condition is vacuous and the statement would fail
    firing = None
    big_firing = None
    for h in lattice.subgroups:
        if h.order == 1 or not _is_p_power(h.order, p):
            continue
        if firing is not None and h.order == p:
            continue  # only a firing of order > p can still change anything
        maxes = maximal_subgroups(g, h, lattice_cap=cfg.lattice_cap)
        if all(has_supplement(g, m, "pi_closed", pi=pi,
                              lattice_cap=cfg.lattice_cap).holds
               for m in maxes):
            if firing is None:
                firing = h
            if h.order > p:
                big_firing = h
                break
    if firing is None:
        return Outcome(False, concl, False)
    wit = {"P": _hx(firing.mask)}
    if big_firing is not None:
        wit["P_above_p"] = _hx(big_firing.mask)
    return Outcome(True, concl, big_firing is not None, wit)


_register(TheoremSpec(
    "L2.4", "pi-closed supplements of maximal subgroups force pi-closure",
    "forall (C_pi group, prime p outside pi, nontrivial p-subgroup)",
    "a firing p-subgroup of order above p exists",
    _params_l24, _eval_l24))


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _params_coprime_p(g, cfg):
    return [{"p": p} for p in g.primes() if _gcd(g.order, p - 1) == 1]


def _eval_l251(g, params, cfg):
    p = params["p"]
    syl = _sylow_first(g, p, cfg)
    hyp = _is_cyclic_mask(g, syl.mask)
    concl = is_in_class(g, "p_nilpotent", p=p)
    nontrivial = hyp and not is_normal_mask(g, syl.mask)
    return Outcome(hyp, concl, nontrivial, {"P": _hx(syl.mask)})


_register(TheoremSpec(
    "L2.5.1", "cyclic Sylow subgroups at coprime primes give p-nilpotence",
    "forall (group, prime p with (|G|, p-1) = 1)",
    "hypothesis holds with a non-normal Sylow subgroup",
    _params_coprime_p, _eval_l251))


def _eval_l252(g, params, cfg):
    p = params["p"]
    concl = is_in_class(g, "p_nilpotent", p=p)
    np_form = formation(f"N_p:{p}")
    firing = None
    for n_sub in normal_subgroups(g):
        if firing is not None and n_sub.order == 1:
            continue
        p_part = 1
        size = n_sub.order
        while size % p == 0:
            p_part *= p
            size //= p
        if p_part > p:
            continue
        if _member_quotient(g, n_sub, np_form, cfg):
            if firing is None:
                firing = n_sub
            if n_sub.order > 1:
                return Outcome(True, concl, True, {"N": _hx(n_sub.mask)})
    if firing is None:
        return Outcome(False, concl, False)
    return Outcome(True, concl, False, {"N": _hx(firing.mask)})


_register(TheoremSpec(
    "L2.5.2", "small p-part kernels lift p-nilpotence",
    "forall (group, prime p with (|G|, p-1) = 1, normal subgroup)",
    "a nontrivial firing kernel exists",
    _params_coprime_p, _eval_l252))


def _params_l26(g, cfg):
    odd = [p for p in g.primes() if p != 2]
    out = []
    for r in range(1, len(odd) + 1):
        for pi in itertools.combinations(odd, r):
            out.append({"pi": list(pi)})
    return out


def _eval_l26(g, params, cfg):
    pi = set(params["pi"])
    from .subgroups import hall_subgroups

    halls = hall_subgroups(g, pi, lattice_cap=cfg.lattice_cap)
    if not halls:
        return Outcome(False, True, False,
                       {"hall_count": 0})
    concl = is_in_class(g, "C_pi", pi=pi)
    part = g.pi_part(pi)
    return Outcome(True, concl, 1 < part < g.order,
                   {"hall_count": len(halls)})


_register(TheoremSpec(
    "L2.6", "odd Hall subgroups are conjugate",
    "forall (group, set of odd primes)",
    "Hall subgroups exist at a proper nontrivial part",
    _params_l26, _eval_l26))


def _params_l27(g, cfg):
    return [{"formation": f.tag}
            for f in standard_formations(g, ("U", "U_p"))
            if f.saturated and f.contains_U]


def _eval_l27(g, params, cfg):
    form = formation(params["formation"])
    concl = form.member(g)
    firing = None
    for n_sub in normal_subgroups(g):
        if firing is not None and n_sub.order == 1:
            continue
        if not _is_cyclic_mask(g, n_sub.mask):
            continue
        if _member_quotient(g, n_sub, form, cfg):
            if firing is None:
                firing = n_sub
            if n_sub.order > 1:
                return Outcome(True, concl, True, {"N": _hx(n_sub.mask)})
    if firing is None:
        return Outcome(False, concl, False)
    return Outcome(True, concl, False, {"N": _hx(firing.mask)})


_register(TheoremSpec(
    "L2.7", "cyclic kernels lift membership for formations containing U",
    "forall (group, saturated formation containing U, cyclic normal subgroup)",
    "a nontrivial cyclic firing kernel exists",
    _params_l27, _eval_l27))


# -- section 3 targets -----------------------------------------------------------


def _maximal_condition(g, p_sub, p, supp_tag, cfg):
    """Every maximal subgroup of p_sub is weakly (U_p)s-quasinormal in g or
    has a supplement in the named class. Returns (ok, failing masks)."""
    form = formation(f"U_p:{p}")
    failing = []
    for m in maximal_subgroups(g, p_sub, lattice_cap=cfg.lattice_cap):
        if _wfsqn(g, m, form, cfg):
            continue
        if _supp(g, m, supp_tag, p, cfg):
            continue
        failing.append(m.mask)
    return not failing, failing


def _cyclic_condition(g, p_sub, p, supp_tag, cfg):
    """Every cyclic subgroup of p_sub of order p (and of order 4 when p_sub
    is a non-abelian 2-group) is weakly (U_p)s-quasinormal in g or has a
    supplement in the named class."""
    form = formation(f"U_p:{p}")
    orders = {p}
    if p == 2 and not _is_abelian_mask(g, p_sub.mask):
        orders.add(4)
    failing = []
    for h in _lat(g, cfg).restrict(p_sub.mask):
        if h.order not in orders or not _is_cyclic_mask(g, h.mask):
            continue
        if _wfsqn(g, h, form, cfg):
            continue
        if _supp(g, h, supp_tag, p, cfg):
            continue
        failing.append(h.mask)
    return not failing, failing


def _eval_l31(g, params, cfg):
    p = params["p"]
    syl = _sylow_first(g, p, cfg)
    ok, failing = _maximal_condition(g, syl, p, "p_nilpotent", cfg)
    concl = is_in_class(g, "p_nilpotent", p=p)
    wit = {"P": _hx(syl.mask)}
    if failing:
        wit["failing"] = [_hx(m) for m in failing[:8]]
    return Outcome(ok, concl, ok and not is_normal_mask(g, syl.mask), wit)


_register(TheoremSpec(
    "L3.1", "maximal-subgroup condition forces p-nilpotence at coprime primes",
    "forall (group, prime p with (|G|, p-1) = 1)",
    "hypothesis holds with a non-normal Sylow subgroup",
    _params_coprime_p, _eval_l31))


def _eval_relativized(g, params, cfg, condition, supp_tag, need_normalizer):
    """Shared E-scan for the normal-subgroup variants: the hypothesis fires
    for a normal E when G/E is p-nilpotent and the subgroup condition holds
    for a Sylow p-subgroup of E (tested inside G). Sylow subgroups of E are
    conjugate and the conditions are conjugation-invariant, so the first
    one decides."""
    p = params["p"]
    np_form = formation(f"N_p:{p}")
    concl = is_in_class(g, "p_nilpotent", p=p)

    def fires(e_sub):
        if not _member_quotient(g, e_sub, np_form, cfg):
            return None
        syl = _sylows_of_mask(g, e_sub.mask, p, cfg)[0]
        if need_normalizer:
            nsub, _ = subgroup_as_group(g, normalizer(g, syl).mask)
            if not is_in_class(nsub, "p_nilpotent", p=p):
                return None
        ok, _ = condition(g, syl, p, supp_tag, cfg)
        return syl if ok else None

    firing = None
    fire_p = None
    for e_sub in normal_subgroups(g):
        syl = fires(e_sub)
        if syl is not None:
            firing, fire_p = e_sub, syl
            break
    if firing is None:
        return Outcome(False, concl, False)
    nontrivial = fire_p.order > 1 and not is_normal_mask(g, fire_p.mask)
    wit = {"E": _hx(firing.mask), "P": _hx(fire_p.mask)}
    if not nontrivial and not firing.is_whole():
        # probe the whole group, where the condition is most demanding;
        # the embedding evaluations are shared with the absolute suites
        syl = fires(whole_subgroup(g))
        if syl is not None and not is_normal_mask(g, syl.mask):
            nontrivial = syl.order > 1
            wit["E_nontrivial"] = _hx(g.full_mask())
    return Outcome(True, concl, nontrivial, wit)


_register(TheoremSpec(
    "T3.2", "maximal-subgroup condition on a normal subgroup, coprime case",
    "forall (group, prime p with (|G|, p-1) = 1, normal E with G/E p-nilpotent)",
    "a firing E has a nontrivial non-normal Sylow subgroup",
    _params_coprime_p,
    lambda g, params, cfg: _eval_relativized(
        g, params, cfg, _maximal_condition, "p_nilpotent", False)))


def _eval_l33(g, params, cfg):
    p = params["p"]
    syl = _sylow_first(g, p, cfg)
    nsub, _ = subgroup_as_group(g, normalizer(g, syl).mask)
    norm_ok = is_in_class(nsub, "p_nilpotent", p=p)
    ok, failing = _maximal_condition(g, syl, p, "p_nilpotent", cfg) \
        if norm_ok else (False, [])
    hyp = norm_ok and ok
    concl = is_in_class(g, "p_nilpotent", p=p)
    wit = {"P": _hx(syl.mask), "normalizer_p_nilpotent": norm_ok}
    if failing:
        wit["failing"] = [_hx(m) for m in failing[:8]]
    return Outcome(hyp, concl, hyp and not is_normal_mask(g, syl.mask), wit)


_register(TheoremSpec(
    "L3.3", "p-nilpotent Sylow normalizer plus maximal-subgroup condition",
    "forall (group, prime p)",
    "hypothesis holds with a non-normal Sylow subgroup",
    lambda g, cfg: [{"p": p} for p in g.primes()], _eval_l33))


_register(TheoremSpec(
    "T3.4", "normalizer variant on a normal subgroup",
    "forall (group, prime p, normal E with G/E p-nilpotent)",
    "a firing E has a nontrivial non-normal Sylow subgroup",
    lambda g, cfg: [{"p": p} for p in g.primes()],
    lambda g, params, cfg: _eval_relativized(
        g, params, cfg, _maximal_condition, "p_nilpotent", True)))


def _eval_t35(g, params, cfg):
    noncyclic = []
    failing = {}
    for p in g.primes():
        syl = _sylow_first(g, p, cfg)
        if _is_cyclic_mask(g, syl.mask):
            continue
        noncyclic.append((p, syl))
        ok, bad = _maximal_condition(g, syl, p, "p_supersoluble", cfg)
        if not ok:
            failing[p] = bad
    hyp = not failing
    concl = is_in_class(g, "supersoluble")
    wit = {}
    if not noncyclic:
        wit["all_cyclic_sylows"] = True
    if failing:
        p, bad = sorted(failing.items())[0]
        wit["p"] = p
        wit["failing"] = [_hx(m) for m in bad[:8]]
    return Outcome(hyp, concl, hyp and bool(noncyclic), wit)


_register(TheoremSpec(
    "T3.5", "maximal-subgroup condition on non-cyclic Sylows forces "
            "supersolubility",
    "forall groups (all primes, all non-cyclic Sylow subgroups)",
    "hypothesis holds and a non-cyclic Sylow subgroup exists",
    lambda g, cfg: [{}], _eval_t35))


def _eval_l36(g, params, cfg):
    p = params["p"]
    syl = _sylow_first(g, p, cfg)
    ok, failing = _cyclic_condition(g, syl, p, "p_nilpotent", cfg)
    concl = is_in_class(g, "p_nilpotent", p=p)
    wit = {"P": _hx(syl.mask)}
    if failing:
        wit["failing"] = [_hx(m) for m in failing[:8]]
    return Outcome(ok, concl, ok and not is_normal_mask(g, syl.mask), wit)


_register(TheoremSpec(
    "L3.6", "small cyclic subgroup condition forces p-nilpotence",
    "forall (group, prime p with (|G|, p-1) = 1)",
    "hypothesis holds with a non-normal Sylow subgroup",
    _params_coprime_p, _eval_l36))


_register(TheoremSpec(
    "T3.7", "small cyclic subgroup condition on a normal subgroup",
    "forall (group, prime p with (|G|, p-1) = 1, normal E with G/E p-nilpotent)",
    "a firing E has a nontrivial non-normal Sylow subgroup",
    _params_coprime_p,
    lambda g, params, cfg: _eval_relativized(
        g, params, cfg, _cyclic_condition, "p_nilpotent", False)))


def _eval_t38(g, params, cfg):
    u_form = formation("U")
    concl = u_form.member(g)

    def fires(e_sub):
        if not _member_quotient(g, e_sub, u_form, cfg):
            return None
        e_noncyclic = False
        for p, _ in factorize(e_sub.order):
            syl = _sylows_of_mask(g, e_sub.mask, p, cfg)[0]
            if _is_cyclic_mask(g, syl.mask):
                continue
            e_noncyclic = True
            cond, _ = _cyclic_condition(g, syl, p, "p_supersoluble", cfg)
            if not cond:
                return None
        return e_noncyclic

    firing = None
    has_noncyclic = False
    for e_sub in normal_subgroups(g):
        res = fires(e_sub)
        if res is not None:
            firing, has_noncyclic = e_sub, res
            break
    if firing is None:
        return Outcome(False, concl, False)
    wit = {"E": _hx(firing.mask)}
    if not has_noncyclic and not firing.is_whole():
        res = fires(whole_subgroup(g))
        if res:
            has_noncyclic = True
            wit["E_nontrivial"] = _hx(g.full_mask())
    return Outcome(True, concl, has_noncyclic, wit)


_register(TheoremSpec(
    "T3.8", "small cyclic subgroup condition on a normal subgroup forces "
            "supersolubility",
    "forall (group, normal E with G/E supersoluble, primes of |E|, "
    "non-cyclic Sylow subgroups of E)",
    "a firing E has a non-cyclic Sylow subgroup",
    lambda g, cfg: [{}], _eval_t38))


# -- section 4 implication suite ---------------------------------------------


_IMPL_KINDS = ("fs_quasinormal", "f_quasinormal", "c_normal",
               "fn_supplemented", "fh_normal", "fn_normal")


def _eval_s4impl(g, params, cfg):
    form = formation(params["formation"])
    lattice = _lat(g, cfg)
    nontrivial = False
    for h in lattice.subgroups:
        normal_h = is_normal_mask(g, h.mask)
        for kind in _IMPL_KINDS:
            v = embedding_predicate(g, h, kind, form,
                                    lattice_cap=cfg.lattice_cap)
            if not v.holds:
                continue
            if not normal_h:
                nontrivial = True
            w = embedding_predicate(g, h, "weakly_fs_quasinormal", form,
                                    lattice_cap=cfg.lattice_cap)
            if not w.holds or not replay_witness(g, h, w):
                return Outcome(True, False, True, {
                    "H": _hx(h.mask), "kind": kind,
                    "wfsqn_holds": w.holds})
    return Outcome(True, True, nontrivial)


_register(TheoremSpec(
    "S4.IMPL", "listed embedding properties imply weak Fs-quasinormality",
    "forall (group, subgroup, formation, listed embedding kind)",
    "a positive verdict exists for a non-normal subgroup",
    lambda g, cfg: _form_params(g, ("U", "U_p", "N_p", "N")),
    _eval_s4impl, pair_scan=True))


# -- runner --------------------------------------------------------------------


_CAP_ERRORS = (LatticeCapExceeded, OrderCapExceeded, SubgroupCountCapExceeded)


def resolve_theorem_ids(selector: str) -> list[str]:
    """Exact id, prefix (L2.2 selects L2.2.1..7) or "all"."""
    if selector == "all":
        return list(THEOREMS)
    if selector in THEOREMS:
        return [selector]
    hits = [tid for tid in THEOREMS
            if tid.startswith(selector + ".") or tid.startswith(selector)]
    if not hits:
        raise ConfigError(f"unknown theorem id {selector!r}")
    return hits


def run_instances(spec: TheoremSpec, g: Group, expr: str,
                  cfg: EngineConfig) -> list[InstanceRecord]:
    records = []
    try:
        param_list = spec.instances(g, cfg)
    except _CAP_ERRORS as exc:
        return [InstanceRecord(expr, {}, skipped=str(exc))]
    for params in param_list:
        started = time.perf_counter()
        try:
            out = spec.eval_fn(g, params, cfg)
            records.append(InstanceRecord(
                expr, params, out.hypothesis, out.conclusion,
                out.nontrivial, None, out.witnesses,
                time.perf_counter() - started))
        except _CAP_ERRORS as exc:
            records.append(InstanceRecord(
                expr, params, skipped=str(exc),
                elapsed=time.perf_counter() - started))
    return records


def verify(selector: str, corpus: list[str],
           cfg: EngineConfig | None = None) -> VerificationReport:
    """Run one suite over a corpus of expressions."""
    cfg = cfg or EngineConfig()
    ids = resolve_theorem_ids(selector)
    if len(ids) != 1:
        raise ConfigError(f"selector {selector!r} is ambiguous: {ids}")
    return verify_many([ids[0]], corpus, cfg)[ids[0]]


def verify_many(selectors, corpus: list[str],
                cfg: EngineConfig | None = None,
                progress=None) -> dict[str, VerificationReport]:
    """Run several suites group-major so per-group caches are shared across
    suites and freed when the group is done."""
    cfg = cfg or EngineConfig()
    ids = []
    for sel in selectors:
        for tid in resolve_theorem_ids(sel):
            if tid not in ids:
                ids.append(tid)
    store = _lattice_store(cfg)
    buckets: dict[str, list[InstanceRecord]] = {tid: [] for tid in ids}
    for expr in corpus:
        g = _group_for(expr, cfg, store)
        for tid in ids:
            buckets[tid].extend(run_instances(THEOREMS[tid], g, expr, cfg))
        _persist_lattice(g, store)
        if progress is not None:
            progress(expr)
    return {tid: VerificationReport(tid, list(corpus), cfg.snapshot(),
                                    buckets[tid])
            for tid in ids}


def _lattice_store(cfg):
    if not cfg.cache_dir:
        return None
    from .cache import LatticeCache

    return LatticeCache(cfg.cache_dir, seed=cfg.seed)


def _group_for(expr, cfg, store=None, memo=None):
    if memo is not None and expr in memo:
        return memo[expr]
    g = build_from_expr(expr, table_cap=cfg.table_cap)
    if store is not None:
        store.load(g)  # populates the lattice cache slot on success
    if memo is not None:
        memo[expr] = g
    return g


def _persist_lattice(g, store):
    if store is None:
        return
    lattice = g._cache.get("lattice")
    if lattice is not None and not store.path_for(g).exists():
        lattice.sqn_flags()
        store.store(lattice)


def check_hypothesis(theorem_id: str, g: Group, params: dict,
                     cfg: EngineConfig | None = None) -> bool:
    cfg = cfg or EngineConfig()
    return THEOREMS[theorem_id].eval_fn(g, params, cfg).hypothesis


def check_conclusion(theorem_id: str, g: Group, params: dict,
                     cfg: EngineConfig | None = None) -> bool:
    cfg = cfg or EngineConfig()
    return THEOREMS[theorem_id].eval_fn(g, params, cfg).conclusion


def vacuity_audit(report: VerificationReport,
                  floor: int | None = None) -> dict:
    """Counts of nontrivially-firing instances, flagged against a floor."""
    floor = 10 if floor is None else floor
    hyp_true = sum(1 for r in report.instances
                   if r.skipped is None and r.hypothesis)
    return {
        "theorem": report.theorem,
        "instances": len(report.instances),
        "hypothesis_true": hyp_true,
        "nontrivial": report.nontrivial,
        "floor": floor,
        "low_signal": report.nontrivial < floor,
        "criterion": THEOREMS[report.theorem].vacuity,
    }
