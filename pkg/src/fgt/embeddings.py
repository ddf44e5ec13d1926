"""Subgroup embedding predicates with machine-checkable witnesses.

Every existential verdict carries the subgroup found plus the containment
certificate evaluated in the quotient by the core, so it can be replayed
through independent primitives.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UnknownFormation
from .formations import Formation, f_hypercentre, is_in_class
from .groups import Group, factorize, subgroup_as_group
from .quotients import pull_back, push_forward, quotient
from .subgroups import (
    Subgroup,
    all_subgroups,
    core_of,
    is_normal_mask,
    normal_subgroups,
    normalizer,
    named_subgroup,
    permutes,
    product_mask,
    product_set,
)

EMBEDDING_KINDS = (
    "weakly_fs_quasinormal",
    "fs_quasinormal",
    "f_quasinormal",
    "c_normal",
    "fn_supplemented",
    "fh_normal",
    "fn_normal",
)

KIND_TAGS = {
    "qn": "quasinormal",
    "sqn": "s_quasinormal",
    "wfsqn": "weakly_fs_quasinormal",
    "fsqn": "fs_quasinormal",
    "fqn": "f_quasinormal",
    "cn": "c_normal",
    "fns": "fn_supplemented",
    "fhn": "fh_normal",
    "fnn": "fn_normal",
}

# Which kinds require the hypercentre containment / use a formation.
_FORMATION_KINDS = frozenset(EMBEDDING_KINDS) - {"c_normal"}


@dataclass
class EmbeddingVerdict:
    holds: bool
    kind: str
    formation: str | None
    subject: int
    witness: dict | None = None
    search_stats: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        d = {
            "holds": self.holds,
            "kind": self.kind,
            "subject": hex(self.subject),
        }
        if self.formation is not None:
            d["formation"] = self.formation
        if self.witness is not None:
            d["witness"] = {k: hex(v) if isinstance(v, int) else v
                            for k, v in self.witness.items()}
        d["search_stats"] = self.search_stats
        return d


def is_quasinormal(g: Group, h: Subgroup, lattice_cap=None) -> bool:
    """h permutes with every subgroup of g."""
    if is_normal_mask(g, h.mask):
        return True
    lattice = all_subgroups(g, lattice_cap=lattice_cap)
    return all(permutes(h, k) for k in lattice.subgroups)


def is_s_quasinormal(g: Group, h: Subgroup, lattice_cap=None) -> bool:
    """h permutes with every Sylow subgroup of g (all primes, all
    conjugates)."""
    if is_normal_mask(g, h.mask):
        return True
    lattice = all_subgroups(g, lattice_cap=lattice_cap)
    return all(permutes(h, p_sub) for p_sub in lattice.all_sylows())


def s_quasinormal_oracle_p(g: Group, h: Subgroup) -> bool:
    """For a p-subgroup h: equivalent test O^p(g) <= N_g(h).

    Kept independent of the product-set route; the two must agree on every
    p-subgroup (cross-validated by the verification suites).
    """
    fact = factorize(h.order)
    if len(fact) > 1:
        raise ValueError("oracle applies to p-subgroups only")
    if not fact:  # trivial subgroup: any prime gives O^p <= G = N_G(1)
        return True
    p = fact[0][0]
    op = named_subgroup(g, "O^p", p=p)
    nz = normalizer(g, h)
    return op.mask & nz.mask == op.mask


def _z_pullback(g: Group, core_mask: int, form: Formation):
    """Preimage in g of the hypercentre of g/core, with the pieces needed
    for witness certificates. Memoized per (core, formation)."""
    memo = g._cache.setdefault("zpull", {})
    key = (core_mask, form.tag)
    hit = memo.get(key)
    if hit is None:
        qm = quotient(g, Subgroup(g, core_mask))
        z = f_hypercentre(qm.target, form)
        pull = pull_back(qm, z)
        hit = (qm, z, pull.mask)
        memo[key] = hit
    return hit


def embedding_predicate(g: Group, h: Subgroup, kind: str,
                        form: Formation | None = None,
                        lattice_cap=None) -> EmbeddingVerdict:
    """Existential embedding predicates over a deterministically ordered
    candidate list; the first witness is returned.

    Kinds (T ranges over subgroups of g):
      weakly_fs_quasinormal  T S-quasinormal, HT S-quasinormal, containment
      fs_quasinormal         T normal, HT S-quasinormal, containment
      f_quasinormal          T quasinormal, HT quasinormal, containment
      c_normal               T normal, G = HT, H^T inside the core of H
      fn_supplemented        T normal, G = HT, containment
      fh_normal              T normal, HT a normal Hall subgroup, containment
      fn_normal              T normal, HT normal, containment

    "containment" is (H n T)H_G/H_G <= Z_F(G/H_G), evaluated as
    H n T <= preimage of the hypercentre of G/H_G.
    """
    kind = KIND_TAGS.get(kind, kind)
    if kind not in EMBEDDING_KINDS:
        raise ValueError(f"unknown embedding kind {kind!r}")
    needs_form = kind in _FORMATION_KINDS
    if needs_form and form is None:
        raise UnknownFormation(f"kind {kind} needs a formation")
    memo = g._cache.setdefault("embed", {})
    key = (h.mask, kind, form.tag if needs_form else None)
    hit = memo.get(key)
    if hit is not None:
        return hit
    verdict = _embedding_search(g, h, kind, form, lattice_cap)
    memo[key] = verdict
    return verdict


def _embedding_search(g, h, kind, form, lattice_cap):
    core = core_of(g, h)
    fast = _trivial_candidate_wins(g, h, kind, core)
    if fast is not None:
        return EmbeddingVerdict(
            True, kind, form.tag if form is not None else None, h.mask,
            fast, {"candidates": 1})
    bound_mask = None  # preimage of the hypercentre, computed on demand
    lattice = all_subgroups(g, lattice_cap=lattice_cap)
    sqn_flags = qn_flags = None
    if kind == "weakly_fs_quasinormal":
        candidates = lattice.s_quasinormal_subgroups()
        sqn_flags = lattice.sqn_flags()
    elif kind == "f_quasinormal":
        candidates = lattice.quasinormal_subgroups()
        qn_flags = lattice.qn_flags()
    else:
        candidates = normal_subgroups(g)
        if kind == "fs_quasinormal":
            sqn_flags = lattice.sqn_flags()
    examined = 0
    for t in candidates:
        examined += 1
        inter = h.mask & t.mask
        if inter & ~core.mask:
            # containment is trivial when H n T sits inside the core;
            # otherwise compare against the hypercentre preimage
            if kind == "c_normal":
                continue
            if bound_mask is None:
                _, _, bound_mask = _z_pullback(g, core.mask, form)
            if inter & ~bound_mask:
                continue
        if kind in ("c_normal", "fn_supplemented"):
            # |HT| = |H||T|/|H n T| holds for the product set, so HT = G is
            # an arithmetic test
            if h.order * t.order != g.order * inter.bit_count():
                continue
            ht_mask = g.full_mask()
        else:
            if kind == "fh_normal":
                # same size identity rules out non-Hall products cheaply
                size = h.order * t.order // inter.bit_count()
                if g.order % size or _gcd(size, g.order // size) != 1:
                    continue
            if not permutes(h, t):
                continue  # HT is not a subgroup, the condition cannot hold
            ht_mask = product_mask(g, h.mask, t.mask)
            idx = lattice.index[ht_mask]
            if kind in ("weakly_fs_quasinormal", "fs_quasinormal"):
                if not sqn_flags[idx]:
                    continue
            elif kind == "f_quasinormal":
                if not qn_flags[idx]:
                    continue
            elif kind == "fh_normal":
                if not is_normal_mask(g, ht_mask):
                    continue
            elif kind == "fn_normal":
                if not is_normal_mask(g, ht_mask):
                    continue
        witness = {"T": t.mask, "HT": ht_mask, "core": core.mask}
        if kind != "c_normal" and inter & ~core.mask:
            qm, z, _ = _z_pullback(g, core.mask, form)
            image = push_forward(qm, Subgroup(g, inter | core.mask))
            witness["quot_image"] = image.mask
            witness["quot_hypercentre"] = z.mask
        verdict = EmbeddingVerdict(
            True, kind, form.tag if form is not None else None, h.mask,
            witness, {"candidates": examined})
        return verdict
    return EmbeddingVerdict(
        False, kind, form.tag if form is not None else None, h.mask,
        None, {"candidates": examined})


def _trivial_candidate_wins(g, h, kind, core):
    """Decide cheaply whether T = 1, the first candidate in search order,
    succeeds. H n 1 = 1 always sits inside the core, so only the HT-side
    condition matters; this avoids building the lattice for the common
    normal-subject case. Returns the witness dict or None (None means the
    full search must run; it would re-examine T = 1 and agree)."""
    if kind in ("c_normal", "fn_supplemented"):
        if h.mask != g.full_mask():
            return None
        return {"T": 1, "HT": g.full_mask(), "core": core.mask}
    if not is_normal_mask(g, h.mask):
        return None
    # a normal subgroup is quasinormal, S-quasinormal, and normal, which
    # settles every HT = H condition below
    if kind == "fh_normal":
        if _gcd(h.order, g.order // h.order) != 1:
            return None
    return {"T": 1, "HT": h.mask, "core": core.mask}


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def has_supplement(g: Group, h: Subgroup, class_tag: str,
                   p: int | None = None, pi=None,
                   lattice_cap=None) -> EmbeddingVerdict:
    """First subgroup K with HK = G (as a set) lying in the named class.

    K need not permute with h; the product-set size identity makes HK = G
    an arithmetic test.
    """
    memo = g._cache.setdefault("supp", {})
    key = (h.mask, class_tag, p, frozenset(pi) if pi is not None else None)
    hit = memo.get(key)
    if hit is not None:
        return hit
    lattice = all_subgroups(g, lattice_cap=lattice_cap)
    examined = 0
    found = None
    for k in lattice.subgroups:
        examined += 1
        inter = h.mask & k.mask
        if h.order * k.order != g.order * inter.bit_count():
            continue
        sub, _ = subgroup_as_group(g, k.mask)
        if is_in_class(sub, class_tag, p=p, pi=pi):
            found = k
            break
    tag = f"supp:{class_tag}"
    if found is not None:
        witness = {"K": found.mask, "class": class_tag}
        if p is not None:
            witness["p"] = p
        if pi is not None:
            witness["pi"] = sorted(pi)
        verdict = EmbeddingVerdict(True, tag, None, h.mask, witness,
                                   {"candidates": examined})
    else:
        verdict = EmbeddingVerdict(False, tag, None, h.mask, None,
                                   {"candidates": examined})
    memo[key] = verdict
    return verdict


def replay_witness(g: Group, h: Subgroup, verdict: EmbeddingVerdict,
                   form: Formation | None = None) -> bool:
    """Re-validate a positive verdict through the primitive operations,
    without consulting the cached search flags."""
    if not verdict.holds or verdict.witness is None:
        return False
    kind = verdict.kind
    w = verdict.witness
    if kind.startswith("supp:"):
        k = Subgroup(g, w["K"])
        if product_set(h, k) != frozenset(range(g.order)):
            return False
        sub, _ = subgroup_as_group(g, k.mask)
        pi = set(w["pi"]) if "pi" in w else None
        return is_in_class(sub, w["class"], p=w.get("p"), pi=pi)
    t = Subgroup(g, w["T"])
    core = core_of(g, h)
    if core.mask != w["core"]:
        return False
    if kind == "c_normal":
        if not is_normal_mask(g, t.mask):
            return False
        if product_set(h, t) != frozenset(range(g.order)):
            return False
        return (h.mask & t.mask) & ~core.mask == 0
    # T-side property
    if kind == "weakly_fs_quasinormal":
        if not is_s_quasinormal(g, t):
            return False
    elif kind == "f_quasinormal":
        if not is_quasinormal(g, t):
            return False
    else:
        if not is_normal_mask(g, t.mask):
            return False
    # HT must be a subgroup with the right property
    if kind in ("c_normal", "fn_supplemented"):
        ht_set = product_set(h, t)
        if ht_set != frozenset(range(g.order)):
            return False
        ht_mask = g.full_mask()
    else:
        if not permutes(h, t):
            return False
        ht_mask = product_mask(g, h.mask, t.mask)
        if ht_mask != w["HT"]:
            return False
        ht = Subgroup(g, ht_mask)
        if kind in ("weakly_fs_quasinormal", "fs_quasinormal"):
            if not is_s_quasinormal(g, ht):
                return False
        elif kind == "f_quasinormal":
            if not is_quasinormal(g, ht):
                return False
        elif kind == "fh_normal":
            if not is_normal_mask(g, ht_mask):
                return False
            if _gcd(ht.order, g.order // ht.order) != 1:
                return False
        elif kind == "fn_normal":
            if not is_normal_mask(g, ht_mask):
                return False
    # containment certificate
    inter = h.mask & t.mask
    if inter & ~core.mask == 0:
        return True  # H n T inside the core maps to the identity coset
    qm = quotient(g, core)
    z = f_hypercentre(qm.target, form if form is not None
                      else formation_of(verdict))
    image = push_forward(qm, Subgroup(g, inter | core.mask))
    return image.mask & ~z.mask == 0


def formation_of(verdict: EmbeddingVerdict) -> Formation:
    from .formations import formation

    if verdict.formation is None:
        raise UnknownFormation("verdict carries no formation tag")
    return formation(verdict.formation)
