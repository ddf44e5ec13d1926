"""Group classes, chief series, central factors, hypercentre, residuals.

A Formation bundles a membership predicate with the closure flags that
gate which calculus rules apply to it (saturated, subgroup-closed,
contains all supersoluble groups). The built-in registry provides the
supersoluble, p-supersoluble, p-nilpotent and nilpotent classes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from . import kernels
from .errors import (
    OrderCapExceeded,
    ResidualNotWitnessed,
    UnknownFormation,
)
from .groups import DEFAULT_TABLE_CAP, Group, factorize
from .quotients import quotient
from .subgroups import (
    Subgroup,
    _nilpotent_mask,
    hall_subgroups,
    is_normal_mask,
    minimal_normal_above,
    normal_subgroups,
    trivial_subgroup,
    whole_subgroup,
)

# -- formation registry -------------------------------------------------------


@dataclass(frozen=True)
class Formation:
    """A named group class with closure flags."""

    tag: str
    description: str
    member: Callable[[Group], bool]
    saturated: bool
    s_closed: bool
    contains_U: bool

    def __repr__(self):
        return f"<Formation {self.tag}>"


_REGISTRY: dict[str, Formation] = {}
_FAMILIES: dict[str, Callable[[int], Formation]] = {}


def register_formation(f: Formation) -> Formation:
    if not callable(f.member):
        raise UnknownFormation(f"formation {f.tag} has no membership predicate")
    _REGISTRY[f.tag] = f
    return f


def formation(tag: str) -> Formation:
    """Resolve a formation tag like ``U``, ``N``, ``U_p:3`` or ``N_p:2``."""
    hit = _REGISTRY.get(tag)
    if hit is not None:
        return hit
    if ":" in tag:
        family, _, arg = tag.partition(":")
        maker = _FAMILIES.get(family)
        if maker is not None:
            try:
                p = int(arg)
            except ValueError:
                raise UnknownFormation(f"bad prime in {tag!r}") from None
            if p < 2 or factorize(p) != [(p, 1)]:
                raise UnknownFormation(f"{arg} is not a prime in {tag!r}")
            return register_formation(maker(p))
    raise UnknownFormation(f"unknown formation tag {tag!r}")


def _register_builtins():
    register_formation(Formation(
        "U", "supersoluble groups",
        lambda g: is_in_class(g, "supersoluble"),
        saturated=True, s_closed=True, contains_U=True))
    register_formation(Formation(
        "N", "nilpotent groups",
        lambda g: is_in_class(g, "nilpotent"),
        saturated=True, s_closed=True, contains_U=False))
    _FAMILIES["U_p"] = lambda p: Formation(
        f"U_p:{p}", f"{p}-supersoluble groups",
        lambda g: is_in_class(g, "p_supersoluble", p=p),
        saturated=True, s_closed=True, contains_U=True)
    _FAMILIES["N_p"] = lambda p: Formation(
        f"N_p:{p}", f"{p}-nilpotent groups",
        lambda g: is_in_class(g, "p_nilpotent", p=p),
        saturated=True, s_closed=True, contains_U=False)


def standard_formations(g: Group, families=("U", "U_p", "N_p", "N")):
    """The registered formations relevant to a group: parametrized families
    are instantiated at each prime dividing the order. Deterministic."""
    out = []
    for fam in families:
        if fam in ("U", "N"):
            out.append(formation(fam))
        else:
            for p in g.primes():
                out.append(formation(f"{fam}:{p}"))
    if not g.primes() and not out:
        out.append(formation("U"))
    return out


# -- chief series --------------------------------------------------------------


@dataclass(frozen=True)
class ChiefFactor:
    """Adjacent normal subgroups K < L of G with nothing normal between."""

    lower: Subgroup
    upper: Subgroup

    @property
    def order(self) -> int:
        return self.upper.order // self.lower.order


@dataclass(frozen=True)
class ChiefSeries:
    group: Group
    subgroups: tuple

    @property
    def factors(self) -> list[ChiefFactor]:
        subs = self.subgroups
        return [ChiefFactor(subs[i], subs[i + 1]) for i in range(len(subs) - 1)]

    def factor_orders(self) -> list[int]:
        return [f.order for f in self.factors]


def chief_series(g: Group, floor: Subgroup | None = None,
                 ceiling: Subgroup | None = None,
                 rng: random.Random | None = None) -> ChiefSeries:
    """A chief series of g from floor to ceiling (both normal).

    Deterministic rule: at each step take the minimal normal subgroup above
    the current term with lexicographically smallest bit vector. Passing an
    rng replaces the tie-break with a seeded random choice (used to check
    that verdicts do not depend on the series).
    """
    floor = trivial_subgroup(g) if floor is None else floor
    ceiling = whole_subgroup(g) if ceiling is None else ceiling
    memo_key = None
    if rng is None:
        memo = g._cache.setdefault("chief", {})
        memo_key = (floor.mask, ceiling.mask)
        hit = memo.get(memo_key)
        if hit is not None:
            return hit
    subs = [floor]
    cur = floor.mask
    while cur != ceiling.mask:
        mins = minimal_normal_above(g, cur, ceiling.mask)
        pick = mins[0] if rng is None else rng.choice(mins)
        subs.append(pick)
        cur = pick.mask
    series = ChiefSeries(g, tuple(subs))
    if memo_key is not None:
        memo[memo_key] = series
    return series


def _chief_factor_steps(g: Group):
    """Yield the factors of the default chief series one at a time, so
    membership predicates can stop at the first bad factor."""
    memo = g._cache.get("chief", {}).get((1, g.full_mask()))
    if memo is not None:
        yield from memo.factors
        return
    cur = trivial_subgroup(g)
    while cur.mask != g.full_mask():
        nxt = minimal_normal_above(g, cur.mask)[0]
        yield ChiefFactor(cur, nxt)
        cur = nxt


# -- central factors -----------------------------------------------------------


def factor_centralizer(g: Group, f: ChiefFactor) -> Subgroup:
    """C_G(L/K): elements whose conjugation action fixes every coset of K
    inside L."""
    t = g.table
    inv = g.inverse
    kmask = f.lower.mask
    lmembers = f.upper.members()
    out = 0
    for x in range(g.order):
        xi = inv[x]
        for l in lmembers:
            c = t[t[t[xi][l]][x]][inv[l]]
            if not (kmask >> c) & 1:
                break
        else:
            out |= 1 << x
    return Subgroup(g, out)


def factor_semidirect(g: Group, f: ChiefFactor,
                      table_cap: int | None = None) -> Group:
    """External semidirect product (L/K) x| (G / C_G(L/K)) with the
    conjugation action. The cap defaults to the one g was built under."""
    cap = g.table_cap if table_cap is None else table_cap
    memo = g._cache.setdefault("semidirect", {})
    key = (f.lower.mask, f.upper.mask)
    hit = memo.get(key)
    if hit is not None:
        return hit
    c_sub = factor_centralizer(g, f)
    # cosets of K inside L, numbered by ascending smallest member
    fproj = {}
    freps = []
    for x in f.upper.members():
        if x in fproj:
            continue
        idx = len(freps)
        freps.append(x)
        coset = kernels.product(g.flat, g.order, 1 << x, f.lower.mask)
        for y in kernels.iter_bits(coset):
            fproj[y] = idx
    m1 = len(freps)
    qc = quotient(g, c_sub)
    m2 = qc.target.order
    order = m1 * m2
    if order > cap:
        raise OrderCapExceeded(order, cap, what="semidirect product order")
    t = g.table
    inv = g.inverse
    act = [[fproj[t[t[b][l]][inv[b]]] for l in freps] for b in qc.coset_reps]
    fmul = [[fproj[t[a][b]] for b in freps] for a in freps]
    qt = qc.target.table
    table = [[0] * order for _ in range(order)]
    for i1 in range(m1):
        for j1 in range(m2):
            row = table[i1 * m2 + j1]
            for i2 in range(m1):
                a = fmul[i1][act[j1][i2]]
                for j2 in range(m2):
                    row[i2 * m2 + j2] = a * m2 + qt[j1][j2]
    out = Group(table, name=f"({g.name or 'G'}:{m1}x|{m2})", table_cap=cap)
    memo[key] = out
    return out


def is_f_central(g: Group, f: ChiefFactor, form: Formation) -> bool:
    memo = g._cache.setdefault("fcentral", {})
    key = (f.lower.mask, f.upper.mask, form.tag)
    hit = memo.get(key)
    if hit is None:
        hit = form.member(factor_semidirect(g, f))
        memo[key] = hit
    return hit


def u_centrality_shortcut(f: ChiefFactor) -> bool:
    """Independent test for centrality in the supersoluble class: a chief
    factor is central there exactly when its order is prime."""
    return factorize(f.order) in ([(f.order, 1)],)


def is_f_hypercentral(g: Group, n_sub: Subgroup, form: Formation,
                      rng: random.Random | None = None) -> bool:
    """Every chief factor of g below n_sub is central for the formation
    (trivially true for the trivial subgroup)."""
    if n_sub.mask == 1:
        return True
    if rng is not None:
        series = chief_series(g, ceiling=n_sub, rng=rng)
        return all(is_f_central(g, f, form) for f in series.factors)
    cur = trivial_subgroup(g)
    while cur.mask != n_sub.mask:
        nxt = minimal_normal_above(g, cur.mask, n_sub.mask)[0]
        if not is_f_central(g, ChiefFactor(cur, nxt), form):
            return False
        cur = nxt
    return True


def f_hypercentre(g: Group, form: Formation) -> Subgroup:
    """Largest normal subgroup all of whose chief factors are central.

    Saturated formations use a greedy ascent that repeatedly absorbs a
    central minimal normal subgroup above the current term; otherwise the
    join of hypercentral normal subgroups is taken directly.
    """
    memo = g._cache.setdefault("zf", {})
    hit = memo.get(form.tag)
    if hit is not None:
        return hit
    if form.saturated:
        z = 1
        while True:
            mins = minimal_normal_above(g, z)
            for m in mins:
                if is_f_central(g, ChiefFactor(Subgroup(g, z), m), form):
                    z = m.mask
                    break
            else:
                break
        out = Subgroup(g, z)
    else:
        out = f_hypercentre_via_join(g, form)
    memo[form.tag] = out
    return out


def f_hypercentre_via_join(g: Group, form: Formation) -> Subgroup:
    """Join of all hypercentral normal subgroups (the defining formula;
    kept as an independent route for cross-validation)."""
    j = 1
    for n_sub in sorted(normal_subgroups(g), key=lambda s: -s.order):
        if n_sub.mask & j == n_sub.mask:
            continue
        if is_f_hypercentral(g, n_sub, form):
            j = kernels.product(g.flat, g.order, j, n_sub.mask)
    return Subgroup(g, j)


def f_residual(g: Group, form: Formation) -> Subgroup:
    """Smallest normal subgroup with quotient in the formation."""
    memo = g._cache.setdefault("residual", {})
    hit = memo.get(form.tag)
    if hit is not None:
        return hit
    r = g.full_mask()
    for n_sub in normal_subgroups(g):
        if r == 1:
            break
        if r & n_sub.mask == r:
            continue  # intersecting with a superset cannot shrink r
        if form.member(quotient(g, n_sub).target):
            r &= n_sub.mask
    out = Subgroup(g, r)
    if not form.member(quotient(g, out).target):
        raise ResidualNotWitnessed(
            f"quotient by the intersection is not in {form.tag}; "
            "the registered class is not subdirect-closed")
    memo[form.tag] = out
    return out


# -- class predicates -----------------------------------------------------------

CLASS_TAGS = (
    "nilpotent",
    "soluble",
    "p_soluble",
    "p_nilpotent",
    "supersoluble",
    "p_supersoluble",
    "pi_closed",
    "C_pi",
    "sylow_tower_supersoluble",
)


def is_in_class(g: Group, tag: str, p: int | None = None, pi=None) -> bool:
    """Membership of g in a named group class.

    Lattice enumeration is needed only for C_pi (Hall subgroup conjugacy).
    """
    key = (tag, p, frozenset(pi) if pi is not None else None)
    memo = g._cache.setdefault("classes_member", {})
    hit = memo.get(key)
    if hit is None:
        hit = _class_dispatch(g, tag, p, pi)
        memo[key] = hit
    return hit


def _class_dispatch(g, tag, p, pi):
    if tag == "nilpotent":
        return _nilpotent_mask(g, g.full_mask())
    if tag == "soluble":
        return _is_soluble(g)
    if tag == "p_soluble":
        _need(p)
        return all(_is_p_power(f.order, p) or f.order % p != 0
                   for f in _chief_factor_steps(g))
    if tag == "p_nilpotent":
        _need(p)
        return _largest_normal_coprime(g, (p,)) == g.order // g.p_part(p)
    if tag == "supersoluble":
        return all(_is_prime(f.order) for f in _chief_factor_steps(g))
    if tag == "p_supersoluble":
        _need(p)
        return all(f.order % p != 0 or f.order == p
                   for f in _chief_factor_steps(g))
    if tag == "pi_closed":
        _need_pi(pi)
        return _largest_normal_pi(g, frozenset(pi)) == g.pi_part(pi)
    if tag == "C_pi":
        _need_pi(pi)
        return _is_c_pi(g, frozenset(pi))
    if tag == "sylow_tower_supersoluble":
        return _sylow_tower(g)
    raise ValueError(f"unknown class tag {tag!r}")


def _need(p):
    if p is None:
        raise ValueError("this class takes a prime p")


def _need_pi(pi):
    if pi is None:
        raise ValueError("this class takes a prime set pi")


def _is_prime(n):
    return factorize(n) == [(n, 1)]


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _is_soluble(g: Group) -> bool:
    cur = g.full_mask()
    while True:
        comm = kernels.commutators(g.flat, g.inv_arr, g.order, cur)
        nxt = kernels.closure(g.flat, g.order, comm)
        if nxt == 1:
            return True
        if nxt == cur:
            return False
        cur = nxt


def _largest_normal_pi(g: Group, pi) -> int:
    """Order of the largest normal pi-subgroup (join of pi-group class
    closures)."""
    from .subgroups import _normal_atoms

    out = 1
    for a in _normal_atoms(g):
        size = a.bit_count()
        if all(q in pi for q, _ in factorize(size)):
            out = kernels.product(g.flat, g.order, out, a)
    return out.bit_count()


def _largest_normal_coprime(g: Group, ps) -> int:
    """Order of the largest normal subgroup of order coprime to the given
    primes (a normal p-complement has exactly the p'-part order)."""
    from .subgroups import _normal_atoms

    out = 1
    for a in _normal_atoms(g):
        size = a.bit_count()
        if all(size % p for p in ps):
            out = kernels.product(g.flat, g.order, out, a)
    return out.bit_count()


def _is_c_pi(g: Group, pi) -> bool:
    halls = hall_subgroups(g, pi)
    if not halls:
        return False
    want = {h.mask for h in halls}
    orbit = {halls[0].mask}
    queue = [halls[0].mask]
    while queue:
        m = queue.pop()
        for x in range(1, g.order):
            c = kernels.conjugate(g.flat, g.inv_arr, g.order, m, x)
            if c not in orbit:
                orbit.add(c)
                queue.append(c)
    return orbit == want


def _sylow_tower(g: Group) -> bool:
    """Sylow tower of supersoluble type: the Sylow subgroup for the largest
    prime is normal and the quotient by it inherits the property."""
    from .subgroups import named_subgroup

    cur = g
    while cur.order > 1:
        r = max(cur.primes())
        syl = named_subgroup(cur, "O_p", p=r)
        if syl.order != cur.p_part(r):
            return False
        cur = quotient(cur, syl).target
    return True


_register_builtins()
