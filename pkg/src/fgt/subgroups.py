"""Subgroup enumeration and set algebra on bit vectors.

A Subgroup is (parent group, membership mask). All searches and listings
use one deterministic ordering: ascending (order, lexicographic bit
vector), where the bit vector is read from element 0 upward.
"""

from __future__ import annotations

from . import kernels
from .errors import (
    LatticeCapExceeded,
    NotASubgroup,
    SubgroupCountCapExceeded,
)
from .groups import Group, conjugacy_classes, subgroup_as_group

DEFAULT_LATTICE_CAP = 256
DEFAULT_SUBGROUP_COUNT_CAP = 100_000


def lex_key(mask: int, n: int) -> int:
    """Bit vector b0..b_{n-1} read as a big-endian number (b0 most
    significant), so smaller keys come first in lexicographic order."""
    return int(format(mask, f"0{n}b")[::-1], 2)


class Subgroup:
    """A subset of a parent group, closed under the operation."""

    __slots__ = ("parent", "mask", "order", "_lex")

    def __init__(self, parent: Group, mask: int):
        self.parent = parent
        self.mask = mask
        self.order = mask.bit_count()
        self._lex = None

    @classmethod
    def from_members(cls, parent: Group, members) -> "Subgroup":
        mask = 1
        for x in members:
            mask |= 1 << x
        if not kernels.is_closed(parent.flat, parent.order, mask):
            raise NotASubgroup("member set is not closed")
        return cls(parent, mask)

    def members(self) -> list[int]:
        return list(kernels.iter_bits(self.mask))

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)

    def __le__(self, other: "Subgroup") -> bool:
        return self.mask & other.mask == self.mask

    def __lt__(self, other: "Subgroup") -> bool:
        return self.mask != other.mask and self.mask & other.mask == self.mask

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.mask == self.mask)

    def __hash__(self):
        return hash((id(self.parent), self.mask))

    @property
    def sort_key(self):
        if self._lex is None:
            self._lex = lex_key(self.mask, self.parent.order)
        return (self.order, self._lex)

    def is_trivial(self) -> bool:
        return self.mask == 1

    def is_whole(self) -> bool:
        return self.order == self.parent.order

    def __repr__(self):
        if self.order <= 8:
            body = "{" + ",".join(map(str, self.members())) + "}"
        else:
            body = f"#{self.order}"
        return f"<Subgroup {body} of {self.parent.name or 'G'}>"


def trivial_subgroup(g: Group) -> Subgroup:
    return Subgroup(g, 1)


def whole_subgroup(g: Group) -> Subgroup:
    return Subgroup(g, g.full_mask())


def generated_subgroup(g: Group, seed) -> Subgroup:
    """Smallest subgroup containing the seed elements."""
    mask = 0
    for x in seed:
        mask |= 1 << x
    return Subgroup(g, kernels.closure(g.flat, g.order, mask))


def product_mask(g: Group, a_mask: int, b_mask: int) -> int:
    return kernels.product(g.flat, g.order, a_mask, b_mask)


def product_set(h: Subgroup, k: Subgroup) -> frozenset[int]:
    """The set {h*k}; a subgroup exactly when h and k permute."""
    _same_parent(h, k)
    g = h.parent
    return frozenset(kernels.iter_bits(product_mask(g, h.mask, k.mask)))


def permutes(h: Subgroup, k: Subgroup) -> bool:
    """True iff HK == KH as sets (equivalently HK is a subgroup)."""
    _same_parent(h, k)
    g = h.parent
    if h.mask & k.mask in (h.mask, k.mask):  # nested subgroups
        return True
    if is_normal_mask(g, h.mask) or is_normal_mask(g, k.mask):
        return True
    return (product_mask(g, h.mask, k.mask)
            == product_mask(g, k.mask, h.mask))


def _same_parent(h, k):
    if h.parent is not k.parent:
        raise ValueError("subgroups have different parents")


# -- normality ---------------------------------------------------------------


def is_normal_mask(g: Group, mask: int) -> bool:
    flags = g._cache.setdefault("normal_mask", {})
    hit = flags.get(mask)
    if hit is not None:
        return hit
    if mask == 1 or mask == g.full_mask() or g.is_abelian():
        out = True
    else:
        out = True
        for x in range(1, g.order):
            if kernels.conjugate(g.flat, g.inv_arr, g.order, mask, x) != mask:
                out = False
                break
    flags[mask] = out
    return out


def is_normal(g: Group, h: Subgroup) -> bool:
    return is_normal_mask(g, h.mask)


def core_of(g: Group, h: Subgroup) -> Subgroup:
    """Largest normal subgroup of g inside h (intersection of conjugates)."""
    if is_normal_mask(g, h.mask):
        return h
    m = h.mask
    for x in range(1, g.order):
        if m == 1:
            break
        m &= kernels.conjugate(g.flat, g.inv_arr, g.order, h.mask, x)
    return Subgroup(g, m)


def normal_closure(g: Group, h: Subgroup) -> Subgroup:
    """Smallest normal subgroup of g containing h."""
    union = h.mask
    for x in range(1, g.order):
        union |= kernels.conjugate(g.flat, g.inv_arr, g.order, h.mask, x)
    return Subgroup(g, kernels.closure(g.flat, g.order, union))


def normalizer(g: Group, h: Subgroup) -> Subgroup:
    return Subgroup(g, kernels.normalizer(g.flat, g.inv_arr, g.order, h.mask))


def centralizer_of_set(g: Group, elements) -> Subgroup:
    mask = 0
    for x in elements:
        mask |= 1 << x
    if mask == 0:
        return whole_subgroup(g)
    return Subgroup(g, kernels.centralizer(g.flat, g.order, mask))


def is_subnormal(g: Group, h: Subgroup) -> bool:
    """Descending normal-closure chain from g stabilizes at h."""
    cur = g.full_mask()
    while True:
        nxt = _closure_of_conjugates(g, h.mask, cur)
        if nxt == h.mask:
            return True
        if nxt == cur:
            return False
        cur = nxt


def _closure_of_conjugates(g: Group, h_mask: int, ambient: int) -> int:
    union = h_mask
    m = ambient
    while m:
        low = m & -m
        x = low.bit_length() - 1
        m ^= low
        union |= kernels.conjugate(g.flat, g.inv_arr, g.order, h_mask, x)
    return kernels.closure(g.flat, g.order, union)


# -- full lattice -------------------------------------------------------------


class SubgroupLattice:
    """All subgroups of a group, with lazily computed per-entry flags."""

    def __init__(self, group: Group, subgroups: list[Subgroup]):
        self.group = group
        self.subgroups = subgroups
        self.index = {h.mask: i for i, h in enumerate(subgroups)}
        self._normal = None
        self._sqn = None
        self._qn = None
        self._sylow = {}

    def __len__(self):
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def subgroup(self, mask: int) -> Subgroup:
        return self.subgroups[self.index[mask]]

    def normal_flags(self) -> list[bool]:
        if self._normal is None:
            g = self.group
            self._normal = [is_normal_mask(g, h.mask) for h in self.subgroups]
        return self._normal

    def sylow(self, p: int) -> list[Subgroup]:
        hit = self._sylow.get(p)
        if hit is None:
            part = self.group.p_part(p)
            hit = [h for h in self.subgroups if h.order == part]
            self._sylow[p] = hit
        return hit

    def all_sylows(self) -> list[Subgroup]:
        out = []
        for p in self.group.primes():
            out.extend(self.sylow(p))
        return out

    def sqn_flags(self) -> list[bool]:
        if self._sqn is None:
            g = self.group
            normal = self.normal_flags()
            sylows = self.all_sylows()
            flags = []
            for i, h in enumerate(self.subgroups):
                if normal[i]:
                    flags.append(True)
                    continue
                flags.append(all(permutes(h, p) for p in sylows))
            self._sqn = flags
        return self._sqn

    def qn_flags(self) -> list[bool]:
        if self._qn is None:
            normal = self.normal_flags()
            flags = []
            for i, h in enumerate(self.subgroups):
                if normal[i]:
                    flags.append(True)
                    continue
                flags.append(all(permutes(h, k) for k in self.subgroups))
            self._qn = flags
        return self._qn

    def s_quasinormal_subgroups(self) -> list[Subgroup]:
        flags = self.sqn_flags()
        return [h for i, h in enumerate(self.subgroups) if flags[i]]

    def quasinormal_subgroups(self) -> list[Subgroup]:
        flags = self.qn_flags()
        return [h for i, h in enumerate(self.subgroups) if flags[i]]

    def restrict(self, mask: int) -> list[Subgroup]:
        """Members contained in the given mask."""
        return [h for h in self.subgroups if h.mask & mask == h.mask]


def all_subgroups(g: Group, lattice_cap: int | None = None,
                  count_cap: int | None = None) -> SubgroupLattice:
    """Complete subgroup lattice by breadth-first single-element extension."""
    cached = g._cache.get("lattice")
    if cached is not None:
        return cached
    cap = DEFAULT_LATTICE_CAP if lattice_cap is None else lattice_cap
    ccap = DEFAULT_SUBGROUP_COUNT_CAP if count_cap is None else count_cap
    if g.order > cap:
        raise LatticeCapExceeded(g.order, cap)
    n = g.order
    flat = g.flat
    cyc = [kernels.closure(flat, n, 1 << x) for x in range(n)]
    seen = set(cyc)
    seen.add(1)
    queue = list(seen)
    head = 0
    while head < len(queue):
        h = queue[head]
        head += 1
        if h == g.full_mask():
            continue
        tried = set()
        for x in range(1, n):
            if (h >> x) & 1:
                continue
            c = cyc[x]
            if c in tried:
                continue
            tried.add(c)
            k = kernels.closure(flat, n, h | c)
            if k not in seen:
                seen.add(k)
                if len(seen) > ccap:
                    raise SubgroupCountCapExceeded(ccap)
                queue.append(k)
    subs = [Subgroup(g, m) for m in seen]
    subs.sort(key=lambda s: s.sort_key)
    lattice = SubgroupLattice(g, subs)
    g._cache["lattice"] = lattice
    return lattice


def lattice_from_masks(g: Group, masks) -> SubgroupLattice:
    """Rebuild a lattice from stored masks (cache loading)."""
    subs = [Subgroup(g, m) for m in masks]
    subs.sort(key=lambda s: s.sort_key)
    lattice = SubgroupLattice(g, subs)
    g._cache["lattice"] = lattice
    return lattice


def normal_subgroups(g: Group, count_cap: int | None = None) -> list[Subgroup]:
    """All normal subgroups, without the full lattice.

    Atoms are the closures of single conjugacy classes; every normal
    subgroup is a join of atoms, and joins of normal subgroups are their
    product sets, so a breadth-first extension by atoms is complete.
    """
    cached = g._cache.get("normals")
    if cached is not None:
        return cached
    ccap = DEFAULT_SUBGROUP_COUNT_CAP if count_cap is None else count_cap
    n = g.order
    flat = g.flat
    atoms = []
    atom_seen = set()
    for cls in conjugacy_classes(g)[1:]:
        mask = 0
        for x in cls:
            mask |= 1 << x
        closed = kernels.closure(flat, n, mask)
        if closed not in atom_seen:
            atom_seen.add(closed)
            atoms.append(closed)
    seen = {1}
    queue = [1]
    head = 0
    while head < len(queue):
        h = queue[head]
        head += 1
        for a in atoms:
            if a & h == a:
                continue
            k = kernels.product(flat, n, h, a)
            if k not in seen:
                seen.add(k)
                if len(seen) > ccap:
                    raise SubgroupCountCapExceeded(ccap)
                queue.append(k)
    subs = [Subgroup(g, m) for m in seen]
    subs.sort(key=lambda s: s.sort_key)
    g._cache["normals"] = subs
    return subs


def minimal_normal_above(g: Group, floor_mask: int,
                         ceiling_mask: int | None = None) -> list[Subgroup]:
    """Inclusion-minimal normal subgroups of g strictly above the floor
    (and inside the ceiling when given), sorted deterministically.

    Candidates are closures of floor + one conjugacy class; every minimal
    normal overgroup arises this way.
    """
    n = g.order
    flat = g.flat
    ceiling = g.full_mask() if ceiling_mask is None else ceiling_mask
    cands = set()
    for cls in conjugacy_classes(g):
        x = cls[0]
        if (floor_mask >> x) & 1 or not (ceiling >> x) & 1:
            continue
        mask = floor_mask
        for y in cls:
            mask |= 1 << y
        k = kernels.closure(flat, n, mask)
        if k & ceiling == k:
            cands.add(k)
    minimal = [m for m in cands
               if not any(c != m and c & m == c for c in cands)]
    subs = [Subgroup(g, m) for m in minimal]
    subs.sort(key=lambda s: s.sort_key)
    return subs


# -- Hall and named subgroups --------------------------------------------------


def hall_subgroups(g: Group, pi, lattice_cap: int | None = None) -> list[Subgroup]:
    """Subgroups whose order is the full pi-part of |g| (possibly none)."""
    lattice = all_subgroups(g, lattice_cap=lattice_cap)
    part = g.pi_part(set(pi))
    return [h for h in lattice.subgroups if h.order == part]


def maximal_subgroups(g: Group, p_sub: Subgroup,
                      lattice_cap: int | None = None) -> list[Subgroup]:
    """Maximal subgroups of p_sub viewed as a group.

    For prime-power order the maximal subgroups are exactly those of index
    p; otherwise a containment scan over the lattice is used.
    """
    if p_sub.order == 1:
        return []
    lattice = all_subgroups(g, lattice_cap=lattice_cap)
    inside = [h for h in lattice.restrict(p_sub.mask) if h.order < p_sub.order]
    fact = [pk for pk in _factor_cache(p_sub.order)]
    if len(fact) == 1:
        p = fact[0][0]
        want = p_sub.order // p
        return [h for h in inside if h.order == want]
    out = []
    for h in inside:
        if not any(h.mask != k.mask and h.mask & k.mask == h.mask
                   for k in inside):
            out.append(h)
    return out


def _factor_cache(n):
    from .groups import factorize

    return factorize(n)


def _nilpotent_mask(g: Group, mask: int) -> bool:
    """Nilpotency of a subgroup: for each prime, its elements of prime-power
    order must form a (then automatically normal) subgroup."""
    order = mask.bit_count()
    for p, _ in _factor_cache(order):
        pmask = 0
        m = mask
        while m:
            low = m & -m
            x = low.bit_length() - 1
            m ^= low
            o = g.elem_order[x]
            while o % p == 0:
                o //= p
            if o == 1:
                pmask |= low
        if not kernels.is_closed(g.flat, g.order, pmask):
            return False
    return True


def named_subgroup(g: Group, tag: str, p: int | None = None,
                   lattice_cap: int | None = None) -> Subgroup:
    """Characteristic subgroups by name.

    Tags: center, frattini, fitting, O_p, O_p', O^p, O_{p',p}. The last
    four take the prime p. Only frattini needs the full lattice.
    """
    n = g.order
    flat = g.flat
    if tag == "center":
        return Subgroup(g, kernels.centralizer(flat, n, g.full_mask()))
    if tag == "frattini":
        maxes = maximal_subgroups(g, whole_subgroup(g), lattice_cap=lattice_cap)
        m = g.full_mask()
        for h in maxes:
            m &= h.mask
        return Subgroup(g, m)
    if tag == "fitting":
        out = 1
        for a in _normal_atoms(g):
            if _nilpotent_mask(g, a):
                out = kernels.product(flat, n, out, a)
        # the join of nilpotent normal subgroups is nilpotent
        return Subgroup(g, out)
    if tag == "O_p":
        _need_p(p)
        out = 1
        for a in _normal_atoms(g):
            if _is_p_power(a.bit_count(), p):
                out = kernels.product(flat, n, out, a)
        return Subgroup(g, out)
    if tag == "O_p'":
        _need_p(p)
        out = 1
        for a in _normal_atoms(g):
            if a.bit_count() % p != 0:
                out = kernels.product(flat, n, out, a)
        return Subgroup(g, out)
    if tag == "O^p":
        _need_p(p)
        # the elements of order coprime to p generate the smallest normal
        # subgroup with p-group quotient
        full = 1
        for x in range(n):
            if g.elem_order[x] % p != 0:
                full |= 1 << x
        return Subgroup(g, kernels.closure(flat, n, full))
    if tag == "O_{p',p}":
        _need_p(p)
        from .quotients import pull_back, quotient

        opp = named_subgroup(g, "O_p'", p=p)
        q = quotient(g, opp)
        top = named_subgroup(q.target, "O_p", p=p)
        return pull_back(q, top)
    raise ValueError(f"unknown named subgroup tag {tag!r}")


def _need_p(p):
    if p is None:
        raise ValueError("this tag requires a prime p")


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _normal_atoms(g: Group) -> list[int]:
    atoms = g._cache.get("normal_atoms")
    if atoms is None:
        n = g.order
        seen = set()
        atoms = []
        for cls in conjugacy_classes(g)[1:]:
            mask = 0
            for x in cls:
                mask |= 1 << x
            closed = kernels.closure(g.flat, n, mask)
            if closed not in seen:
                seen.add(closed)
                atoms.append(closed)
        g._cache["normal_atoms"] = atoms
    return atoms


__all__ = [
    "Subgroup",
    "SubgroupLattice",
    "all_subgroups",
    "centralizer_of_set",
    "core_of",
    "generated_subgroup",
    "hall_subgroups",
    "is_normal",
    "is_subnormal",
    "lex_key",
    "maximal_subgroups",
    "minimal_normal_above",
    "named_subgroup",
    "normal_closure",
    "normal_subgroups",
    "normalizer",
    "permutes",
    "product_set",
    "trivial_subgroup",
    "whole_subgroup",
]
