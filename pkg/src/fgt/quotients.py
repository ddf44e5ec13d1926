"""Quotient groups with the canonical projection and subgroup transport."""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import NotNormal
from .groups import Group
from .subgroups import Subgroup, is_normal_mask


class QuotientMap:
    """G -> G/N with coset bookkeeping.

    Cosets are numbered by ascending smallest member, so the construction
    is canonical: quotienting the same group by the same kernel twice gives
    identical tables.
    """

    __slots__ = ("source", "kernel", "target", "proj", "coset_reps")

    def __init__(self, source: Group, kernel: Subgroup, target: Group,
                 proj: tuple, coset_reps: tuple):
        self.source = source
        self.kernel = kernel
        self.target = target
        self.proj = proj
        self.coset_reps = coset_reps

    def __repr__(self):
        return (f"<QuotientMap {self.source.name or 'G'}/"
                f"N{self.kernel.order} -> order {self.target.order}>")


def quotient(g: Group, n_sub: Subgroup) -> QuotientMap:
    """Quotient by a normal subgroup."""
    cache = g._cache.setdefault("quotients", {})
    hit = cache.get(n_sub.mask)
    if hit is not None:
        return hit
    if not is_normal_mask(g, n_sub.mask):
        raise NotNormal(f"subgroup of order {n_sub.order} is not normal")
    if n_sub.mask == 1:
        # cosets of the trivial subgroup are singletons in ascending order,
        # so the quotient is the group itself; sharing the instance keeps
        # its caches
        m = QuotientMap(g, n_sub, g, tuple(range(g.order)),
                        tuple(range(g.order)))
        cache[1] = m
        return m
    n = g.order
    proj = [-1] * n
    reps = []
    for x in range(n):
        if proj[x] >= 0:
            continue
        coset = kernels.product(g.flat, n, 1 << x, n_sub.mask)
        idx = len(reps)
        reps.append(x)
        for y in kernels.iter_bits(coset):
            proj[y] = idx
    q = len(reps)
    table = [[proj[g.table[reps[a]][reps[b]]] for b in range(q)]
             for a in range(q)]
    labels = None
    if g.labels is not None:
        labels = [f"{g.label(r)}*N" for r in reps]
    target = Group(table, labels=labels,
                   name=f"{g.name or 'G'}/N{n_sub.order}",
                   table_cap=g.order, _assume_assoc=True)
    m = QuotientMap(g, n_sub, target, tuple(proj), tuple(reps))
    _check_homomorphism(m)
    cache[n_sub.mask] = m
    return m


def _check_homomorphism(m: QuotientMap) -> None:
    # proj[a*b] == proj[a]*proj[b] over all pairs certifies the coset table
    # (and with it associativity of the quotient, inherited from the source).
    t = np.asarray(m.source.table)
    q = np.asarray(m.target.table)
    p = np.asarray(m.proj)
    if not np.array_equal(p[t], q[p[:, None], p[None, :]]):
        raise NotNormal("projection is not a homomorphism")


def push_forward(m: QuotientMap, h: Subgroup) -> Subgroup:
    """Image HN/N in the quotient."""
    out = 0
    for x in kernels.iter_bits(h.mask):
        out |= 1 << m.proj[x]
    return Subgroup(m.target, out)


def pull_back(m: QuotientMap, k: Subgroup) -> Subgroup:
    """Preimage in the source; always contains the kernel."""
    out = 0
    for x in range(m.source.order):
        if (k.mask >> m.proj[x]) & 1:
            out |= 1 << x
    return Subgroup(m.source, out)
