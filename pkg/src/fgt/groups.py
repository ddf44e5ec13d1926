"""Concrete finite groups as dense multiplication tables.

Elements are indices 0..order-1 with the identity fixed at index 0. A Group
is immutable after construction and validated against the group axioms:
identity, Latin square, associativity, inverses, and Lagrange consistency
of element orders.
"""

from __future__ import annotations

import hashlib
from array import array

import numpy as np

from . import kernels
from .errors import (
    InvalidPermutation,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotClosed,
    NotLatinSquare,
    OrderCapExceeded,
)

DEFAULT_TABLE_CAP = 4096

# Above this order the full n^3 associativity scan is replaced by Light's
# test on a generating set, which is exact once the set generates the magma.
_FULL_ASSOC_LIMIT = 256


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as (prime, multiplicity) pairs, ascending."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


class Group:
    """A finite group given by its full multiplication table."""

    __slots__ = (
        "order",
        "table",
        "inverse",
        "elem_order",
        "prime_factorization",
        "labels",
        "name",
        "perms",
        "n_points",
        "flat",
        "inv_arr",
        "table_cap",
        "_key",
        "_cache",
    )

    def __init__(self, table, labels=None, name=None, perms=None,
                 n_points=None, table_cap=None, _assume_assoc=False):
        cap = DEFAULT_TABLE_CAP if table_cap is None else table_cap
        n = len(table)
        if n < 1:
            raise NoIdentity("empty table")
        if n > cap:
            raise OrderCapExceeded(n, cap)
        flat = _validate_table(table, n, assume_assoc=_assume_assoc)
        self.order = n
        self.table_cap = cap
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.flat = flat
        self.inverse = _compute_inverses(self.table, n)
        self.inv_arr = array("i", self.inverse)
        self.elem_order = _compute_elem_orders(self.table, n)
        self.prime_factorization = factorize(n)
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("labels length does not match order")
        self.name = name
        self.perms = tuple(perms) if perms is not None else None
        self.n_points = n_points
        self._key = None
        self._cache = {}

    # -- basic accessors ---------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def primes(self) -> list[int]:
        return [p for p, _ in self.prime_factorization]

    def p_part(self, p: int) -> int:
        for q, k in self.prime_factorization:
            if q == p:
                return q**k
        return 1

    def pi_part(self, pi) -> int:
        out = 1
        for q, k in self.prime_factorization:
            if q in pi:
                out *= q**k
        return out

    def exponent(self) -> int:
        out = 1
        for k in set(self.elem_order):
            out = out * k // _gcd(out, k)
        return out

    def is_abelian(self) -> bool:
        flag = self._cache.get("abelian")
        if flag is None:
            t = self.table
            flag = all(t[a][b] == t[b][a]
                       for a in range(self.order) for b in range(a))
            self._cache["abelian"] = flag
        return flag

    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @property
    def key(self) -> str:
        """Content hash of the table; used for cache addressing."""
        if self._key is None:
            h = hashlib.sha256()
            h.update(b"fgt-group-v1")
            h.update(self.order.to_bytes(4, "little"))
            h.update(np.asarray(self.table, dtype=np.uint16).tobytes())
            self._key = h.hexdigest()
        return self._key

    def label(self, a: int) -> str:
        if self.labels is not None:
            return self.labels[a]
        return str(a)

    def __repr__(self):
        name = self.name or "group"
        return f"<Group {name} order {self.order}>"

    def fingerprint(self):
        """Isomorphism-invariant tuple used for corpus deduplication.

        Collisions may retain isomorphic duplicates; that is harmless for
        verification purposes.
        """
        fp = self._cache.get("fingerprint")
        if fp is None:
            classes = conjugacy_classes(self)
            fp = (
                self.order,
                self.exponent(),
                self.is_abelian(),
                tuple(sorted(len(c) for c in classes)),
                tuple(sorted(self.elem_order)),
            )
            self._cache["fingerprint"] = fp
        return fp

    def to_json_dict(self) -> dict:
        d = {"order": self.order, "table": [list(row) for row in self.table]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d


# -- validation ------------------------------------------------------------


def _validate_table(table, n, assume_assoc=False):
    try:
        t = np.asarray(table, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise NotClosed(f"table is not a square integer array: {exc}")
    if t.shape != (n, n):
        raise NotClosed(f"table shape {t.shape} is not ({n}, {n})")
    if t.min() < 0 or t.max() >= n:
        bad = t.ravel()[int(np.argmax((t < 0) | (t >= n)))]
        raise NotClosed(f"entry {bad} out of range")
    t = t.astype(np.int32)
    rng = np.arange(n, dtype=np.int32)
    if not (np.array_equal(t[0], rng) and np.array_equal(t[:, 0], rng)):
        raise NoIdentity("index 0 is not a two-sided identity")
    if not ((np.sort(t, axis=1) == rng).all()
            and (np.sort(t, axis=0) == rng[:, None]).all()):
        raise NotLatinSquare("rows and columns must be permutations")
    flat = array("i")
    flat.frombytes(t.tobytes())
    if not assume_assoc:
        if n <= _FULL_ASSOC_LIMIT:
            _check_assoc_full(t, n)
        else:
            _check_assoc_light(flat, t, n)
    return flat


def _check_assoc_full(t, n):
    for a in range(n):
        left = t[t[a], :]
        right = t[a][t]
        if not np.array_equal(left, right):
            b, c = np.argwhere(left != right)[0]
            raise NotAssociative((a, int(b), int(c)))


def _check_assoc_light(flat, t, n):
    # Greedy generating set, then Light's associativity test: checking
    # a*(s*c) == (a*s)*c for all a, c and s in a generating set is exact.
    gens = []
    mask = 1
    for g in range(1, n):
        if not (mask >> g) & 1:
            gens.append(g)
            mask = kernels.closure(flat, n, mask | (1 << g))
            if mask == (1 << n) - 1:
                break
    for s in gens:
        left = t[t[:, s], :]
        right = t[:, t[s, :]]
        if not np.array_equal(left, right):
            a, c = np.argwhere(left != right)[0]
            raise NotAssociative((int(a), s, int(c)))


def _compute_inverses(table, n):
    inv = [0] * n
    for a in range(n):
        inv[a] = table[a].index(0)
    return tuple(inv)


def _compute_elem_orders(table, n):
    orders = [1] * n
    for a in range(1, n):
        x = a
        k = 1
        while x != 0:
            x = table[x][a]
            k += 1
        if n % k != 0:
            raise NotAssociative((a, a, a))
        orders[a] = k
    return tuple(orders)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# -- builders ----------------------------------------------------------------


def build_from_table(table, labels=None, name=None, table_cap=None) -> Group:
    """Validate an explicit multiplication table."""
    return Group(table, labels=labels, name=name, table_cap=table_cap)


def group_from_json(d: dict, table_cap=None) -> Group:
    return build_from_table(d["table"], labels=d.get("labels"),
                            name=d.get("name"), table_cap=table_cap)


def identity_perm(n: int) -> tuple:
    return tuple(range(n))


def perm_mul(a, b):
    """Composition (a*b)(i) = a(b(i))."""
    return tuple(a[b[i]] for i in range(len(a)))


def perm_inv(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def cycle_string(p) -> str:
    """Cycle notation with 1-based points; identity rendered as ()."""
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = p[j]
        parts.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) if parts else "()"


def parse_cycles(text: str, n_points: int | None = None):
    """Parse 1-based cycle notation like ``(1 2 3)(4 5)`` into an image tuple."""
    text = text.strip()
    cycles = []
    i = 0
    maxpt = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace() or ch == ",":
            i += 1
            continue
        if ch != "(":
            raise InvalidPermutation(f"unexpected {ch!r} in cycles {text!r}")
        j = text.index(")", i)
        body = text[i + 1:j].replace(",", " ").split()
        pts = [int(x) for x in body]
        if any(x < 1 for x in pts) or len(set(pts)) != len(pts):
            raise InvalidPermutation(f"bad cycle {text[i:j + 1]!r}")
        if pts:
            cycles.append(pts)
            maxpt = max(maxpt, max(pts))
        i = j + 1
    n = n_points if n_points is not None else maxpt
    if n_points is not None and maxpt > n_points:
        raise InvalidPermutation("cycle uses a point beyond n_points")
    img = list(range(max(n, 1)))
    for cyc in cycles:
        for k, pt in enumerate(cyc):
            img[pt - 1] = cyc[(k + 1) % len(cyc)] - 1
    return tuple(img)


def build_from_permutations(generators, n_points=None, name=None,
                            table_cap=None) -> Group:
    """Close a set of permutations under composition.

    Element order is the breadth-first discovery order starting from the
    identity, so it is deterministic given the generator order.
    """
    cap = DEFAULT_TABLE_CAP if table_cap is None else table_cap
    gens = []
    npts = n_points or 1
    for g in generators:
        if isinstance(g, str):
            g = parse_cycles(g)
        g = tuple(int(x) for x in g)
        npts = max(npts, len(g))
        gens.append(g)
    gens = [g + tuple(range(len(g), npts)) for g in gens]
    for g in gens:
        if sorted(g) != list(range(npts)):
            raise InvalidPermutation(f"{g} is not a permutation")
    ident = identity_perm(npts)
    elems = [ident]
    index = {ident: 0}
    head = 0
    while head < len(elems):
        e = elems[head]
        head += 1
        for g in gens:
            p = perm_mul(e, g)
            if p not in index:
                if len(elems) >= cap:
                    raise OrderCapExceeded(len(elems) + 1, cap,
                                           what="permutation closure")
                index[p] = len(elems)
                elems.append(p)
    n = len(elems)
    table = [[index[perm_mul(a, b)] for b in elems] for a in elems]
    return Group(table, labels=[cycle_string(p) for p in elems], name=name,
                 perms=elems, n_points=npts, table_cap=cap,
                 _assume_assoc=True)


def direct_product(a: Group, b: Group, name=None, table_cap=None) -> Group:
    cap = DEFAULT_TABLE_CAP if table_cap is None else table_cap
    n = a.order * b.order
    if n > cap:
        raise OrderCapExceeded(n, cap)
    nb = b.order
    ta, tb = a.table, b.table
    table = [[0] * n for _ in range(n)]
    for a1 in range(a.order):
        for b1 in range(nb):
            row = table[a1 * nb + b1]
            ra = ta[a1]
            rb = tb[b1]
            for a2 in range(a.order):
                base = ra[a2] * nb
                col = a2 * nb
                for b2 in range(nb):
                    row[col + b2] = base + rb[b2]
    labels = None
    if a.labels is not None and b.labels is not None:
        labels = [f"({la},{lb})" for la in a.labels for lb in b.labels]
    perms = None
    npts = None
    if a.perms is not None and b.perms is not None:
        npts = a.n_points + b.n_points
        off = a.n_points
        perms = [pa + tuple(x + off for x in pb)
                 for pa in a.perms for pb in b.perms]
        labels = [cycle_string(p) for p in perms]
    return Group(table, labels=labels, name=name, perms=perms,
                 n_points=npts, table_cap=cap)


# -- standard families -------------------------------------------------------


def cyclic(n: int, table_cap=None) -> Group:
    if n < 1:
        raise ValueError("cyclic order must be positive")
    cap = DEFAULT_TABLE_CAP if table_cap is None else table_cap
    if n > cap:
        raise OrderCapExceeded(n, cap)
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return Group(table, name=f"C({n})", table_cap=cap)


def dihedral(order: int, table_cap=None) -> Group:
    """Dihedral group of the given (even) order: rotations r^i, reflections r^i s."""
    if order < 2 or order % 2:
        raise ValueError("dihedral order must be even and >= 2")
    n = order // 2

    def idx(i, j):
        return i + n * j

    table = [[0] * order for _ in range(order)]
    for i in range(n):
        for j in (0, 1):
            row = table[idx(i, j)]
            for k in range(n):
                for m in (0, 1):
                    # (r^i s^j)(r^k s^m) = r^(i+k) s^m or r^(i-k) s^(1^m)
                    rot = (i - k) % n if j else (i + k) % n
                    row[idx(k, m)] = idx(rot, j ^ m)
    labels = [f"r{i}" for i in range(n)] + [f"r{i}s" for i in range(n)]
    return Group(table, labels=labels, name=f"D({order})",
                 table_cap=table_cap)


def dicyclic(order: int, table_cap=None) -> Group:
    """Dicyclic group of order 4n: <a, b | a^(2n)=1, b^2=a^n, b a b^-1 = a^-1>."""
    if order < 8 or order % 4:
        raise ValueError("dicyclic order must be a multiple of 4 and >= 8")
    n = order // 4
    m = 2 * n

    def idx(i, j):
        return i + m * j

    table = [[0] * order for _ in range(order)]
    for i in range(m):
        for j in (0, 1):
            row = table[idx(i, j)]
            for k in range(m):
                for l in (0, 1):
                    if j == 0:
                        out = idx((i + k) % m, l)
                    elif l == 0:
                        out = idx((i - k) % m, 1)
                    else:
                        out = idx((i - k + n) % m, 0)
                    row[idx(k, l)] = out
    return Group(table, name=f"Dic({order})", table_cap=table_cap)


def _perm_group_from_elements(elems, name, table_cap):
    cap = DEFAULT_TABLE_CAP if table_cap is None else table_cap
    n = len(elems)
    if n > cap:
        raise OrderCapExceeded(n, cap)
    index = {p: i for i, p in enumerate(elems)}
    table = [[index[perm_mul(a, b)] for b in elems] for a in elems]
    npts = len(elems[0]) if elems else 1
    return Group(table, labels=[cycle_string(p) for p in elems], name=name,
                 perms=list(elems), n_points=npts, table_cap=cap,
                 _assume_assoc=True)


def symmetric(k: int, table_cap=None) -> Group:
    """Symmetric group on k points; elements in lexicographic order."""
    import itertools
    import math

    if k < 1:
        raise ValueError("k must be positive")
    cap = DEFAULT_TABLE_CAP if table_cap is None else table_cap
    if math.factorial(k) > cap:
        raise OrderCapExceeded(math.factorial(k), cap)
    elems = [tuple(p) for p in itertools.permutations(range(k))]
    return _perm_group_from_elements(elems, f"S({k})", table_cap)


def alternating(k: int, table_cap=None) -> Group:
    """Alternating group on k points; even permutations in lexicographic order."""
    import itertools
    import math

    if k < 1:
        raise ValueError("k must be positive")
    cap = DEFAULT_TABLE_CAP if table_cap is None else table_cap
    size = 1 if k < 3 else math.factorial(k) // 2
    if size > cap:
        raise OrderCapExceeded(size, cap)
    elems = [tuple(p) for p in itertools.permutations(range(k))
             if _perm_sign(p) == 1]
    return _perm_group_from_elements(elems, f"A({k})", table_cap)


def _perm_sign(p):
    seen = [False] * len(p)
    sign = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def elementary_abelian(p: int, k: int, table_cap=None) -> Group:
    if k < 1 or p < 2 or factorize(p) != [(p, 1)]:
        raise ValueError("need a prime p and k >= 1")
    cap = DEFAULT_TABLE_CAP if table_cap is None else table_cap
    n = p**k
    if n > cap:
        raise OrderCapExceeded(n, cap)

    def add(a, b):
        out = 0
        mult = 1
        for _ in range(k):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    table = [[add(a, b) for b in range(n)] for a in range(n)]
    return Group(table, name=f"E({p},{k})", table_cap=cap)


def quaternion8(table_cap=None) -> Group:
    g = dicyclic(8, table_cap=table_cap)
    labels = ["1", "i", "-1", "-i", "j", "k", "-j", "-k"]
    return Group(g.table, labels=labels, name="Q8", table_cap=table_cap)


def special_linear_2_3(table_cap=None) -> Group:
    """SL(2,3): 2x2 matrices over F_3 with determinant 1."""
    mats = []
    for a in range(3):
        for b in range(3):
            for c in range(3):
                for d in range(3):
                    if (a * d - b * c) % 3 == 1:
                        mats.append((a, b, c, d))
    ident = (1, 0, 0, 1)
    mats.remove(ident)
    mats = [ident] + mats
    index = {m: i for i, m in enumerate(mats)}

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % 3, (a * f + b * h) % 3,
                (c * e + d * g) % 3, (c * f + d * h) % 3)

    table = [[index[mul(x, y)] for y in mats] for x in mats]
    labels = [f"[[{a},{b}],[{c},{d}]]" for a, b, c, d in mats]
    return Group(table, labels=labels, name="SL23", table_cap=table_cap)


def modular16(table_cap=None) -> Group:
    """Modular group of order 16: <a, b | a^8=b^2=1, b a b^-1 = a^5>."""
    def idx(i, j):
        return i + 8 * j

    table = [[0] * 16 for _ in range(16)]
    for i in range(8):
        for j in (0, 1):
            row = table[idx(i, j)]
            for k in range(8):
                for l in (0, 1):
                    # a^i b^j a^k b^l = a^(i + k*5^j) b^(j+l)
                    rot = (i + k * (5 if j else 1)) % 8
                    row[idx(k, l)] = idx(rot, j ^ l)
    return Group(table, name="M16", table_cap=table_cap)


# -- element structure -------------------------------------------------------


def conjugacy_classes(g: Group) -> list[list[int]]:
    """Partition of element indices into conjugacy classes.

    Classes are ordered by smallest member; the identity class [0] comes
    first.
    """
    classes = g._cache.get("classes")
    if classes is not None:
        return classes
    n = g.order
    seen = 0
    classes = []
    for x in range(n):
        if (seen >> x) & 1:
            continue
        mask = kernels.element_class(g.flat, g.inv_arr, n, x)
        seen |= mask
        classes.append([b for b in kernels.iter_bits(mask)])
    g._cache["classes"] = classes
    return classes


def check_group_invariants(g: Group) -> None:
    """Re-run every structural check on an existing instance.

    Raises the appropriate construction error on any violation; used by the
    invariant test suites.
    """
    _validate_table(g.table, g.order)
    for a in range(g.order):
        if g.table[a][g.inverse[a]] != 0:
            raise NoInverse(f"stored inverse wrong for {a}")
    for a in range(g.order):
        if g.order % g.elem_order[a] != 0:
            raise NotAssociative((a, a, a))


def subgroup_as_group(g: Group, mask: int):
    """Restriction of g to a subgroup mask, as a standalone Group.

    Returns (group, elems) where elems[i] is the parent index of element i.
    The mask must be closed; elements are taken in ascending parent order,
    so the result is deterministic.
    """
    if mask == g.full_mask():
        return g, list(range(g.order))
    cache = g._cache.setdefault("asgroup", {})
    hit = cache.get(mask)
    if hit is not None:
        return hit
    elems = list(kernels.iter_bits(mask))
    index = {e: i for i, e in enumerate(elems)}
    t = g.table
    table = [[index[t[a][b]] for b in elems] for a in elems]
    labels = [g.label(e) for e in elems] if g.labels is not None else None
    sub = Group(table, labels=labels,
                name=f"{g.name or 'G'}[{len(elems)}]",
                table_cap=g.order, _assume_assoc=True)
    out = (sub, elems)
    cache[mask] = out
    return out
