"""Pure-Python bitmask kernels.

Element sets are Python ints used as bit vectors (bit i = element i).
``table`` is the flat multiplication table (length n*n, row-major) and
``inv`` the inverse table. The compiled module fgt._kernels implements the
same signatures; parity between the two is covered by tests.
"""


def closure(table, n, seed_mask):
    """Subgroup generated by the elements of ``seed_mask``."""
    gens = []
    m = seed_mask & ~1
    while m:
        low = m & -m
        gens.append(low.bit_length() - 1)
        m ^= low
    mask = 1
    elems = [0]
    head = 0
    while head < len(elems):
        e = elems[head]
        head += 1
        for g in gens:
            p = table[g * n + e]
            b = 1 << p
            if not mask & b:
                mask |= b
                elems.append(p)
    return mask


def product(table, n, a_mask, b_mask):
    """Product set {a*b : a in A, b in B} as a mask."""
    out = 0
    bs = []
    m = b_mask
    while m:
        low = m & -m
        bs.append(low.bit_length() - 1)
        m ^= low
    m = a_mask
    while m:
        low = m & -m
        a = low.bit_length() - 1
        m ^= low
        row = a * n
        for b in bs:
            out |= 1 << table[row + b]
    return out


def conjugate(table, inv, n, mask, g):
    """Conjugate set g^-1 * H * g."""
    gi = inv[g]
    out = 0
    m = mask
    while m:
        low = m & -m
        h = low.bit_length() - 1
        m ^= low
        out |= 1 << table[table[gi * n + h] * n + g]
    return out


def is_closed(table, n, mask):
    """True when the set contains the identity and is product-closed."""
    if not mask & 1:
        return False
    elems = []
    m = mask
    while m:
        low = m & -m
        elems.append(low.bit_length() - 1)
        m ^= low
    for a in elems:
        row = a * n
        for b in elems:
            if not mask & (1 << table[row + b]):
                return False
    return True


def element_class(table, inv, n, x):
    """Conjugacy class of x as a mask."""
    out = 0
    for g in range(n):
        out |= 1 << table[table[inv[g] * n + x] * n + g]
    return out


def centralizer(table, n, mask):
    """Elements commuting with every element of the set."""
    elems = []
    m = mask
    while m:
        low = m & -m
        elems.append(low.bit_length() - 1)
        m ^= low
    out = 0
    for g in range(n):
        row = g * n
        for x in elems:
            if table[row + x] != table[x * n + g]:
                break
        else:
            out |= 1 << g
    return out


def normalizer(table, inv, n, mask):
    """Elements g with g^-1 * H * g == H."""
    out = 0
    for g in range(n):
        if conjugate(table, inv, n, mask, g) == mask:
            out |= 1 << g
    return out


def commutators(table, inv, n, mask):
    """Set of commutators a^-1 b^-1 a b over pairs from the set (not closed)."""
    elems = []
    m = mask
    while m:
        low = m & -m
        elems.append(low.bit_length() - 1)
        m ^= low
    out = 1
    for a in elems:
        ai = inv[a]
        for b in elems:
            c = table[table[table[ai * n + inv[b]] * n + a] * n + b]
            out |= 1 << c
    return out
