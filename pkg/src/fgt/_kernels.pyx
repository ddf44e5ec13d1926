# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled bitmask kernels. Same signatures and semantics as _kernels_py."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset


cdef inline int _unpack(object mask, Py_ssize_t n,
                        unsigned char* memb, int* elems) except -1:
    # Expand a Python int bitmask into a 0/1 byte array and an element list.
    cdef bytes raw = mask.to_bytes((n + 7) // 8, "little")
    cdef const unsigned char* p = raw
    cdef Py_ssize_t i
    cdef int count = 0
    memset(memb, 0, n)
    for i in range(n):
        if p[i >> 3] & (1 << (i & 7)):
            memb[i] = 1
            if elems != NULL:
                elems[count] = <int>i
            count += 1
    return count


cdef inline object _pack(unsigned char* memb, Py_ssize_t n):
    cdef bytearray raw = bytearray((n + 7) // 8)
    cdef Py_ssize_t i
    for i in range(n):
        if memb[i]:
            raw[i >> 3] |= 1 << (i & 7)
    return int.from_bytes(bytes(raw), "little")


def closure(const int[::1] table, Py_ssize_t n, object seed_mask):
    """Subgroup generated by the elements of ``seed_mask``."""
    cdef unsigned char* memb = <unsigned char*>malloc(n)
    cdef int* gens = <int*>malloc(n * sizeof(int))
    cdef int* elems = <int*>malloc(n * sizeof(int))
    if memb == NULL or gens == NULL or elems == NULL:
        free(memb); free(gens); free(elems)
        raise MemoryError()
    cdef int ngens, count, head, i, e, p
    try:
        ngens = _unpack(seed_mask & ~1, n, memb, gens)
        memset(memb, 0, n)
        memb[0] = 1
        elems[0] = 0
        count = 1
        head = 0
        while head < count:
            e = elems[head]
            head += 1
            for i in range(ngens):
                p = table[gens[i] * n + e]
                if not memb[p]:
                    memb[p] = 1
                    elems[count] = p
                    count += 1
        return _pack(memb, n)
    finally:
        free(memb); free(gens); free(elems)


def product(const int[::1] table, Py_ssize_t n, object a_mask, object b_mask):
    """Product set {a*b : a in A, b in B} as a mask."""
    cdef unsigned char* memb = <unsigned char*>malloc(3 * n)
    cdef int* aa = <int*>malloc(n * sizeof(int))
    cdef int* bb = <int*>malloc(n * sizeof(int))
    if memb == NULL or aa == NULL or bb == NULL:
        free(memb); free(aa); free(bb)
        raise MemoryError()
    cdef unsigned char* out = memb + n
    cdef int na, nb, i, j, row
    try:
        na = _unpack(a_mask, n, memb, aa)
        nb = _unpack(b_mask, n, memb, bb)
        memset(out, 0, n)
        for i in range(na):
            row = aa[i] * n
            for j in range(nb):
                out[table[row + bb[j]]] = 1
        return _pack(out, n)
    finally:
        free(memb); free(aa); free(bb)


def conjugate(const int[::1] table, const int[::1] inv, Py_ssize_t n,
              object mask, int g):
    """Conjugate set g^-1 * H * g."""
    cdef unsigned char* memb = <unsigned char*>malloc(2 * n)
    cdef int* elems = <int*>malloc(n * sizeof(int))
    if memb == NULL or elems == NULL:
        free(memb); free(elems)
        raise MemoryError()
    cdef unsigned char* out = memb + n
    cdef int count, i, gi
    try:
        count = _unpack(mask, n, memb, elems)
        memset(out, 0, n)
        gi = inv[g]
        for i in range(count):
            out[table[table[gi * n + elems[i]] * n + g]] = 1
        return _pack(out, n)
    finally:
        free(memb); free(elems)


def is_closed(const int[::1] table, Py_ssize_t n, object mask):
    """True when the set contains the identity and is product-closed."""
    if not mask & 1:
        return False
    cdef unsigned char* memb = <unsigned char*>malloc(n)
    cdef int* elems = <int*>malloc(n * sizeof(int))
    if memb == NULL or elems == NULL:
        free(memb); free(elems)
        raise MemoryError()
    cdef int count, i, j, row
    try:
        count = _unpack(mask, n, memb, elems)
        for i in range(count):
            row = elems[i] * n
            for j in range(count):
                if not memb[table[row + elems[j]]]:
                    return False
        return True
    finally:
        free(memb); free(elems)


def element_class(const int[::1] table, const int[::1] inv, Py_ssize_t n, int x):
    """Conjugacy class of x as a mask."""
    cdef unsigned char* out = <unsigned char*>malloc(n)
    if out == NULL:
        raise MemoryError()
    cdef int g
    try:
        memset(out, 0, n)
        for g in range(n):
            out[table[table[inv[g] * n + x] * n + g]] = 1
        return _pack(out, n)
    finally:
        free(out)


def centralizer(const int[::1] table, Py_ssize_t n, object mask):
    """Elements commuting with every element of the set."""
    cdef unsigned char* memb = <unsigned char*>malloc(2 * n)
    cdef int* elems = <int*>malloc(n * sizeof(int))
    if memb == NULL or elems == NULL:
        free(memb); free(elems)
        raise MemoryError()
    cdef unsigned char* out = memb + n
    cdef int count, g, i, row, ok
    try:
        count = _unpack(mask, n, memb, elems)
        memset(out, 0, n)
        for g in range(n):
            row = g * n
            ok = 1
            for i in range(count):
                if table[row + elems[i]] != table[elems[i] * n + g]:
                    ok = 0
                    break
            if ok:
                out[g] = 1
        return _pack(out, n)
    finally:
        free(memb); free(elems)


def normalizer(const int[::1] table, const int[::1] inv, Py_ssize_t n, object mask):
    """Elements g with g^-1 * H * g == H."""
    cdef unsigned char* memb = <unsigned char*>malloc(2 * n)
    cdef int* elems = <int*>malloc(n * sizeof(int))
    if memb == NULL or elems == NULL:
        free(memb); free(elems)
        raise MemoryError()
    cdef unsigned char* out = memb + n
    cdef int count, g, i, gi, ok
    try:
        count = _unpack(mask, n, memb, elems)
        memset(out, 0, n)
        for g in range(n):
            gi = inv[g]
            ok = 1
            for i in range(count):
                if not memb[table[table[gi * n + elems[i]] * n + g]]:
                    ok = 0
                    break
            if ok:
                out[g] = 1
        return _pack(out, n)
    finally:
        free(memb); free(elems)


def commutators(const int[::1] table, const int[::1] inv, Py_ssize_t n, object mask):
    """Set of commutators a^-1 b^-1 a b over pairs from the set (not closed)."""
    cdef unsigned char* memb = <unsigned char*>malloc(2 * n)
    cdef int* elems = <int*>malloc(n * sizeof(int))
    if memb == NULL or elems == NULL:
        free(memb); free(elems)
        raise MemoryError()
    cdef unsigned char* out = memb + n
    cdef int count, i, j, a, ai
    try:
        count = _unpack(mask, n, memb, elems)
        memset(out, 0, n)
        out[0] = 1
        for i in range(count):
            a = elems[i]
            ai = inv[a]
            for j in range(count):
                out[table[table[table[ai * n + inv[elems[j]]] * n + a] * n + elems[j]]] = 1
        return _pack(out, n)
    finally:
        free(memb); free(elems)
