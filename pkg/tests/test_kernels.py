"""Kernel behaviour and compiled/pure parity."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fgt import _kernels_py, groups, kernels
from oracles import naive_closure, naive_product_set

compiled = pytest.importorskip("fgt._kernels")


def _sample_groups():
    return [groups.symmetric(4), groups.dihedral(12), groups.quaternion8(),
            groups.special_linear_2_3()]


def _random_masks(g, rng, count=25):
    masks = [1, g.full_mask()]
    for _ in range(count):
        seeds = rng.sample(range(g.order), rng.randint(1, 3))
        m = 1
        for s in seeds:
            m |= 1 << s
        masks.append(m)
        masks.append(kernels.closure(g.flat, g.order, m))
    return masks


def test_backend_parity():
    rng = random.Random(2024)
    for g in _sample_groups():
        n, flat, inv = g.order, g.flat, g.inv_arr
        for mask in _random_masks(g, rng):
            assert compiled.closure(flat, n, mask) == \
                _kernels_py.closure(flat, n, mask)
            assert compiled.is_closed(flat, n, mask) == \
                _kernels_py.is_closed(flat, n, mask)
            assert compiled.centralizer(flat, n, mask) == \
                _kernels_py.centralizer(flat, n, mask)
            assert compiled.normalizer(flat, inv, n, mask) == \
                _kernels_py.normalizer(flat, inv, n, mask)
            assert compiled.commutators(flat, inv, n, mask) == \
                _kernels_py.commutators(flat, inv, n, mask)
            g_el = rng.randrange(n)
            assert compiled.conjugate(flat, inv, n, mask, g_el) == \
                _kernels_py.conjugate(flat, inv, n, mask, g_el)
        other = _random_masks(g, rng, count=6)
        for a in other[:4]:
            for b in other[2:6]:
                assert compiled.product(flat, n, a, b) == \
                    _kernels_py.product(flat, n, a, b)
        for x in range(0, n, 5):
            assert compiled.element_class(flat, inv, n, x) == \
                _kernels_py.element_class(flat, inv, n, x)


def test_closure_matches_naive_oracle():
    rng = random.Random(99)
    for g in _sample_groups():
        for _ in range(12):
            seeds = rng.sample(range(g.order), rng.randint(0, 3))
            mask = 0
            for s in seeds:
                mask |= 1 << s
            got = kernels.closure(g.flat, g.order, mask)
            want = naive_closure(g.table, seeds)
            assert set(kernels.iter_bits(got)) == set(want)


def test_product_matches_naive(s4):
    rng = random.Random(5)
    for _ in range(10):
        a = kernels.closure(s4.flat, 24, 1 | (1 << rng.randrange(24)))
        b = kernels.closure(s4.flat, 24, 1 | (1 << rng.randrange(24)))
        got = kernels.product(s4.flat, 24, a, b)
        want = naive_product_set(s4.table, list(kernels.iter_bits(a)),
                                 list(kernels.iter_bits(b)))
        assert set(kernels.iter_bits(got)) == set(want)


def test_closure_contains_seed_and_identity(s4):
    m = kernels.closure(s4.flat, 24, 1 << 7)
    assert m & 1
    assert (m >> 7) & 1
    assert kernels.closure(s4.flat, 24, m) == m  # idempotent


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=23), st.integers(min_value=0, max_value=23))
def test_product_size_identity(a_seed, b_seed):
    """|HK| * |H n K| == |H| * |K| for subgroups, even when HK = KH fails."""
    g = groups.symmetric(4)
    a = kernels.closure(g.flat, 24, 1 << a_seed)
    b = kernels.closure(g.flat, 24, 1 << b_seed)
    prod = kernels.product(g.flat, 24, a, b)
    assert prod.bit_count() * (a & b).bit_count() == \
        a.bit_count() * b.bit_count()


def test_iter_bits():
    assert list(kernels.iter_bits(0b101001)) == [0, 3, 5]
    assert list(kernels.iter_bits(0)) == []
