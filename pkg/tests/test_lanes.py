"""Operation contracts for the lane backends, and emulated/native parity."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_region
from vexsort.lanes import (
    F64,
    I32,
    EmulatedLanes,
    NativeLanes,
    get_backend,
    is_permutation,
    kind_of,
    native_available,
    reversal_perm,
)


def as_tuple(pack):
    return tuple(np.asarray(pack).tolist()) if not isinstance(pack, tuple) else pack


# -- loads / stores -----------------------------------------------------------


def test_load_full_identity_layout(any_backend):
    L = any_backend.lanes
    region = np.arange(L, dtype=any_backend.kind.dtype)
    assert as_tuple(any_backend.load_full(region, 0)) == tuple(range(L))


def test_load_full_constant(any_backend):
    L = any_backend.lanes
    region = np.full(L, 7, dtype=any_backend.kind.dtype)
    assert as_tuple(any_backend.load_full(region, 0)) == (7,) * L


def test_load_full_direct_copy_f64():
    be = EmulatedLanes(F64)
    region = np.array([5, 4, 7, 6, 1, 0, 3, 2], dtype=np.float64)
    assert as_tuple(be.load_full(region, 0)) == (5.0, 4.0, 7.0, 6.0, 1.0, 0.0, 3.0, 2.0)


def test_load_full_out_of_bounds_is_checked(any_backend):
    region = np.zeros(any_backend.lanes, dtype=any_backend.kind.dtype)
    with pytest.raises(AssertionError):
        any_backend.load_full(region, 1)


def test_store_load_round_trip(any_backend):
    L = any_backend.lanes
    rng = np.random.default_rng(11)
    region = random_region(rng, any_backend.kind, 3 * L)
    for _ in range(1000):
        vals = random_region(rng, any_backend.kind, L)
        pack = any_backend.load_full(vals, 0)
        off = int(rng.integers(0, 2 * L))
        any_backend.store_full(region, off, pack)
        assert as_tuple(any_backend.load_full(region, off)) == as_tuple(pack)


def test_store_full_touches_exactly_l_slots(any_backend):
    L = any_backend.lanes
    region = np.ones(2 * L, dtype=any_backend.kind.dtype)
    any_backend.store_full(region, 3, any_backend.set_all(0))
    assert np.count_nonzero(region == 0) == L
    assert np.all(region[:3] == 1) and np.all(region[3 + L:] == 1)


def test_load_trunc_fills_tail(any_backend):
    L = any_backend.lanes
    region = np.arange(L, dtype=any_backend.kind.dtype)
    pack = any_backend.load_trunc(region, 0, 3, any_backend.kind.sentinel)
    vals = as_tuple(pack)
    assert vals[:3] == (0, 1, 2)
    assert all(v == any_backend.kind.sentinel for v in vals[3:])


# -- set_all / permute --------------------------------------------------------


def test_set_all(any_backend):
    assert as_tuple(any_backend.set_all(0)) == (0,) * any_backend.lanes
    pivot = 42
    assert as_tuple(any_backend.set_all(pivot)) == (pivot,) * any_backend.lanes
    sent = any_backend.kind.sentinel
    assert as_tuple(any_backend.set_all(sent)) == (sent,) * any_backend.lanes


def test_permute_identity_and_reversal(any_backend):
    L = any_backend.lanes
    rng = np.random.default_rng(5)
    v = any_backend.load_full(random_region(rng, any_backend.kind, L), 0)
    ident = tuple(range(L))
    assert as_tuple(any_backend.permute(v, ident)) == as_tuple(v)
    rev = reversal_perm(L)
    twice = any_backend.permute(any_backend.permute(v, rev), rev)
    assert as_tuple(twice) == as_tuple(v)


def test_permute_derived_example():
    be = EmulatedLanes(F64)
    v = be.load_full(np.array([5, 4, 7, 6, 1, 0, 3, 2], dtype=np.float64), 0)
    out = be.permute(v, reversal_perm(8))
    assert out == (2.0, 3.0, 0.0, 1.0, 6.0, 7.0, 4.0, 5.0)


def test_permute_rejects_invalid(any_backend):
    L = any_backend.lanes
    v = any_backend.set_all(0)
    with pytest.raises(AssertionError):
        any_backend.permute(v, (0,) * L)


def test_permute_is_lane_bijection(any_backend):
    L = any_backend.lanes
    rng = np.random.default_rng(17)
    for _ in range(50):
        v = any_backend.load_full(random_region(rng, any_backend.kind, L), 0)
        perm = tuple(rng.permutation(L).tolist())
        out = any_backend.permute(v, perm)
        assert sorted(as_tuple(out)) == sorted(as_tuple(v))


# -- min / max / cmp / select --------------------------------------------------


def test_lane_min_max_properties(any_backend):
    L = any_backend.lanes
    rng = np.random.default_rng(7)
    v = any_backend.load_full(random_region(rng, any_backend.kind, L), 0)
    assert as_tuple(any_backend.lane_min(v, v)) == as_tuple(v)
    for _ in range(200):
        a = any_backend.load_full(random_region(rng, any_backend.kind, L), 0)
        b = any_backend.load_full(random_region(rng, any_backend.kind, L), 0)
        mn = as_tuple(any_backend.lane_min(a, b))
        mx = as_tuple(any_backend.lane_max(a, b))
        ta, tb = as_tuple(a), as_tuple(b)
        for i in range(L):
            assert mn[i] == min(ta[i], tb[i])
            assert mx[i] == max(ta[i], tb[i])
            assert sorted((mn[i], mx[i])) == sorted((ta[i], tb[i]))


def test_cmp_le(any_backend):
    L = any_backend.lanes
    rng = np.random.default_rng(9)
    v = any_backend.load_full(random_region(rng, any_backend.kind, L), 0)
    assert all(any_backend.cmp_le(v, v))
    assert not any(any_backend.cmp_le(any_backend.set_all(1), any_backend.set_all(0)))
    for _ in range(200):
        a = any_backend.load_full(random_region(rng, any_backend.kind, L), 0)
        b = any_backend.load_full(random_region(rng, any_backend.kind, L), 0)
        m = list(any_backend.cmp_le(a, b))
        assert m == [x <= y for x, y in zip(as_tuple(a), as_tuple(b))]


def test_cmp_le_nan_is_false():
    be = EmulatedLanes(F64)
    a = be.set_all(math.nan)
    b = be.set_all(0.0)
    assert not any(be.cmp_le(a, b))
    assert not any(be.cmp_le(b, a))


def test_select(any_backend):
    L = any_backend.lanes
    a = any_backend.set_all(1)
    b = any_backend.set_all(2)
    assert as_tuple(any_backend.select(any_backend.mask_none(), a, b)) == (1,) * L
    assert as_tuple(any_backend.select(any_backend.mask_all(), a, b)) == (2,) * L
    alt = tuple(i % 2 == 1 for i in range(L))
    out = as_tuple(any_backend.select(alt, a, b))
    assert out == tuple(2 if i % 2 else 1 for i in range(L))


# -- compress_store ------------------------------------------------------------


def test_compress_store_all_true_equals_store_full(any_backend):
    L = any_backend.lanes
    rng = np.random.default_rng(3)
    v = any_backend.load_full(random_region(rng, any_backend.kind, L), 0)
    r1 = np.zeros(L, dtype=any_backend.kind.dtype)
    r2 = np.zeros(L, dtype=any_backend.kind.dtype)
    n = any_backend.compress_store(r1, 0, any_backend.mask_all(), v)
    any_backend.store_full(r2, 0, v)
    assert n == L and np.array_equal(r1, r2)


def test_compress_store_all_false_writes_nothing(any_backend):
    L = any_backend.lanes
    region = np.arange(L, dtype=any_backend.kind.dtype)
    before = region.copy()
    n = any_backend.compress_store(region, 0, any_backend.mask_none(),
                                   any_backend.set_all(0))
    assert n == 0 and np.array_equal(region, before)


def test_compress_store_lane_order(any_backend):
    L = any_backend.lanes
    vals = list(range(L))
    vals[0], vals[1], vals[2], vals[3] = 3, 1, 2, 0
    v = any_backend.load_full(np.array(vals, dtype=any_backend.kind.dtype), 0)
    mask = tuple(i in (1, 3) for i in range(L))
    if isinstance(any_backend, NativeLanes):
        mask = np.array(mask)
    region = np.full(L, -1, dtype=any_backend.kind.dtype)
    n = any_backend.compress_store(region, 0, mask, v)
    assert n == 2
    assert region[0] == 1 and region[1] == 0


def test_compress_store_preserves_relative_order(any_backend):
    L = any_backend.lanes
    rng = np.random.default_rng(23)
    for _ in range(200):
        vals = random_region(rng, any_backend.kind, L)
        v = any_backend.load_full(vals, 0)
        bits = tuple(bool(b) for b in rng.integers(0, 2, L))
        mask = np.array(bits) if isinstance(any_backend, NativeLanes) else bits
        region = np.zeros(L, dtype=any_backend.kind.dtype)
        n = any_backend.compress_store(region, 0, mask, v)
        expect = [x for x, m in zip(vals.tolist(), bits) if m]
        assert n == len(expect)
        assert region[:n].tolist() == expect


def test_compress_store_overflow_is_checked(any_backend):
    L = any_backend.lanes
    region = np.zeros(L - 1, dtype=any_backend.kind.dtype)
    with pytest.raises(AssertionError):
        any_backend.compress_store(region, 0, any_backend.mask_all(),
                                   any_backend.set_all(0))


# -- masks ----------------------------------------------------------------------


def test_mask_ops_basics(any_backend):
    L = any_backend.lanes
    assert not any(any_backend.mask_trunc(any_backend.mask_all(), 0))
    m = tuple(i % 3 == 0 for i in range(L))
    assert any_backend.mask_popcount(m) + any_backend.mask_popcount(
        any_backend.mask_not(m)) == L


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_mask_trunc_property(data):
    L = 16
    be = EmulatedLanes(I32)
    bits = tuple(data.draw(st.booleans()) for _ in range(L))
    n = data.draw(st.integers(min_value=0, max_value=L))
    out = be.mask_trunc(bits, n)
    assert not any(out[n:])
    assert out[:n] == bits[:n]


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_mask_and_or_not_closure(data):
    L = 8
    be = EmulatedLanes(F64)
    a = tuple(data.draw(st.booleans()) for _ in range(L))
    b = tuple(data.draw(st.booleans()) for _ in range(L))
    assert be.mask_and(a, b) == tuple(x and y for x, y in zip(a, b))
    assert be.mask_or(a, b) == tuple(x or y for x, y in zip(a, b))
    assert be.mask_not(be.mask_not(a)) == a


# -- backend parity -------------------------------------------------------------


@pytest.mark.skipif(not native_available(), reason="native backend unavailable")
def test_backends_bit_identical_ops(kind):
    emu = EmulatedLanes(kind)
    nat = NativeLanes(kind)
    L = kind.lanes
    rng = np.random.default_rng(31)
    for _ in range(300):
        raw_a = random_region(rng, kind, L)
        raw_b = random_region(rng, kind, L)
        ea, eb = emu.load_full(raw_a, 0), emu.load_full(raw_b, 0)
        na, nb = nat.load_full(raw_a, 0), nat.load_full(raw_b, 0)
        perm = tuple(rng.permutation(L).tolist())
        bits = tuple(bool(b) for b in rng.integers(0, 2, L))
        nbits = np.array(bits)

        assert as_tuple(nat.permute(na, perm)) == emu.permute(ea, perm)
        assert as_tuple(nat.lane_min(na, nb)) == emu.lane_min(ea, eb)
        assert as_tuple(nat.lane_max(na, nb)) == emu.lane_max(ea, eb)
        assert tuple(bool(x) for x in nat.cmp_le(na, nb)) == emu.cmp_le(ea, eb)
        assert as_tuple(nat.select(nbits, na, nb)) == emu.select(bits, ea, eb)
        assert as_tuple(nat.compare_exchange(na, perm, bits)) == \
            emu.compare_exchange(ea, perm, bits)
        lo_n, hi_n = nat.cross_exchange(na, nb)
        lo_e, hi_e = emu.cross_exchange(ea, eb)
        assert as_tuple(lo_n) == lo_e and as_tuple(hi_n) == hi_e

        r_e = np.zeros(L, dtype=kind.dtype)
        r_n = np.zeros(L, dtype=kind.dtype)
        ke = emu.compress_store(r_e, 0, bits, ea)
        kn = nat.compress_store(r_n, 0, nbits, na)
        assert ke == kn and np.array_equal(r_e, r_n)

        n = int(rng.integers(0, L + 1))
        assert tuple(bool(x) for x in nat.mask_trunc(nbits, n)) == emu.mask_trunc(bits, n)


def test_fused_ops_match_primitive_composition(any_backend):
    be = any_backend
    L = be.lanes
    rng = np.random.default_rng(41)
    for _ in range(200):
        a = be.load_full(random_region(rng, be.kind, L), 0)
        perm = tuple(int(x) for x in rng.permutation(L))
        bits = tuple(bool(b) for b in rng.integers(0, 2, L))
        mask = np.array(bits) if isinstance(be, NativeLanes) else bits
        composed = be.select(mask, be.lane_min(a, be.permute(a, perm)),
                             be.lane_max(a, be.permute(a, perm)))
        assert as_tuple(be.compare_exchange(a, perm, mask)) == as_tuple(composed)

        b = be.load_full(random_region(rng, be.kind, L), 0)
        rev = reversal_perm(L)
        br = be.permute(b, rev)
        lo = be.lane_min(a, br)
        hi = be.permute(be.lane_max(a, br), rev)
        flo, fhi = be.cross_exchange(a, b)
        assert as_tuple(flo) == as_tuple(lo) and as_tuple(fhi) == as_tuple(hi)

        mlo, mhi = be.minmax_exchange(a, b)
        assert as_tuple(mlo) == as_tuple(be.lane_min(a, b))
        assert as_tuple(mhi) == as_tuple(be.lane_max(a, b))


def test_get_backend_and_kind_of():
    assert get_backend("emulated", "i32").kind is I32
    assert kind_of(np.zeros(3, dtype=np.float64)) is F64
    with pytest.raises(TypeError):
        kind_of(np.zeros(3, dtype=np.int64))
    assert is_permutation((1, 0), 2)
    assert not is_permutation((1, 1), 2)
