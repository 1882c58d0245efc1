"""Key/value sorting over twin arrays: keys ordered, values carried along.

Keys and values live in two separate equal-length arrays (a struct-of-
arrays layout; interleaved pairs do not vectorize).  Partitioning reuses
the key mask for both arrays; the compare-exchange steps replay the exact
lane movements chosen for the keys onto the values, deciding movement from
the min/max outcome itself so that duplicate keys keep their own values.

Value arrays may be any dtype of the same element width as the keys.
"""

from __future__ import annotations

from .lanes import kind_of
from .partition import PartitionState
from .quicksort import (
    SortConfig,
    _LCG_ADD,
    _LCG_MUL,
    _PIVOT_STRATEGIES,
    _U64,
    _resolve_bound,
    select_pivot,
)
from .smallsort import (
    MAX_PACKS,
    AlignedPairStep,
    CrossPairStep,
    ExchangeStep,
    IntraStep,
    get_schedule,
)

__all__ = [
    "kv_compare_and_exchange",
    "kv_sort_packs",
    "kv_sort_small_region",
    "kv_partition_region",
    "kv_scalar_partition",
    "kv_sort",
]


def _check_kv(keys, values) -> None:
    assert len(keys) == len(values), "keys and values must have equal length"
    assert keys.dtype.itemsize == values.dtype.itemsize, \
        "values must have the same element width as keys"


def kv_compare_and_exchange(backend, k, v, step: ExchangeStep):
    """Compare-exchange the key pack; the value pack mirrors exactly the
    lane movements applied to the keys (pairing preserved per lane)."""
    return backend.kv_compare_exchange(k, v, step.perm, step.dir_mask)


def kv_sort_packs(backend, key_packs: list, val_packs: list):
    """Sort packs of keys, dragging value packs through identical moves."""
    assert len(key_packs) == len(val_packs)
    ks = list(key_packs)
    vs = list(val_packs)
    schedule = get_schedule(len(ks), backend.lanes)
    for st in schedule.steps:
        if type(st) is IntraStep:
            kcx = backend.kv_compare_exchange
            perm, dir_mask = st.step
            for p in st.packs:
                ks[p], vs[p] = kcx(ks[p], vs[p], perm, dir_mask)
        elif type(st) is CrossPairStep:
            ks[st.low], vs[st.low], ks[st.high], vs[st.high] = \
                backend.kv_cross_exchange(ks[st.low], vs[st.low], ks[st.high], vs[st.high])
        else:
            ks[st.low], vs[st.low], ks[st.high], vs[st.high] = \
                backend.kv_minmax_exchange(ks[st.low], vs[st.low], ks[st.high], vs[st.high])
    return ks, vs


def kv_sort_small_region(keys, values, backend=None) -> None:
    """Sort a (keys, values) region pair of length <= 16*L in place by key."""
    _check_kv(keys, values)
    if backend is None:
        from .lanes import get_backend

        backend = get_backend("auto", kind_of(keys))
    n = len(keys)
    if n < 2:
        return
    L = backend.lanes
    assert n <= MAX_PACKS * L, "region exceeds small-sort capacity"

    if backend.uses_kernels:
        from . import _kernels

        _kernels.kv_smallsort_region(keys, values, 0, n, backend.kind.sentinel)
        return

    sentinel = backend.kind.sentinel
    full, rem = divmod(n, L)
    kp = [backend.load_full(keys, i * L) for i in range(full)]
    vp = [backend.load_full(values, i * L) for i in range(full)]
    if rem:
        kp.append(backend.load_trunc(keys, full * L, rem, sentinel))
        vp.append(backend.load_trunc(values, full * L, rem, values[0]))
    kp, vp = kv_sort_packs(backend, kp, vp)
    for i in range(full):
        backend.store_full(keys, i * L, kp[i])
        backend.store_full(values, i * L, vp[i])
    if rem:
        tail = backend.mask_trunc(backend.mask_all(), rem)
        backend.compress_store(keys, full * L, tail, kp[-1])
        backend.compress_store(values, full * L, tail, vp[-1])


def kv_scalar_partition(keys, values, pivot) -> int:
    """Scalar fallback partition over a key/value pair of regions."""
    try:
        from . import _kernels
    except ImportError:
        _kernels = None
    if _kernels is not None and _kernels.available():
        return int(_kernels.kv_scalar_partition(keys, values, 0, len(keys), pivot))
    return _kv_scalar_partition_py(keys, values, pivot)


def _kv_scalar_partition_py(keys, values, pivot) -> int:
    w = 0
    for i in range(len(keys)):
        k = keys[i]
        if k <= pivot:
            keys[i] = keys[w]
            keys[w] = k
            v = values[i]
            values[i] = values[w]
            values[w] = v
            w += 1
    return w


def kv_partition_region(keys, values, pivot, backend=None, *,
                        skip_empty_stores: bool = False,
                        swap_buffered: bool = False) -> int:
    """Partition keys around `pivot` in place, moving values with the same
    masks and cursors.  Returns the boundary; pairing is preserved."""
    _check_kv(keys, values)
    if backend is None:
        from .lanes import get_backend

        backend = get_backend("auto", kind_of(keys))
    n = len(keys)
    L = backend.lanes
    if n <= 2 * L:
        if backend.uses_kernels:
            from . import _kernels

            return int(_kernels.kv_scalar_partition(keys, values, 0, n, pivot))
        return _kv_scalar_partition_py(keys, values, pivot)

    if backend.uses_kernels:
        from . import _kernels

        return int(_kernels.kv_partition(keys, values, 0, n, pivot, L,
                                         skip_empty_stores, swap_buffered))

    pivot_pack = backend.set_all(pivot)
    ks = PartitionState(
        left=L, left_w=0, right=n - L, right_w=n,
        left_val=(backend.load_full(keys, 0), backend.load_full(values, 0)),
        right_val=(backend.load_full(keys, n - L), backend.load_full(values, n - L)),
    )

    def split(kval, vval):
        mask = backend.cmp_le(kval, pivot_pack)
        nb_low = backend.mask_popcount(mask)
        nb_high = L - nb_low
        if ks.left < ks.right:
            assert ks.left_w + nb_low <= ks.left
            assert ks.right_w - nb_high >= ks.right
        inv = backend.mask_not(mask)
        if nb_low or not skip_empty_stores:
            backend.compress_store(keys, ks.left_w, mask, kval)
            backend.compress_store(values, ks.left_w, mask, vval)
        ks.left_w += nb_low
        ks.right_w -= nb_high
        if nb_high or not skip_empty_stores:
            backend.compress_store(keys, ks.right_w, inv, kval)
            backend.compress_store(values, ks.right_w, inv, vval)

    while ks.left + L <= ks.right:
        assert (ks.left - ks.left_w) + (ks.right_w - ks.right) == 2 * L
        if ks.left - ks.left_w <= ks.right_w - ks.right:
            kval = backend.load_full(keys, ks.left)
            vval = backend.load_full(values, ks.left)
            ks.left += L
            if swap_buffered:
                (kval, vval), ks.left_val = ks.left_val, (kval, vval)
        else:
            ks.right -= L
            kval = backend.load_full(keys, ks.right)
            vval = backend.load_full(values, ks.right)
            if swap_buffered:
                (kval, vval), ks.right_val = ks.right_val, (kval, vval)
        split(kval, vval)

    remaining = ks.right - ks.left
    if remaining:
        kval = backend.load_trunc(keys, ks.left, remaining, pivot_pack[0])
        vval = backend.load_trunc(values, ks.left, remaining, values[0])
        ks.left = ks.right
        le = backend.cmp_le(kval, pivot_pack)
        mask = backend.mask_trunc(le, remaining)
        inv = backend.mask_trunc(backend.mask_not(le), remaining)
        nb_low = backend.mask_popcount(mask)
        nb_high = backend.mask_popcount(inv)
        if nb_low or not skip_empty_stores:
            backend.compress_store(keys, ks.left_w, mask, kval)
            backend.compress_store(values, ks.left_w, mask, vval)
        ks.left_w += nb_low
        ks.right_w -= nb_high
        if nb_high or not skip_empty_stores:
            backend.compress_store(keys, ks.right_w, inv, kval)
            backend.compress_store(values, ks.right_w, inv, vval)

    split(*ks.left_val)
    split(*ks.right_val)
    assert ks.left_w == ks.right_w
    return ks.left_w


def kv_sort(keys, values, config: SortConfig | None = None) -> None:
    """Sort keys ascending in place, carrying values along (pair multiset
    preserved; value order among equal keys is unspecified)."""
    _check_kv(keys, values)
    config = config or SortConfig()
    n = len(keys)
    if n < 2:
        return
    from .lanes import get_backend

    kind = kind_of(keys)
    backend = get_backend(config.backend, kind)
    if backend.uses_kernels:
        from . import _kernels

        bound = _resolve_bound(config, backend.lanes)
        _kernels.kv_quicksort(
            keys, values, backend.lanes, bound, kind.sentinel,
            _PIVOT_STRATEGIES.index(config.pivot_strategy),
            config.skip_empty_stores, config.swap_buffered, config.pivot_seed,
        )
        return
    bound = _resolve_bound(config, backend.lanes)
    lcg = (config.pivot_seed * _LCG_MUL + _LCG_ADD) & _U64
    _kv_qs_core(keys, values, 0, n - 1, config, backend, bound, lcg)


def _kv_qs_core(keys, values, lo, hi, config, backend, bound, lcg):
    while hi - lo + 1 > bound:
        if config.pivot_strategy == "random":
            lcg = (lcg * _LCG_MUL + _LCG_ADD) & _U64
        pidx = select_pivot(keys, lo, hi, config.pivot_strategy, lcg)
        keys[pidx], keys[hi] = keys[hi], keys[pidx]
        values[pidx], values[hi] = values[hi], values[pidx]
        pivot = keys[hi]
        b = lo + kv_partition_region(
            keys[lo:hi], values[lo:hi], pivot, backend,
            skip_empty_stores=config.skip_empty_stores,
            swap_buffered=config.swap_buffered,
        )
        keys[b], keys[hi] = keys[hi], keys[b]
        values[b], values[hi] = values[hi], values[b]
        if b - lo < hi - b:
            if lo < b - 1:
                _kv_qs_core(keys, values, lo, b - 1, config, backend, bound, lcg)
            lo = b + 1
        else:
            if b + 1 < hi:
                _kv_qs_core(keys, values, b + 1, hi, config, backend, bound, lcg)
            hi = b - 1
    if hi - lo + 1 >= 2:
        kv_sort_small_region(keys[lo:hi + 1], values[lo:hi + 1], backend)
