"""In-place partition of a region around a pivot.

The vectorized path keeps exactly three live packs: one buffered pack from
each extremity (loaded up front so writes can never clobber unread data)
plus the pack currently being split.  Two write cursors grow inward; each
steady-state iteration loads from whichever side has less free space and
compress-stores the pack's low lanes at the left cursor and high lanes at
the right cursor.  Elements equal to the pivot go left (<= comparison) in
both the vector and scalar paths.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lanes import kind_of

__all__ = [
    "PartitionState",
    "partition_region",
    "partition_pack",
    "partition_remainder",
    "scalar_partition",
]


@dataclass
class PartitionState:
    """Cursors and buffered extremity packs for an in-progress partition.

    Invariants (asserted in the vector loop): left_w <= left <= right <=
    right_w, and the free space (left - left_w) + (right_w - right) equals
    two packs' worth of lanes during the steady state.
    """

    left: int
    left_w: int
    right: int
    right_w: int
    left_val: object
    right_val: object


def scalar_partition(region, pivot) -> int:
    """Reference scalar partition; also the fallback for tiny regions.

    Returns the boundary: region[:boundary] <= pivot < region[boundary:].
    """
    try:
        from . import _kernels
    except ImportError:
        _kernels = None
    if _kernels is not None and _kernels.available():
        return int(_kernels.scalar_partition(region, 0, len(region), pivot))
    return _scalar_partition_py(region, pivot)


def _scalar_partition_py(region, pivot) -> int:
    w = 0
    for i in range(len(region)):
        v = region[i]
        if v <= pivot:
            region[i] = region[w]
            region[w] = v
            w += 1
    return w


def partition_pack(backend, region, val, pivot_pack, state: PartitionState,
                   skip_empty_stores: bool = False) -> None:
    """Split one buffered pack: lanes <= pivot are compress-stored at the
    left write cursor, the rest at the right write cursor (complement mask)."""
    L = backend.lanes
    mask = backend.cmp_le(val, pivot_pack)
    nb_low = backend.mask_popcount(mask)
    nb_high = L - nb_low
    # Writes must land in already-consumed space: outside the unread gap
    # [left, right) while it exists, and the two stores may never cross.
    if state.left < state.right:
        assert state.left_w + nb_low <= state.left, "left store would clobber unread data"
        assert state.right_w - nb_high >= state.right, "right store would clobber unread data"
    assert state.left_w + nb_low <= state.right_w - nb_high, "write cursors crossed"
    if nb_low or not skip_empty_stores:
        backend.compress_store(region, state.left_w, mask, val)
    state.left_w += nb_low
    state.right_w -= nb_high
    if nb_high or not skip_empty_stores:
        backend.compress_store(region, state.right_w, backend.mask_not(mask), val)


def partition_remainder(backend, region, pivot_pack, state: PartitionState,
                        skip_empty_stores: bool = False) -> None:
    """Split the sub-pack gap left between the read cursors (0..L-1 lanes),
    masking the comparison down to the remainder count."""
    remaining = state.right - state.left
    assert 0 <= remaining < backend.lanes
    if remaining == 0:
        return
    val = backend.load_trunc(region, state.left, remaining, pivot_pack[0])
    state.left = state.right
    mask = backend.cmp_le(val, pivot_pack)
    mask_low = backend.mask_trunc(mask, remaining)
    mask_high = backend.mask_trunc(backend.mask_not(mask), remaining)
    nb_low = backend.mask_popcount(mask_low)
    nb_high = backend.mask_popcount(mask_high)
    assert state.left_w + nb_low <= state.right_w - nb_high, "write cursors crossed"
    if nb_low or not skip_empty_stores:
        backend.compress_store(region, state.left_w, mask_low, val)
    state.left_w += nb_low
    state.right_w -= nb_high
    if nb_high or not skip_empty_stores:
        backend.compress_store(region, state.right_w, mask_high, val)


def partition_region(region, pivot, backend=None, *,
                     skip_empty_stores: bool = False,
                     swap_buffered: bool = False) -> int:
    """Partition a region around `pivot` in place.

    Returns the boundary index: everything before it is <= pivot,
    everything from it on is > pivot.  The element multiset is preserved.
    Regions of at most two packs use the scalar fallback.

    The two keyword flags enable the optional store-skipping and
    buffer-swapping variants of the steady-state loop; both are
    behavior-preserving.
    """
    if backend is None:
        from .lanes import get_backend

        backend = get_backend("auto", kind_of(region))
    n = len(region)
    L = backend.lanes
    if n <= 2 * L:
        if backend.uses_kernels:
            from . import _kernels

            return int(_kernels.scalar_partition(region, 0, n, pivot))
        return _scalar_partition_py(region, pivot)

    if backend.uses_kernels:
        from . import _kernels

        return int(_kernels.partition(region, 0, n, pivot, L,
                                      skip_empty_stores, swap_buffered))

    pivot_pack = backend.set_all(pivot)
    state = PartitionState(
        left=L,
        left_w=0,
        right=n - L,
        right_w=n,
        left_val=backend.load_full(region, 0),
        right_val=backend.load_full(region, n - L),
    )
    while state.left + L <= state.right:
        assert state.left_w <= state.left <= state.right <= state.right_w
        assert (state.left - state.left_w) + (state.right_w - state.right) == 2 * L
        if state.left - state.left_w <= state.right_w - state.right:
            val = backend.load_full(region, state.left)
            state.left += L
            if swap_buffered:
                val, state.left_val = state.left_val, val
        else:
            state.right -= L
            val = backend.load_full(region, state.right)
            if swap_buffered:
                val, state.right_val = state.right_val, val
        partition_pack(backend, region, val, pivot_pack, state, skip_empty_stores)

    partition_remainder(backend, region, pivot_pack, state, skip_empty_stores)
    partition_pack(backend, region, state.left_val, pivot_pack, state, skip_empty_stores)
    partition_pack(backend, region, state.right_val, pivot_pack, state, skip_empty_stores)
    assert state.left_w == state.right_w
    return state.left_w
