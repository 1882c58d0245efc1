"""JIT-compiled region kernels backing the native backend.

Each kernel is a compiled rendering of the same algorithm the emulated
backend runs through pack operations, and produces identical results:
the partition kernels replay the exact load order, side selection and
compress-store placement, and the small-sort kernel runs the identical
comparator network (padded to a power of two, which cannot change the
written prefix).  Kernels specialize lazily per element dtype.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    _IMPORT_ERROR = None
except Exception as _exc:  # pragma: no cover - exercised only without numba
    njit = None
    _IMPORT_ERROR = _exc


def available() -> bool:
    return njit is not None


if njit is not None:

    @njit(cache=True, inline="always")
    def _net(buf, base, n):
        # Same-direction bitonic network: for each block size, one crossing
        # round (extremities toward the center), then linear rounds of
        # halving distance.  Minima always land at the lower index.
        s = 2
        while s <= n:
            half = s >> 1
            for blk in range(base, base + n, s):
                for k in range(half):
                    i = blk + k
                    j = blk + s - 1 - k
                    a = buf[i]
                    b = buf[j]
                    buf[i] = a if a <= b else b
                    buf[j] = b if a <= b else a
            d = s >> 2
            while d >= 1:
                step = d << 1
                for blk in range(base, base + n, step):
                    for k in range(d):
                        i = blk + k
                        j = i + d
                        a = buf[i]
                        b = buf[j]
                        buf[i] = a if a <= b else b
                        buf[j] = b if a <= b else a
                d >>= 1
            s <<= 1

    @njit(cache=True, inline="always")
    def _kv_net(kbuf, vbuf, base, n):
        # Key/value variant: swap both elements of a comparator pair only on
        # a strict key inversion, so equal keys keep their own values.
        s = 2
        while s <= n:
            half = s >> 1
            for blk in range(base, base + n, s):
                for k in range(half):
                    i = blk + k
                    j = blk + s - 1 - k
                    a = kbuf[i]
                    b = kbuf[j]
                    if b < a:
                        kbuf[i] = b
                        kbuf[j] = a
                        x = vbuf[i]
                        vbuf[i] = vbuf[j]
                        vbuf[j] = x
            d = s >> 2
            while d >= 1:
                step = d << 1
                for blk in range(base, base + n, step):
                    for k in range(d):
                        i = blk + k
                        j = i + d
                        a = kbuf[i]
                        b = kbuf[j]
                        if b < a:
                            kbuf[i] = b
                            kbuf[j] = a
                            x = vbuf[i]
                            vbuf[i] = vbuf[j]
                            vbuf[j] = x
                d >>= 1
            s <<= 1

    @njit(cache=True)
    def _smallsort_impl(arr, lo, length, sentinel, scratch):
        if length < 2:
            return
        n = 2
        while n < length:
            n <<= 1
        if n == length:
            _net(arr, lo, n)
            return
        for i in range(length):
            scratch[i] = arr[lo + i]
        for i in range(length, n):
            scratch[i] = sentinel
        _net(scratch, 0, n)
        for i in range(length):
            arr[lo + i] = scratch[i]

    @njit(cache=True)
    def smallsort_region(arr, lo, length, sentinel):
        if length < 2:
            return
        n = 2
        while n < length:
            n <<= 1
        if n == length:
            _net(arr, lo, n)
            return
        scratch = np.empty(n, arr.dtype)
        _smallsort_impl(arr, lo, length, sentinel, scratch)

    @njit(cache=True)
    def _kv_smallsort_impl(keys, vals, lo, length, sentinel, kscratch, vscratch):
        if length < 2:
            return
        n = 2
        while n < length:
            n <<= 1
        if n == length:
            _kv_net(keys, vals, lo, n)
            return
        for i in range(length):
            kscratch[i] = keys[lo + i]
            vscratch[i] = vals[lo + i]
        for i in range(length, n):
            kscratch[i] = sentinel
        _kv_net(kscratch, vscratch, 0, n)
        for i in range(length):
            keys[lo + i] = kscratch[i]
            vals[lo + i] = vscratch[i]

    @njit(cache=True)
    def kv_smallsort_region(keys, vals, lo, length, sentinel):
        if length < 2:
            return
        n = 2
        while n < length:
            n <<= 1
        if n == length:
            _kv_net(keys, vals, lo, n)
            return
        kscratch = np.empty(n, keys.dtype)
        vscratch = np.empty(n, vals.dtype)
        _kv_smallsort_impl(keys, vals, lo, length, sentinel, kscratch, vscratch)

    @njit(cache=True)
    def scalar_partition(arr, lo, hi, pivot):
        w = lo
        for i in range(lo, hi):
            v = arr[i]
            if v <= pivot:
                arr[i] = arr[w]
                arr[w] = v
                w += 1
        return w

    @njit(cache=True)
    def kv_scalar_partition(keys, vals, lo, hi, pivot):
        w = lo
        for i in range(lo, hi):
            k = keys[i]
            if k <= pivot:
                keys[i] = keys[w]
                keys[w] = k
                x = vals[i]
                vals[i] = vals[w]
                vals[w] = x
                w += 1
        return w

    @njit(cache=True, inline="always")
    def _split_pack(arr, val, nb, pivot, left_w, right_w, opt_a):
        # Compress-store the buffered lanes val[0:nb]: lows contiguously at
        # left_w, highs contiguously ending at right_w, ascending lane order
        # on both sides.
        nb_low = 0
        for k in range(nb):
            if val[k] <= pivot:
                nb_low += 1
        nb_high = nb - nb_low
        li = left_w
        ri = right_w - nb_high
        if nb_low > 0 or not opt_a:
            for k in range(nb):
                v = val[k]
                if v <= pivot:
                    arr[li] = v
                    li += 1
        if nb_high > 0 or not opt_a:
            ri2 = ri
            for k in range(nb):
                v = val[k]
                if not (v <= pivot):
                    arr[ri2] = v
                    ri2 += 1
        return left_w + nb_low, right_w - nb_high

    @njit(cache=True)
    def _partition_impl(arr, lo, hi, pivot, lane, opt_a, opt_b, val, lbuf, rbuf):
        n = hi - lo
        if n <= 2 * lane:
            return scalar_partition(arr, lo, hi, pivot)
        left = lo
        left_w = lo
        right = hi - lane
        right_w = hi
        for k in range(lane):
            lbuf[k] = arr[lo + k]
            rbuf[k] = arr[right + k]
        left += lane
        while left + lane <= right:
            if left - left_w <= right_w - right:
                off = left
                left += lane
                if opt_b:
                    for k in range(lane):
                        val[k] = lbuf[k]
                        lbuf[k] = arr[off + k]
                else:
                    for k in range(lane):
                        val[k] = arr[off + k]
            else:
                right -= lane
                off = right
                if opt_b:
                    for k in range(lane):
                        val[k] = rbuf[k]
                        rbuf[k] = arr[off + k]
                else:
                    for k in range(lane):
                        val[k] = arr[off + k]
            left_w, right_w = _split_pack(arr, val, lane, pivot, left_w, right_w, opt_a)
        rem = right - left
        for k in range(rem):
            val[k] = arr[left + k]
        left_w, right_w = _split_pack(arr, val, rem, pivot, left_w, right_w, opt_a)
        left_w, right_w = _split_pack(arr, lbuf, lane, pivot, left_w, right_w, opt_a)
        left_w, right_w = _split_pack(arr, rbuf, lane, pivot, left_w, right_w, opt_a)
        return left_w

    @njit(cache=True)
    def partition(arr, lo, hi, pivot, lane, opt_a, opt_b):
        val = np.empty(lane, arr.dtype)
        lbuf = np.empty(lane, arr.dtype)
        rbuf = np.empty(lane, arr.dtype)
        return _partition_impl(arr, lo, hi, pivot, lane, opt_a, opt_b, val, lbuf, rbuf)

    @njit(cache=True, inline="always")
    def _kv_split_pack(keys, vals, kval, vval, nb, pivot, left_w, right_w, opt_a):
        nb_low = 0
        for k in range(nb):
            if kval[k] <= pivot:
                nb_low += 1
        nb_high = nb - nb_low
        li = left_w
        ri = right_w - nb_high
        if nb_low > 0 or not opt_a:
            for k in range(nb):
                kk = kval[k]
                if kk <= pivot:
                    keys[li] = kk
                    vals[li] = vval[k]
                    li += 1
        if nb_high > 0 or not opt_a:
            ri2 = ri
            for k in range(nb):
                kk = kval[k]
                if not (kk <= pivot):
                    keys[ri2] = kk
                    vals[ri2] = vval[k]
                    ri2 += 1
        return left_w + nb_low, right_w - nb_high

    @njit(cache=True)
    def _kv_partition_impl(keys, vals, lo, hi, pivot, lane, opt_a, opt_b,
                           kval, vval, klbuf, vlbuf, krbuf, vrbuf):
        n = hi - lo
        if n <= 2 * lane:
            return kv_scalar_partition(keys, vals, lo, hi, pivot)
        left = lo
        left_w = lo
        right = hi - lane
        right_w = hi
        for k in range(lane):
            klbuf[k] = keys[lo + k]
            vlbuf[k] = vals[lo + k]
            krbuf[k] = keys[right + k]
            vrbuf[k] = vals[right + k]
        left += lane
        while left + lane <= right:
            if left - left_w <= right_w - right:
                off = left
                left += lane
                if opt_b:
                    for k in range(lane):
                        kval[k] = klbuf[k]
                        vval[k] = vlbuf[k]
                        klbuf[k] = keys[off + k]
                        vlbuf[k] = vals[off + k]
                else:
                    for k in range(lane):
                        kval[k] = keys[off + k]
                        vval[k] = vals[off + k]
            else:
                right -= lane
                off = right
                if opt_b:
                    for k in range(lane):
                        kval[k] = krbuf[k]
                        vval[k] = vrbuf[k]
                        krbuf[k] = keys[off + k]
                        vrbuf[k] = vals[off + k]
                else:
                    for k in range(lane):
                        kval[k] = keys[off + k]
                        vval[k] = vals[off + k]
            left_w, right_w = _kv_split_pack(
                keys, vals, kval, vval, lane, pivot, left_w, right_w, opt_a)
        rem = right - left
        for k in range(rem):
            kval[k] = keys[left + k]
            vval[k] = vals[left + k]
        left_w, right_w = _kv_split_pack(
            keys, vals, kval, vval, rem, pivot, left_w, right_w, opt_a)
        left_w, right_w = _kv_split_pack(
            keys, vals, klbuf, vlbuf, lane, pivot, left_w, right_w, opt_a)
        left_w, right_w = _kv_split_pack(
            keys, vals, krbuf, vrbuf, lane, pivot, left_w, right_w, opt_a)
        return left_w

    @njit(cache=True)
    def kv_partition(keys, vals, lo, hi, pivot, lane, opt_a, opt_b):
        kval = np.empty(lane, keys.dtype)
        vval = np.empty(lane, vals.dtype)
        klbuf = np.empty(lane, keys.dtype)
        vlbuf = np.empty(lane, vals.dtype)
        krbuf = np.empty(lane, keys.dtype)
        vrbuf = np.empty(lane, vals.dtype)
        return _kv_partition_impl(keys, vals, lo, hi, pivot, lane, opt_a, opt_b,
                                  kval, vval, klbuf, vlbuf, krbuf, vrbuf)

    @njit(cache=True, inline="always")
    def _pivot_index(arr, lo, hi, strategy, lcg):
        if strategy == 1:  # middle
            return (lo + hi) // 2
        if strategy == 2:  # random
            span = np.uint64(hi - lo + 1)
            return lo + np.int64(lcg % span)
        mid = (lo + hi) // 2
        a = arr[lo]
        b = arr[mid]
        c = arr[hi]
        if (b <= a and a <= c) or (c <= a and a <= b):
            return lo
        if (a <= b and b <= c) or (c <= b and b <= a):
            return mid
        return hi

    _LCG_MUL = np.uint64(6364136223846793005)
    _LCG_ADD = np.uint64(1442695040888963407)

    @njit(cache=True)
    def quicksort(arr, lane, sort_bound, sentinel, strategy, opt_a, opt_b, seed):
        n = len(arr)
        if n < 2:
            return
        scratch = np.empty(16 * lane, arr.dtype)
        val = np.empty(lane, arr.dtype)
        lbuf = np.empty(lane, arr.dtype)
        rbuf = np.empty(lane, arr.dtype)
        lcg = (np.uint64(seed) * _LCG_MUL + _LCG_ADD)
        stack = np.empty((96, 2), np.int64)
        stack[0, 0] = 0
        stack[0, 1] = n - 1
        top = 1
        while top > 0:
            top -= 1
            lo = stack[top, 0]
            hi = stack[top, 1]
            while hi - lo + 1 > sort_bound:
                if strategy == 2:
                    lcg = lcg * _LCG_MUL + _LCG_ADD
                pidx = _pivot_index(arr, lo, hi, strategy, lcg)
                t = arr[pidx]
                arr[pidx] = arr[hi]
                arr[hi] = t
                pivot = arr[hi]
                b = _partition_impl(arr, lo, hi, pivot, lane, opt_a, opt_b,
                                    val, lbuf, rbuf)
                t = arr[b]
                arr[b] = arr[hi]
                arr[hi] = t
                # Defer the larger side, continue on the smaller.
                if b - lo < hi - b:
                    if b + 1 < hi:
                        stack[top, 0] = b + 1
                        stack[top, 1] = hi
                        top += 1
                    hi = b - 1
                else:
                    if lo < b - 1:
                        stack[top, 0] = lo
                        stack[top, 1] = b - 1
                        top += 1
                    lo = b + 1
            if hi - lo >= 1:
                _smallsort_impl(arr, lo, hi - lo + 1, sentinel, scratch)

    @njit(cache=True)
    def kv_quicksort(keys, vals, lane, sort_bound, sentinel, strategy,
                     opt_a, opt_b, seed):
        n = len(keys)
        if n < 2:
            return
        kscratch = np.empty(16 * lane, keys.dtype)
        vscratch = np.empty(16 * lane, vals.dtype)
        kval = np.empty(lane, keys.dtype)
        vval = np.empty(lane, vals.dtype)
        klbuf = np.empty(lane, keys.dtype)
        vlbuf = np.empty(lane, vals.dtype)
        krbuf = np.empty(lane, keys.dtype)
        vrbuf = np.empty(lane, vals.dtype)
        lcg = (np.uint64(seed) * _LCG_MUL + _LCG_ADD)
        stack = np.empty((96, 2), np.int64)
        stack[0, 0] = 0
        stack[0, 1] = n - 1
        top = 1
        while top > 0:
            top -= 1
            lo = stack[top, 0]
            hi = stack[top, 1]
            while hi - lo + 1 > sort_bound:
                if strategy == 2:
                    lcg = lcg * _LCG_MUL + _LCG_ADD
                pidx = _pivot_index(keys, lo, hi, strategy, lcg)
                t = keys[pidx]
                keys[pidx] = keys[hi]
                keys[hi] = t
                x = vals[pidx]
                vals[pidx] = vals[hi]
                vals[hi] = x
                pivot = keys[hi]
                b = _kv_partition_impl(keys, vals, lo, hi, pivot, lane,
                                       opt_a, opt_b, kval, vval,
                                       klbuf, vlbuf, krbuf, vrbuf)
                t = keys[b]
                keys[b] = keys[hi]
                keys[hi] = t
                x = vals[b]
                vals[b] = vals[hi]
                vals[hi] = x
                if b - lo < hi - b:
                    if b + 1 < hi:
                        stack[top, 0] = b + 1
                        stack[top, 1] = hi
                        top += 1
                    hi = b - 1
                else:
                    if lo < b - 1:
                        stack[top, 0] = lo
                        stack[top, 1] = b - 1
                        top += 1
                    lo = b + 1
            if hi - lo >= 1:
                _kv_smallsort_impl(keys, vals, lo, hi - lo + 1, sentinel,
                                   kscratch, vscratch)

else:  # pragma: no cover - placeholders keep the module importable

    def _unavailable(*_args, **_kwargs):
        raise RuntimeError(f"compiled kernels unavailable: {_IMPORT_ERROR}")

    smallsort_region = _unavailable
    kv_smallsort_region = _unavailable
    scalar_partition = _unavailable
    kv_scalar_partition = _unavailable
    partition = _unavailable
    kv_partition = _unavailable
    quicksort = _unavailable
    kv_quicksort = _unavailable
