"""Scalar reference implementations used as ground truth by the test suite
and by the benchmark's correctness gate.

None of these touch the lane abstraction.  The tie convention matches the
partition module: elements equal to the pivot count as "low".
"""

from __future__ import annotations

import numpy as np

__all__ = ["oracle_sort", "oracle_partition", "oracle_kv_sort", "insertion_sort"]


def oracle_sort(region) -> None:
    """Sort a region ascending in place with an independent, known-correct
    comparison sort (the platform's)."""
    out = np.sort(region)
    assert len(out) == len(region)
    assert np.all(out[:-1] <= out[1:]) if len(out) > 1 else True
    region[:] = out


def insertion_sort(region) -> None:
    """Second, hand-written oracle for cross-checking oracle_sort."""
    for i in range(1, len(region)):
        v = region[i]
        j = i - 1
        while j >= 0 and region[j] > v:
            region[j + 1] = region[j]
            j -= 1
        region[j + 1] = v


def oracle_partition(region, pivot) -> int:
    """Stable two-sided partition: low elements (<= pivot) keep their order
    in the prefix, high elements keep theirs in the suffix.  Returns the
    boundary (= count of elements <= pivot)."""
    arr = np.asarray(region)
    mask = arr <= pivot
    low = arr[mask]
    high = arr[~mask]
    region[:len(low)] = low
    region[len(low):] = high
    return len(low)


def oracle_kv_sort(keys, values) -> None:
    """Sort keys ascending and carry values along, stable by original index
    (so duplicate-key outcomes are reproducible)."""
    assert len(keys) == len(values)
    order = np.argsort(keys, kind="stable")
    keys[:] = keys[order]
    values[:] = values[order]
