"""Lane-oriented vector abstraction.

All sorting code in this package is written against fixed-width packs of
lanes mirroring a 512-bit register: 16 lanes for 32-bit integers, 8 lanes
for 64-bit floats.  Two interchangeable backends implement the operation
set:

* ``emulated`` -- a portable lane-by-lane backend with reference semantics.
  Always available, and the one used by every correctness test.  It can
  record an operation trace (see :attr:`EmulatedLanes.trace`).
* ``native`` -- a hardware-accelerated backend.  Pack-level operations run
  as vectorized numpy kernels; the region-level entry points (sort,
  partition, small sort) additionally dispatch to JIT-compiled machine
  code.  Construction fails fast with a diagnostic when the host cannot
  run the compiled kernels.

Both backends produce bit-identical results (NaN inputs are unsupported:
float comparisons use ordered-quiet semantics, so NaNs do not totally
order under the min/max networks).

Lane numbering convention: lane 0 holds the lowest memory address, and all
permutation tables in this package are expressed that way.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "ElemKind",
    "I32",
    "F64",
    "KINDS",
    "EmulatedLanes",
    "NativeLanes",
    "BackendUnavailable",
    "get_backend",
    "available_backends",
    "native_available",
    "native_unavailable_reason",
    "has_full_width_vectors",
    "reversal_perm",
    "is_permutation",
]


class ElemKind(NamedTuple):
    """An element type together with its lane geometry and sentinel."""

    name: str
    dtype: np.dtype
    lanes: int           # 512 / bit-width of the element
    sentinel: int | float  # greatest representable value, used for padding
    py: type             # scalar converter (int or float)


I32 = ElemKind("i32", np.dtype(np.int32), 16, 2**31 - 1, int)
F64 = ElemKind("f64", np.dtype(np.float64), 8, math.inf, float)

KINDS = {"i32": I32, "f64": F64}


class BackendUnavailable(RuntimeError):
    """Raised when the native backend cannot run on this host."""


def is_permutation(perm: Sequence[int], lanes: int) -> bool:
    return len(perm) == lanes and sorted(perm) == list(range(lanes))


_REVERSALS: dict[int, tuple[int, ...]] = {}


def reversal_perm(lanes: int) -> tuple[int, ...]:
    """Permutation mapping lane i to lane lanes-1-i."""
    perm = _REVERSALS.get(lanes)
    if perm is None:
        perm = tuple(range(lanes - 1, -1, -1))
        _REVERSALS[lanes] = perm
    return perm


def _check_region(region, kind: ElemKind) -> None:
    assert isinstance(region, np.ndarray) and region.ndim == 1, "region must be a 1-D array"
    assert region.dtype == kind.dtype, f"region dtype {region.dtype} != {kind.dtype}"


class EmulatedLanes:
    """Portable lane-by-lane backend.

    Packs are tuples of Python scalars and masks are tuples of bools, so
    every operation is a pure function.  When :attr:`trace` is set to a
    list, each pack operation appends a record of its name and structural
    arguments (never data), which lets tests verify that the small-sort
    networks execute a fixed, data-independent operation sequence.
    """

    name = "emulated"
    uses_kernels = False

    def __init__(self, kind: ElemKind):
        self.kind = kind
        self.lanes = kind.lanes
        self.trace: list | None = None

    # -- loads and stores -------------------------------------------------

    def load_full(self, region, offset: int):
        L = self.lanes
        assert 0 <= offset and offset + L <= len(region), "load_full out of bounds"
        if self.trace is not None:
            self.trace.append(("load_full", offset))
        return tuple(region[offset:offset + L].tolist())

    def load_trunc(self, region, offset: int, n: int, fill):
        """Load the first n lanes from memory; fill the rest with a constant."""
        L = self.lanes
        assert 0 <= n <= L, "lane count out of range"
        assert 0 <= offset and offset + n <= len(region), "load_trunc out of bounds"
        if self.trace is not None:
            self.trace.append(("load_trunc", offset, n))
        head = region[offset:offset + n].tolist()
        return tuple(head + [fill] * (L - n))

    def store_full(self, region, offset: int, v) -> None:
        L = self.lanes
        assert 0 <= offset and offset + L <= len(region), "store_full out of bounds"
        if self.trace is not None:
            self.trace.append(("store_full", offset))
        region[offset:offset + L] = v

    def compress_store(self, region, offset: int, mask, v) -> int:
        """Write the mask-selected lanes contiguously, in ascending lane order."""
        vals = [x for x, m in zip(v, mask) if m]
        k = len(vals)
        assert 0 <= offset and offset + k <= len(region), "compress_store overflows region"
        if self.trace is not None:
            self.trace.append(("compress_store", offset))
        if k:
            region[offset:offset + k] = vals
        return k

    # -- pack constructors and lane-wise ops -------------------------------

    def set_all(self, value):
        v = self.kind.py(value)
        if self.trace is not None:
            self.trace.append(("set_all",))
        return (v,) * self.lanes

    def permute(self, v, perm):
        assert is_permutation(perm, self.lanes), "invalid permutation"
        if self.trace is not None:
            self.trace.append(("permute", tuple(perm)))
        return tuple(v[p] for p in perm)

    def lane_min(self, a, b):
        if self.trace is not None:
            self.trace.append(("lane_min",))
        return tuple(x if x <= y else y for x, y in zip(a, b))

    def lane_max(self, a, b):
        if self.trace is not None:
            self.trace.append(("lane_max",))
        return tuple(y if x <= y else x for x, y in zip(a, b))

    def cmp_le(self, a, b):
        if self.trace is not None:
            self.trace.append(("cmp_le",))
        return tuple(x <= y for x, y in zip(a, b))

    def select(self, mask, a, b):
        """Lane i of the result is b_i where the mask is set, else a_i."""
        if self.trace is not None:
            self.trace.append(("select", tuple(mask)))
        return tuple(y if m else x for m, x, y in zip(mask, a, b))

    # -- masks --------------------------------------------------------------

    def mask_popcount(self, mask) -> int:
        return sum(mask)

    def mask_not(self, mask):
        return tuple(not m for m in mask)

    def mask_and(self, a, b):
        return tuple(x and y for x, y in zip(a, b))

    def mask_or(self, a, b):
        return tuple(x or y for x, y in zip(a, b))

    def mask_trunc(self, mask, n: int):
        """Clear every mask bit at lane positions >= n."""
        assert 0 <= n <= self.lanes
        return mask[:n] + (False,) * (self.lanes - n)

    def mask_all(self):
        return (True,) * self.lanes

    def mask_none(self):
        return (False,) * self.lanes

    # -- fused network steps ------------------------------------------------
    # These combine permute / min / max / select into one pass.  Results are
    # identical to the primitive composition (enforced by tests); keeping
    # them on the backend makes the reference path fast enough for the
    # exhaustive network validation.

    def compare_exchange(self, v, perm, dir_mask):
        if self.trace is not None:
            self.trace.append(("compare_exchange", tuple(perm), tuple(dir_mask)))
        w = [v[p] for p in perm]
        return tuple(
            (a if a >= b else b) if d else (a if a <= b else b)
            for a, b, d in zip(v, w, dir_mask)
        )

    def cross_exchange(self, a, b):
        """Compare lane i of a against lane L-1-i of b; minima stay in a."""
        if self.trace is not None:
            self.trace.append(("cross_exchange",))
        br = b[::-1]
        lo = tuple(x if x <= y else y for x, y in zip(a, br))
        hi = tuple(y if x <= y else x for x, y in zip(a, br))
        return lo, hi[::-1]

    def minmax_exchange(self, a, b):
        """Aligned pack pair: minima to the first pack, maxima to the second."""
        if self.trace is not None:
            self.trace.append(("minmax_exchange",))
        lo = tuple(x if x <= y else y for x, y in zip(a, b))
        hi = tuple(y if x <= y else x for x, y in zip(a, b))
        return lo, hi

    # Key/value variants: values follow the exact lane movements chosen for
    # the keys.  The movement decision is taken from the min/max outcome
    # (strict comparison), so lanes holding equal keys keep their own value
    # and pairing survives duplicates.

    def kv_compare_exchange(self, k, v, perm, dir_mask):
        if self.trace is not None:
            self.trace.append(("kv_compare_exchange", tuple(perm), tuple(dir_mask)))
        kp = [k[p] for p in perm]
        vp = [v[p] for p in perm]
        ko = []
        vo = []
        for a, b, x, y, d in zip(k, kp, v, vp, dir_mask):
            if d:
                moved = a < b
            else:
                moved = b < a
            ko.append(b if moved else a)
            vo.append(y if moved else x)
        return tuple(ko), tuple(vo)

    def kv_cross_exchange(self, ka, va, kb, vb):
        if self.trace is not None:
            self.trace.append(("kv_cross_exchange",))
        kbr = kb[::-1]
        vbr = vb[::-1]
        klo, vlo, khi, vhi = [], [], [], []
        for a, b, x, y in zip(ka, kbr, va, vbr):
            if a <= b:
                klo.append(a); vlo.append(x)
                khi.append(b); vhi.append(y)
            else:
                klo.append(b); vlo.append(y)
                khi.append(a); vhi.append(x)
        return tuple(klo), tuple(vlo), tuple(khi[::-1]), tuple(vhi[::-1])

    def kv_minmax_exchange(self, ka, va, kb, vb):
        if self.trace is not None:
            self.trace.append(("kv_minmax_exchange",))
        klo, vlo, khi, vhi = [], [], [], []
        for a, b, x, y in zip(ka, kb, va, vb):
            if a <= b:
                klo.append(a); vlo.append(x)
                khi.append(b); vhi.append(y)
            else:
                klo.append(b); vlo.append(y)
                khi.append(a); vhi.append(x)
        return tuple(klo), tuple(vlo), tuple(khi), tuple(vhi)


class NativeLanes:
    """Hardware wide-vector backend.

    Pack operations run as numpy kernels over L-wide arrays; region-level
    algorithms dispatch to compiled kernels (see :mod:`vexsort._kernels`).
    Results are bit-identical to the emulated backend for non-NaN inputs.
    """

    name = "native"
    uses_kernels = True

    def __init__(self, kind: ElemKind):
        ensure_native_available()
        self.kind = kind
        self.lanes = kind.lanes
        self._idx = np.arange(kind.lanes)

    def load_full(self, region, offset: int):
        L = self.lanes
        assert 0 <= offset and offset + L <= len(region), "load_full out of bounds"
        return region[offset:offset + L].copy()

    def load_trunc(self, region, offset: int, n: int, fill):
        L = self.lanes
        assert 0 <= n <= L, "lane count out of range"
        assert 0 <= offset and offset + n <= len(region), "load_trunc out of bounds"
        out = np.full(L, fill, dtype=region.dtype)
        out[:n] = region[offset:offset + n]
        return out

    def store_full(self, region, offset: int, v) -> None:
        L = self.lanes
        assert 0 <= offset and offset + L <= len(region), "store_full out of bounds"
        region[offset:offset + L] = v

    def compress_store(self, region, offset: int, mask, v) -> int:
        vals = v[mask]
        k = len(vals)
        assert 0 <= offset and offset + k <= len(region), "compress_store overflows region"
        if k:
            region[offset:offset + k] = vals
        return k

    def set_all(self, value):
        return np.full(self.lanes, value, dtype=self.kind.dtype)

    def permute(self, v, perm):
        assert is_permutation(perm, self.lanes), "invalid permutation"
        return np.take(v, perm)

    def lane_min(self, a, b):
        return np.minimum(a, b)

    def lane_max(self, a, b):
        return np.maximum(a, b)

    def cmp_le(self, a, b):
        return np.less_equal(a, b)

    def select(self, mask, a, b):
        return np.where(mask, b, a)

    def mask_popcount(self, mask) -> int:
        return int(np.count_nonzero(mask))

    def mask_not(self, mask):
        return ~np.asarray(mask)

    def mask_and(self, a, b):
        return np.asarray(a) & np.asarray(b)

    def mask_or(self, a, b):
        return np.asarray(a) | np.asarray(b)

    def mask_trunc(self, mask, n: int):
        assert 0 <= n <= self.lanes
        return np.asarray(mask) & (self._idx < n)

    def mask_all(self):
        return np.ones(self.lanes, dtype=bool)

    def mask_none(self):
        return np.zeros(self.lanes, dtype=bool)

    def compare_exchange(self, v, perm, dir_mask):
        w = np.take(v, perm)
        d = np.asarray(dir_mask)
        return np.where(d, np.maximum(v, w), np.minimum(v, w))

    def cross_exchange(self, a, b):
        br = b[::-1]
        return np.minimum(a, br), np.maximum(a, br)[::-1].copy()

    def minmax_exchange(self, a, b):
        return np.minimum(a, b), np.maximum(a, b)

    def kv_compare_exchange(self, k, v, perm, dir_mask):
        kp = np.take(k, perm)
        vp = np.take(v, perm)
        d = np.asarray(dir_mask)
        moved = np.where(d, k < kp, kp < k)
        return np.where(moved, kp, k), np.where(moved, vp, v)

    def kv_cross_exchange(self, ka, va, kb, vb):
        kbr = kb[::-1]
        vbr = vb[::-1]
        keep = ka <= kbr
        klo = np.where(keep, ka, kbr)
        vlo = np.where(keep, va, vbr)
        khi = np.where(keep, kbr, ka)
        vhi = np.where(keep, vbr, va)
        return klo, vlo, khi[::-1].copy(), vhi[::-1].copy()

    def kv_minmax_exchange(self, ka, va, kb, vb):
        keep = ka <= kb
        klo = np.where(keep, ka, kb)
        vlo = np.where(keep, va, vb)
        khi = np.where(keep, kb, ka)
        vhi = np.where(keep, vb, va)
        return klo, vlo, khi, vhi


# -- backend selection -------------------------------------------------------

_NATIVE_FAILURE: str | None = None
_NATIVE_CHECKED = False


def _cpu_features() -> dict:
    try:
        from numpy._core._multiarray_umath import __cpu_features__
    except ImportError:  # older numpy layout
        from numpy.core._multiarray_umath import __cpu_features__  # type: ignore
    return dict(__cpu_features__)


def has_full_width_vectors() -> bool:
    """True when the CPU exposes 512-bit vector instructions."""
    try:
        feats = _cpu_features()
    except Exception:
        return False
    return bool(feats.get("AVX512F"))


def _probe_native() -> str | None:
    """Return None when the native backend can run here, else a diagnostic."""
    try:
        feats = _cpu_features()
    except Exception as exc:
        return f"cannot query CPU vector features: {exc}"
    if feats and not any(feats.values()):
        return "CPU reports no SIMD vector instruction support"
    try:
        import numba  # noqa: F401
    except Exception as exc:
        return f"JIT compiler unavailable: {exc}"
    return None


def ensure_native_available() -> None:
    """Fail fast with a diagnostic when the native backend cannot be used."""
    global _NATIVE_FAILURE, _NATIVE_CHECKED
    if not _NATIVE_CHECKED:
        _NATIVE_FAILURE = _probe_native()
        _NATIVE_CHECKED = True
    if _NATIVE_FAILURE is not None:
        raise BackendUnavailable(
            "native backend unavailable on this host: " + _NATIVE_FAILURE
        )


def native_available() -> bool:
    try:
        ensure_native_available()
    except BackendUnavailable:
        return False
    return True


def native_unavailable_reason() -> str | None:
    try:
        ensure_native_available()
    except BackendUnavailable as exc:
        return str(exc)
    return None


def available_backends() -> tuple[str, ...]:
    return ("emulated", "native") if native_available() else ("emulated",)


_BACKEND_CACHE: dict[tuple[str, str], object] = {}


def get_backend(name: str, kind: ElemKind | str):
    """Return the backend `name` ("emulated", "native", or "auto") for a kind."""
    if isinstance(kind, str):
        kind = KINDS[kind]
    if name == "auto":
        name = "native" if native_available() else "emulated"
    key = (name, kind.name)
    backend = _BACKEND_CACHE.get(key)
    if backend is None:
        if name == "emulated":
            backend = EmulatedLanes(kind)
        elif name == "native":
            backend = NativeLanes(kind)
        else:
            raise ValueError(f"unknown backend {name!r}")
        _BACKEND_CACHE[key] = backend
    return backend


def kind_of(region: np.ndarray) -> ElemKind:
    """Element kind for a region, by dtype."""
    for kind in KINDS.values():
        if region.dtype == kind.dtype:
            return kind
    raise TypeError(f"unsupported element dtype {region.dtype}; use int32 or float64")
