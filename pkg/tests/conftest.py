import numpy as np
import pytest

from vexsort.lanes import F64, I32, EmulatedLanes, NativeLanes, native_available

KIND_PARAMS = [pytest.param(I32, id="i32"), pytest.param(F64, id="f64")]


@pytest.fixture(params=KIND_PARAMS)
def kind(request):
    return request.param


@pytest.fixture
def emulated(kind):
    return EmulatedLanes(kind)


@pytest.fixture
def native(kind):
    if not native_available():
        pytest.skip("native backend unavailable on this host")
    return NativeLanes(kind)


@pytest.fixture(params=["emulated", "native"])
def any_backend(request, kind):
    if request.param == "native":
        if not native_available():
            pytest.skip("native backend unavailable on this host")
        return NativeLanes(kind)
    return EmulatedLanes(kind)


def random_region(rng, kind, n, lo=None, hi=None):
    if kind.dtype == np.dtype(np.int32):
        lo = -(2**31) if lo is None else lo
        hi = 2**31 - 1 if hi is None else hi
        return rng.integers(lo, hi, size=n, dtype=np.int64, endpoint=True).astype(np.int32)
    lo = -1e9 if lo is None else lo
    hi = 1e9 if hi is None else hi
    return rng.uniform(lo, hi, size=n)


class ShadowLanes:
    """Emulated-backend wrapper that tracks which region slots have been
    consumed by loads and asserts that every store targets only already-
    consumed space."""

    def __init__(self, inner: EmulatedLanes):
        self._inner = inner
        self.kind = inner.kind
        self.lanes = inner.lanes
        self.uses_kernels = False
        self.consumed: set[int] = set()

    def reset(self):
        self.consumed.clear()

    def load_full(self, region, offset):
        self.consumed.update(range(offset, offset + self.lanes))
        return self._inner.load_full(region, offset)

    def load_trunc(self, region, offset, n, fill):
        self.consumed.update(range(offset, offset + n))
        return self._inner.load_trunc(region, offset, n, fill)

    def store_full(self, region, offset, v):
        target = set(range(offset, offset + self.lanes))
        assert target <= self.consumed, f"store into unconsumed slots {sorted(target - self.consumed)}"
        self._inner.store_full(region, offset, v)

    def compress_store(self, region, offset, mask, v):
        k = self._inner.mask_popcount(mask)
        target = set(range(offset, offset + k))
        assert target <= self.consumed, f"store into unconsumed slots {sorted(target - self.consumed)}"
        return self._inner.compress_store(region, offset, mask, v)

    def __getattr__(self, name):
        return getattr(self._inner, name)
