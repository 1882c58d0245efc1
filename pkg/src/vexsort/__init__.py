"""vexsort: hybrid quicksort over a lane-oriented vector abstraction.

The sort recursively partitions in place with a vectorized two-cursor
compress scheme, then finishes small subranges with branch-free bitonic
networks.  Works on 1-D numpy arrays of int32 or float64 (NaNs
unsupported); key/value variants sort twin arrays jointly by key.
"""

from .keyvalue import (
    kv_partition_region,
    kv_scalar_partition,
    kv_sort,
    kv_sort_small_region,
)
from .lanes import (
    BackendUnavailable,
    available_backends,
    get_backend,
    has_full_width_vectors,
    native_available,
)
from .partition import partition_region, scalar_partition
from .quicksort import SortConfig, sort, sort_with_config
from .smallsort import sort_small_region

__version__ = "0.1.0"

__all__ = [
    "sort",
    "sort_with_config",
    "SortConfig",
    "partition_region",
    "scalar_partition",
    "sort_small_region",
    "kv_sort",
    "kv_partition_region",
    "kv_sort_small_region",
    "kv_scalar_partition",
    "get_backend",
    "available_backends",
    "native_available",
    "has_full_width_vectors",
    "BackendUnavailable",
    "__version__",
]
