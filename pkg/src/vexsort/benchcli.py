"""Benchmark harness comparing the vectorized sort against the platform's
standard sort and partition, with built-in correctness gating.

Three experiments, each emitting CSV records:

* ``smallsort`` -- every array size from 1 to 16 packs.
* ``partition`` -- power-of-two sizes, randomly selected pivot.
* ``fullsort``  -- power-of-two sizes.

Inputs are drawn uniformly over the element range from a PRNG seeded per
(experiment, type, size), so a fixed ``--seed`` reproduces the same arrays,
checksums and row order.  Before anything is timed, every algorithm's
output is checked against the scalar oracle; a benchmark aborts with a
non-zero exit rather than report timings of wrong code.  Checksums are
computed over a canonical form of the output (sorted order for partitions,
key-then-value order for pairs), so they must agree across algorithms.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
import time
from dataclasses import dataclass, fields

import numpy as np

from . import oracle
from .keyvalue import kv_partition_region, kv_sort
from .lanes import KINDS, BackendUnavailable, get_backend
from .partition import partition_region
from .quicksort import SortConfig, sort_with_config
from .smallsort import MAX_PACKS, sort_small_region

__all__ = [
    "BenchRecord",
    "GateError",
    "CSV_HEADER",
    "run_smallsort_bench",
    "run_partition_bench",
    "run_fullsort_bench",
    "emit_csv",
    "load_records",
    "main",
]

EXPERIMENTS = ("smallsort", "partition", "fullsort")
CLI_TYPES = ("i32", "f64", "kv")
DEFAULT_REPS = {"smallsort": 1000, "partition": 20, "fullsort": 5}

# Widest uniform span that numpy can sample without overflowing a double.
_F64_SPAN = np.finfo(np.float64).max / 2

_BATCH_LIMIT_BYTES = 128 << 20


class GateError(RuntimeError):
    """An algorithm produced incorrect output; timings were not recorded."""


@dataclass
class BenchRecord:
    experiment: str
    elem_type: str  # i32 | f64 | kv_i32
    n: int
    algorithm: str  # vexsort | baseline_sort | baseline_partition
    reps: int
    mean_seconds: float
    normalized: float
    checksum: str


CSV_HEADER = ",".join(f.name for f in fields(BenchRecord))


# -- deterministic inputs ------------------------------------------------------


def _rng(seed: int, experiment: str, elem_type: str, n: int):
    ss = np.random.SeedSequence(
        [seed, EXPERIMENTS.index(experiment), CLI_TYPES.index(elem_type), n]
    )
    return np.random.default_rng(ss)


def make_input(elem_type: str, n: int, rng):
    """Seeded uniform data over the element range; kv values are the
    original indexes so the sorted values form a sorting permutation."""
    if elem_type == "i32":
        return rng.integers(-(2**31), 2**31 - 1, size=n, dtype=np.int32, endpoint=True)
    if elem_type == "f64":
        return rng.uniform(-_F64_SPAN, _F64_SPAN, size=n)
    keys = rng.integers(-(2**31), 2**31 - 1, size=n, dtype=np.int32, endpoint=True)
    values = np.arange(n, dtype=np.int32)
    return keys, values


def _record_type(elem_type: str) -> str:
    return "kv_i32" if elem_type == "kv" else elem_type


# -- checksums -----------------------------------------------------------------


def _digest(*parts: bytes) -> str:
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        h.update(p)
    return h.hexdigest()


def checksum_sorted(arr) -> str:
    return _digest(np.ascontiguousarray(arr).tobytes())


def checksum_partitioned(arr, boundary: int) -> str:
    return _digest(np.sort(arr).tobytes(), int(boundary).to_bytes(8, "little"))


def checksum_pairs(keys, values) -> str:
    order = np.lexsort((values, keys))
    return _digest(keys[order].tobytes(), values[order].tobytes())


def checksum_partitioned_pairs(keys, values, boundary: int) -> str:
    b = int(boundary)
    lo = np.lexsort((values[:b], keys[:b]))
    hi = np.lexsort((values[b:], keys[b:]))
    return _digest(
        keys[:b][lo].tobytes(), values[:b][lo].tobytes(),
        keys[b:][hi].tobytes(), values[b:][hi].tobytes(),
        b.to_bytes(8, "little"),
    )


# -- timing --------------------------------------------------------------------


def _timed_mean(run, fresh, reps: int, nbytes: int) -> float:
    """Mean wall time of run(fresh()) over `reps` repetitions.

    Copies are prepared outside the timed section; small workloads are
    timed as one batch to keep clock-read overhead out of the mean.
    """
    if nbytes * reps <= _BATCH_LIMIT_BYTES:
        inputs = [fresh() for _ in range(reps)]
        t0 = time.perf_counter()
        for x in inputs:
            run(x)
        t1 = time.perf_counter()
        return (t1 - t0) / reps
    total = 0.0
    for _ in range(reps):
        x = fresh()
        t0 = time.perf_counter()
        run(x)
        t1 = time.perf_counter()
        total += t1 - t0
    return total / reps


def _sort_norm(mean: float, n: int) -> float:
    denom = n * math.log2(n) if n > 1 else 1.0
    return mean / denom


# -- baselines -----------------------------------------------------------------


def _baseline_partition(arr, pivot) -> int:
    mask = arr <= pivot
    low = arr[mask]
    high = arr[~mask]
    arr[: len(low)] = low
    arr[len(low):] = high
    return len(low)


def _baseline_kv_partition(keys, values, pivot) -> int:
    mask = keys <= pivot
    inv = ~mask
    klo, khi = keys[mask], keys[inv]
    vlo, vhi = values[mask], values[inv]
    b = len(klo)
    keys[:b] = klo
    keys[b:] = khi
    values[:b] = vlo
    values[b:] = vhi
    return b


# -- vexsort runners -----------------------------------------------------------


def _vex_smallsort_runner(backend, config: SortConfig):
    if backend.uses_kernels:
        from . import _kernels

        kern = _kernels.smallsort_region
        sentinel = backend.kind.sentinel

        def run(arr):
            kern(arr, 0, len(arr), sentinel)

        return run
    return lambda arr: sort_small_region(arr, backend)


def _vex_kv_smallsort_runner(backend, config: SortConfig):
    if backend.uses_kernels:
        from . import _kernels

        kern = _kernels.kv_smallsort_region
        sentinel = backend.kind.sentinel

        def run(kv):
            keys, values = kv
            kern(keys, values, 0, len(keys), sentinel)

        return run

    def run(kv):
        from .keyvalue import kv_sort_small_region

        kv_sort_small_region(kv[0], kv[1], backend)

    return run


# -- experiments ---------------------------------------------------------------


def _verify_sorted(tag: str, out, reference_checksum: str, checksum) -> str:
    got = checksum(out)
    if got != reference_checksum:
        raise GateError(f"{tag}: output does not match the oracle")
    return got


def run_smallsort_bench(elem_type: str, *, reps: int = 1000, seed: int = 1,
                        backend: str = "auto",
                        config: SortConfig | None = None) -> list[BenchRecord]:
    """Time the small-region sort against the standard sort for every size
    from 1 to 16 packs."""
    config = config or SortConfig(backend=backend)
    records: list[BenchRecord] = []
    key_kind = KINDS["i32" if elem_type == "kv" else elem_type]
    be = get_backend(backend, key_kind)
    sizes = range(1, MAX_PACKS * key_kind.lanes + 1)
    for n in sizes:
        rng = _rng(seed, "smallsort", elem_type, n)
        data = make_input(elem_type, n, rng)
        if elem_type == "kv":
            keys0, vals0 = data
            ref_keys, ref_vals = keys0.copy(), vals0.copy()
            oracle.oracle_kv_sort(ref_keys, ref_vals)
            ref_sum = checksum_pairs(ref_keys, ref_vals)

            vex = _vex_kv_smallsort_runner(be, config)
            kv = (keys0.copy(), vals0.copy())
            vex(kv)
            if not np.all(kv[0][:-1] <= kv[0][1:]):
                raise GateError(f"smallsort/kv n={n}: keys not ascending")
            _verify_sorted(f"smallsort/kv n={n}", kv,
                           ref_sum, lambda p: checksum_pairs(p[0], p[1]))
            mean = _timed_mean(vex, lambda: (keys0.copy(), vals0.copy()),
                               reps, keys0.nbytes * 2)
            records.append(BenchRecord("smallsort", "kv_i32", n, "vexsort", reps,
                                       mean, _sort_norm(mean, n), ref_sum))

            pairs = list(zip(keys0.tolist(), vals0.tolist()))
            out = sorted(pairs)
            bk = np.array([p[0] for p in out], dtype=np.int32)
            bv = np.array([p[1] for p in out], dtype=np.int32)
            _verify_sorted(f"smallsort/kv-baseline n={n}", (bk, bv),
                           ref_sum, lambda p: checksum_pairs(p[0], p[1]))
            mean = _timed_mean(lambda p: sorted(p), lambda: pairs,
                               reps, keys0.nbytes * 2)
            records.append(BenchRecord("smallsort", "kv_i32", n, "baseline_sort",
                                       reps, mean, _sort_norm(mean, n), ref_sum))
            continue

        base = data
        ref = np.sort(base)
        ref_sum = checksum_sorted(ref)

        vex = _vex_smallsort_runner(be, config)
        w = base.copy()
        vex(w)
        _verify_sorted(f"smallsort/{elem_type} n={n}", w, ref_sum, checksum_sorted)
        mean = _timed_mean(vex, base.copy, reps, base.nbytes)
        records.append(BenchRecord("smallsort", elem_type, n, "vexsort", reps,
                                   mean, _sort_norm(mean, n), ref_sum))

        lst = base.tolist()
        out = np.array(sorted(lst), dtype=base.dtype)
        _verify_sorted(f"smallsort/{elem_type}-baseline n={n}", out, ref_sum,
                       checksum_sorted)
        mean = _timed_mean(lambda x: sorted(x), lambda: lst, reps, base.nbytes)
        records.append(BenchRecord("smallsort", elem_type, n, "baseline_sort",
                                   reps, mean, _sort_norm(mean, n), ref_sum))
    return records


def run_partition_bench(elem_type: str, *, max_exp: int = 24, reps: int = 20,
                        seed: int = 1, backend: str = "auto",
                        config: SortConfig | None = None) -> list[BenchRecord]:
    """Time the vectorized partition against the baseline partition over
    power-of-two sizes; the pivot is a randomly selected element."""
    config = config or SortConfig(backend=backend)
    records: list[BenchRecord] = []
    key_kind = KINDS["i32" if elem_type == "kv" else elem_type]
    be = get_backend(backend, key_kind)
    opts = dict(skip_empty_stores=config.skip_empty_stores,
                swap_buffered=config.swap_buffered)
    for e in range(1, max_exp + 1):
        n = 1 << e
        rng = _rng(seed, "partition", elem_type, n)
        data = make_input(elem_type, n, rng)
        if elem_type == "kv":
            keys0, vals0 = data
            pivot = keys0[int(rng.integers(0, n))]
            expected_b = int(np.count_nonzero(keys0 <= pivot))
            ref_sum = None

            def check_kv(tag, keys, values, b):
                if b != expected_b:
                    raise GateError(f"{tag}: boundary {b} != oracle {expected_b}")
                if not (np.all(keys[:b] <= pivot) and np.all(keys[b:] > pivot)):
                    raise GateError(f"{tag}: partition postcondition violated")
                return checksum_partitioned_pairs(keys, values, b)

            wk, wv = keys0.copy(), vals0.copy()
            b = kv_partition_region(wk, wv, pivot, be, **opts)
            ref_sum = check_kv(f"partition/kv n={n}", wk, wv, b)
            mean = _timed_mean(
                lambda kv: kv_partition_region(kv[0], kv[1], pivot, be, **opts),
                lambda: (keys0.copy(), vals0.copy()), reps, keys0.nbytes * 2)
            records.append(BenchRecord("partition", "kv_i32", n, "vexsort", reps,
                                       mean, mean / n, ref_sum))

            wk, wv = keys0.copy(), vals0.copy()
            b = _baseline_kv_partition(wk, wv, pivot)
            got = check_kv(f"partition/kv-baseline n={n}", wk, wv, b)
            if got != ref_sum:
                raise GateError(f"partition/kv n={n}: checksum mismatch")
            mean = _timed_mean(
                lambda kv: _baseline_kv_partition(kv[0], kv[1], pivot),
                lambda: (keys0.copy(), vals0.copy()), reps, keys0.nbytes * 2)
            records.append(BenchRecord("partition", "kv_i32", n, "baseline_partition",
                                       reps, mean, mean / n, ref_sum))
            continue

        base = data
        pivot = base[int(rng.integers(0, n))]
        expected_b = int(np.count_nonzero(base <= pivot))

        def check(tag, arr, b):
            if b != expected_b:
                raise GateError(f"{tag}: boundary {b} != oracle {expected_b}")
            if not (np.all(arr[:b] <= pivot) and np.all(arr[b:] > pivot)):
                raise GateError(f"{tag}: partition postcondition violated")
            return checksum_partitioned(arr, b)

        w = base.copy()
        b = partition_region(w, pivot, be, **opts)
        ref_sum = check(f"partition/{elem_type} n={n}", w, b)
        mean = _timed_mean(lambda arr: partition_region(arr, pivot, be, **opts),
                           base.copy, reps, base.nbytes)
        records.append(BenchRecord("partition", elem_type, n, "vexsort", reps,
                                   mean, mean / n, ref_sum))

        w = base.copy()
        b = _baseline_partition(w, pivot)
        got = check(f"partition/{elem_type}-baseline n={n}", w, b)
        if got != ref_sum:
            raise GateError(f"partition/{elem_type} n={n}: checksum mismatch")
        mean = _timed_mean(lambda arr: _baseline_partition(arr, pivot),
                           base.copy, reps, base.nbytes)
        records.append(BenchRecord("partition", elem_type, n, "baseline_partition",
                                   reps, mean, mean / n, ref_sum))
    return records


def run_fullsort_bench(elem_type: str, *, max_exp: int = 24, reps: int = 5,
                       seed: int = 1, backend: str = "auto",
                       config: SortConfig | None = None) -> list[BenchRecord]:
    """Time the hybrid sort against the standard sort over power-of-two
    sizes; outputs are verified ascending and checksum-gated first."""
    config = config or SortConfig(backend=backend)
    records: list[BenchRecord] = []
    for e in range(1, max_exp + 1):
        n = 1 << e
        rng = _rng(seed, "fullsort", elem_type, n)
        data = make_input(elem_type, n, rng)
        if elem_type == "kv":
            keys0, vals0 = data
            ref_keys, ref_vals = keys0.copy(), vals0.copy()
            oracle.oracle_kv_sort(ref_keys, ref_vals)
            ref_sum = checksum_pairs(ref_keys, ref_vals)

            def vex(kv):
                kv_sort(kv[0], kv[1], config)

            wk, wv = keys0.copy(), vals0.copy()
            vex((wk, wv))
            if not np.all(wk[:-1] <= wk[1:]):
                raise GateError(f"fullsort/kv n={n}: keys not ascending")
            _verify_sorted(f"fullsort/kv n={n}", (wk, wv), ref_sum,
                           lambda p: checksum_pairs(p[0], p[1]))
            mean = _timed_mean(vex, lambda: (keys0.copy(), vals0.copy()), reps,
                               keys0.nbytes * 2)
            records.append(BenchRecord("fullsort", "kv_i32", n, "vexsort", reps,
                                       mean, _sort_norm(mean, n), ref_sum))

            pairs = list(zip(keys0.tolist(), vals0.tolist()))
            out = sorted(pairs)
            bk = np.array([p[0] for p in out], dtype=np.int32)
            bv = np.array([p[1] for p in out], dtype=np.int32)
            _verify_sorted(f"fullsort/kv-baseline n={n}", (bk, bv), ref_sum,
                           lambda p: checksum_pairs(p[0], p[1]))
            mean = _timed_mean(lambda p: sorted(p), lambda: pairs, reps,
                               keys0.nbytes * 2)
            records.append(BenchRecord("fullsort", "kv_i32", n, "baseline_sort",
                                       reps, mean, _sort_norm(mean, n), ref_sum))
            continue

        base = data
        ref = np.sort(base)
        ref_sum = checksum_sorted(ref)

        def vex(arr):
            sort_with_config(arr, config)

        w = base.copy()
        vex(w)
        if not np.all(w[:-1] <= w[1:]):
            raise GateError(f"fullsort/{elem_type} n={n}: output not ascending")
        _verify_sorted(f"fullsort/{elem_type} n={n}", w, ref_sum, checksum_sorted)
        mean = _timed_mean(vex, base.copy, reps, base.nbytes)
        records.append(BenchRecord("fullsort", elem_type, n, "vexsort", reps,
                                   mean, _sort_norm(mean, n), ref_sum))

        lst = base.tolist()
        out = np.array(sorted(lst), dtype=base.dtype)
        _verify_sorted(f"fullsort/{elem_type}-baseline n={n}", out, ref_sum,
                       checksum_sorted)
        mean = _timed_mean(lambda x: sorted(x), lambda: lst, reps, base.nbytes)
        records.append(BenchRecord("fullsort", elem_type, n, "baseline_sort",
                                   reps, mean, _sort_norm(mean, n), ref_sum))
    return records


# -- CSV -----------------------------------------------------------------------


def emit_csv(records: list[BenchRecord], out) -> None:
    """Write records as CSV in deterministic row order.

    `out` is a writable text stream.  Numeric fields use full-precision
    decimal with a dot separator.
    """
    ordered = sorted(records, key=lambda r: (r.experiment, r.elem_type, r.n,
                                             r.algorithm))
    out.write(CSV_HEADER + "\n")
    for r in ordered:
        out.write(f"{r.experiment},{r.elem_type},{r.n},{r.algorithm},"
                  f"{r.reps},{r.mean_seconds!r},{r.normalized!r},{r.checksum}\n")


def load_records(path) -> list[BenchRecord]:
    """Parse a CSV file produced by emit_csv back into records."""
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            exp, et, n, alg, reps, mean, norm, chk = line.split(",")
            records.append(BenchRecord(exp, et, int(n), alg, int(reps),
                                       float(mean), float(norm), chk))
    return records


# -- CLI -----------------------------------------------------------------------


def _speedup_report(records: list[BenchRecord], err) -> None:
    by_key = {}
    for r in records:
        by_key.setdefault((r.experiment, r.elem_type, r.n), {})[r.algorithm] = r
    for (exp, et, n), algs in sorted(by_key.items()):
        vex = algs.get("vexsort")
        base = algs.get("baseline_sort") or algs.get("baseline_partition")
        if vex and base and vex.mean_seconds > 0:
            err.write(f"# {exp} {et} n={n}: speedup "
                      f"{base.mean_seconds / vex.mean_seconds:.2f}x\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Sorting/partitioning benchmark with correctness gating.",
    )
    parser.add_argument("--experiment", choices=(*EXPERIMENTS, "all"), default="all")
    parser.add_argument("--type", dest="elem_type", choices=(*CLI_TYPES, "all"),
                        default="all")
    parser.add_argument("--max-exp", type=int, default=24,
                        help="largest size is 2**MAX_EXP (partition/fullsort)")
    parser.add_argument("--reps", type=int, default=None,
                        help="override per-experiment repetition defaults "
                             f"({DEFAULT_REPS})")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--backend", choices=("emulated", "native", "auto"),
                        default="auto")
    parser.add_argument("--out", default="-", help="CSV path ('-' for stdout)")
    parser.add_argument("--opt-a", action="store_true",
                        help="partition: skip empty compress-stores")
    parser.add_argument("--opt-b", action="store_true",
                        help="partition: swap the freshly loaded pack with the "
                             "buffered extremity pack")
    args = parser.parse_args(argv)

    experiments = EXPERIMENTS if args.experiment == "all" else (args.experiment,)
    types = CLI_TYPES if args.elem_type == "all" else (args.elem_type,)
    config = SortConfig(backend=args.backend, skip_empty_stores=args.opt_a,
                        swap_buffered=args.opt_b)

    records: list[BenchRecord] = []
    err = sys.stderr
    try:
        for exp in experiments:
            for et in types:
                reps = args.reps if args.reps is not None else DEFAULT_REPS[exp]
                err.write(f"# running {exp}/{et} (reps={reps}, "
                          f"backend={args.backend})\n")
                if exp == "smallsort":
                    records += run_smallsort_bench(
                        et, reps=reps, seed=args.seed, backend=args.backend,
                        config=config)
                elif exp == "partition":
                    records += run_partition_bench(
                        et, max_exp=args.max_exp, reps=reps, seed=args.seed,
                        backend=args.backend, config=config)
                else:
                    records += run_fullsort_bench(
                        et, max_exp=args.max_exp, reps=reps, seed=args.seed,
                        backend=args.backend, config=config)
    except GateError as exc:
        err.write(f"correctness gate failed: {exc}\n")
        return 1
    except BackendUnavailable as exc:
        err.write(f"{exc}\n")
        return 2

    _speedup_report(records, err)
    try:
        if args.out == "-":
            emit_csv(records, sys.stdout)
        else:
            with open(args.out, "w", encoding="utf-8") as fh:
                emit_csv(records, fh)
    except OSError as exc:
        err.write(f"cannot write {args.out}: {exc}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
