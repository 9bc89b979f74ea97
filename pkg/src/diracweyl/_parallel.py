import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "DIRACWEYL_THREADS"


def num_threads() -> int:
    """Worker count from $DIRACWEYL_THREADS, defaulting to the CPU count."""
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def slabs(length: int, parts: int) -> list[slice]:
    """Split range(length) into at most ``parts`` contiguous slices."""
    parts = max(1, min(parts, length))
    bounds = [length * i // parts for i in range(parts + 1)]
    return [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def for_each_slab(func, length: int, threads: int | None = None) -> None:
    """Call ``func(slice)`` over a partition of range(length).

    ``func`` must write disjoint outputs; results then do not depend on the
    partition, which keeps every caller bitwise deterministic.
    """
    threads = num_threads() if threads is None else threads
    parts = slabs(length, threads)
    if len(parts) == 1:
        func(parts[0])
        return
    with ThreadPoolExecutor(max_workers=len(parts)) as pool:
        for fut in [pool.submit(func, s) for s in parts]:
            fut.result()
