"""Deterministic work splitting.

Heavy loops are split into fixed-size chunks that do not depend on the
thread count, and per-chunk partial results are combined in chunk index
order. Outputs are therefore bit-identical whether a job runs on one
thread or many.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

# Fixed chunk length for word enumeration; must never depend on threads.
WORD_CHUNK = 1 << 16


def chunk_ranges(total, chunk=WORD_CHUNK):
    """Half-open index ranges [(0,c), (c,2c), ...] covering range(total)."""
    return [(lo, min(lo + chunk, total)) for lo in range(0, max(total, 0), chunk)]


def map_ordered(fn, items, threads=1):
    """Apply fn to each item, returning results in input order.

    threads <= 1 runs inline; otherwise a thread pool is used. The result
    order (and therefore any subsequent reduction) is identical either way.
    """
    if threads is None or threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=int(threads)) as pool:
        return list(pool.map(fn, items))
