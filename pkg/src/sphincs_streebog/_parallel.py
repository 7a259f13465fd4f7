from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def pmap(workers: int, fn, items) -> list:
    """Ordered map; threads only pay off because the kernels release the GIL."""
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
