"""Order-preserving map over a thread pool.

Randomness is always drawn by the caller before mapping, so results do not
depend on the worker count.  The compiled kernels release the GIL.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np


def pmap(fn, items, workers: int = 1) -> list:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def child_rngs(rng: np.random.Generator, count: int) -> list:
    """Independent generators derived from one draw of ``rng``."""
    seed = int(rng.integers(2**63))
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def warm(G) -> None:
    """Build lazily cached tables before threads share the group."""
    if G.n <= G.caps.table:
        G.table
        G.inverses
