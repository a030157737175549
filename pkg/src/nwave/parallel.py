"""Thread-count plumbing shared by both solvers.

The numba thread pool is capped at process start by the NUMBA_NUM_THREADS
environment variable (default: CPU count).  Requests above the cap clamp
to it; launch the interpreter with the variable raised to exceed the
hardware default.  All parallel regions write disjoint rows and all
reductions run in a fixed order, so results are bitwise identical for
every thread count.
"""

from __future__ import annotations

import numba


def thread_cap() -> int:
    return int(numba.config.NUMBA_NUM_THREADS)


def resolve_threads(requested: int | None = 0) -> int:
    """Activate and return the effective thread count (0/None = cap)."""
    cap = thread_cap()
    n = cap if not requested else max(1, min(int(requested), cap))
    numba.set_num_threads(n)
    return n
