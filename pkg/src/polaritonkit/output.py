"""Deterministic file output and the shared worker pool.

Numbers are written with %.17g so a float round-trips exactly and two
runs with the same inputs produce byte-identical files.  Manifests are
JSON with sorted keys and relative filenames only; nothing time- or
host-dependent goes in.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "POLARITONKIT_THREADS"


def format_cell(value) -> str:
    """One CSV cell: %.17g for floats, bare digits for ints and bools."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def write_csv(path, header, rows) -> None:
    """Comma-separated table with LF line endings, no quoting needed."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_manifest(path, payload: dict) -> None:
    """Sorted-keys JSON manifest; caller guarantees relative filenames."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def worker_count() -> int:
    """Pool width: POLARITONKIT_THREADS if set, else the CPU count."""
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            n = int(raw)
        except ValueError:
            n = 1
        return max(1, n)
    return max(1, os.cpu_count() or 1)


def parallel_map(fn, items) -> list:
    """Order-preserving map over a thread pool.

    Threads rather than processes: the heavy lifting happens inside
    BLAS/FFT calls that release the GIL, and thread results need no
    pickling.  A single worker degenerates to a plain loop so behavior
    stays deterministic either way.
    """
    items = list(items)
    n_workers = min(worker_count(), max(1, len(items)))
    if n_workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(fn, items))
