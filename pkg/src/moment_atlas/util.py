"""Small shared utilities."""

from __future__ import annotations

import os


def thread_count() -> int:
    """Worker cap for embarrassingly parallel stages.

    Controlled by the MOMENT_ATLAS_THREADS environment variable; defaults to
    at most four workers.
    """
    env = os.environ.get("MOMENT_ATLAS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)
