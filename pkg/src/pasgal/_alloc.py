"""Allocation accounting for auxiliary-space assertions.

Internal buffers of the parallel algorithms are allocated through
:func:`alloc` so tests can measure peak auxiliary memory.  Accounting is
process-global and cheap when no tracker is active.
"""

import threading
from contextlib import contextmanager

import numpy as np

_lock = threading.Lock()
_trackers: list["AllocationTracker"] = []


class AllocationTracker:
    """Tallies words (8-byte units) allocated while active."""

    def __init__(self):
        self.words = 0
        self.peak_words = 0
        self._live = 0

    def _on_alloc(self, nbytes):
        words = (nbytes + 7) // 8
        self.words += words
        self._live += words
        self.peak_words = max(self.peak_words, self._live)

    def _on_free(self, nbytes):
        self._live -= (nbytes + 7) // 8


@contextmanager
def track_allocations():
    """Context manager yielding an AllocationTracker for the enclosed calls."""
    t = AllocationTracker()
    with _lock:
        _trackers.append(t)
    try:
        yield t
    finally:
        with _lock:
            _trackers.remove(t)


def alloc(shape, dtype, fill=None):
    """Allocate a tracked numpy array."""
    if fill is None:
        out = np.empty(shape, dtype=dtype)
    elif fill == 0:
        out = np.zeros(shape, dtype=dtype)
    else:
        out = np.full(shape, fill, dtype=dtype)
    if _trackers:
        nbytes = out.nbytes
        with _lock:
            for t in _trackers:
                t._on_alloc(nbytes)
    return out


def free(arr):
    """Report that a tracked array's lifetime ended (for peak accounting)."""
    if _trackers:
        nbytes = arr.nbytes
        with _lock:
            for t in _trackers:
                t._on_free(nbytes)
