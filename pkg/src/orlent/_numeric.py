"""Bisection and small parallel helpers."""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def bisect_increasing(f, target, lo, hi, xtol=0.0, ftol=0.0, max_iter=200):
    """Find x in [lo, hi] with f(x) ~= target for a non-decreasing scalar f.

    Stops when |f(x) - target| <= ftol, when the bracket is narrower than
    xtol, or when the midpoint stops moving in floating point.
    """
    flo = f(lo)
    if flo >= target:
        return lo
    x = hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if abs(fm - target) <= ftol:
            return mid
        if fm < target:
            lo = mid
        else:
            hi = mid
        x = hi
        if hi - lo <= xtol:
            break
    # hi always satisfies f(hi) >= target (or is the initial bracket end)
    return x if abs(f(x) - target) <= abs(f(lo) - target) else lo


def bisect_increasing_vec(f, target, lo, hi, max_iter=200):
    """Elementwise bisection for a non-decreasing vectorised f.

    ``lo``, ``hi`` and ``target`` broadcast together. Returns the upper
    bracket end, so ``f(result) >= target`` wherever ``f(hi) >= target``.
    """
    target, lo, hi = np.broadcast_arrays(
        np.asarray(target, float), np.asarray(lo, float), np.asarray(hi, float)
    )
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        moving = (mid > lo) & (mid < hi)
        if not moving.any():
            break
        below = f(mid) < target
        lo = np.where(moving & below, mid, lo)
        hi = np.where(moving & ~below, mid, hi)
    return hi


def thread_count():
    """Worker cap from ORLENT_THREADS (default 1)."""
    raw = os.environ.get("ORLENT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def chunked_map(func, chunks):
    """Map over chunks, in order; threads only when ORLENT_THREADS > 1."""
    workers = thread_count()
    if workers == 1 or len(chunks) <= 1:
        return [func(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, chunks))
