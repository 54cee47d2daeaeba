"""Adaptive interval-halving quadrature."""
from __future__ import annotations

import math

MAX_DEPTH = 50


def _simpson(w: float, fa: float, fm: float, fb: float) -> float:
    # (trapezoid + 2 * midpoint) / 3
    return w * (fa + 4.0 * fm + fb) / 6.0


def adaptive_integrate(func, a: float, b: float, tol: float = 1e-10) -> float:
    """Integrate a scalar function over [a, b] to absolute tolerance ``tol``.

    Each cell forms the Simpson combination of its midpoint and trapezoid
    rules, then halves; the two Simpson values differ by about 15 times
    the error of the refined one, so a cell is accepted once that
    difference is within 15 * (its share of tol).  Reversed limits give
    the negated integral; an empty range gives exactly 0.
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_integrate(func, b, a, tol)
    fa, fb = float(func(a)), float(func(b))
    fm = float(func(0.5 * (a + b)))
    if not all(map(math.isfinite, (fa, fm, fb))):
        raise FloatingPointError("non-finite integrand value")
    total = 0.0
    stack = [(a, b, fa, fm, fb, _simpson(b - a, fa, fm, fb), tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, whole, cell_tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fl = float(func(0.5 * (lo + mid)))
        fr = float(func(0.5 * (mid + hi)))
        if not (math.isfinite(fl) and math.isfinite(fr)):
            raise FloatingPointError("non-finite integrand value")
        left = _simpson(mid - lo, flo, fl, fmid)
        right = _simpson(hi - mid, fmid, fr, fhi)
        diff = left + right - whole
        if abs(diff) <= 15.0 * cell_tol or depth >= MAX_DEPTH:
            total += left + right + diff / 15.0
            continue
        stack.append((mid, hi, fmid, fr, fhi, right, 0.5 * cell_tol, depth + 1))
        stack.append((lo, mid, flo, fl, fmid, left, 0.5 * cell_tol, depth + 1))
    if not math.isfinite(total):
        raise FloatingPointError("non-finite integral")
    return total
