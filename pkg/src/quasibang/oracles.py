"""Slow reference implementations used to cross-check the fast paths."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .sequences import log_convex_minorant

CONTACT_TOL = 1e-12


def support_line_minorant(values) -> tuple[np.ndarray, tuple[int, ...]]:
    """Largest convex minorant of log values via all support lines.

    Every line through two points that stays on or below all points is a
    support line; the minorant at j is the largest such line value.
    Returns (log minorant, contact set).  O(n^3).
    """
    y = np.log(np.asarray(values, dtype=float))
    n = y.size
    if n == 1:
        return y.copy(), (0,)
    tol = CONTACT_TOL * np.maximum(1.0, np.abs(y))
    j = np.arange(n, dtype=float)
    best = np.full(n, -np.inf)
    for a in range(n):
        for b in range(a + 1, n):
            slope = (y[b] - y[a]) / (b - a)
            line = y[a] + slope * (j - a)
            if np.all(line <= y + tol):
                best = np.maximum(best, line)
    contact = tuple(int(i) for i in np.nonzero(y - best <= tol)[0])
    best = np.where(y - best <= tol, y, best)
    return best, contact


def brute_original_bang(f, raw_values, x: float) -> float:
    """Direct loop over every contact index p and every j <= p."""
    res = log_convex_minorant(raw_values)
    log_mc = res.minorant.log_m
    best = math.inf
    for p in res.contact_set:
        inner = math.exp(-p)
        for j in range(p + 1):
            if f.max_order is not None and j > f.max_order:
                break
            vals, log_scale = f.scaled_derivative(j, np.array([x]))
            inner = max(inner, abs(float(vals[0])) * math.exp(log_scale - j - log_mc[j]))
        best = min(best, inner)
    return best


def harmonic_degree(K: int) -> int:
    """Bang degree of the factorial class from exact harmonic partial sums.

    Largest N with sum_{K < j <= N} 1/j < e, compared exactly against
    rational bounds on e.
    """
    e_lo, e_hi = _e_bracket()
    total = Fraction(0)
    j = K + 1
    while True:
        nxt = total + Fraction(1, j)
        if nxt >= e_hi:
            return j - 1
        if nxt > e_lo:
            raise ArithmeticError("partial sum too close to e to decide")
        total = nxt
        j += 1


def _e_bracket(terms: int = 30) -> tuple[Fraction, Fraction]:
    s = Fraction(0)
    fact = 1
    for k in range(terms):
        if k:
            fact *= k
        s += Fraction(1, fact)
    # tail of the exponential series after `terms` terms is < 2 / terms!
    return s, s + Fraction(2, fact * terms)

