"""Exact rational polynomial arithmetic for zero counting.

Polynomials are lists of Fractions, lowest degree first, with no trailing
zeros; the zero polynomial is the empty list.  Float coefficients convert
to Fractions exactly, so the counts refer to the polynomial the floats
actually represent.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

Poly = list  # list[Fraction], low degree first


def to_exact(coeffs: Iterable[float]) -> Poly:
    return trim([Fraction(c) for c in coeffs])


def trim(p: Poly) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Poly) -> int:
    return len(p) - 1


def derivative(p: Poly) -> Poly:
    return trim([i * c for i, c in enumerate(p)][1:])


def monic(p: Poly) -> Poly:
    lead = p[-1]
    return [c / lead for c in p]


def evaluate(p: Poly, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def divmod_poly(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num)
    dd = degree(den)
    lead = den[-1]
    quot = [Fraction(0)] * max(len(num) - dd, 1)
    while rem and degree(rem) >= dd:
        shift = degree(rem) - dd
        coef = rem[-1] / lead
        quot[shift] = coef
        for i, c in enumerate(den):
            rem[shift + i] -= coef * c
        rem = trim(rem)
    return trim(quot), rem


def gcd(a: Poly, b: Poly) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a) if a else a


def square_free_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: p = lead * prod a_i^i with each a_i square-free.

    Returns (a_i, i) for the non-constant factors only.
    """
    p = trim(p)
    if degree(p) < 1:
        return []
    dp = derivative(p)
    a = gcd(p, dp)
    b, _ = divmod_poly(p, a)
    c, _ = divmod_poly(dp, a)
    d = _sub(c, derivative(b))
    out = []
    i = 1
    while degree(b) >= 1:
        a_i = gcd(b, d)
        if degree(a_i) >= 1:
            out.append((a_i, i))
        b, _ = divmod_poly(b, a_i)
        c, _ = divmod_poly(d, a_i)
        d = _sub(c, derivative(b))
        i += 1
    return out


def _sub(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return trim([x - y for x, y in zip(a, b)])


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [trim(p), derivative(p)]
    while seq[-1]:
        _, r = divmod_poly(seq[-2], seq[-1])
        r = [-c for c in r]
        if r:
            # positive rescaling keeps the signs and the rationals small
            scale = abs(r[-1])
            r = [c / scale for c in r]
        seq.append(r)
    return [q for q in seq if q]


def _sign_changes(seq: list[Poly], x: Fraction) -> int:
    signs = []
    for q in seq:
        v = evaluate(q, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_distinct_roots(p: Poly, a: Fraction, b: Fraction, sturm: list[Poly] | None = None) -> int:
    """Distinct real roots of a square-free p in the closed interval [a, b]."""
    if sturm is None:
        sturm = sturm_sequence(p)
    n = _sign_changes(sturm, a) - _sign_changes(sturm, b)  # roots in (a, b]
    if evaluate(p, a) == 0:
        n += 1
    return n


def isolate_roots(p: Poly, a: Fraction, b: Fraction, max_depth: int = 200) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals each holding exactly one root of square-free p in [a, b].

    Bisects half-open cells (lo, hi] on Sturm counts; a root at ``a``
    comes back as the degenerate interval (a, a).
    """
    sturm = sturm_sequence(p)
    out: list[tuple[Fraction, Fraction]] = []
    if evaluate(p, a) == 0:
        out.append((a, a))
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        n = _sign_changes(sturm, lo) - _sign_changes(sturm, hi)
        if n == 0:
            continue
        if n == 1 or depth >= max_depth:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi, depth + 1))
        stack.append((lo, mid, depth + 1))
    return sorted(out)


def count_roots_with_multiplicity(p: Poly, a: Fraction, b: Fraction) -> int:
    """Real roots of p in [a, b] counted with multiplicity."""
    p = trim(p)
    if not p:
        raise ValueError("the zero polynomial has infinitely many zeros")
    total = 0
    for factor, mult in square_free_decomposition(p):
        total += mult * count_distinct_roots(factor, a, b)
    return total
