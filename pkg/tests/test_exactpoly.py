from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from quasibang import exactpoly as ep


def _mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _from_roots(roots, extra_positive=()):
    p = [Fraction(1)]
    for r in roots:
        p = _mul(p, [-r, Fraction(1)])
    for c in extra_positive:  # x^2 + c has no real roots
        p = _mul(p, [c, Fraction(0), Fraction(1)])
    return p


def test_derivative_and_evaluate():
    p = ep.to_exact([1.0, 2.0, 3.0])
    assert ep.derivative(p) == [2, 6]
    assert ep.evaluate(p, Fraction(1, 2)) == Fraction(11, 4)


def test_divmod_reconstructs():
    num = _from_roots([Fraction(1), Fraction(2), Fraction(3)])
    den = _from_roots([Fraction(2)])
    q, r = ep.divmod_poly(num, den)
    assert ep.trim(r) == []
    assert _mul(q, den) == num


def test_square_free_decomposition_multiplicities():
    p = _from_roots([Fraction(1, 3)] * 3 + [Fraction(1, 2)] * 2 + [Fraction(0)])
    mults = sorted(m for _, m in ep.square_free_decomposition(p))
    assert mults == [1, 2, 3]


def test_root_at_endpoints_counted():
    p = _from_roots([Fraction(0), Fraction(1), Fraction(1)])
    assert ep.count_roots_with_multiplicity(p, Fraction(0), Fraction(1)) == 3


def test_isolation_separates_close_roots():
    p = _from_roots([Fraction(1, 2), Fraction(1, 2) + Fraction(1, 10**9)])
    cells = ep.isolate_roots(p, Fraction(0), Fraction(1))
    assert len(cells) == 2


rational = st.fractions(min_value=-1, max_value=2, max_denominator=50)


@settings(max_examples=150, deadline=None)
@given(
    st.lists(rational, min_size=1, max_size=7),
    st.lists(st.fractions(min_value=Fraction(1, 20), max_value=3, max_denominator=20), max_size=2),
)
def test_count_matches_constructed_roots(roots, quad):
    p = _from_roots(roots, quad)
    expected = sum(1 for r in roots if 0 <= r <= 1)
    assert ep.count_roots_with_multiplicity(p, Fraction(0), Fraction(1)) == expected
