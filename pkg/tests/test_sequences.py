import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasibang import oracles
from quasibang.sequences import (
    Generator,
    LogConvexSequence,
    big_gamma,
    factorial_normalized,
    from_generator,
    from_values,
    gamma_exponent_scale,
    gamma_global,
    gamma_sup,
    is_log_convex,
    log_convex_minorant,
    quasianalytic_sum,
)


def test_analytic_sequence_is_factorial():
    seq = from_generator(Generator.analytic(1.0), 30)
    expected = [math.lgamma(j + 1) for j in range(30)]
    assert np.allclose(seq.log_m, expected, rtol=0, atol=1e-12)
    assert seq.tail_sum == math.inf


def test_constant_ratio_sequence_is_geometric():
    seq = from_generator(Generator.constant_ratio(math.pi), 10)
    assert np.allclose(seq.log_m, np.arange(10) * math.log(math.pi))


def test_logarithmic_generator_values():
    gen = Generator.logarithmic(2.0, 1.5)
    s = 3.0
    assert gen(s) == pytest.approx(2.0 * s * math.log(s + math.e) ** 1.5)
    assert gen.quasianalytic is False
    assert Generator.logarithmic(1.0, 1.0).quasianalytic is True


def test_tabulated_generator_interpolates_and_terminates():
    gen = Generator.tabulated([1.0, 2.0, 4.0])
    assert gen(1.5) == pytest.approx(1.5)
    assert gen(3.0) == 4.0
    assert gen(3.5) == math.inf
    seq = from_generator(gen, 4)
    assert seq.tail_sum == 0.0
    assert seq.log_ratio(4) == math.inf
    with pytest.raises(IndexError):
        from_generator(gen, 5)


def test_tabulated_tail_counts_unused_ratios():
    gen = Generator.tabulated([1.0, 2.0, 4.0])
    seq = from_generator(gen, 2)
    assert seq.tail_sum == pytest.approx(1 / 2 + 1 / 4)


def test_non_monotone_table_rejected():
    with pytest.raises(ValueError, match="non-decreasing"):
        Generator.tabulated([2.0, 1.0])


def test_generator_dict_round_trip():
    for gen in (
        Generator.analytic(2.0),
        Generator.logarithmic(1.0, 0.5),
        Generator.constant_ratio(3.0),
        Generator.tabulated([1.0, 1.0, 2.0]),
    ):
        assert Generator.from_dict(gen.to_dict()) == gen


def test_is_log_convex():
    assert is_log_convex([1, 1, 2, 6, 24])
    assert not is_log_convex([1, 3, 2])
    with pytest.raises(ValueError):
        is_log_convex([1, 0, 1])


def test_sequence_rejects_non_convex_and_unnormalized():
    with pytest.raises(ValueError):
        LogConvexSequence(np.log([1.0, 3.0, 2.0]))
    with pytest.raises(ValueError):
        LogConvexSequence(np.log([2.0, 3.0]), normalized=True)


def test_quasianalytic_sum_matches_exact_harmonic():
    seq = from_generator(Generator.analytic(1.0), 50)
    exact = sum(Fraction(1, j) for j in range(3, 38))
    assert quasianalytic_sum(seq, 3, 37) == pytest.approx(float(exact), rel=1e-14)


def test_quasianalytic_sum_additive():
    seq = from_generator(Generator.logarithmic(1.0, 2.0), 60)
    whole = quasianalytic_sum(seq, 1, 59)
    parts = quasianalytic_sum(seq, 1, 20) + quasianalytic_sum(seq, 21, 59)
    assert abs(whole - parts) <= 1e-12


def test_prefix_keeps_tail_information():
    seq = from_values([1.0, 2.0, 8.0, 64.0], tail_sum=0.0)
    p = seq.prefix(2)
    assert p.tail_sum == pytest.approx(1 / 4 + 1 / 8)


def test_factorial_normalized_of_factorial_is_one():
    seq = from_generator(Generator.analytic(1.0), 40)
    assert np.allclose(factorial_normalized(seq), 0.0, atol=1e-10)


def test_minorant_example():
    res = log_convex_minorant([1, 5, 2, 3, 1, 8])
    assert res.contact_set == (0, 4, 5)
    assert np.allclose(res.minorant.values, [1, 1, 1, 1, 1, 8])


def test_minorant_of_log_convex_input_is_identity():
    v = [math.factorial(j) for j in range(10)]
    res = log_convex_minorant(v)
    assert res.contact_set == tuple(range(10))
    assert np.allclose(res.minorant.log_m, np.log(v))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(min_value=-20, max_value=20), min_size=1, max_size=12))
def test_minorant_matches_support_line_oracle(logs):
    v = np.exp(np.asarray(logs))
    fast = log_convex_minorant(v)
    slow, contact = oracles.support_line_minorant(v)
    y = np.log(v)
    tol = 1e-12 * np.maximum(1.0, np.abs(y))
    assert np.all(np.abs(fast.minorant.log_m - slow) <= 2 * tol)
    assert np.all(fast.minorant.log_m <= y + tol)
    # membership may only differ where the gap sits on the tolerance edge
    gap = y - slow
    for j in set(fast.contact_set) ^ set(contact):
        assert 0.5 * tol[j] <= gap[j] <= 2 * tol[j]


def test_gamma_closed_forms():
    assert gamma_sup(Generator.analytic(3.0), 50) == 1.0
    assert gamma_sup(Generator.constant_ratio(2.0), 50) == 0.0


def test_gamma_logarithmic_matches_dense_scan():
    gen = Generator.logarithmic(1.0, 2.0)
    s = np.linspace(1.0, 40.0, 400001)
    oracle = np.max(s * gen.derivative(s) / gen(s))
    assert gamma_sup(gen, 40.0) == pytest.approx(oracle, abs=1e-8)


def test_gamma_tabulated_uses_one_sided_knot_limits():
    gen = Generator.tabulated([1.0, 1.0, 3.0])
    # on (2, 3] A = 1 + 2 (s - 2), so s A'/A peaks at the left knot: 2*2/1
    assert gamma_sup(gen, 3.0) == pytest.approx(4.0)
    assert gamma_global(gen) == pytest.approx(4.0)


def test_big_gamma_values():
    assert big_gamma(1.0) == pytest.approx(4 * math.exp(5))
    assert big_gamma(1.0, gamma_exponent_scale("propagation")) == pytest.approx(455.7996, rel=1e-6)
    with pytest.raises(ValueError):
        gamma_exponent_scale("legacy")


def test_harmonic_oracle_brackets_e():
    lo, hi = oracles._e_bracket()
    # sum of 1/j! for j <= 40 is within 1e-47 of e
    partial = sum(Fraction(1, math.factorial(j)) for j in range(41))
    assert lo <= partial < hi
    assert hi - lo < Fraction(1, 10**20)
