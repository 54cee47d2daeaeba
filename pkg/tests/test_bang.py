import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasibang import oracles
from quasibang.bang import (
    bang_degree,
    bang_norm,
    bang_profile,
    flat_zero_envelope,
    fundamental_grid,
    log_norm,
    one_sided_grid,
    one_sided_norm,
    original_bang_norm,
    remainder_norm,
    verify_fundamental,
    verify_level_crossing,
)
from quasibang.funcmodel import Polynomial, Sinusoid, derivative_at, nonextendable_series, series_class_sequence
from quasibang.sequences import Generator, LogConvexSequence, from_generator, from_values

ANALYTIC = from_generator(Generator.analytic(1.0), 200)


def _direct_norm(f, seq, x, start=0, part=abs):
    # every stored order, no early stop
    return max(
        part(derivative_at(f, j, x)) / math.exp(j + seq.log_m[j]) for j in range(start, seq.last_index + 1)
    )


def test_bang_norm_of_x_at_one():
    # f = x: j = 0 gives 1, j = 1 gives 1 / e
    assert bang_norm(Polynomial((0.0, 1.0)), ANALYTIC, 1.0) == pytest.approx(1.0)
    assert bang_norm(Polynomial((0.0, 1.0)), ANALYTIC, 0.0) == pytest.approx(1 / math.e)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5), st.floats(0, 1))
def test_early_stop_matches_full_scan(k, x):
    f = Sinusoid(k, 1.0 / (k * math.pi) ** 0)
    seq = from_generator(Generator.constant_ratio(k * math.pi), 60)
    fast = bang_norm(f, seq, x)
    assert fast == pytest.approx(_direct_norm(f, seq, x), rel=1e-12)
    assert fast == pytest.approx(bang_norm(f, seq, x, assume_member=False), rel=1e-12)


def test_remainder_and_one_sided_norm_direct():
    f = Polynomial((0.1, -0.6, 0.0, 0.4))
    seq = from_generator(Generator.analytic(1.0), 10)
    for x in (0.0, 0.3, 1.0):
        assert remainder_norm(f, seq, 2, x) == pytest.approx(_direct_norm(f, seq, x, 2))
        neg = one_sided_norm(f, seq, x, assume_member=False)
        assert neg == pytest.approx(_direct_norm(f, seq, x, part=lambda v: max(-v, 0.0)))
    with pytest.raises(IndexError):
        remainder_norm(f, seq, 11, 0.5)


def test_array_input_matches_scalar():
    f = Sinusoid(2)
    seq = from_generator(Generator.constant_ratio(2 * math.pi), 60)
    xs = np.linspace(0, 1, 9)
    arr = bang_norm(f, seq, xs)
    assert np.allclose(arr, [bang_norm(f, seq, x) for x in xs])


def test_log_norm_zero_is_infinite():
    assert log_norm(0.0) == math.inf
    assert log_norm(1 / math.e) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        log_norm(-1.0)


def test_profile_csv():
    f = Sinusoid(1)
    seq = from_generator(Generator.constant_ratio(math.pi), 40)
    prof = bang_profile(f, seq, [0.0, 0.5, 1.0])
    lines = prof.csv_text().splitlines()
    assert lines[0] == "x,B_f,L_f"
    assert len(lines) == 4
    assert float(lines[2].split(",")[1]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        bang_profile(f, seq, [0.5, 0.2])


@pytest.mark.parametrize("K", [0, 1, 2, 3, 7])
def test_bang_degree_matches_exact_harmonic(K):
    deg = bang_degree(ANALYTIC, math.exp(-K))
    assert deg.value == oracles.harmonic_degree(K)
    assert deg.K_f == K


def test_bang_degree_anchor_values():
    assert bang_degree(ANALYTIC, 1.0).value == 8
    assert bang_degree(ANALYTIC, math.exp(-2)).value == 37
    assert bang_degree(ANALYTIC, math.exp(-3)).value == 52
    pi_seq = from_generator(Generator.constant_ratio(math.pi), 20)
    assert bang_degree(pi_seq, 1.0).value == 8


def test_bang_degree_strictness_at_threshold():
    # ratios M_{j-1}/M_j = e/2 exactly: two of them reach e, so N = 1
    seq = from_values([(2 / math.e) ** j for j in range(6)], tail_sum=math.inf)
    assert bang_degree(seq, 1.0).value == 1


def test_bang_degree_unbounded_and_too_short():
    geo = from_values([4.0**j for j in range(5)], tail_sum=1 / 3 * 4.0**-4)
    d = bang_degree(geo, 1.0)
    assert d.unbounded and d.to_dict()["value"] is None
    with pytest.raises(ValueError, match="too short"):
        bang_degree(ANALYTIC.prefix(5), 1.0)
    with pytest.raises(ValueError):
        bang_degree(ANALYTIC, 0.0)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-3, 6), min_size=2, max_size=9),
    st.lists(st.floats(-2, 2), min_size=1, max_size=5),
    st.floats(0, 1),
)
def test_original_bang_matches_brute(logs, coeffs, x):
    raw = np.exp(np.asarray(logs))
    f = Polynomial(tuple(coeffs))
    assert original_bang_norm(f, raw, x) == pytest.approx(oracles.brute_original_bang(f, raw, x), rel=1e-10)


def test_envelope_geometric_hand_value():
    # M_j = 2^j, ratios 1/2, tail past index 3 is 1/2^4 / (1 - 1/2) = 1/8
    seq = from_values([2.0**j for j in range(4)], tail_sum=1 / 8)
    # suffix sums: n=0: 1/2*3 + 1/8 = 1.625, n=1: 1.125, n=2: 0.625, n=3: 0.125
    assert flat_zero_envelope(seq, 0.5) == pytest.approx(math.exp(-1))
    assert flat_zero_envelope(seq, 0.1) == pytest.approx(math.exp(-3))
    assert flat_zero_envelope(seq, 1.0) == 1.0


def test_envelope_quasianalytic_and_errors():
    assert flat_zero_envelope(ANALYTIC, 0.5) == 0.0
    unknown = LogConvexSequence(np.zeros(3))
    with pytest.raises(ValueError):
        flat_zero_envelope(unknown, 0.5)
    with pytest.raises(ValueError):
        flat_zero_envelope(ANALYTIC, 0.0)


def test_fundamental_on_sinusoid_nonnegative():
    f = Sinusoid(3)
    seq = from_generator(Generator.constant_ratio(3 * math.pi), 60)
    for x, h, q in [(0.1, 0.2, 1), (0.5, -0.3, 4), (0.9, 0.05, 10)]:
        r = verify_fundamental(f, seq, x, h, q)
        assert r.lemma >= 0 and r.remainder >= 0
        assert r.log_form is None or r.log_form >= 0
        assert r.minimum >= 0
    with pytest.raises(ValueError):
        verify_fundamental(f, seq, 0.9, 0.2, 1)


def test_fundamental_grid_matches_pointwise():
    f = Polynomial((0.0, 0.0, 0.5))
    seq = from_generator(Generator.analytic(1.0), 30)
    table = fundamental_grid(f, seq, 0.1, [0.2, -0.3], [1, 3])
    for (h, q), res in table.items():
        xs = [i / 10 for i in range(11) if 0 <= i / 10 + h <= 1 + 1e-12]
        pts = [verify_fundamental(f, seq, x, round(h, 12), q) for x in xs if 0 <= x + h <= 1]
        assert res.lemma == pytest.approx(min(p.lemma for p in pts), abs=1e-12)
        assert res.remainder == pytest.approx(min(p.remainder for p in pts), abs=1e-12)
    with pytest.raises(ValueError):
        fundamental_grid(f, seq, 0.1, [0.15], [1])


def test_one_sided_grid_requires_forward_shift():
    f = Polynomial((0.0, -0.5))
    seq = from_generator(Generator.analytic(1.0), 20)
    out = one_sided_grid(f, seq, 0.05, [0.1, 0.5], [1, 2, 5])
    assert all(v >= 0 for v in out.values())
    with pytest.raises(ValueError):
        one_sided_grid(f, seq, 0.05, [-0.1], [1])


def test_level_crossing_series_passes():
    g, logs = series_class_sequence(nonextendable_series(), 41)
    seq = LogConvexSequence(logs, normalized=True)
    gen = Generator.tabulated(np.exp(np.diff(logs)).tolist())
    rep = verify_level_crossing(g, gen, seq, np.linspace(0, 1, 101))
    assert rep.sum_verdict == "pass"
    assert rep.integral_verdict in ("pass", "inconclusive")
    with pytest.raises(ValueError):
        verify_level_crossing(g, gen, seq, np.linspace(0, 1, 11))
