import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import chebyshev

from quasibang.funcmodel import IntervalSet, Polynomial, Sinusoid, random_interval_set
from quasibang.remez import (
    alpha_smallness,
    check_classical_remez,
    check_theorem_b,
    classical_remez_bound,
    classify,
    find_short_subinterval,
    is_short_interval,
    lagrange_bound,
    log_theorem_b_bound,
    markov_pointwise,
    omega,
    omega_analytic,
    theorem_b_bound,
    theorem_b_gamma,
    verify_propagation,
    well_spaced_points,
)
from quasibang.sequences import Generator, from_generator

ANALYTIC = Generator.analytic(1.0)
FACT = from_generator(ANALYTIC, 200)


def _cheb_on(d, s):
    # T_d(2x/s - 1), equioscillating on [0, s], in the monomial basis
    c = chebyshev.cheb2poly([0] * d + [1])
    shifted = np.polynomial.Polynomial(c)(np.polynomial.Polynomial([-1.0, 2.0 / s]))
    return Polynomial(tuple(shifted.coef))


def test_classical_bound_values():
    assert classical_remez_bound(3, 1.0, 0.5) == pytest.approx(512.0)
    assert classical_remez_bound(0, 1.0, 0.1) == 1.0
    assert classical_remez_bound(400, 1.0, 0.01) == math.inf
    with pytest.raises(ValueError):
        classical_remez_bound(2, 0.5, 0.6)


def test_classify():
    assert classify(0.0, 0.1, 0.5, 0.9) == "pass"
    assert classify(-3.0, -2.5, 0.5, 0.6) == "fail"
    assert classify(math.log(0.55), math.log(0.7), 0.5, 0.6) == "inconclusive"


@pytest.mark.parametrize("d", [1, 2, 5, 8])
def test_chebyshev_is_near_extremal(d):
    # ||T_d||_[0,1] / ||T_d||_[0,s] = T_d(2/s - 1) which is below (4/s)^d
    s = 0.5
    P = _cheb_on(d, s)
    check = check_classical_remez(P, (0.0, 1.0), IntervalSet(((0.0, s),)), 1e-4)
    assert check.verdict == "pass"
    ratio = check.lhs / (check.rhs / check.bound)
    assert ratio == pytest.approx(float(np.cosh(d * np.arccosh(2 / s - 1))), rel=1e-3)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=2, max_size=11), st.integers(0, 2**32 - 1))
def test_classical_never_fails(coeffs, seed):
    P = Polynomial(tuple(coeffs))
    E = random_interval_set(np.random.default_rng(seed), 0.0, 1.0, 4, 0.05)
    if P.degree == 0 or all(c == 0 for c in coeffs):
        return
    assert check_classical_remez(P, (0.0, 1.0), E).verdict != "fail"


def test_check_to_dict_keys():
    P = Polynomial((0.0, 1.0))
    d = check_classical_remez(P, (0.0, 1.0), IntervalSet(((0.0, 0.01),))).to_dict()
    assert set(d) == {"bound", "lhs", "lhs_err", "rhs", "rhs_err", "margin", "verdict"}


def test_well_spaced_points_gaps():
    E = IntervalSet(((0.0, 0.1), (0.5, 0.6), (0.9, 1.0)))
    pts = well_spaced_points(E, 6)
    assert len(pts) == 7
    assert pts[0] == 0.0 and pts[-1] == 1.0
    assert min(np.diff(pts)) >= E.measure / 6 - 1e-12


def test_lagrange_bound_passes_on_sinusoid():
    seq = from_generator(Generator.constant_ratio(math.pi), 30)
    E = IntervalSet(((0.1, 0.3), (0.6, 0.7)))
    check = lagrange_bound(Sinusoid(1), seq, (0.0, 1.0), E, 4)
    assert check.verdict == "pass"
    assert len(check.details["nodes"]) == 5


def test_theorem_b_gamma_variants():
    assert theorem_b_gamma(ANALYTIC, 3, "standard") == pytest.approx((1.0, 4 * math.exp(5)))
    g, G = theorem_b_gamma(ANALYTIC, 3, "propagation")
    assert G == pytest.approx(4 * math.exp(4 + 2 / math.e))
    assert G == pytest.approx(455.7996, rel=1e-6)


def test_theorem_b_bound_log_domain():
    # (4 e^5 * 2)^2 for n_f = 1, |I|/|E| = 2
    assert theorem_b_bound(ANALYTIC, 1, 1.0, 0.5) == pytest.approx((8 * math.exp(5)) ** 2)
    assert theorem_b_bound(ANALYTIC, 1, 1.0, 0.5) == pytest.approx(1.4097e6, rel=1e-4)
    assert math.isfinite(log_theorem_b_bound(ANALYTIC, 500, 1.0, 0.05))
    assert theorem_b_bound(ANALYTIC, 500, 1.0, 0.05) == math.inf
    with pytest.raises(ValueError):
        theorem_b_bound(ANALYTIC, 0, 1.0, 0.5)


def test_short_subinterval_dyadic_trace():
    E = IntervalSet(((0.0, 1.0),))
    assert not is_short_interval(FACT, 1, 1.0, 0.03125)
    assert is_short_interval(FACT, 1, 1.0, 0.015625)
    assert find_short_subinterval(E, (0.0, 1.0), FACT, 1, 1.0) == (0.0, 0.015625)


def test_descent_follows_denser_half():
    E = IntervalSet(((0.7, 0.9),))
    a, b = find_short_subinterval(E, (0.0, 1.0), FACT, 1, 1.0)
    assert E.measure_in(a, b) / (b - a) >= E.measure
    assert 0.5 <= a < b <= 1.0


@pytest.mark.parametrize("variant", ["standard", "propagation"])
def test_theorem_b_passes_on_x(variant):
    f = Polynomial((0.0, 1.0))
    E = IntervalSet(((0.0, 0.05), (0.5, 0.55)))
    check = check_theorem_b(f, ANALYTIC, FACT, (0.0, 1.0), E, variant)
    assert check.verdict == "pass"
    assert check.details["N"] == max(check.details["n_f"], 1)
    assert check.details["variant"] == variant


def test_markov_chebyshev_equality():
    for d, k in [(1, 1), (2, 2), (3, 1), (5, 1), (4, 0), (6, 0)]:
        c = chebyshev.cheb2poly([0] * d + [1])
        r = markov_pointwise(Polynomial(tuple(c)), k, 1e-4)
        assert abs(r.residual) <= 1e-9 * max(1.0, r.derivative_at_0)
    # T_3 at k = 3: 3^3 against 24, not an equality
    r = markov_pointwise(Polynomial(tuple(chebyshev.cheb2poly([0, 0, 0, 1]))), 3)
    assert r.residual == pytest.approx(27 - 24)


def test_omega_closed_form_and_endpoint():
    assert omega(ANALYTIC, 1.0) == 1.0
    for t in (1e-3, 0.2, 0.9):
        assert omega(ANALYTIC, t) == pytest.approx(omega_analytic(t), abs=1e-9)
    t = math.exp(1 - math.e)
    assert omega_analytic(t) == pytest.approx(math.exp(-1 / math.e))
    with pytest.raises(ValueError):
        omega(ANALYTIC, 0.0)


def test_alpha_anchor():
    G = theorem_b_gamma(ANALYTIC, 1, "propagation")[1]
    assert alpha_smallness(0.1, G) == pytest.approx(0.0396, abs=5e-5)
    with pytest.raises(ValueError):
        alpha_smallness(0.5, 0.4)


def test_propagation_passes_for_analytic_member():
    f = Polynomial((0.1, 0.5))
    E = IntervalSet(((0.2, 0.4),))
    rep = verify_propagation(f, ANALYTIC, FACT, E)
    assert rep.corollary.verdict == "pass"
    assert rep.closed_form is not None and rep.closed_form.verdict == "pass"
    assert verify_propagation(Sinusoid(1), Generator.constant_ratio(math.pi),
                              from_generator(Generator.constant_ratio(math.pi), 40), E).closed_form is None
