"""Remez-type bounds and propagation of smallness.

Every bound is formed in the log domain; (Gamma |I|/|E|)^{2n} leaves
double range already for moderate n.  Checks compare a measured
||f||_I against a bound times a measured ||f||_E, both as brackets
[estimate, estimate + error] from the grid sup-norm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as npoly

from .bang import bang_degree
from .funcmodel import IntervalSet, Polynomial, _dyadic_grid, sup_norm
from .quadrature import adaptive_integrate
from .sequences import (
    Generator,
    LogConvexSequence,
    big_gamma,
    factorial_normalized,
    gamma_exponent_scale,
    gamma_global,
    gamma_sup,
)

E_CONST = math.e
QUAD_TOL = 1e-10
MAX_DESCENT = 200


def _finite(v: float):
    if math.isfinite(v):
        return v
    if math.isnan(v):
        return "nan"
    return "inf" if v > 0 else "-inf"


def _safe_exp(v: float) -> float:
    return math.exp(v) if v < 709.0 else math.inf


def _log(v: float) -> float:
    return math.log(v) if v > 0 else -math.inf


@dataclass
class RemezCheck:
    """Both sides of ||f||_I <= bound * ||f||_E (+ extra) as brackets.

    ``lhs`` and ``rhs`` are the lower ends of their brackets and the
    ``*_err`` fields the bracket widths.  pass: rhs >= lhs + lhs_err;
    fail: rhs + rhs_err < lhs; otherwise inconclusive.
    """

    bound: float
    lhs: float
    lhs_err: float
    rhs: float
    rhs_err: float
    margin: float
    verdict: str
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "bound": _finite(self.bound),
            "lhs": _finite(self.lhs),
            "lhs_err": _finite(self.lhs_err),
            "rhs": _finite(self.rhs),
            "rhs_err": _finite(self.rhs_err),
            "margin": _finite(self.margin),
            "verdict": self.verdict,
        }


def classify(log_rhs_lo: float, log_rhs_hi: float, lhs_lo: float, lhs_hi: float) -> str:
    if log_rhs_lo >= _log(lhs_hi):
        return "pass"
    if log_rhs_hi < _log(lhs_lo):
        return "fail"
    return "inconclusive"


def _make_check(log_bound, lhs, lhs_err, log_rhs_lo, log_rhs_hi, details=None) -> RemezCheck:
    rhs = _safe_exp(log_rhs_lo) if log_rhs_lo > -math.inf else 0.0
    rhs_hi = _safe_exp(log_rhs_hi) if log_rhs_hi > -math.inf else 0.0
    rhs_err = rhs_hi - rhs if math.isfinite(rhs_hi) else math.inf
    margin = rhs - lhs
    verdict = classify(log_rhs_lo, log_rhs_hi, lhs, lhs + lhs_err)
    return RemezCheck(_safe_exp(log_bound), lhs, lhs_err, rhs, rhs_err, margin, verdict, dict(details or {}))


def _refined(run, spacing: float) -> RemezCheck:
    # one refinement at spacing / 10 for borderline outcomes
    check = run(spacing)
    if check.verdict == "inconclusive":
        check = run(spacing / 10.0)
        check.details["refined"] = True
    return check


def _interval(I) -> tuple[float, float]:
    a, b = float(I[0]), float(I[1])
    if not 0.0 <= a < b <= 1.0:
        raise ValueError(f"interval [{a}, {b}] must satisfy 0 <= a < b <= 1")
    return a, b


def _check_lengths(lenI: float, lenE: float) -> None:
    if not lenE > 0:
        raise ValueError("|E| must be positive")
    if not lenI > 0:
        raise ValueError("|I| must be positive")
    if lenE > lenI * (1.0 + 1e-15):
        raise ValueError("|E| must not exceed |I|")


def log_classical_remez_bound(d: int, lenI: float, lenE: float) -> float:
    if d < 0:
        raise ValueError("degree must be non-negative")
    _check_lengths(lenI, lenE)
    if d == 0:
        return 0.0
    return d * (math.log(4.0) + math.log(lenI) - math.log(lenE))


def classical_remez_bound(d: int, lenI: float, lenE: float) -> float:
    """(4 |I| / |E|)^d."""
    return _safe_exp(log_classical_remez_bound(d, lenI, lenE))


def check_classical_remez(P: Polynomial, I, E: IntervalSet, spacing: float = 1e-3) -> RemezCheck:
    a, b = _interval(I)
    if not E.within(a, b):
        raise ValueError("E must lie inside I")
    log_b = log_classical_remez_bound(P.degree, b - a, E.measure)

    def run(sp):
        lhs, lhs_err = sup_norm(P, (a, b), sp)
        e_est, e_err = sup_norm(P, E, sp)
        return _make_check(
            log_b, lhs, lhs_err, log_b + _log(e_est), log_b + _log(e_est + e_err), {"degree": P.degree}
        )

    return _refined(run, spacing)


def well_spaced_points(E: IntervalSet, n: int) -> list[float]:
    """n + 1 points of E splitting it into pieces of measure |E|/n.

    x_0 = min E and each next point is the smallest point of E at
    cumulative measure k |E|/n, so consecutive gaps are >= |E|/n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    step = E.measure / n
    points = [E.lo]
    for k in range(1, n):
        target = k * step
        before = 0.0
        for a, b in E.intervals:
            if before + (b - a) >= target:
                points.append(min(b, a + (target - before)))
                break
            before += b - a
        else:
            points.append(E.hi)
    points.append(E.hi)
    return points


@dataclass(frozen=True)
class LagrangeNodes:
    nodes: tuple[float, ...]
    q_prime: tuple[float, ...]
    q_sup_on_I: float


def node_polynomial(nodes, I) -> LagrangeNodes:
    """Q(x) = prod (x - x_j): Q'(x_j) at the nodes and a grid sup of |Q| on I."""
    nodes = np.asarray(nodes, dtype=float)
    qp = []
    for j, xj in enumerate(nodes):
        others = np.delete(nodes, j)
        qp.append(float(np.prod(xj - others)))
    a, b = _interval(I)
    grid, _ = _dyadic_grid(a, b, 1e-3)
    q = np.prod(grid[:, None] - nodes[None, :], axis=1)
    return LagrangeNodes(tuple(float(v) for v in nodes), tuple(qp), float(np.max(np.abs(q))))


def lagrange_rhs_log(n: int, lenI: float, lenE: float, norm_E: float, log_m_next: float) -> float:
    """log of (2e |I|/|E|)^n ||f||_E + m_{n+1} |I|^{n+1}."""
    first = n * math.log(2.0 * E_CONST * lenI / lenE) + _log(norm_E)
    second = log_m_next + (n + 1) * math.log(lenI)
    return float(np.logaddexp(first, second))


def lagrange_bound(f, seq: LogConvexSequence, I, E: IntervalSet, n: int, spacing: float = 1e-3) -> RemezCheck:
    """Interpolation estimate ||f||_I <= (2e|I|/|E|)^n ||f||_E + m_{n+1} |I|^{n+1}."""
    a, b = _interval(I)
    if not E.within(a, b):
        raise ValueError("E must lie inside I")
    if n < 1:
        raise ValueError("n must be positive")
    if n + 1 > seq.last_index:
        raise IndexError("sequence too short for m_{n+1}")
    lenI, lenE = b - a, E.measure
    log_m_next = float(factorial_normalized(seq)[n + 1])
    nodes = node_polynomial(well_spaced_points(E, n), (a, b))
    log_b = n * math.log(2.0 * E_CONST * lenI / lenE)

    def run(sp):
        lhs, lhs_err = sup_norm(f, (a, b), sp)
        e_est, e_err = sup_norm(f, E, sp)
        lo = lagrange_rhs_log(n, lenI, lenE, e_est, log_m_next)
        hi = lagrange_rhs_log(n, lenI, lenE, e_est + e_err, log_m_next)
        return _make_check(
            log_b, lhs, lhs_err, lo, hi,
            {"n": n, "nodes": list(nodes.nodes), "q_prime": list(nodes.q_prime), "q_sup_on_I": nodes.q_sup_on_I},
        )

    return _refined(run, spacing)


def theorem_b_gamma(gen: Generator, n_f: int, variant: str = "standard") -> tuple[float, float]:
    """(gamma, Gamma) entering the bound for degree n_f.

    "standard": gamma(2 n_f) with exponent 4 + gamma.
    "propagation": the global sup of s A'/A with exponent 4 + (2/e) gamma.
    """
    scale = gamma_exponent_scale(variant)
    g = gamma_sup(gen, 2.0 * n_f) if variant == "standard" else gamma_global(gen)
    return g, big_gamma(g, scale)


def log_theorem_b_bound(gen: Generator, n_f, lenI: float, lenE: float, variant: str = "standard") -> float:
    if n_f is None:
        raise ValueError("the bound needs a finite Bang degree")
    if n_f < 1:
        raise ValueError("n_f must be a positive integer")
    _check_lengths(lenI, lenE)
    _, G = theorem_b_gamma(gen, n_f, variant)
    return 2 * n_f * (math.log(G) + math.log(lenI) - math.log(lenE))


def theorem_b_bound(gen: Generator, n_f, lenI: float, lenE: float, variant: str = "standard") -> float:
    """(Gamma(2 n_f) |I| / |E|)^{2 n_f}; inf when beyond double range."""
    return _safe_exp(log_theorem_b_bound(gen, n_f, lenI, lenE, variant))


def is_short_interval(seq: LogConvexSequence, n_f: int, gamma2n: float, lenI: float) -> bool:
    """m_{2n} |I|^{2n} <= exp(-2n (3 + gamma(2n))), evaluated in logs."""
    two_n = 2 * n_f
    if two_n > seq.last_index:
        raise IndexError("sequence too short for m_{2 n_f}")
    if lenI <= 0:
        return True
    log_m = float(factorial_normalized(seq)[two_n])
    return log_m + two_n * math.log(lenI) <= -two_n * (3.0 + gamma2n)


def find_short_subinterval(E: IntervalSet, I, seq: LogConvexSequence, n_f: int, gamma2n: float) -> tuple[float, float]:
    """Dyadic descent from I to its first short subinterval.

    Each step keeps the half where E is denser (ties go left), so the
    density |E cap I_1|/|I_1| never drops below |E|/|I|.
    """
    a, b = float(I[0]), float(I[1])
    for _ in range(MAX_DESCENT):
        if is_short_interval(seq, n_f, gamma2n, b - a):
            return a, b
        mid = 0.5 * (a + b)
        left = E.measure_in(a, mid) / (mid - a)
        right = E.measure_in(mid, b) / (b - mid)
        a, b = (a, mid) if left >= right else (mid, b)
    raise RuntimeError("dyadic descent did not reach a short interval")


def check_theorem_b(
    f,
    gen: Generator,
    seq: LogConvexSequence,
    I,
    E: IntervalSet,
    variant: str = "standard",
    spacing: float = 1e-3,
    norm_01: float | None = None,
) -> RemezCheck:
    """||f||_I <= (Gamma(2N)|I|/|E|)^{2N} ||f||_E with N = max(n_f, 1).

    n_f comes from the grid estimate of ||f||_[0,1], a lower bracket,
    which can only raise the degree and so weaken the bound.  The
    literal bound with n_f = 0 is the constant 1, which fails for
    non-constant members; the bound holds for every N >= 1 above n_f.
    ``norm_01`` passes a precomputed grid estimate of ||f||_[0,1].
    """
    a, b = _interval(I)
    if not E.within(a, b):
        raise ValueError("E must lie inside I")
    total = sup_norm(f, (0.0, 1.0), spacing)[0] if norm_01 is None else norm_01
    if not total > 0:
        raise ValueError("f vanishes on the grid")
    degree = bang_degree(seq, min(1.0, total))
    if degree.unbounded:
        raise ValueError("Bang degree is unbounded; no finite bound")
    N = max(degree.value, 1)
    lenI, lenE = b - a, E.measure
    gamma, G = theorem_b_gamma(gen, N, variant)
    log_b = log_theorem_b_bound(gen, N, lenI, lenE, variant)
    gamma2n = gamma_sup(gen, 2.0 * N)

    def run(sp):
        lhs, lhs_err = sup_norm(f, (a, b), sp)
        e_est, e_err = sup_norm(f, E, sp)
        check = _make_check(log_b, lhs, lhs_err, log_b + _log(e_est), log_b + _log(e_est + e_err))
        details = {"n_f": degree.value, "N": N, "gamma": gamma, "Gamma": G, "variant": variant}
        if 2 * N <= seq.last_index:
            short = is_short_interval(seq, N, gamma2n, lenI)
            details["short"] = short
            if short:
                # short interval: Taylor term below half of ||f||_I
                log_t = float(factorial_normalized(seq)[2 * N]) + 2 * N * math.log(lenI)
                details["short_taylor_ok"] = log_t < _log(lhs / 2.0)
            else:
                # non-short: the bound times ||f||_E reaches 1
                details["nonshort_floor_ok"] = log_b + _log(e_est) >= 0.0
        check.details.update(details)
        return check

    return _refined(run, spacing)


@dataclass(frozen=True)
class MarkovResidual:
    residual: float
    band: float
    derivative_at_0: float
    norm: float


def markov_pointwise(S: Polynomial, k: int, spacing: float = 1e-3) -> MarkovResidual:
    """(deg S)^k ||S||_[-1,1] - |S^(k)(0)| with its grid error band."""
    if k < 0:
        raise ValueError("k must be non-negative")
    c = np.asarray(S.coeffs, dtype=float)
    d = S.degree
    grid, step = _dyadic_grid(-1.0, 1.0, spacing)
    norm = float(np.max(np.abs(npoly.polyval(grid, c))))
    lip = float(np.sum(np.arange(c.size) * np.abs(c)))
    err = lip * step / 2.0
    deriv = 0.0 if k >= c.size else math.factorial(k) * abs(float(c[k]))
    factor = float(d) ** k
    return MarkovResidual(factor * norm - deriv, factor * err, deriv, norm)


def omega(gen: Generator, t: float, tol: float = QUAD_TOL) -> float:
    """exp(-(1/e) int_1^{log(e/t)} ds / A(s)); exactly 1 at t = 1."""
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    upper = 1.0 - math.log(t)
    if upper == 1.0:
        return 1.0
    integral = adaptive_integrate(lambda s: 1.0 / float(gen(s)), 1.0, upper, tol)
    return math.exp(-integral / E_CONST)


def omega_analytic(t: float, C: float = 1.0) -> float:
    """Closed form (log(e/t))^{-1/(eC)} for A(s) = C s."""
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    return (1.0 - math.log(t)) ** (-1.0 / (E_CONST * C))


def alpha_smallness(lenE: float, Gamma: float) -> float:
    """(1/3) / log(Gamma / |E|)."""
    if not lenE > 0:
        raise ValueError("|E| must be positive")
    if not Gamma > lenE:
        raise ValueError("Gamma must exceed |E|")
    return (1.0 / 3.0) / math.log(Gamma / lenE)


@dataclass
class PropagationReport:
    alpha: float
    Gamma: float
    corollary: RemezCheck
    closed_form: RemezCheck | None

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "Gamma": self.Gamma,
            "corollary": self.corollary.to_dict(),
            "closed_form": None if self.closed_form is None else self.closed_form.to_dict(),
        }


def verify_propagation(f, gen: Generator, seq: LogConvexSequence, E: IntervalSet, spacing: float = 1e-3) -> PropagationReport:
    """Omega(||f||) <= e Omega(||f||_E^alpha), plus the closed form for A(s) = C s.

    Gamma uses the propagation exponent 4 + (2/e) gamma with the global
    gamma.  Omega is increasing, so brackets map through it endpoint by
    endpoint.
    """
    _, G = theorem_b_gamma(gen, 1, "propagation")
    alpha = alpha_smallness(E.measure, G)

    def run(sp):
        n_est, n_err = sup_norm(f, (0.0, 1.0), sp)
        e_est, e_err = sup_norm(f, E, sp)
        lhs_lo = omega(gen, min(1.0, n_est)) if n_est > 0 else 0.0
        lhs_hi = omega(gen, min(1.0, n_est + n_err))

        def rhs_at(eps):
            return E_CONST * omega(gen, min(1.0, eps ** alpha)) if eps > 0 else 0.0

        lo, hi = rhs_at(e_est), rhs_at(e_est + e_err)
        return _make_check(1.0, lhs_lo, lhs_hi - lhs_lo, _log(lo), _log(hi), {"alpha": alpha, "Gamma": G})

    corollary = _refined(run, spacing)
    closed = None
    if gen.kind == "analytic":
        expo = alpha * math.exp(-E_CONST * gen.C)

        def run_closed(sp):
            n_est, n_err = sup_norm(f, (0.0, 1.0), sp)
            e_est, e_err = sup_norm(f, E, sp)
            return _make_check(
                1.0, n_est, n_err, 1.0 + expo * _log(e_est), 1.0 + expo * _log(e_est + e_err), {"exponent": expo}
            )

        closed = _refined(run_closed, spacing)
    return PropagationReport(alpha, G, corollary, closed)
