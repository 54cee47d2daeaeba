"""Function models on [0, 1] with derivative oracles.

Three kinds are supported: polynomials in the monomial basis, sinusoids
``amplitude * sin(k pi x)`` and the truncated even power series of the
non-extendable construction.  Sup-norms are estimated on dyadic grids and
come with a Lipschitz error band; zeros of polynomials are counted exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import exactpoly
from .sequences import LogConvexSequence

FIT_TOL = 1e-9

# smallest power of two passing the coefficient domination check
# (n <= 20, K = 400); see find_nonextendable_constant
NONEXTENDABLE_C = 2.0
NONEXTENDABLE_K = 400


def _check_x(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise ValueError("evaluation point outside [0, 1]")
    return arr


def _falling_log(i: np.ndarray, j: int) -> np.ndarray:
    """log of i (i-1) ... (i-j+1), -inf where i < j."""
    out = np.full(i.shape, -np.inf)
    ok = i >= j
    if j == 0:
        out[:] = 0.0
        return out
    ii = i[ok].astype(float)
    out[ok] = np.array([math.lgamma(v + 1.0) - math.lgamma(v - j + 1.0) for v in ii])
    return out


@dataclass(frozen=True)
class Polynomial:
    """Polynomial with monomial coefficients, lowest degree first."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = [float(v) for v in self.coeffs]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        if not c:
            c = [0.0]
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def max_order(self) -> int:
        return self.degree

    def _deriv_coeffs(self, j: int) -> np.ndarray:
        c = np.asarray(self.coeffs)
        if j > self.degree:
            return np.zeros(1)
        return npoly.polyder(c, j) if j else c

    def scaled_derivative(self, j: int, x):
        return npoly.polyval(x, self._deriv_coeffs(j)), 0.0

    def log_derivative_bound(self, j: int) -> float:
        s = float(np.sum(np.abs(self._deriv_coeffs(j))))
        return math.log(s) if s > 0 else -math.inf

    def tail_bound(self, j: int) -> float:
        return 0.0

    def to_dict(self) -> dict:
        return {"kind": "polynomial", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class Sinusoid:
    """amplitude * sin(k pi x)."""

    k: int
    amplitude: float = 1.0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("sinusoid frequency k must be a positive integer")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "amplitude", float(self.amplitude))

    max_order = None

    @property
    def omega(self) -> float:
        return self.k * math.pi

    def scaled_derivative(self, j: int, x):
        # f^(j) = amp (k pi)^j sin(k pi x + j pi / 2); phase taken mod 4
        t = self.omega * np.asarray(x, dtype=float)
        r = j % 4
        trig = (np.sin(t), np.cos(t), -np.sin(t), -np.cos(t))[r]
        return self.amplitude * trig, j * math.log(self.omega)

    def log_derivative_bound(self, j: int) -> float:
        if self.amplitude == 0.0:
            return -math.inf
        return math.log(abs(self.amplitude)) + j * math.log(self.omega)

    def tail_bound(self, j: int) -> float:
        return 0.0

    def to_dict(self) -> dict:
        return {"kind": "sinusoid", "k": self.k, "amplitude": self.amplitude}


def nonextendable_coefficient(C: float, j):
    """c_j = exp(-C j / log(j + e))."""
    j = np.asarray(j, dtype=float)
    return np.exp(-C * j / np.log(j + math.e))


def series_tail_bound(C: float, K: int, n: int) -> float:
    """Upper bound for sum_{j > K} j^n c_j, summed over every j > K.

    Terms up to an index J2 are added directly.  Past J2 the inequality
    j / log(j + e) >= sqrt(j) (valid for j >= 9) gives
    c_j <= exp(-C sqrt(j)), and sum_{j > J2} j^n exp(-C sqrt j) is at most
    2 C^{-(2n+2)} Gamma(2n+2, C sqrt(J2)), bounded through
    Gamma(s, x) <= x^{s-1} e^{-x} / (1 - (s-1)/x) for x > s - 1.
    """
    s = 2 * n + 2
    j2 = max(K + 1, 20000, int(math.ceil((2.0 * (s - 1) / C) ** 2)) + 1)
    j = np.arange(K + 1, j2 + 1, dtype=float)
    direct = float(np.sum(np.exp(n * np.log(j) - C * j / np.log(j + math.e))))
    x = C * math.sqrt(j2)
    log_upper_gamma = (s - 1) * math.log(x) - x - math.log1p(-(s - 1) / x)
    rest = 2.0 * math.exp(log_upper_gamma - s * math.log(C))
    return direct + rest


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Truncated even series scale * sum_{2k <= K} c_{2k} x^{2k}.

    The coefficient rule is the non-extendable one,
    c_j = exp(-C j / log(j + e)).  ``tail_bound(n)`` bounds the n-th
    derivative of the discarded part on [0, 1].
    """

    C: float
    K: int
    scale: float = 1.0
    rule: str = "nonextendable"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError("series constant C must be positive")
        if self.K < 10 or self.K % 2:
            raise ValueError("truncation order K must be even and >= 10")
        if self.rule != "nonextendable":
            raise ValueError(f"unknown coefficient rule {self.rule!r}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    max_order = None

    @property
    def coefficients(self) -> np.ndarray:
        """Monomial coefficients a_0..a_K (odd entries zero), scale applied."""
        if "coeffs" not in self._cache:
            i = np.arange(self.K + 1)
            c = self.scale * nonextendable_coefficient(self.C, i)
            c[1::2] = 0.0
            self._cache["coeffs"] = c
        return self._cache["coeffs"]

    def _deriv_coeffs(self, j: int) -> np.ndarray:
        key = ("d", j)
        if key not in self._cache:
            i = np.arange(self.K + 1)
            logs = _falling_log(i, j)
            c = self.coefficients
            with np.errstate(divide="ignore"):
                terms = np.where(c > 0, np.exp(logs + np.log(np.where(c > 0, c, 1.0))), 0.0)
            self._cache[key] = terms[j:] if j <= self.K else np.zeros(1)
        return self._cache[key]

    def scaled_derivative(self, j: int, x):
        return npoly.polyval(x, self._deriv_coeffs(j)), 0.0

    def tail_bound(self, j: int) -> float:
        key = ("tail", j)
        if key not in self._cache:
            self._cache[key] = self.scale * series_tail_bound(self.C, self.K, j)
        return self._cache[key]

    def log_derivative_bound(self, j: int) -> float:
        return math.log(float(np.sum(self._deriv_coeffs(j))) + self.tail_bound(j))

    def to_dict(self) -> dict:
        return {"kind": "nonextendable", "C": self.C, "K": self.K, "scale": self.scale}


FunctionModel = Union[Polynomial, Sinusoid, PowerSeries]


def model_from_dict(spec: dict) -> FunctionModel:
    kind = spec["kind"]
    if kind == "polynomial":
        return Polynomial(tuple(spec["coeffs"]))
    if kind == "sinusoid":
        return Sinusoid(spec["k"], spec.get("amplitude", 1.0))
    if kind == "nonextendable":
        return PowerSeries(spec.get("C", NONEXTENDABLE_C), spec.get("K", NONEXTENDABLE_K), spec.get("scale", 1.0))
    raise ValueError(f"unknown function kind {kind!r}")


def derivative_at(f: FunctionModel, j: int, x):
    """f^(j)(x); truncated value for power series (see derivative_error)."""
    if j < 0:
        raise ValueError("derivative order must be non-negative")
    x = _check_x(x)
    vals, log_scale = f.scaled_derivative(j, x)
    if log_scale:
        with np.errstate(over="ignore", invalid="ignore"):
            vals = vals * np.exp(log_scale)
    return float(vals) if np.ndim(vals) == 0 else vals


def derivative_error(f: FunctionModel, j: int) -> float:
    """Bound on |true f^(j) - derivative_at(f, j, .)| over [0, 1]."""
    return f.tail_bound(j)


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint closed intervals inside [0, 1]."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        iv = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", iv)
        if not iv:
            raise ValueError("interval set is empty")
        for a, b in iv:
            if not (0.0 <= a <= b <= 1.0):
                raise ValueError(f"interval [{a}, {b}] not inside [0, 1]")
        for (_, b0), (a1, _) in zip(iv, iv[1:]):
            if not b0 < a1:
                raise ValueError("intervals must be sorted and disjoint")
        if not self.measure > 0:
            raise ValueError("interval set has zero measure")

    @classmethod
    def single(cls, a: float, b: float) -> "IntervalSet":
        return cls(((a, b),))

    @classmethod
    def from_dict(cls, spec: dict) -> "IntervalSet":
        return cls(tuple(tuple(p) for p in spec["intervals"]))

    def to_dict(self) -> dict:
        return {"intervals": [list(p) for p in self.intervals]}

    @property
    def measure(self) -> float:
        return math.fsum(b - a for a, b in self.intervals)

    @property
    def lo(self) -> float:
        return self.intervals[0][0]

    @property
    def hi(self) -> float:
        return self.intervals[-1][1]

    def measure_in(self, a: float, b: float) -> float:
        """|E intersect [a, b]|."""
        return math.fsum(max(0.0, min(b, q) - max(a, p)) for p, q in self.intervals)

    def within(self, a: float, b: float) -> bool:
        return a <= self.lo and self.hi <= b


def random_interval_set(
    rng: np.random.Generator,
    lo: float = 0.0,
    hi: float = 1.0,
    max_components: int = 4,
    min_measure: float = 0.05,
) -> IntervalSet:
    """Random union of at most ``max_components`` intervals inside [lo, hi]."""
    if min_measure > hi - lo:
        raise ValueError("min_measure exceeds the host interval")
    while True:
        n = int(rng.integers(1, max_components + 1))
        cuts = np.sort(rng.uniform(lo, hi, size=2 * n))
        pieces = [(float(cuts[2 * i]), float(cuts[2 * i + 1])) for i in range(n)]
        pieces = [(a, b) for a, b in pieces if b > a]
        merged: list[tuple[float, float]] = []
        for a, b in pieces:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(b, merged[-1][1]))
            else:
                merged.append((a, b))
        if merged and sum(b - a for a, b in merged) >= min_measure:
            return IntervalSet(tuple(merged))


def _dyadic_grid(a: float, b: float, spacing: float) -> tuple[np.ndarray, float]:
    # nested under halving of the spacing, so refinement never loses points
    length = b - a
    if length == 0.0:
        return np.array([a]), 0.0
    n_int = 1 if length <= spacing else 2 ** int(math.ceil(math.log2(length / spacing)))
    return np.linspace(a, b, n_int + 1), length / n_int


def _scaled_sup(f: FunctionModel, intervals, spacing: float, order: int):
    """(estimate, error) of ||f^(order)|| scaled by exp(-log_scale), and log_scale."""
    best = 0.0
    step = 0.0
    log_scale = 0.0
    for a, b in intervals:
        grid, h = _dyadic_grid(a, b, spacing)
        vals, log_scale = f.scaled_derivative(order, grid)
        best = max(best, float(np.max(np.abs(vals))))
        step = max(step, h)
    log_lip = f.log_derivative_bound(order + 1)
    lip = math.exp(log_lip - log_scale) if log_lip > -math.inf else 0.0
    tail = f.tail_bound(order)
    tail_scaled = tail * math.exp(-log_scale) if tail else 0.0
    return best, lip * step / 2.0 + tail_scaled, log_scale


def sup_norm(f: FunctionModel, region, spacing: float = 1e-3, order: int = 0) -> tuple[float, float]:
    """Grid estimate of sup |f^(order)| over a set, with an error bound.

    ``region`` is an IntervalSet or a closed interval (a, b).  The true
    sup lies in [estimate, estimate + error_bound]: the grid step is at
    most ``spacing`` and the error bound is L * step / 2 with L a bound
    on |f^(order+1)| over [0, 1] (plus the truncation tail for series).
    """
    if not spacing > 0:
        raise ValueError("spacing must be positive")
    intervals = _as_intervals(region)
    est, err, log_scale = _scaled_sup(f, intervals, spacing, order)
    if log_scale:
        factor = math.exp(log_scale)
        return est * factor, err * factor
    return est, err


def _as_intervals(region) -> tuple[tuple[float, float], ...]:
    if isinstance(region, IntervalSet):
        return region.intervals
    a, b = region
    if not 0.0 <= a <= b <= 1.0:
        raise ValueError(f"interval [{a}, {b}] not inside [0, 1]")
    if b == a:
        raise ValueError("degenerate interval")
    return ((float(a), float(b)),)


def count_zeros(f: FunctionModel, interval=(0.0, 1.0)) -> tuple[int, bool]:
    """Zeros of f in a closed interval, with multiplicity.

    Returns (count, exact).  All supported kinds are counted exactly;
    the flag stays in the interface for models without a closed form.
    """
    a, b = _as_intervals(interval)[0]
    if isinstance(f, Polynomial):
        p = exactpoly.to_exact(f.coeffs)
        if not p:
            raise ValueError("identically zero polynomial has infinitely many zeros")
        return exactpoly.count_roots_with_multiplicity(p, Fraction(a), Fraction(b)), True
    if isinstance(f, Sinusoid):
        if f.amplitude == 0.0:
            raise ValueError("identically zero sinusoid has infinitely many zeros")
        # zeros at m / k; exact rational comparison against the float endpoints
        first = math.ceil(Fraction(a) * f.k)
        last = math.floor(Fraction(b) * f.k)
        return max(0, last - first + 1), True
    # every series coefficient is positive, discarded tail included, so
    # f >= f(0) > 0 on [0, 1]
    return 0, True


@dataclass(frozen=True)
class ClassFit:
    fits: bool
    residual: float
    worst_order: int


def fits_class(
    f: FunctionModel,
    seq: LogConvexSequence,
    spacing: float = 1e-3,
    max_order: int | None = None,
) -> ClassFit:
    """Check ||f^(j)||_[0,1] <= M_j for every stored order j.

    Uses the grid estimate of each sup-norm.  ``residual`` is the largest
    estimate - M_j; orders with M_j beyond double range report
    the sign through -inf/+inf.  A relative slack of 1e-9 absorbs rounding
    in large derivatives.
    """
    top = seq.last_index if max_order is None else min(max_order, seq.last_index)
    if f.max_order is not None:
        top = min(top, f.max_order)
    worst = -math.inf
    worst_j = 0
    ok = True
    for j in range(top + 1):
        est, _, log_scale = _scaled_sup(f, ((0.0, 1.0),), spacing, j)
        log_m = float(seq.log_m[j])
        if est == 0.0:
            ratio = 0.0
        else:
            ratio = math.exp(math.log(est) + log_scale - log_m)
        m_val = math.exp(log_m) if log_m < 709.0 else math.inf
        slack = FIT_TOL * max(1.0, 1.0 / m_val if m_val > 0 else math.inf)
        if ratio > 1.0 + slack:
            ok = False
        if m_val < math.inf:
            resid = m_val * (ratio - 1.0)
        else:
            resid = math.inf if ratio > 1.0 else -math.inf
        if resid > worst:
            worst, worst_j = resid, j
    return ClassFit(ok, worst, worst_j)


def regularized_log_majorant(n: int) -> float:
    """log of n! (log(n + e))^n, the regularized majorant of the construction."""
    return math.lgamma(n + 1.0) + n * math.log(math.log(n + math.e))


def coefficient_moment(C: float, K: int, n: int, with_tail: bool = False) -> float:
    """sum_{1 <= j <= K} j^n c_j, optionally plus the certified tail past K."""
    j = np.arange(1, K + 1, dtype=float)
    total = math.fsum(np.exp(n * np.log(j) - C * j / np.log(j + math.e)))
    if with_tail:
        total += series_tail_bound(C, K, n)
    return total


def domination_holds(C: float, K: int = NONEXTENDABLE_K, n_max: int = 20, with_tail: bool = False) -> bool:
    return all(
        math.log(coefficient_moment(C, K, n, with_tail)) <= regularized_log_majorant(n)
        for n in range(n_max + 1)
    )


def find_nonextendable_constant(K: int = NONEXTENDABLE_K, n_max: int = 20, limit: int = 20) -> float:
    """Smallest C in {1, 2, 4, ...} passing the domination check."""
    C = 1.0
    for _ in range(limit):
        if domination_holds(C, K, n_max):
            return C
        C *= 2.0
    raise RuntimeError("no power-of-two constant passes the domination check")


def nonextendable_series(C: float = NONEXTENDABLE_C, K: int = NONEXTENDABLE_K) -> PowerSeries:
    """Even series sum c_{2k} x^{2k} with c_j = exp(-C j / log(j + e))."""
    if not C > 0:
        raise ValueError("C must be positive")
    return PowerSeries(float(C), int(K))


def series_class_sequence(f: PowerSeries, length: int) -> tuple[PowerSeries, np.ndarray]:
    """Normalized series and the log of its empirical derivative majorants.

    Returns (g, log_values) with g = f / M_0 and
    M_j = sum_i i^j a_i + tail_j, the moment bound for ||f^(j)||_[0,1],
    divided by M_0 so that log_values[0] = 0.
    """
    i = np.arange(f.K + 1, dtype=float)
    a = f.coefficients
    mask = a > 0
    logs = []
    for j in range(length):
        with np.errstate(divide="ignore"):
            powers = np.where(i[mask] > 0, j * np.log(np.where(i[mask] > 0, i[mask], 1.0)), 0.0 if j == 0 else -np.inf)
        total = math.fsum(np.exp(powers + np.log(a[mask]))) + f.tail_bound(j)
        logs.append(math.log(total))
    logs = np.asarray(logs)
    m0 = math.exp(logs[0])
    g = PowerSeries(f.C, f.K, f.scale / m0, f.rule)
    return g, logs - logs[0]
