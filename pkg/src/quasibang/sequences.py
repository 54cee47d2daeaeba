"""Majorant sequences M_j, their generators A and log-convex minorants.

Every sequence is kept in the log domain: for factorial-type classes M_j
leaves double range near j = 170, while log M_j stays small.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

LOG_CONVEX_TOL = 1e-12

GAMMA_SCAN_STEP = 1e-3
GAMMA_REFINE_TOL = 1e-9

# exponent scale for Gamma = 4 exp(4 + scale * gamma)
GAMMA_VARIANTS = {
    "standard": 1.0,
    "propagation": 2.0 / math.e,
}

GENERATOR_KINDS = ("analytic", "logarithmic", "constant_ratio", "tabulated")


@dataclass(frozen=True)
class Generator:
    """Non-decreasing smoothness function A with M_j = M_{j-1} A(j).

    Use the classmethod constructors rather than filling fields by hand.
    A tabulated generator holds A(1), ..., A(J) and is +inf beyond J.
    """

    kind: str
    C: float = 1.0
    alpha: float = 0.0
    a: float = 1.0
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind in ("analytic", "logarithmic") and not self.C > 0:
            raise ValueError("generator scale C must be positive")
        if self.kind == "logarithmic" and not self.alpha >= 0:
            raise ValueError("logarithmic exponent alpha must be >= 0")
        if self.kind == "constant_ratio" and not self.a > 0:
            raise ValueError("constant ratio a must be positive")
        if self.kind == "tabulated":
            vals = tuple(float(v) for v in self.values)
            object.__setattr__(self, "values", vals)
            if not vals:
                raise ValueError("tabulated generator needs at least one value")
            if any(not (v > 0 and math.isfinite(v)) for v in vals):
                raise ValueError("tabulated generator values must be positive and finite")
            if any(b < a for a, b in zip(vals, vals[1:])):
                raise ValueError(
                    "tabulated generator values must be non-decreasing (A is non-decreasing)"
                )

    @classmethod
    def analytic(cls, C: float = 1.0) -> "Generator":
        return cls("analytic", C=float(C))

    @classmethod
    def logarithmic(cls, C: float = 1.0, alpha: float = 1.0) -> "Generator":
        return cls("logarithmic", C=float(C), alpha=float(alpha))

    @classmethod
    def constant_ratio(cls, a: float) -> "Generator":
        return cls("constant_ratio", a=float(a))

    @classmethod
    def tabulated(cls, values: Sequence[float]) -> "Generator":
        return cls("tabulated", values=tuple(values))

    @classmethod
    def from_dict(cls, spec: dict) -> "Generator":
        kind = spec["kind"]
        if kind == "analytic":
            return cls.analytic(spec.get("C", 1.0))
        if kind == "logarithmic":
            return cls.logarithmic(spec.get("C", 1.0), spec.get("alpha", 1.0))
        if kind == "constant_ratio":
            return cls.constant_ratio(spec["a"])
        if kind == "tabulated":
            return cls.tabulated(spec["values"])
        raise ValueError(f"unknown generator kind {kind!r}")

    def to_dict(self) -> dict:
        if self.kind == "analytic":
            return {"kind": "analytic", "C": self.C}
        if self.kind == "logarithmic":
            return {"kind": "logarithmic", "C": self.C, "alpha": self.alpha}
        if self.kind == "constant_ratio":
            return {"kind": "constant_ratio", "a": self.a}
        return {"kind": "tabulated", "values": list(self.values)}

    @property
    def table_length(self) -> int | None:
        return len(self.values) if self.kind == "tabulated" else None

    @property
    def quasianalytic(self) -> bool:
        """Whether the integral of 1/A over [1, inf) diverges."""
        if self.kind in ("analytic", "constant_ratio"):
            return True
        if self.kind == "logarithmic":
            return self.alpha <= 1.0
        return False

    def __call__(self, s):
        """A(s) for s >= 1; tabulated generators interpolate linearly."""
        s = np.asarray(s, dtype=float)
        if self.kind == "analytic":
            out = self.C * s
        elif self.kind == "logarithmic":
            out = self.C * s * np.log(s + math.e) ** self.alpha
        elif self.kind == "constant_ratio":
            out = np.full_like(s, self.a)
        else:
            table = np.asarray(self.values)
            knots = np.arange(1, len(table) + 1, dtype=float)
            out = np.interp(s, knots, table)
            out = np.where(s > len(table), np.inf, out)
        return out if out.ndim else float(out)

    def derivative(self, s):
        """A'(s); the left derivative at the knots of a tabulated generator."""
        s = np.asarray(s, dtype=float)
        if self.kind == "analytic":
            out = np.full_like(s, self.C)
        elif self.kind == "logarithmic":
            lg = np.log(s + math.e)
            out = self.C * lg ** self.alpha + self.C * self.alpha * s * lg ** (self.alpha - 1) / (s + math.e)
        elif self.kind == "constant_ratio":
            out = np.zeros_like(s)
        else:
            table = np.asarray(self.values)
            slopes = np.diff(table)
            if slopes.size == 0:
                out = np.zeros_like(s)
            else:
                # segment [j, j+1] owns s in (j, j+1]; s = 1 takes the first segment
                seg = np.clip(np.ceil(s).astype(int) - 2, 0, slopes.size - 1)
                out = slopes[seg]
        return out if out.ndim else float(out)

    def log_ratio(self, j: int) -> float:
        """log A(j) at an integer index j >= 1."""
        if j < 1:
            raise ValueError("generator index starts at 1")
        if self.kind == "tabulated":
            if j > len(self.values):
                return math.inf
            return math.log(self.values[j - 1])
        if self.kind == "analytic":
            return math.log(self.C) + math.log(j)
        if self.kind == "logarithmic":
            return math.log(self.C) + math.log(j) + self.alpha * math.log(math.log(j + math.e))
        return math.log(self.a)


@dataclass(frozen=True, eq=False)
class LogConvexSequence:
    """Majorant sequence stored as log M_0, ..., log M_J.

    ``tail_sum`` records what is known about sum_{j>J} M_{j-1}/M_j past
    the stored terms: 0.0 for finite smoothness (M_j = +inf beyond J),
    +inf for a divergent (quasianalytic) tail, a finite value when the
    caller knows it, and None when nothing is known.
    """

    log_m: np.ndarray
    normalized: bool = True
    tail_sum: float | None = None

    def __post_init__(self):
        log_m = np.array(self.log_m, dtype=float)
        log_m.setflags(write=False)
        object.__setattr__(self, "log_m", log_m)
        if log_m.ndim != 1 or log_m.size == 0:
            raise ValueError("sequence must be a non-empty 1-d array of log values")
        if not np.all(np.isfinite(log_m)):
            raise ValueError("log values must be finite (M_j > 0)")
        if self.normalized and log_m[0] != 0.0:
            raise ValueError("normalized sequence must have M_0 = 1")
        if self.tail_sum is not None and not self.tail_sum >= 0:
            raise ValueError("tail_sum must be non-negative")
        if not _log_convex(log_m, LOG_CONVEX_TOL):
            raise ValueError("sequence is not logarithmically convex")

    def __len__(self) -> int:
        return self.log_m.size

    @property
    def last_index(self) -> int:
        return self.log_m.size - 1

    @property
    def values(self) -> np.ndarray:
        """M_j themselves; overflows to inf where log M_j > ~709."""
        with np.errstate(over="ignore"):
            return np.exp(self.log_m)

    def log_ratio(self, j: int) -> float:
        """log A(j) = log M_j - log M_{j-1}; +inf past a terminated table."""
        if j < 1:
            raise IndexError("ratio index starts at 1")
        if j > self.last_index:
            if self.tail_sum == 0.0:
                return math.inf
            raise IndexError(f"ratio index {j} beyond stored length {len(self)}")
        return float(self.log_m[j] - self.log_m[j - 1])

    def ratio(self, j: int) -> float:
        """A(j) = M_j / M_{j-1}."""
        return math.exp(self.log_ratio(j))

    def inverse_ratios(self) -> np.ndarray:
        """M_{j-1}/M_j for j = 1..J (index 0 of the result is j = 1)."""
        return np.exp(-np.diff(self.log_m))

    def prefix(self, count: int) -> "LogConvexSequence":
        if not 1 <= count <= len(self):
            raise IndexError("prefix length out of range")
        if count == len(self):
            return self
        rest = float(np.sum(self.inverse_ratios()[count - 1:]))
        tail = None if self.tail_sum is None else self.tail_sum + rest
        return LogConvexSequence(self.log_m[:count], self.normalized, tail)


def _log_convex(log_v: np.ndarray, tol: float) -> bool:
    if log_v.size < 3:
        return True
    second = log_v[:-2] + log_v[2:] - 2.0 * log_v[1:-1]
    # absolute tolerance, widened to the rounding scale of large log values
    scale = np.maximum(1.0, np.abs(log_v[1:-1]))
    return bool(np.all(second >= -tol * scale))


def is_log_convex(values, tol: float = LOG_CONVEX_TOL) -> bool:
    """True iff 2 log v_j <= log v_{j-1} + log v_{j+1} + tol at interior j."""
    v = np.asarray(values, dtype=float)
    if np.any(~(v > 0)):
        raise ValueError("log-convexity is defined for positive sequences only")
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    if v.size < 3:
        return True
    lv = np.log(v)
    return bool(np.all(2.0 * lv[1:-1] <= lv[:-2] + lv[2:] + tol))


def from_generator(gen: Generator, count: int) -> LogConvexSequence:
    """M_0 = 1 and M_j = M_{j-1} A(j) for j < count, accumulated in logs.

    A tabulated generator with J entries yields at most J + 1 terms.
    """
    if count < 1:
        raise ValueError("count must be positive")
    table = gen.table_length
    if table is not None and count > table + 1:
        raise IndexError(f"count {count} exceeds tabulated generator range (J = {table})")
    log_a = np.array([gen.log_ratio(j) for j in range(1, count)], dtype=float)
    log_m = np.concatenate(([0.0], np.cumsum(log_a)))
    if table is not None:
        tail = float(sum(1.0 / v for v in gen.values[count - 1:]))
    else:
        tail = math.inf if gen.quasianalytic else None
    return LogConvexSequence(log_m, normalized=True, tail_sum=tail)


def from_values(values, tail_sum: float | None = None) -> LogConvexSequence:
    v = np.asarray(values, dtype=float)
    if np.any(~(v > 0)):
        raise ValueError("sequence entries must be positive")
    log_m = np.log(v)
    return LogConvexSequence(log_m, normalized=bool(log_m[0] == 0.0), tail_sum=tail_sum)


def quasianalytic_sum(seq: LogConvexSequence, lo: int, hi: int) -> float:
    """sum_{j=lo}^{hi} M_{j-1}/M_j, accumulated left to right."""
    if not 1 <= lo <= hi <= seq.last_index:
        raise IndexError(f"summation range [{lo}, {hi}] outside 1..{seq.last_index}")
    total = 0.0
    for j in range(lo, hi + 1):
        total += math.exp(seq.log_m[j - 1] - seq.log_m[j])
    return total


@dataclass(frozen=True)
class MinorantResult:
    minorant: LogConvexSequence
    contact_set: tuple[int, ...]


def lower_hull_vertices(y: np.ndarray) -> list[int]:
    """Strict vertices of the lower convex hull of (j, y_j), monotone chain."""
    hull: list[int] = []
    for j in range(y.size):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            # drop i1 when it is on or above the chord i0 -> j
            if (y[i1] - y[i0]) * (j - i0) >= (y[j] - y[i0]) * (i1 - i0):
                hull.pop()
            else:
                break
        hull.append(j)
    return hull


def log_convex_minorant(values) -> MinorantResult:
    """Largest log-convex minorant M^c of a positive sequence.

    The minorant is exp of the lower convex hull of (j, log M_j); the
    contact set holds every j with M^c_j = M_j (hull vertices plus points
    lying on a hull edge).
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("minorant of an empty sequence")
    if np.any(~(v > 0)) or np.any(~np.isfinite(v)):
        raise ValueError("sequence entries must be positive and finite")
    y = np.log(v)
    return minorant_from_logs(y)


def minorant_from_logs(y) -> MinorantResult:
    y = np.asarray(y, dtype=float)
    verts = lower_hull_vertices(y)
    idx = np.arange(y.size, dtype=float)
    hull_y = np.interp(idx, np.asarray(verts, dtype=float), y[verts])
    hull_y[verts] = y[verts]
    tol = LOG_CONVEX_TOL * np.maximum(1.0, np.abs(y))
    contact = np.nonzero(y - hull_y <= tol)[0]
    hull_y = np.where(y - hull_y <= tol, y, hull_y)
    seq = LogConvexSequence(hull_y, normalized=bool(hull_y[0] == 0.0))
    return MinorantResult(seq, tuple(int(j) for j in contact))


def gamma_sup(gen: Generator, n: float) -> float:
    """gamma(n) = sup_{1 <= s <= n} s A'(s) / A(s).

    Closed forms for the analytic and constant-ratio kinds.  Other kinds
    are scanned at step 1e-3 and the best scan point is refined by
    golden-section search.
    """
    if n < 1:
        raise ValueError("gamma is defined for n >= 1")
    if gen.kind == "analytic":
        return 1.0
    if gen.kind == "constant_ratio":
        return 0.0
    if gen.kind == "logarithmic":

        def ratio(s):
            s = np.asarray(s, dtype=float)
            return 1.0 + gen.alpha * s / ((s + math.e) * np.log(s + math.e))

        return _scan_sup(ratio, 1.0, float(n))
    table = np.asarray(gen.values)
    hi = min(float(n), float(table.size))
    if table.size < 2 or hi <= 1.0:
        return 0.0

    def ratio(s):
        s = np.asarray(s, dtype=float)
        return s * gen.derivative(s) / gen(s)

    best = _scan_sup(ratio, 1.0, hi)
    # on each linear piece s*d/(A_j + d(s - j)) is monotone: its sup is a
    # one-sided limit at a knot, which a scan only approaches
    slopes = np.diff(table)
    for j in range(1, int(math.ceil(hi))):
        d = slopes[j - 1]
        right = min(j + 1.0, hi)
        for s in (float(j), right):
            a_s = table[j - 1] + d * (s - j)
            best = max(best, s * d / a_s)
    return float(best)


def gamma_global(gen: Generator, horizon: float = 1e3) -> float:
    """sup_{s >= 1} s A'(s)/A(s) for regular classes.

    For the logarithmic kind the ratio has a single interior maximum and
    decays afterwards, so a finite horizon scan is exact.
    """
    if gen.kind == "tabulated":
        return gamma_sup(gen, float(len(gen.values)))
    return gamma_sup(gen, horizon)


def _scan_sup(func, lo: float, hi: float, step: float = GAMMA_SCAN_STEP) -> float:
    if hi <= lo:
        return float(func(lo))
    npts = int(math.ceil((hi - lo) / step)) + 1
    grid = np.linspace(lo, hi, npts)
    vals = func(grid)
    i = int(np.argmax(vals))
    best = float(vals[i])
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, npts - 1)]
    if b > a:
        best = max(best, _golden_max(func, a, b, GAMMA_REFINE_TOL))
    return best


def _golden_max(func, a: float, b: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = float(func(c)), float(func(d))
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = float(func(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = float(func(d))
    return max(fc, fd)


def gamma_exponent_scale(variant: str) -> float:
    try:
        return GAMMA_VARIANTS[variant]
    except KeyError:
        raise ValueError(
            f"unknown Gamma variant {variant!r}; expected one of {sorted(GAMMA_VARIANTS)}"
        ) from None


def big_gamma(gamma_value: float, exponent_scale: float = 1.0) -> float:
    """Gamma = 4 exp(4 + scale * gamma); scale 1 or 2/e depending on use."""
    if gamma_value < 0:
        raise ValueError("gamma must be non-negative")
    return 4.0 * math.exp(4.0 + exponent_scale * gamma_value)


def factorial_normalized(seq: LogConvexSequence) -> np.ndarray:
    """log m_j = log M_j - log j!."""
    j = np.arange(len(seq), dtype=float)
    log_fact = np.array([math.lgamma(k + 1.0) for k in j])
    return seq.log_m - log_fact
