"""Bang norms, remainder norms and the Bang degree.

The pointwise norm of f at x is B_f(x) = max_j |f^(j)(x)| / (e^j M_j).
For class members every term is at most e^{-j}, which lets the scan stop
as soon as e^{-j} drops below the running maximum.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .funcmodel import FunctionModel, _check_x
from .quadrature import adaptive_integrate
from .sequences import Generator, LogConvexSequence, log_convex_minorant

E = math.e
# relative slack below which a sum is treated as tied with its threshold
TIE_RTOL = 1e-12
# |log(1/t) - m| below this snaps log(1/t) to the integer m
INTEGER_SNAP = 1e-12


def _abs_part(v):
    return np.abs(v)


def _negative_part(v):
    return np.maximum(-v, 0.0)


def _norm_scan(f, seq, x, start=0, stop=None, part=_abs_part, assume_member=True):
    """Running max over j in [start, stop] of part(f^(j)(x)) / (e^j M_j)."""
    xs = np.atleast_1d(_check_x(x))
    best = np.zeros(xs.shape)
    top = seq.last_index if stop is None else min(stop, seq.last_index)
    if f.max_order is not None:
        top = min(top, f.max_order)
    for j in range(start, top + 1):
        vals, log_scale = f.scaled_derivative(j, xs)
        with np.errstate(over="ignore", under="ignore"):
            term = part(vals) * np.exp(log_scale - j - seq.log_m[j])
        best = np.maximum(best, term)
        # members have every later term <= e^{-(j+1)}
        if assume_member and math.exp(-(j + 1)) <= best.min():
            break
    return best


def _out(x, arr):
    return float(arr[0]) if np.ndim(x) == 0 else arr


def bang_norm(f: FunctionModel, seq: LogConvexSequence, x, assume_member: bool = True):
    """B_f(x) = max_{j >= 0} |f^(j)(x)| / (e^j M_j).

    With ``assume_member`` false every stored order is scanned.
    Accepts a scalar or an array of points.
    """
    return _out(x, _norm_scan(f, seq, x, 0, assume_member=assume_member))


def remainder_norm(f: FunctionModel, seq: LogConvexSequence, n: int, x, assume_member: bool = True):
    """b_{f,n}(x) = max_{j >= n} |f^(j)(x)| / (e^j M_j)."""
    if n < 0 or n > seq.last_index:
        raise IndexError("remainder order outside the stored sequence")
    return _out(x, _norm_scan(f, seq, x, n, assume_member=assume_member))


def one_sided_norm(f: FunctionModel, seq: LogConvexSequence, x, assume_member: bool = True):
    """B_f^-(x): the Bang norm built from max(-f^(j)(x), 0)."""
    return _out(x, _norm_scan(f, seq, x, 0, part=_negative_part, assume_member=assume_member))


def log_norm(B):
    """L = log(1/B), with math.inf standing for B = 0."""
    arr = np.asarray(B, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("norm values must be non-negative")
    with np.errstate(divide="ignore"):
        out = -np.log(arr)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class BangProfile:
    grid: np.ndarray
    B_values: np.ndarray
    L_values: np.ndarray

    def rows(self):
        for x, b, l in zip(self.grid, self.B_values, self.L_values):
            yield float(x), float(b), float(l)

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "B_f", "L_f"])
        for x, b, l in self.rows():
            w.writerow([repr(x), repr(b), "inf" if math.isinf(l) else repr(l)])
        return buf.getvalue()

    def to_csv(self, path) -> None:
        Path(path).write_text(self.csv_text())


def bang_profile(f: FunctionModel, seq: LogConvexSequence, grid) -> BangProfile:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("profile grid must be a non-empty increasing array")
    B = np.atleast_1d(bang_norm(f, seq, grid))
    return BangProfile(grid, B, np.atleast_1d(log_norm(B)))


@dataclass(frozen=True)
class BangDegree:
    """Bang degree; ``value`` is None when the degree is unbounded."""

    value: int | None
    K_f: int
    partial_sum: float

    @property
    def unbounded(self) -> bool:
        return self.value is None

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "K_f": self.K_f,
            "partial_sum": self.partial_sum,
            "unbounded": self.unbounded,
        }


def _snap_log(t: float) -> float:
    K = -math.log(t)
    m = round(K)
    if abs(K - m) <= INTEGER_SNAP * max(1.0, abs(K)):
        return float(m)
    return K


def bang_degree(seq: LogConvexSequence, sup_norm: float) -> BangDegree:
    """Largest N with sum_{log(1/||f||) < j <= N} M_{j-1}/M_j < e.

    Both inequalities are strict; when log(1/||f||) is an integer m the
    sum starts at m + 1.  Past the stored terms the sequence's
    ``tail_sum`` decides: a tail that cannot lift the sum to e makes the
    degree unbounded, anything else is an error.
    """
    if not 0.0 < sup_norm <= 1.0:
        raise ValueError("sup norm must lie in (0, 1]")
    K = _snap_log(sup_norm)
    K_f = int(math.floor(K))
    total = 0.0
    j = K_f + 1
    while True:
        if j > seq.last_index:
            tail = seq.tail_sum
            if tail is not None and total + tail < E:
                return BangDegree(None, K_f, total)
            raise ValueError(
                f"sequence of length {len(seq)} too short to resolve the Bang degree"
            )
        r = math.exp(seq.log_m[j - 1] - seq.log_m[j])
        if total + r >= E:
            return BangDegree(j - 1, K_f, total)
        total += r
        j += 1


def original_bang_norm(f: FunctionModel, raw_values, x: float) -> float:
    """inf_{p in P} max(e^{-p}, max_{j <= p} |f^(j)(x)| / (e^j M^c_j)).

    M^c is the largest log-convex minorant of the raw bounds and P its
    contact set.
    """
    res = log_convex_minorant(raw_values)
    log_mc = res.minorant.log_m
    p_max = max(res.contact_set)
    xs = np.atleast_1d(_check_x(x))
    terms = np.zeros(p_max + 1)
    for j in range(p_max + 1):
        if f.max_order is not None and j > f.max_order:
            break
        vals, log_scale = f.scaled_derivative(j, xs)
        with np.errstate(over="ignore", under="ignore"):
            terms[j] = abs(float(vals[0])) * math.exp(min(log_scale - j - log_mc[j], 709.0))
    prefix = np.maximum.accumulate(terms)
    return float(min(max(math.exp(-p), prefix[p]) for p in res.contact_set))


def flat_zero_envelope(seq: LogConvexSequence, c: float) -> float:
    """e^{-n*}, n* = min{n >= 0 : sum_{j >= n+1} M_{j-1}/M_j < e c}.

    Bounds max_{[0, c]} |f| for class members vanishing to infinite order
    at 0.  A divergent tail (quasianalytic class) gives 0.
    """
    if not 0.0 < c <= 1.0:
        raise ValueError("c must lie in (0, 1]")
    tail = seq.tail_sum
    if tail is None:
        raise ValueError("envelope needs a known tail sum past the stored terms")
    if math.isinf(tail):
        return 0.0
    threshold = E * c
    ratios = seq.inverse_ratios()
    # suffix[m] = sum_{j >= m+1} r_j including the tail past the table
    suffix = [tail]
    for r in ratios[::-1]:
        suffix.append(math.fsum((suffix[-1], r)))
    suffix = suffix[::-1]
    for n, s in enumerate(suffix):
        if s < threshold * (1.0 - TIE_RTOL):
            return math.exp(-n)
    raise ValueError("tail past the stored terms too large to resolve the envelope")


@dataclass(frozen=True)
class FundamentalResidual:
    """RHS - LHS for the three forms of the fundamental inequality.

    ``log_form`` is None when either L value is infinite.
    """

    lemma: float
    remainder: float
    log_form: float | None

    @property
    def minimum(self) -> float:
        vals = [self.lemma, self.remainder]
        if self.log_form is not None:
            vals.append(self.log_form)
        return min(vals)


def fundamental_residuals(f, seq, x, h: float, q: int, B_x=None, B_xh=None):
    """Vectorized residuals of the fundamental inequality at points x.

    Returns (lemma, remainder, log_form) arrays; log_form holds nan where
    it does not apply.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    xh = xs + h
    _check_x(xh)
    if not 1 <= q <= seq.last_index:
        raise IndexError("q outside the stored sequence")
    Bx = bang_norm(f, seq, xs) if B_x is None else B_x
    Bxh = bang_norm(f, seq, xh) if B_xh is None else B_xh
    Bx, Bxh = np.atleast_1d(Bx), np.atleast_1d(Bxh)
    A_q = seq.ratio(q)
    lemma = np.maximum(Bx, math.exp(-q)) * math.exp(E * abs(h) * A_q) - Bxh

    # remainder norms: Taylor expansion to order n + q uses A(n + q)
    rem = np.full(xs.shape, np.inf)
    for n in range(0, min(q, seq.last_index - q) + 1):
        bx = np.atleast_1d(remainder_norm(f, seq, n, xs))
        bxh = np.atleast_1d(remainder_norm(f, seq, n, xh))
        A_nq = seq.ratio(n + q)
        rhs = np.maximum(bx, math.exp(-q - n)) * math.exp(E * abs(h) * A_nq)
        rem = np.minimum(rem, rhs - bxh)

    Lx, Lxh = log_norm(Bx), log_norm(Bxh)
    Lx, Lxh = np.atleast_1d(Lx), np.atleast_1d(Lxh)
    log_form = np.full(xs.shape, np.nan)
    finite = np.isfinite(Lx) & np.isfinite(Lxh)
    for i in np.nonzero(finite)[0]:
        idx = int(math.floor(max(Lx[i], Lxh[i]))) + 1
        if idx <= seq.last_index:
            log_form[i] = E * abs(h) * seq.ratio(idx) - abs(Lxh[i] - Lx[i])
    return lemma, rem, log_form


def verify_fundamental(f: FunctionModel, seq: LogConvexSequence, x: float, h: float, q: int) -> FundamentalResidual:
    """Residuals (RHS - LHS) of the fundamental inequality at one (x, h, q).

    ``lemma``: B(x+h) < max(B(x), e^{-q}) exp(e |h| A(q)).
    ``remainder``: the same for b_{f,n}, n <= q, with A(n + q).
    ``log_form``: |L(x+h) - L(x)| < e |h| A(floor(max L) + 1).
    """
    if not (0.0 <= x <= 1.0 and 0.0 <= x + h <= 1.0):
        raise ValueError("x and x + h must lie in [0, 1]")
    lemma, rem, log_form = fundamental_residuals(f, seq, x, h, q)
    lf = float(log_form[0])
    return FundamentalResidual(float(lemma[0]), float(rem[0]), None if math.isnan(lf) else lf)


@dataclass
class LevelCrossingReport:
    max_B: float
    min_B: float
    L: int
    N: int | None
    crossing_sum: float | None
    sum_verdict: str
    integral_narrow: float | None
    integral_wide: float | None
    integral_verdict: str
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _lower_bracket_min(gmin: float, delta: float, seq: LogConvexSequence) -> float:
    # B(x) < max(B(y), e^{-q}) e^{e delta A(q)} for |x - y| <= delta; once
    # log(1/gmin) <= q - e delta A(q) the e^{-q} branch is impossible
    if gmin <= 0.0:
        return 0.0
    target = -math.log(gmin)
    for q in range(1, seq.last_index + 1):
        spread = E * delta * seq.ratio(q)
        if q - spread >= target:
            return gmin * math.exp(-spread)
    return 0.0


def _upper_bracket_max(gmax: float, delta: float, seq: LogConvexSequence) -> float:
    q = max(1, int(math.ceil(-math.log(gmax)))) if gmax > 0 else seq.last_index
    q = min(q, seq.last_index)
    return min(1.0, max(gmax, math.exp(-q)) * math.exp(E * delta * seq.ratio(q)))


def verify_level_crossing(
    f: FunctionModel,
    gen: Generator,
    seq: LogConvexSequence,
    grid,
    tol: float = 1e-9,
) -> LevelCrossingReport:
    """Level-crossing sum and its integral form on a grid.

    L = ceil(log 1/max B) and N = floor(log 1/min B) satisfy the level
    hypotheses for the true extrema, so the sum check needs no error band.
    The integral of 1/A over [L_* + 1, L^* + 1] is evaluated on the grid
    range and on a range widened through the fundamental inequality; a
    result that only the widened range fails is inconclusive.
    """
    grid = np.asarray(grid, dtype=float)
    if grid[0] > 0.0 or grid[-1] < 1.0 or np.max(np.diff(grid)) > 1e-2 + 1e-15:
        raise ValueError("grid must cover [0, 1] with step <= 1e-2")
    B = np.atleast_1d(bang_norm(f, seq, grid))
    gmax, gmin = float(B.max()), float(B.min())
    notes = []
    L = int(math.ceil(_snap_log(gmax))) if gmax < 1.0 else 0
    if gmin > 0.0:
        N = int(math.floor(_snap_log(gmin)))
    else:
        N = None
        notes.append("min B = 0 on the grid: zero of order beyond the stored sequence; review")

    if N is None:
        crossing_sum = None
        sum_verdict = "inconclusive"
    elif N <= L:
        crossing_sum = 0.0
        sum_verdict = "pass"
    else:
        if N > seq.last_index:
            raise ValueError("sequence too short for the level-crossing sum")
        crossing_sum = 0.0
        for j in range(L + 1, N + 1):
            crossing_sum += math.exp(seq.log_m[j - 1] - seq.log_m[j])
        sum_verdict = "pass" if crossing_sum < E else "fail"

    def inv_A(s):
        return 1.0 / float(gen(s))

    L_lo = max(0.0, -math.log(gmax))
    integral_narrow = None
    integral_wide = None
    if gmin > 0.0:
        L_hi = -math.log(gmin)
        integral_narrow = adaptive_integrate(inv_A, L_lo + 1.0, L_hi + 1.0, tol)
        delta = float(np.max(np.diff(grid))) / 2.0
        up = _upper_bracket_max(gmax, delta, seq)
        low = _lower_bracket_min(gmin, delta, seq)
        if low > 0.0:
            integral_wide = adaptive_integrate(inv_A, max(0.0, -math.log(up)) + 1.0, -math.log(low) + 1.0, tol)
    if integral_wide is not None and integral_wide < E:
        integral_verdict = "pass"
    elif integral_narrow is not None and integral_narrow >= E:
        integral_verdict = "fail"
    else:
        integral_verdict = "inconclusive"
    return LevelCrossingReport(
        gmax, gmin, L, N, crossing_sum, sum_verdict, integral_narrow, integral_wide, integral_verdict, notes
    )


def _shift_pairs(step: float, count: int, h: float):
    s = int(round(h / step))
    if abs(s * step - h) > 1e-12:
        raise ValueError(f"shift {h} is not a multiple of the grid step {step}")
    lo = np.arange(max(0, -s), count - max(0, s))
    return lo, lo + s


def _uniform_grid(step: float) -> np.ndarray:
    n = int(round(1.0 / step))
    if n < 1 or abs(n * step - 1.0) > 1e-12:
        raise ValueError("grid step must divide 1")
    return np.linspace(0.0, 1.0, n + 1)


def fundamental_grid(f: FunctionModel, seq: LogConvexSequence, step: float, hs, qs) -> dict:
    """Minimum residuals of the fundamental inequality over a uniform grid.

    Points are multiples of ``step`` in [0, 1] and every h must be a
    multiple of ``step``.  Returns {(h, q): FundamentalResidual}, each
    field the minimum over all x with x + h in [0, 1].
    """
    grid = _uniform_grid(step)
    qs = sorted(int(q) for q in qs)
    if qs[0] < 1 or qs[-1] > seq.last_index:
        raise IndexError("q outside the stored sequence")
    n_top = min(qs[-1], seq.last_index - qs[0])
    rem = [_norm_scan(f, seq, grid, n) for n in range(n_top + 1)]
    B = rem[0]
    L = log_norm(B)
    out = {}
    for h in hs:
        i, k = _shift_pairs(step, grid.size, h)
        spread = E * abs(h)
        Lmax = np.maximum(L[i], L[k])
        finite = np.isfinite(Lmax)
        for q in qs:
            lemma = float(np.min(np.maximum(B[i], math.exp(-q)) * math.exp(spread * seq.ratio(q)) - B[k]))
            r_min = math.inf
            for n in range(0, min(q, seq.last_index - q, n_top) + 1):
                b = rem[n]
                vals = np.maximum(b[i], math.exp(-q - n)) * math.exp(spread * seq.ratio(n + q)) - b[k]
                r_min = min(r_min, float(np.min(vals)))
            log_min = None
            if np.any(finite):
                idx = np.floor(Lmax[finite]).astype(int) + 1
                ok = idx <= seq.last_index
                if np.any(ok):
                    A = np.exp(np.diff(seq.log_m))[idx[ok] - 1]
                    d = np.abs(L[k][finite][ok] - L[i][finite][ok])
                    log_min = float(np.min(spread * A - d))
            out[(h, q)] = FundamentalResidual(lemma, r_min, log_min)
    return out


def one_sided_grid(f: FunctionModel, seq: LogConvexSequence, step: float, hs, qs) -> dict:
    """Minimum of max(B^-(x), e^{-q}) exp(e h A(q)) - B^-(x + h) over a grid.

    Only forward shifts h > 0 are meaningful: Taylor weights h^l / l! are
    then positive and cannot turn positive derivatives negative.
    """
    grid = _uniform_grid(step)
    Bm = _norm_scan(f, seq, grid, 0, part=_negative_part)
    out = {}
    for h in hs:
        if not h > 0:
            raise ValueError("one-sided propagation needs h > 0")
        i, k = _shift_pairs(step, grid.size, h)
        for q in qs:
            rhs = np.maximum(Bm[i], math.exp(-q)) * math.exp(E * h * seq.ratio(q))
            out[(h, q)] = float(np.min(rhs - Bm[k]))
    return out
