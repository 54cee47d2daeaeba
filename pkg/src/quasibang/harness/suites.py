"""Built-in certified pairs and the verification suites.

Each suite takes a SuiteContext and returns a list of CheckRecord.  A
suite draws its randomness from a generator seeded by (seed, crc32 of
the suite name), so suites are reproducible independently of which
others run alongside them.
"""
from __future__ import annotations

import functools
import hashlib
import json
import math
import time
import zlib
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from numpy.polynomial import chebyshev

from .. import bang, funcmodel, oracles, remez, sequences
from ..funcmodel import Polynomial, Sinusoid
from ..sequences import Generator, LogConvexSequence

SINUSOID_KS = (1, 2, 3, 4, 5)
SEQUENCE_LENGTH = 200
SERIES_CLASS_LENGTH = 41
THEOREM_B_HOSTS = ((0.0, 1.0), (0.2, 0.7))
LEMMA_STEP = 0.01
LEMMA_SHIFTS = (-0.1, -0.05, -0.02, -0.01, 0.01, 0.02, 0.05, 0.1)
LEMMA_MAX_Q = 30
ONE_SIDED_SHIFTS = (0.01, 0.02, 0.05, 0.1)
MINORANT_MAX_LENGTH = 12
MARKOV_MAX_DEGREE = 8
REMEZ_MAX_DEGREE = 10
OMEGA_T_STEP = 1e-3
OMEGA_TOL = 1e-9
MARKOV_EQ_RTOL = 1e-9
ENVELOPE_C_GRID = tuple(np.round(np.arange(0.05, 1.0001, 0.05), 10))
BUILTIN_POLYNOMIALS = (
    ("poly-x", (0.0, 1.0)),
    ("poly-x-half", (-0.5, 1.0)),
    ("poly-x2-over-2", (0.0, 0.0, 0.5)),
    ("poly-x3-over-3", (0.0, 0.0, 0.0, 1.0 / 3.0)),
    ("poly-two-roots", (0.1875, -1.0, 1.0)),
    ("poly-three-roots", (0.0, 1.0 / 3.0, -1.0, 2.0 / 3.0)),
)


class BuiltinPair(NamedTuple):
    label: str
    f: object
    gen: Generator
    seq: LogConvexSequence


@dataclass(frozen=True)
class CheckRecord:
    suite: str
    check_id: str
    inputs_digest: str
    residual: object
    verdict: str
    wall_time: float | None = None

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "check_id": self.check_id,
            "inputs_digest": self.inputs_digest,
            "residual": self.residual,
            "verdict": self.verdict,
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out


def digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def clean(v):
    """JSON-safe residual: non-finite floats become strings."""
    if v is None:
        return None
    v = float(v)
    if math.isfinite(v):
        return v
    if math.isnan(v):
        return "nan"
    return "inf" if v > 0 else "-inf"


def _seq_summary(seq: LogConvexSequence) -> dict:
    return {"len": len(seq), "log_m_digest": digest([float(v) for v in seq.log_m])}


def _series_pair() -> BuiltinPair:
    raw = funcmodel.nonextendable_series()
    g, logs = funcmodel.series_class_sequence(raw, SERIES_CLASS_LENGTH)
    hull = sequences.minorant_from_logs(logs)
    # moments of a positive measure are log-convex, so the hull is the
    # majorant itself and remains a valid derivative bound
    if not np.allclose(hull.minorant.log_m, logs, rtol=0.0, atol=1e-9):
        raise RuntimeError("series moment bounds are not log-convex")
    gen = Generator.tabulated(np.exp(np.diff(hull.minorant.log_m)))
    seq = sequences.from_generator(gen, SERIES_CLASS_LENGTH)
    return BuiltinPair("nonextendable", g, gen, seq)


@functools.lru_cache(maxsize=1)
def builtin_pairs() -> tuple[BuiltinPair, ...]:
    """Certified (label, f, gen, seq) pairs; every pair passes fits_class."""
    pairs = []
    for k in SINUSOID_KS:
        gen = Generator.constant_ratio(k * math.pi)
        pairs.append(BuiltinPair(f"sin-k{k}", Sinusoid(k), gen, sequences.from_generator(gen, SEQUENCE_LENGTH)))
    analytic = Generator.analytic(1.0)
    fac = sequences.from_generator(analytic, SEQUENCE_LENGTH)
    for label, coeffs in BUILTIN_POLYNOMIALS:
        pairs.append(BuiltinPair(label, Polynomial(coeffs), analytic, fac))
    pairs.append(_series_pair())
    return tuple(p for p in pairs if funcmodel.fits_class(p.f, p.seq).fits)


def builtin_suite() -> list[tuple]:
    """The built-in (FunctionModel, Generator, LogConvexSequence) triples."""
    return [(p.f, p.gen, p.seq) for p in builtin_pairs()]


@dataclass
class SuiteContext:
    seed: int
    spacing: float
    variant: str
    pairs: tuple
    generator: Generator
    interval_sets: tuple = ()
    random_sets: dict = field(default_factory=lambda: {"count": 100, "max_components": 4, "min_measure": 0.05})
    random_polynomials: int = 200
    random_sequences: int = 500
    propagation_sets: int = 5
    tolerances: dict = field(default_factory=lambda: {"residual": 1e-9})
    records: list = field(default_factory=list)
    current: str = ""
    cache: dict = field(default_factory=dict)

    def rng(self, suite: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(suite.encode())])

    def add(self, check_id: str, inputs, residual, verdict: str, started: float | None = None):
        wall = None if started is None else time.perf_counter() - started
        self.records.append(
            CheckRecord(self.current, check_id, digest(inputs), clean(residual), verdict, wall)
        )


def _pair_inputs(p: BuiltinPair) -> dict:
    return {"f": p.f.to_dict(), "gen": p.gen.to_dict(), "seq": _seq_summary(p.seq)}


def _degree_bracket(f, seq: LogConvexSequence, spacing: float):
    est, err = funcmodel.sup_norm(f, (0.0, 1.0), spacing)
    # the degree is non-increasing in the norm: the upper end of the
    # bracket gives a degree <= the true one, the lower end one >= it
    low = bang.bang_degree(seq, min(1.0, est + err))
    high = bang.bang_degree(seq, min(1.0, est))
    return low, high


def theorem_a_verdict(f, seq: LogConvexSequence, spacing: float = 1e-3):
    """(zeros, degree bracket, verdict) for zeros <= Bang degree."""
    zeros, exact = funcmodel.count_zeros(f)
    low, high = _degree_bracket(f, seq, spacing)

    def val(d):
        return math.inf if d.unbounded else d.value

    if zeros <= val(low):
        verdict = "pass" if exact else "inconclusive"
    elif zeros > val(high):
        verdict = "fail"
    else:
        verdict = "inconclusive"
    return zeros, val(low), verdict


def suite_theorem_a(ctx: SuiteContext):
    for p in ctx.pairs:
        t0 = time.perf_counter()
        zeros, degree, verdict = theorem_a_verdict(p.f, p.seq, ctx.spacing)
        ctx.add(p.label, _pair_inputs(p), degree - zeros, verdict, t0)


def suite_theorem_b(ctx: SuiteContext):
    rng = ctx.rng("theorem-b")
    rs = ctx.random_sets
    cases = []
    for h, (a, b) in enumerate(THEOREM_B_HOSTS):
        for k in range(rs["count"]):
            E = funcmodel.random_interval_set(rng, a, b, rs["max_components"], rs["min_measure"])
            cases.append((f"I{h}/E{k:03d}", (a, b), E))
    for k, E in enumerate(ctx.interval_sets):
        cases.append((f"config/E{k:03d}", (0.0, 1.0), E))
    for p in ctx.pairs:
        norm01, _ = funcmodel.sup_norm(p.f, (0.0, 1.0), ctx.spacing)
        for cid, I, E in cases:
            t0 = time.perf_counter()
            check = remez.check_theorem_b(p.f, p.gen, p.seq, I, E, ctx.variant, ctx.spacing, norm_01=norm01)
            inputs = {**_pair_inputs(p), "I": I, "E": E.to_dict(), "variant": ctx.variant}
            ctx.add(f"{p.label}/{cid}", inputs, check.margin, check.verdict, t0)
            if check.details.get("short"):
                ok = check.details["short_taylor_ok"]
                ctx.add(f"{p.label}/{cid}/short-taylor", inputs, None, "pass" if ok else "inconclusive")
            elif "nonshort_floor_ok" in check.details:
                ok = check.details["nonshort_floor_ok"]
                ctx.add(f"{p.label}/{cid}/nonshort-floor", inputs, None, "pass" if ok else "inconclusive")


def _lemma_qs(seq: LogConvexSequence):
    return range(1, min(LEMMA_MAX_Q, seq.last_index) + 1)


def suite_lemma_2_1(ctx: SuiteContext):
    tol = ctx.tolerances.get("residual", 1e-9)
    for p in ctx.pairs:
        t0 = time.perf_counter()
        res = bang.fundamental_grid(p.f, p.seq, LEMMA_STEP, LEMMA_SHIFTS, _lemma_qs(p.seq))
        for (h, q), r in sorted(res.items()):
            inputs = {**_pair_inputs(p), "h": h, "q": q, "step": LEMMA_STEP}
            base = f"{p.label}/h{h:+.2f}/q{q:02d}"
            ctx.add(base + "/lemma", inputs, r.lemma, "pass" if r.lemma >= -tol else "fail", t0)
            ctx.add(base + "/remainder", inputs, r.remainder, "pass" if r.remainder >= -tol else "fail")
            if r.log_form is not None:
                ctx.add(base + "/log-form", inputs, r.log_form, "pass" if r.log_form >= -tol else "fail")


def _level_grid(spacing: float) -> np.ndarray:
    step = min(spacing, 1e-2)
    return np.linspace(0.0, 1.0, int(math.ceil(1.0 / step)) + 1)


def _level_report(ctx: SuiteContext, p: BuiltinPair):
    key = ("level", p.label)
    if key not in ctx.cache:
        ctx.cache[key] = bang.verify_level_crossing(p.f, p.gen, p.seq, _level_grid(ctx.spacing))
    return ctx.cache[key]


def suite_cor_2_3(ctx: SuiteContext):
    for p in ctx.pairs:
        t0 = time.perf_counter()
        rep = _level_report(ctx, p)
        resid = None if rep.crossing_sum is None else math.e - rep.crossing_sum
        ctx.add(p.label, {**_pair_inputs(p), "spacing": ctx.spacing}, resid, rep.sum_verdict, t0)


def suite_cor_5_1_3(ctx: SuiteContext):
    for p in ctx.pairs:
        t0 = time.perf_counter()
        rep = _level_report(ctx, p)
        integral = rep.integral_wide if rep.integral_wide is not None else rep.integral_narrow
        resid = None if integral is None else math.e - integral
        ctx.add(p.label, {**_pair_inputs(p), "spacing": ctx.spacing}, resid, rep.integral_verdict, t0)


def _nonnegative_at_zero(p: BuiltinPair) -> bool:
    top = p.seq.last_index if p.f.max_order is None else min(p.seq.last_index, p.f.max_order)
    for j in range(top + 1):
        vals, _ = p.f.scaled_derivative(j, np.array([0.0]))
        if vals[0] < 0:
            return False
    return True


def suite_one_sided(ctx: SuiteContext):
    tol = ctx.tolerances.get("residual", 1e-9)
    for p in ctx.pairs:
        if not _nonnegative_at_zero(p):
            continue
        t0 = time.perf_counter()
        grid, _ = funcmodel._dyadic_grid(0.0, 1.0, ctx.spacing)
        vals, log_scale = p.f.scaled_derivative(0, grid)
        low = float(np.min(vals)) * math.exp(log_scale)
        ctx.add(f"{p.label}/nonnegative", _pair_inputs(p), low, "pass" if low >= -tol else "fail", t0)
        res = bang.one_sided_grid(p.f, p.seq, LEMMA_STEP, ONE_SIDED_SHIFTS, _lemma_qs(p.seq))
        worst = min(res.values())
        ctx.add(f"{p.label}/propagation", _pair_inputs(p), worst, "pass" if worst >= -tol else "fail")


def _random_polynomial(rng, max_degree: int) -> Polynomial:
    d = int(rng.integers(0, max_degree + 1))
    c = rng.standard_normal(d + 1)
    if c[-1] == 0.0:
        c[-1] = 1.0
    return Polynomial(tuple(float(v) for v in c))


def suite_remez_classical(ctx: SuiteContext):
    rng = ctx.rng("remez-classical")
    rs = ctx.random_sets
    for k in range(ctx.random_polynomials):
        t0 = time.perf_counter()
        P = _random_polynomial(rng, REMEZ_MAX_DEGREE)
        E = funcmodel.random_interval_set(rng, 0.0, 1.0, rs["max_components"], rs["min_measure"])
        check = remez.check_classical_remez(P, (0.0, 1.0), E, ctx.spacing)
        ctx.add(f"P{k:03d}", {"P": P.to_dict(), "E": E.to_dict()}, check.margin, check.verdict, t0)


def chebyshev_T(d: int) -> Polynomial:
    return Polynomial(tuple(float(v) for v in chebyshev.cheb2poly([0] * d + [1])))


def markov_equality_cases(max_degree: int = MARKOV_MAX_DEGREE):
    """(d, k) with |T_d^(k)(0)| = d^k: k = d for d <= 2, k = 1 for odd d, k = 0 for even d."""
    cases = {(1, 1), (2, 2)}
    cases |= {(d, 1) for d in range(1, max_degree + 1, 2)}
    cases |= {(d, 0) for d in range(2, max_degree + 1, 2)}
    return sorted(cases)


def suite_markov(ctx: SuiteContext):
    rng = ctx.rng("markov")
    for n in range(ctx.random_polynomials):
        P = _random_polynomial(rng, MARKOV_MAX_DEGREE)
        for k in range(P.degree + 1):
            t0 = time.perf_counter()
            r = remez.markov_pointwise(P, k, ctx.spacing)
            if r.residual >= 0:
                verdict = "pass"
            elif r.residual + r.band >= 0:
                verdict = "inconclusive"
            else:
                verdict = "fail"
            ctx.add(f"P{n:03d}/k{k}", {"P": P.to_dict(), "k": k}, r.residual, verdict, t0)
    for d, k in markov_equality_cases():
        r = remez.markov_pointwise(chebyshev_T(d), k, ctx.spacing)
        rel = abs(r.residual) / max(1.0, r.derivative_at_0)
        ctx.add(f"chebyshev/T{d}/k{k}", {"d": d, "k": k}, rel, "pass" if rel <= MARKOV_EQ_RTOL else "fail")


def random_positive_sequence(rng, max_length: int = MINORANT_MAX_LENGTH) -> np.ndarray:
    n = int(rng.integers(1, max_length + 1))
    return np.exp(3.0 * rng.standard_normal(n))


def suite_minorant(ctx: SuiteContext):
    rng = ctx.rng("minorant")
    for k in range(ctx.random_sequences):
        t0 = time.perf_counter()
        v = random_positive_sequence(rng)
        fast = sequences.log_convex_minorant(v)
        slow, contact = oracles.support_line_minorant(v)
        diff = float(np.max(np.abs(fast.minorant.log_m - slow)))
        ok = diff <= oracles.CONTACT_TOL * max(1.0, float(np.max(np.abs(np.log(v))))) and fast.contact_set == contact
        ctx.add(f"S{k:03d}", {"values": [float(x) for x in v]}, diff, "pass" if ok else "fail", t0)


def _distinct_generators(ctx: SuiteContext):
    seen = {}
    for g in [ctx.generator] + [p.gen for p in ctx.pairs]:
        key = json.dumps(g.to_dict(), sort_keys=True)
        seen.setdefault(key, g)
    return [seen[k] for k in sorted(seen)]


def omega_closed_form(gen: Generator, t: float) -> float | None:
    if gen.kind == "analytic":
        return remez.omega_analytic(t, gen.C)
    if gen.kind == "constant_ratio":
        return t ** (1.0 / (math.e * gen.a))
    return None


def suite_omega(ctx: SuiteContext):
    ts = np.arange(1, int(round(1.0 / OMEGA_T_STEP)) + 1) * OMEGA_T_STEP
    for gen in _distinct_generators(ctx):
        t0 = time.perf_counter()
        label = digest(gen.to_dict())
        inputs = gen.to_dict()
        at_one = remez.omega(gen, 1.0)
        ctx.add(f"{gen.kind}-{label}/at-one", inputs, at_one - 1.0, "pass" if at_one == 1.0 else "fail", t0)
        vals = np.array([remez.omega(gen, float(t)) for t in ts])
        step = float(np.min(np.diff(vals)))
        ctx.add(f"{gen.kind}-{label}/increasing", inputs, step, "pass" if step > 0 else "fail")
        closed = [omega_closed_form(gen, float(t)) for t in ts]
        if closed[0] is not None:
            worst = float(np.max(np.abs(vals - np.array(closed))))
            ctx.add(f"{gen.kind}-{label}/closed-form", inputs, OMEGA_TOL - worst, "pass" if worst <= OMEGA_TOL else "fail")


def suite_cor_5_5_1(ctx: SuiteContext):
    rng = ctx.rng("cor-5-5-1")
    rs = ctx.random_sets
    for p in ctx.pairs:
        sets = [funcmodel.random_interval_set(rng, 0.0, 1.0, rs["max_components"], rs["min_measure"])
                for _ in range(ctx.propagation_sets)]
        sets += list(ctx.interval_sets)
        for k, E in enumerate(sets):
            t0 = time.perf_counter()
            rep = remez.verify_propagation(p.f, p.gen, p.seq, E, ctx.spacing)
            inputs = {**_pair_inputs(p), "E": E.to_dict()}
            ctx.add(f"{p.label}/E{k:03d}/corollary", inputs, rep.corollary.margin, rep.corollary.verdict, t0)
            if rep.closed_form is not None:
                ctx.add(f"{p.label}/E{k:03d}/closed-form", inputs, rep.closed_form.margin, rep.closed_form.verdict)


def geometric_ratio_sequence(length: int = 60) -> LogConvexSequence:
    """M_j = M_{j-1} 2^j, so M_{j-1}/M_j = 2^{-j}; the tail past the table is exact."""
    j = np.arange(length)
    log_m = np.cumsum(j * math.log(2.0))
    tail = 2.0 ** -(length - 1)
    return LogConvexSequence(log_m, normalized=True, tail_sum=tail)


def suite_envelope(ctx: SuiteContext):
    geo = geometric_ratio_sequence()
    anchors = [
        ("geometric/quarter", geo, 0.25 / math.e, math.exp(-3.0)),
        ("geometric/vacuous", geo, 1.0, 1.0),
        ("factorial", sequences.from_generator(Generator.analytic(1.0), 50), 0.5, 0.0),
    ]
    for cid, seq, c, expected in anchors:
        t0 = time.perf_counter()
        got = bang.flat_zero_envelope(seq, c)
        ctx.add(f"anchor/{cid}", {"seq": _seq_summary(seq), "c": c}, got - expected, "pass" if got == expected else "fail", t0)
    for p in ctx.pairs:
        if p.seq.tail_sum is None:
            continue
        t0 = time.perf_counter()
        env = [bang.flat_zero_envelope(p.seq, float(c)) for c in ENVELOPE_C_GRID]
        if math.isinf(p.seq.tail_sum):
            ok, resid = all(v == 0.0 for v in env), max(env)
        else:
            steps = np.diff(env)
            ok, resid = bool(np.all(steps >= 0)), float(np.min(steps))
        ctx.add(f"{p.label}/monotone", {"seq": _seq_summary(p.seq)}, resid, "pass" if ok else "fail", t0)


def suite_nonextendable(ctx: SuiteContext):
    t0 = time.perf_counter()
    K = funcmodel.NONEXTENDABLE_K
    C = funcmodel.find_nonextendable_constant(K)
    ctx.add("constant", {"K": K}, C, "pass" if C == funcmodel.NONEXTENDABLE_C else "fail", t0)
    for n in range(21):
        for with_tail in (False, True):
            lhs = math.log(funcmodel.coefficient_moment(C, K, n, with_tail))
            resid = funcmodel.regularized_log_majorant(n) - lhs
            tag = "with-tail" if with_tail else "truncated"
            ctx.add(f"moment/n{n:02d}/{tag}", {"C": C, "K": K, "n": n, "tail": with_tail}, resid, "pass" if resid >= 0 else "fail")


SUITES: dict[str, Callable[[SuiteContext], None]] = {
    "theorem-a": suite_theorem_a,
    "theorem-b": suite_theorem_b,
    "lemma-2-1": suite_lemma_2_1,
    "cor-2-3": suite_cor_2_3,
    "cor-5-1-3": suite_cor_5_1_3,
    "one-sided": suite_one_sided,
    "remez-classical": suite_remez_classical,
    "markov": suite_markov,
    "minorant": suite_minorant,
    "omega": suite_omega,
    "cor-5-5-1": suite_cor_5_5_1,
    "envelope": suite_envelope,
    "nonextendable": suite_nonextendable,
}

# one-line anchors shown in the CLI help
SUITE_DESCRIPTIONS = {
    "theorem-a": "zero count bounded by the Bang degree",
    "theorem-b": "Remez-type bound with Gamma(2 n_f)",
    "lemma-2-1": "fundamental inequality for the Bang norm",
    "cor-2-3": "level-crossing sum between two norm levels",
    "cor-5-1-3": "integral form of the level-crossing bound",
    "one-sided": "one-sided norm and non-negativity",
    "remez-classical": "classical polynomial Remez bound",
    "markov": "pointwise Markov bound at the centre",
    "minorant": "log-convex minorant against the support-line oracle",
    "omega": "Omega function: value at 1, monotonicity, closed forms",
    "cor-5-5-1": "propagation of smallness through Omega and alpha",
    "envelope": "flat-zero envelope anchors",
    "nonextendable": "coefficient domination of the non-extendable series",
}

SUITE_NAMES = tuple(SUITES)
