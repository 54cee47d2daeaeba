"""Run the selected suites for a configuration."""
from __future__ import annotations

import time

from .. import __version__, funcmodel, sequences
from .config import ExperimentConfig
from .report import VerificationReport, config_digest
from .suites import SUITES, BuiltinPair, SuiteContext, builtin_pairs


class SuiteRuntimeError(Exception):
    """A suite raised; ``suite`` and ``after`` locate the failing check."""

    def __init__(self, suite: str, after: str | None, cause: Exception):
        where = f"suite {suite!r}" + (f" after check {after!r}" if after else " at its first check")
        super().__init__(f"{where}: {type(cause).__name__}: {cause}")
        self.suite = suite
        self.after = after


def config_sequence(config: ExperimentConfig) -> sequences.LogConvexSequence:
    """M_0..M_J from the config generator, capped at a tabulated range."""
    count = config.J + 1
    table = config.generator.table_length
    if table is not None:
        count = min(count, table + 1)
    return sequences.from_generator(config.generator, count)


def _extra_pairs(config: ExperimentConfig, ctx: SuiteContext) -> list[BuiltinPair]:
    if not config.functions:
        return []
    seq = config_sequence(config)
    out = []
    ctx.current = "membership"
    for i, f in enumerate(config.functions):
        pair = BuiltinPair(f"extra{i}", f, config.generator, seq)
        t0 = time.perf_counter()
        fit = funcmodel.fits_class(f, seq, config.spacing)
        inputs = {"f": f.to_dict(), "gen": config.generator.to_dict(), "J": config.J}
        ctx.add(pair.label, inputs, -fit.residual, "pass" if fit.fits else "fail", t0)
        if fit.fits:
            out.append(pair)
    return out


def run_suite(config: ExperimentConfig, timing: bool = False) -> VerificationReport:
    """Execute every selected suite; records come back sorted."""
    ctx = SuiteContext(
        seed=config.seed,
        spacing=config.spacing,
        variant=config.variant,
        pairs=(),
        generator=config.generator,
        interval_sets=config.interval_sets,
        random_sets=dict(config.random_sets),
        random_polynomials=config.random_polynomials,
        random_sequences=config.random_sequences,
        propagation_sets=config.propagation_sets,
        tolerances=dict(config.tolerances),
    )
    extras = _extra_pairs(config, ctx)
    ctx.pairs = builtin_pairs() + tuple(extras)
    for name in config.suites:
        ctx.current = name
        before = len(ctx.records)
        try:
            SUITES[name](ctx)
        except Exception as exc:
            last = ctx.records[-1].check_id if len(ctx.records) > before else None
            raise SuiteRuntimeError(name, last, exc) from exc
    return VerificationReport(
        ctx.records,
        seed=config.seed,
        version=__version__,
        config_digest=config_digest(config.raw),
        variant=config.variant,
        timing=timing,
    )
