"""Throughput harness: per-method fill timings plus a constant-write baseline."""

import statistics
from dataclasses import dataclass

import numpy as np

from .generator import DEFAULT_SEED, Method
from .parallel import Layout, fill, make_plan

CONSTANT = "Constant"
MIN_RUN_SECONDS = 0.05


class BenchTooShort(ValueError):
    pass


@dataclass(frozen=True)
class BenchReport:
    method: str
    elements: int
    seconds: float
    seconds_with_setup: float
    workers: int
    layout: str
    variant: str = "rolled"

    @property
    def rate(self):
        """Giga-numbers per second, generation only."""
        return self.elements / self.seconds / 1e9

    @property
    def rate_with_setup(self):
        return self.elements / self.seconds_with_setup / 1e9


def run_bench(
    n,
    methods=tuple(Method),
    workers=1,
    layout=Layout.CONTIGUOUS,
    repeats=5,
    variant="rolled",
    seed_index=DEFAULT_SEED,
    min_seconds=None,
):
    """Time ``repeats`` fills per method and report medians.

    A ``Constant`` row is always appended. Raises :class:`BenchTooShort` if
    any generator method's median run is under ``min_seconds``.
    """
    if min_seconds is None:
        min_seconds = MIN_RUN_SECONDS
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    plan = make_plan(n, workers, layout)
    buf = np.empty(plan.n, dtype=np.float64)
    rows = []
    for method in [Method.parse(m) for m in methods] + [CONSTANT]:
        is_const = method == CONSTANT
        # warm-up compiles and faults in the buffer pages
        fill(buf[: plan.workers], make_plan(plan.workers, plan.workers, layout), seed_index,
             Method.BARRETT_MODIFIED if is_const else method, variant=variant,
             constant=0.5 if is_const else None)
        timings = [
            fill(buf, plan, seed_index, Method.BARRETT_MODIFIED if is_const else method,
                 variant=variant, constant=0.5 if is_const else None)
            for _ in range(repeats)
        ]
        gen = statistics.median(t.generate_seconds for t in timings)
        total = statistics.median(t.total_seconds for t in timings)
        name = CONSTANT if is_const else method.value
        if not is_const and gen < min_seconds:
            raise BenchTooShort(
                f"{name}: median run {gen * 1e3:.1f} ms < {min_seconds * 1e3:.0f} ms; increase --n"
            )
        rows.append(BenchReport(name, plan.n, gen, max(total, gen), plan.workers, plan.layout.value, variant))
    return rows


def format_reports(rows, csv=False):
    header = ["method", "elements", "seconds", "GNum/s", "seconds_incl_setup", "GNum/s_incl_setup", "workers", "layout", "variant"]
    lines = []
    if csv:
        lines.append(",".join(header))
        for r in rows:
            lines.append(f"{r.method},{r.elements},{r.seconds:.6f},{r.rate:.6f},{r.seconds_with_setup:.6f},"
                         f"{r.rate_with_setup:.6f},{r.workers},{r.layout},{r.variant}")
        return "\n".join(lines)
    lines.append(f"{'method':<16} {'elements':>11} {'exec GNum/s':>12} {'incl setup':>11} {'seconds':>9}  workers layout")
    for r in rows:
        lines.append(f"{r.method:<16} {r.elements:>11} {r.rate:>12.4f} {r.rate_with_setup:>11.4f} "
                     f"{r.seconds:>9.4f}  {r.workers:>7} {r.layout}")
    return "\n".join(lines)
