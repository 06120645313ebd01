"""End-to-end consistency checks, run by ``alpharng selftest``."""

from fractions import Fraction

import numpy as np

from . import oracle, quality
from .generator import MIN_SEED, MODULUS, Method, generate, jump, seed_residue
from .modred import CONSTANTS, apply_kernel, compute_mu, reduce_ref_array
from .parallel import Layout, deinterleave, fill, make_plan

GOLDEN_STEP = 2**53 - MODULUS


def _kernel_equivalence(c, exhaustive, random_count):
    z = np.arange(1, exhaustive, dtype=np.uint64)
    rng = np.random.default_rng(20130101)
    z = np.concatenate([z, rng.integers(1, MODULUS, random_count, dtype=np.uint64)])
    ref = reduce_ref_array(z)
    bad = {k: int((apply_kernel(k, z, c) != ref).sum()) for k in ("lecuyer", "lecuyer_fast", "barrett", "barrett_modified")}
    ok = not any(bad.values())
    return ok, f"{z.size} points, mismatches {bad}"


def _golden_step(c):
    one = np.array([1], dtype=np.uint64)
    got = {k: int(apply_kernel(k, one, c)[0]) for k in ("ref128", "lecuyer", "barrett", "barrett_modified")}
    return all(v == GOLDEN_STEP for v in got.values()), f"z=1 -> {got}"


def _mu_constant(c):
    mu = compute_mu(c.m, c.k_bits)
    return mu == c.mu == 0x33D9481681D79D, f"recomputed {mu:#x}, in use {c.mu:#x}"


def _skip_ahead(c, span, count):
    z0 = seed_residue(MIN_SEED)
    seq, _ = generate(z0, span, Method.BARRETT_MODIFIED, kind="residue", constants=c)
    ks = np.random.default_rng(7).integers(1, span + 1, count)
    bad = [int(k) for k in ks if jump(z0, k) != int(seq[k - 1])]
    small = 3**7
    z, y = 1, 1
    for _ in range(2 * 3**6):
        y = (y << 53) % small
    cycle_ok = y == z and jump(z, 2 * 3**6, small) == z
    return not bad and cycle_ok, f"{count} jumps <= {span}, bad={bad[:3]}, 3**7 cycle ok={cycle_ok}"


def _period_law(max_j):
    got = {j: oracle.multiplicative_order(53, j) for j in range(2, max_j + 1)}
    return all(t == 2 * 3 ** (j - 1) for j, t in got.items()), f"orders for j=2..{max_j}"


def _alpha_consistency():
    worst = 0.0
    for a in (MIN_SEED, MODULUS + 10**6, 2**53):
        frac = oracle.alpha_fraction(a, 33).as_fraction()
        worst = max(worst, abs(float(frac - Fraction(seed_residue(a), MODULUS))))
    return worst < 1e-25, f"max |alpha - z0/3**33| = {worst:.3g}"


def _worker_invariance(c, n):
    ref = None
    for workers in (1, 2, 3, 8, 16):
        for layout in Layout:
            plan = make_plan(n, workers, layout)
            buf = np.empty(n)
            fill(buf, plan, MIN_SEED, Method.BARRETT_MODIFIED, constants=c)
            if layout is Layout.INTERLEAVED:
                buf = deinterleave(buf, plan)
            if ref is None:
                ref = buf
            elif buf.tobytes() != ref.tobytes():
                return False, f"workers={workers} {layout.value} differs"
    return True, f"n={n}, workers 1/2/3/8/16, both layouts"


def _quality(c, n):
    z0 = seed_residue(MIN_SEED)
    u, _ = generate(z0, n, constants=c)
    r, _ = generate(z0, n, kind="residue", constants=c)
    reports = quality.run_suite(u, r)
    return all(rep.passed for rep in reports), "; ".join(
        f"{rep.name}={rep.statistic:.4g}" for rep in reports
    )


def run_selftest(fast=False, constants=CONSTANTS):
    """Return a list of ``(name, passed, detail)``."""
    c = constants
    checks = [
        ("modred.mu_constant", lambda: _mu_constant(c)),
        ("modred.golden_step", lambda: _golden_step(c)),
        ("modred.equivalence", lambda: _kernel_equivalence(c, 10**4 if fast else 10**5, 10**5 if fast else 10**6)),
        ("generator.skip_ahead", lambda: _skip_ahead(c, 10**5 if fast else 10**6, 100)),
        ("oracle.period_law", lambda: _period_law(10 if fast else 13)),
        ("oracle.alpha_consistency", _alpha_consistency),
        ("parallel.worker_invariance", lambda: _worker_invariance(c, 10**5 if fast else 10**6)),
        ("quality.suite", lambda: _quality(c, 10**6)),
    ]
    results = []
    for name, check in checks:
        try:
            ok, detail = check()
        except Exception as exc:  # a crashing check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
