"""Deterministic multi-worker generation by skip-ahead.

Worker ``w`` owns the logical subsequence starting at ``w * work_per_worker``
and jumps there directly, so the logical output never depends on the worker
count. ``Layout.INTERLEAVED`` writes element ``i`` of worker ``w`` to
physical slot ``w + i * workers`` (the coalesced GPU pattern); when
``workers`` does not divide ``n`` the rows past the short last worker use
stride ``workers - 1`` so the buffer stays dense.
"""

import enum
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numba
import numpy as np

from .generator import RECIPROCAL, Method, _kargs, _run, _step, check_seed, jump, seed_residue
from .modred import CONSTANTS


class Layout(enum.Enum):
    CONTIGUOUS = "contiguous"
    INTERLEAVED = "interleaved"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown layout {value!r}; choose contiguous or interleaved") from None


@dataclass(frozen=True)
class PartitionPlan:
    n: int
    workers: int
    work_per_worker: int
    start_offsets: tuple
    layout: Layout
    step: int

    @property
    def counts(self):
        c = self.work_per_worker
        return tuple(min(c, self.n - off) for off in self.start_offsets)

    def segments(self, w):
        """Physical ``(start, stride, count)`` runs for worker ``w``, in logical order."""
        count = self.counts[w]
        if self.layout is Layout.CONTIGUOUS:
            return [(self.start_offsets[w], 1, count)]
        full = self.n // self.work_per_worker
        rem = self.n - full * self.work_per_worker
        if rem == 0:
            return [(w, self.workers, count)]
        runs = [(w, self.workers, min(rem, count))]
        if count > rem:
            runs.append((rem * self.workers + w, full, count - rem))
        return runs

    def physical_indices(self, w):
        return np.concatenate(
            [start + stride * np.arange(count) for start, stride, count in self.segments(w)]
        )


def make_plan(n, workers=1, layout=Layout.CONTIGUOUS):
    """Split ``n`` outputs over ``workers``.

    Each worker gets ``ceil(n / workers)`` elements except the last, which
    gets the remainder. Workers that would be left empty are dropped, so the
    plan's ``workers`` may be smaller than requested.
    """
    n, workers = int(n), int(workers)
    if n < 1:
        raise ValueError("n must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    layout = Layout.parse(layout)
    work = math.ceil(n / min(workers, n))
    workers = math.ceil(n / work)
    offsets = tuple(i * work for i in range(workers))
    step = workers if layout is Layout.INTERLEAVED else 1
    return PartitionPlan(n, workers, work, offsets, layout, step)


@numba.njit(cache=True, nogil=True)
def _run_unrolled(z, count, method, m, q, r, qinv, mu, out, start, stride, as_float):
    pos = start
    body = count - count % 8
    for _ in range(0, body, 8):
        z = _step(z, method, m, q, r, qinv, mu)
        out[pos] = np.float64(z) * RECIPROCAL if as_float else z
        z = _step(z, method, m, q, r, qinv, mu)
        out[pos + stride] = np.float64(z) * RECIPROCAL if as_float else z
        z = _step(z, method, m, q, r, qinv, mu)
        out[pos + 2 * stride] = np.float64(z) * RECIPROCAL if as_float else z
        z = _step(z, method, m, q, r, qinv, mu)
        out[pos + 3 * stride] = np.float64(z) * RECIPROCAL if as_float else z
        z = _step(z, method, m, q, r, qinv, mu)
        out[pos + 4 * stride] = np.float64(z) * RECIPROCAL if as_float else z
        z = _step(z, method, m, q, r, qinv, mu)
        out[pos + 5 * stride] = np.float64(z) * RECIPROCAL if as_float else z
        z = _step(z, method, m, q, r, qinv, mu)
        out[pos + 6 * stride] = np.float64(z) * RECIPROCAL if as_float else z
        z = _step(z, method, m, q, r, qinv, mu)
        out[pos + 7 * stride] = np.float64(z) * RECIPROCAL if as_float else z
        pos += 8 * stride
    return _run(z, count - body, method, m, q, r, qinv, mu, out, pos, stride, as_float)


@numba.njit(cache=True, nogil=True)
def _run_constant(value, count, out, start, stride):
    pos = start
    for _ in range(count):
        out[pos] = value
        pos += stride


@dataclass(frozen=True)
class FillTiming:
    setup_seconds: float
    generate_seconds: float

    @property
    def total_seconds(self):
        return self.setup_seconds + self.generate_seconds


def fill(
    buffer,
    plan,
    seed_index,
    method=Method.BARRETT_MODIFIED,
    constants=CONSTANTS,
    variant="rolled",
    constant=None,
):
    """Fill ``buffer[:plan.n]`` with generator output according to ``plan``.

    A float64 buffer receives unit-interval doubles, a uint64 buffer raw
    residues. Each worker first seeds itself with one skip-ahead (setup),
    then all workers generate concurrently; the two phases are timed
    separately and returned as a :class:`FillTiming`.

    ``constant`` replaces generation by writing that value through the same
    access pattern (the memory-bound baseline).
    """
    seed_index = check_seed(seed_index)
    method = Method.parse(method)
    if len(buffer) < plan.n:
        raise ValueError(f"buffer holds {len(buffer)} elements, plan needs {plan.n}")
    if buffer.dtype == np.float64:
        as_float = True
    elif buffer.dtype == np.uint64:
        as_float = False
    else:
        raise TypeError("buffer must be float64 or uint64")
    if variant not in ("rolled", "unrolled"):
        raise ValueError(f"unknown variant {variant!r}")
    run = _run_unrolled if variant == "unrolled" else _run
    kargs = _kargs(constants)
    z0 = seed_residue(seed_index)

    def setup(w):
        # Kernels step before writing: starting from z_off, the first output is z_{off+1}.
        return jump(z0, plan.start_offsets[w])

    def work(w, z):
        if constant is not None:
            for start, stride, count in plan.segments(w):
                _run_constant(buffer.dtype.type(constant), count, buffer, start, stride)
            return
        z = np.uint64(z)
        for start, stride, count in plan.segments(w):
            z = run(z, count, method.code, *kargs, buffer, start, stride, as_float)

    with ThreadPoolExecutor(max_workers=plan.workers) as pool:
        t0 = time.perf_counter()
        starts = list(pool.map(setup, range(plan.workers)))
        t1 = time.perf_counter()
        list(pool.map(work, range(plan.workers), starts))
        t2 = time.perf_counter()
    return FillTiming(t1 - t0, t2 - t1)


def deinterleave(buffer, plan):
    """Restore logical order from an interleaved buffer."""
    if plan.layout is not Layout.INTERLEAVED:
        raise ValueError("deinterleave needs an interleaved plan")
    buffer = np.asarray(buffer)
    out = np.empty(plan.n, dtype=buffer.dtype)
    for w, offset in enumerate(plan.start_offsets):
        out[offset : offset + plan.counts[w]] = buffer[plan.physical_indices(w)]
    return out


def interleave(values, plan):
    """Inverse of :func:`deinterleave`."""
    if plan.layout is not Layout.INTERLEAVED:
        raise ValueError("interleave needs an interleaved plan")
    values = np.asarray(values)
    out = np.empty(plan.n, dtype=values.dtype)
    for w, offset in enumerate(plan.start_offsets):
        out[plan.physical_indices(w)] = values[offset : offset + plan.counts[w]]
    return out


def generate_parallel(n, seed_index, workers=1, layout=Layout.CONTIGUOUS, method=Method.BARRETT_MODIFIED, kind="float"):
    """Convenience: logical-order output of ``n`` values using ``workers`` threads."""
    plan = make_plan(n, workers, layout)
    buf = np.empty(n, dtype=np.float64 if kind == "float" else np.uint64)
    fill(buf, plan, seed_index, method)
    if plan.layout is Layout.INTERLEAVED:
        buf = deinterleave(buf, plan)
    return buf
