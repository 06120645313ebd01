"""Command line interface: ``alpharng gen|bench|selftest|seed-info``."""

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import bench as bench_mod
from .generator import DEFAULT_SEED, MAX_SEED, MODULUS, RECIPROCAL, Method, check_seed, seed_residue
from .modred import CONSTANTS
from .parallel import Layout, deinterleave, fill, make_plan
from .selftest import run_selftest

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
FORMATS = ("raw-f64", "raw-u64", "text")


class UsageError(Exception):
    pass


def default_workers():
    env = os.environ.get("BCN_THREADS")
    if env:
        try:
            workers = int(env)
        except ValueError:
            raise UsageError(f"BCN_THREADS={env!r} is not an integer") from None
        if workers < 1:
            raise UsageError("BCN_THREADS must be >= 1")
        return workers
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _seed(text):
    try:
        return check_seed(int(text, 0))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _method(text):
    try:
        return Method.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _methods(text):
    return [_method(part) for part in text.split(",") if part]


def render(values, fmt):
    if fmt == "raw-f64":
        return values.astype("<f8").tobytes()
    if fmt == "raw-u64":
        return values.astype("<u8").tobytes()
    return "".join(f"{x:.17g}\n" for x in values).encode()


def cmd_gen(args):
    workers = args.workers or default_workers()
    plan = make_plan(args.n, workers, args.layout)
    dtype = np.uint64 if args.format == "raw-u64" else np.float64
    buf = np.empty(plan.n, dtype=dtype)
    fill(buf, plan, args.seed, args.method, variant=args.variant)
    if plan.layout is Layout.INTERLEAVED and not args.keep_physical:
        buf = deinterleave(buf, plan)
    payload = render(buf, args.format)
    if args.out is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
        return EXIT_OK
    try:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    except OSError as exc:
        try:
            os.remove(args.out)
        except OSError:
            pass
        print(f"alpharng: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_bench(args):
    try:
        rows = bench_mod.run_bench(
            args.n,
            methods=args.methods,
            workers=args.workers or default_workers(),
            layout=args.layout,
            repeats=args.repeats,
            variant=args.variant,
            seed_index=args.seed,
        )
    except bench_mod.BenchTooShort as exc:
        raise UsageError(str(exc)) from None
    print(bench_mod.format_reports(rows, csv=args.csv))
    return EXIT_OK


def cmd_selftest(args):
    constants = CONSTANTS if args.mu is None else dataclasses.replace(CONSTANTS, mu=int(args.mu, 0))
    results = run_selftest(fast=args.fast, constants=constants)
    width = max(len(name) for name, _, _ in results)
    for name, ok, detail in results:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    failed = [name for name, ok, _ in results if not ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_seed_info(args):
    a = args.seed
    z0 = seed_residue(a)
    print(f"seed_index  {a}")
    print(f"z0          {z0}")
    print(f"unit value  {z0 * RECIPROCAL:.17g}")
    print(f"a - 3**33   {a - MODULUS}")
    print(f"2**53 - a   {MAX_SEED - a}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="alpharng", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        if seed:
            p.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="starting digit index a")
        p.add_argument("--workers", type=_positive_int, default=None,
                       help="worker threads (default: $BCN_THREADS or CPU count)")
        p.add_argument("--layout", type=Layout.parse, default=Layout.CONTIGUOUS,
                       help="contiguous or interleaved")
        p.add_argument("--variant", choices=("rolled", "unrolled"), default="rolled")

    gen = sub.add_parser("gen", help="write generated variates")
    gen.add_argument("--n", type=_positive_int, required=True)
    gen.add_argument("--method", type=_method, default=Method.BARRETT_MODIFIED)
    gen.add_argument("--format", choices=FORMATS, default="text")
    gen.add_argument("--out", default=None, help="output file (default stdout)")
    gen.add_argument("--keep-physical", action="store_true",
                     help="write interleaved output in physical order")
    common(gen)
    gen.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="measure generation throughput")
    b.add_argument("--n", type=_positive_int, default=2 * 10**7)
    b.add_argument("--methods", type=_methods, default=list(Method),
                   help="comma separated, e.g. Ref128,BarrettModified")
    b.add_argument("--repeats", type=_positive_int, default=5)
    b.add_argument("--csv", action="store_true")
    common(b)
    b.set_defaults(func=cmd_bench)

    st = sub.add_parser("selftest", help="run built-in consistency checks")
    st.add_argument("--fast", action="store_true", help="reduced sizes")
    st.add_argument("--mu", default=None, help=argparse.SUPPRESS)  # fault injection
    st.set_defaults(func=cmd_selftest)

    si = sub.add_parser("seed-info", help="show the seed residue for index a")
    si.add_argument("seed", type=_seed)
    si.set_defaults(func=cmd_seed_info)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"alpharng: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
