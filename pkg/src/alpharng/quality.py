"""Statistical smoke tests for generator output.

These are quick sanity batteries, not a substitute for TestU01; pipe
``alpharng gen --format raw-u64`` into an external suite for that. Every
test uses a two-sided or absolute +/-4.5 sigma normal band.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .generator import RECIPROCAL

SIGMAS = 4.5
MIN_SAMPLES = 100_000


@dataclass(frozen=True)
class QualityReport:
    name: str
    statistic: float
    dof: int
    passed: bool
    threshold: str
    details: dict = field(default_factory=dict, compare=False, repr=False)

    def to_kv(self):
        return f"name={self.name} statistic={self.statistic!r} dof={self.dof} pass={str(self.passed).lower()}"


def format_table(reports):
    rows = [f"{'test':<22} {'statistic':>14} {'dof':>8}  result  threshold"]
    for rep in reports:
        verdict = "PASS" if rep.passed else "FAIL"
        rows.append(f"{rep.name:<22} {rep.statistic:>14.6g} {rep.dof:>8}  {verdict:<6}  {rep.threshold}")
    return "\n".join(rows)


def format_kv(reports):
    return "\n".join(rep.to_kv() for rep in reports)


def chi_square_uniformity(samples, bins=1000):
    samples = np.asarray(samples, dtype=np.float64)
    if bins < 2:
        raise ValueError("need at least 2 bins")
    n = samples.size
    expected = n / bins
    if expected < 20:
        raise ValueError(f"expected count per bin {expected:.1f} < 20")
    idx = np.clip((samples * bins).astype(np.int64), 0, bins - 1)
    observed = np.bincount(idx, minlength=bins)
    stat = float(((observed - expected) ** 2).sum() / expected)
    dof = bins - 1
    half_width = SIGMAS * math.sqrt(2 * dof)
    return QualityReport(
        "chi_square_uniformity",
        stat,
        dof,
        abs(stat - dof) <= half_width,
        f"|X2 - {dof}| <= {half_width:.1f}",
    )


def monobit_mantissa(residues, tracked_bits=48):
    """One-frequency of each of the top ``tracked_bits`` bits of the 53-bit output word.

    The word is ``floor(u * 2**53)`` for the unit-interval value ``u`` of each
    residue. The statistic is the worst per-bit z-score ``|f - 1/2| * 2 sqrt(N)``.
    """
    residues = np.asarray(residues, dtype=np.uint64)
    n = residues.size
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} residues, got {n}")
    words = np.floor(residues.astype(np.float64) * RECIPROCAL * 2.0**53).astype(np.uint64)
    freqs = np.empty(tracked_bits)
    for i in range(tracked_bits):
        bit = np.uint64(52 - i)
        freqs[i] = np.count_nonzero((words >> bit) & np.uint64(1)) / n
    scores = np.abs(freqs - 0.5) * 2 * math.sqrt(n)
    worst = int(np.argmax(scores))
    return QualityReport(
        "monobit_mantissa",
        float(scores[worst]),
        tracked_bits,
        bool(scores[worst] <= SIGMAS),
        f"max |f - 0.5| <= {SIGMAS}/(2 sqrt N) over {tracked_bits} bits",
        {"frequencies": freqs, "worst_bit": 52 - worst},
    )


def serial_correlation(samples, lag=1):
    samples = np.asarray(samples, dtype=np.float64)
    n = samples.size
    if n < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples, got {n}")
    x, y = samples[:-lag], samples[lag:]
    dx, dy = x - x.mean(), y - y.mean()
    denom = math.sqrt(float((dx * dx).sum()) * float((dy * dy).sum()))
    # A constant sequence is fully determined by its predecessor.
    rho = float((dx * dy).sum()) / denom if denom > 0 else 1.0
    bound = SIGMAS / math.sqrt(n)
    return QualityReport(
        f"serial_correlation_lag{lag}",
        rho,
        n - lag,
        abs(rho) <= bound,
        f"|rho| <= {bound:.2e}",
    )


def run_suite(samples, residues, bins=1000):
    return [
        chi_square_uniformity(samples, bins),
        monobit_mantissa(residues),
        serial_correlation(samples),
    ]
