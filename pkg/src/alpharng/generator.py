"""The LCG over the binary expansion of alpha = sum 1/(3**k * 2**(3**k)).

Seeding maps a digit position ``a`` of alpha to the residue
``z0 = 2**(a - 3**33) * floor(3**33 / 2) mod 3**33``; each step multiplies by
``2**53`` modulo ``3**33`` and yields the next 53 binary digits as
``z * 3**-33``.
"""

import enum
import math
from dataclasses import dataclass, replace

import numba
import numpy as np

from .modred import (
    CONSTANTS,
    HALF_MODULUS,
    MODULUS,
    barrett_modified_u64,
    barrett_u64,
    lecuyer_u64,
    ref128_u64,
)

MIN_SEED = MODULUS + 100
MAX_SEED = 2**53
DEFAULT_SEED = MIN_SEED
PERIOD = 2 * 3**32
#: 1/3**33 rounded to double; output is ``z * RECIPROCAL`` (not ``z / m``).
RECIPROCAL = 1.0 / 5559060566555523.0


class Method(enum.Enum):
    """Step kernel used to advance the generator."""

    REF128 = "Ref128"
    LECUYER = "LEcuyer"
    BARRETT = "Barrett"
    BARRETT_MODIFIED = "BarrettModified"

    @property
    def code(self):
        return _METHOD_CODES[self]

    @classmethod
    def parse(cls, value):
        """Accept a Method, its value (``"BarrettModified"``) or name (``"barrett_modified"``)."""
        if isinstance(value, cls):
            return value
        key = str(value).replace("-", "_").lower()
        for method in cls:
            if key in (method.value.lower(), method.name.lower()):
                return method
        raise ValueError(f"unknown method {value!r}; choose from {[m.value for m in cls]}")


_METHOD_CODES = {
    Method.REF128: 0,
    Method.LECUYER: 1,
    Method.BARRETT: 2,
    Method.BARRETT_MODIFIED: 3,
}


def modpow2(e, modulus=MODULUS):
    """2**e mod ``modulus`` by left-to-right square-and-multiply."""
    e = int(e)
    modulus = int(modulus)
    if e < 0:
        raise ValueError("exponent must be non-negative")
    if modulus % 2 == 0 or not 1 < modulus < 2**63:
        raise ValueError(f"modulus must be odd and in (1, 2**63), got {modulus}")
    result = 1
    for bit in bin(e)[2:]:
        result = result * result % modulus
        if bit == "1":
            result = (result << 1) % modulus
    return result


def period(modulus=MODULUS):
    """Order of 2**53 modulo ``modulus = 3**j``, i.e. ``2 * 3**(j-1)``."""
    j = round(math.log(modulus, 3))
    if 3**j != modulus or j < 1:
        raise ValueError("modulus must be a power of three")
    return 2 * 3 ** (j - 1)


def jump(z, k, modulus=MODULUS):
    """Residue reached from ``z`` after ``k`` steps, in O(log k) multiplies."""
    k = int(k) % period(modulus)
    return modpow2(53 * k, modulus) * int(z) % modulus


def check_seed(a):
    a = int(a)
    if not MIN_SEED <= a <= MAX_SEED:
        raise ValueError(f"seed index {a} outside [3**33 + 100, 2**53]")
    return a


@dataclass(frozen=True)
class GeneratorState:
    seed_index: int
    z: int
    k: int = 0
    method: Method = Method.BARRETT_MODIFIED

    def __post_init__(self):
        if not 1 <= self.z < MODULUS or self.z % 3 == 0:
            raise ValueError(f"state residue {self.z} is not a unit modulo 3**33")


def seed_residue(a):
    """z0 for seed index ``a``."""
    a = check_seed(a)
    return modpow2(a - MODULUS) * HALF_MODULUS % MODULUS


def seed_from_index(a, method=Method.BARRETT_MODIFIED):
    return GeneratorState(check_seed(a), seed_residue(a), 0, Method.parse(method))


def state_at(a, k, method=Method.BARRETT_MODIFIED):
    """State after ``k`` steps from seed ``a``; ``k`` is reduced mod the period first."""
    k = int(k)
    if k < 0:
        raise ValueError("k must be non-negative")
    return GeneratorState(check_seed(a), jump(seed_residue(a), k), k, Method.parse(method))


def next_state(state, constants=CONSTANTS):
    """Advance one step. Returns ``(z_next, new_state)``."""
    z = int(_step(np.uint64(state.z), state.method.code, *_kargs(constants)))
    return z, replace(state, z=z, k=state.k + 1)


def to_unit_interval(z):
    """Map a residue in [1, m) to a double strictly inside (0, 1)."""
    z = int(z)
    if not 1 <= z < MODULUS:
        raise ValueError(f"residue {z} outside [1, 3**33)")
    return z * RECIPROCAL


# ---------------------------------------------------------------------------
# bulk generation


def _kargs(c):
    return c.m, c.q, c.r, c.qinv, c.mu


@numba.njit(cache=True, nogil=True, inline="always")
def _step(z, method, m, q, r, qinv, mu):
    if method == 0:
        return ref128_u64(z, np.uint64(m), np.uint64(53))
    elif method == 1:
        return lecuyer_u64(z, m, q, r, qinv, False)
    elif method == 2:
        return barrett_u64(z, np.uint64(m), np.uint64(mu))
    return barrett_modified_u64(z, np.uint64(m), np.uint64(mu))


@numba.njit(cache=True, nogil=True)
def _run(z, count, method, m, q, r, qinv, mu, out, start, stride, as_float):
    # Steps ``count`` times from z, writing out[start + i*stride]; returns last z.
    pos = start
    for _ in range(count):
        z = _step(z, method, m, q, r, qinv, mu)
        if as_float:
            out[pos] = np.float64(z) * RECIPROCAL
        else:
            out[pos] = z
        pos += stride
    return z


def generate(z, n, method=Method.BARRETT_MODIFIED, out=None, kind="float", constants=CONSTANTS):
    """Generate ``n`` outputs following residue ``z``.

    ``kind="float"`` yields doubles in (0, 1); ``kind="residue"`` yields the
    raw uint64 residues. Returns ``(array, last_z)``.
    """
    method = Method.parse(method)
    as_float = kind == "float"
    if out is None:
        out = np.empty(n, dtype=np.float64 if as_float else np.uint64)
    last = _run(np.uint64(z), n, method.code, *_kargs(constants), out, 0, 1, as_float)
    return out, int(last)


class Generator:
    """Stateful convenience wrapper around :class:`GeneratorState`.

    >>> g = Generator(seed_index=3**33 + 100)
    >>> g.integers(1)[0]
    2138759898642167
    """

    def __init__(self, seed_index=DEFAULT_SEED, method=Method.BARRETT_MODIFIED):
        self.state = seed_from_index(seed_index, method)

    def random(self, n):
        out, z = generate(self.state.z, n, self.state.method)
        self.state = replace(self.state, z=z, k=self.state.k + n)
        return out

    def integers(self, n):
        """Raw residues in [1, 3**33) as uint64."""
        out, z = generate(self.state.z, n, self.state.method, kind="residue")
        self.state = replace(self.state, z=z, k=self.state.k + n)
        return out

    def skip(self, k):
        self.state = replace(self.state, z=jump(self.state.z, k), k=self.state.k + int(k))
        return self

    def __repr__(self):
        s = self.state
        return f"Generator(seed_index={s.seed_index}, k={s.k}, method={s.method.value})"
