"""Modular reduction kernels for ``z -> 2**53 * z mod 3**33``.

Every kernel works in 64-bit machine integers (numba ``uint64``/``int64``)
and reproduces the masks and shifts of the original C macros bit for bit.
``reduce_ref`` is the exact big-integer reference the others are checked
against.

The public functions take and return plain Python ints. The ``*_u64``
functions are the jitted scalar kernels; the generation loops in
:mod:`alpharng.generator` and :mod:`alpharng.parallel` inline them.
"""

from dataclasses import dataclass

import numba
import numpy as np

MODULUS = 3**33  # 5559060566555523
HALF_MODULUS = MODULUS // 2  # 2779530283277761
TWO53 = 2**53
MASK64 = 2**64 - 1

_U32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)


@dataclass(frozen=True)
class ReductionConstants:
    """Precomputed constants for reducing modulo ``m = 3**33``.

    ``a_red``, ``q`` and ``r`` drive the two-stage L'Ecuyer split
    (``m = a_red*q + r``); ``mu = floor(2**106 / m)`` drives both Barrett
    variants.
    """

    m: int = MODULUS
    a_red: int = 2**25
    q: int = MODULUS // 2**25
    r: int = MODULUS % 2**25
    qinv: float = 1.0 / (MODULUS // 2**25)
    mu: int = 0x33D9481681D79D
    k_bits: int = 53

    def check(self):
        """Raise ``ValueError`` if the constants are inconsistent."""
        if self.a_red * self.q + self.r != self.m or not 0 <= self.r < self.a_red:
            raise ValueError("m != a_red*q + r")
        if 4 * self.a_red**2 >= self.m:
            raise ValueError("L'Ecuyer bound 4*a_red**2 < m violated")
        if not self.m < 2**self.k_bits < 2 * self.m:
            raise ValueError("need m < 2**k_bits < 2*m")
        if self.mu != 2 ** (2 * self.k_bits) // self.m:
            raise ValueError(f"mu={self.mu:#x} is not floor(2**{2 * self.k_bits}/m)")


CONSTANTS = ReductionConstants()


def compute_mu(m=MODULUS, k_bits=53):
    """floor(2**(2k) / m) by restoring long division, one quotient bit at a time."""
    quotient = 0
    remainder = 0
    numerator = 1 << (2 * k_bits)
    for bit in range(2 * k_bits, -1, -1):
        remainder = (remainder << 1) | ((numerator >> bit) & 1)
        quotient <<= 1
        if remainder >= m:
            remainder -= m
            quotient |= 1
    return quotient


# ---------------------------------------------------------------------------
# jitted scalar kernels


@numba.njit("uint64(uint64, uint64)", cache=True, nogil=True)
def mulhi_u64(a, b):
    a_lo = a & _U32
    a_hi = a >> _S32
    b_lo = b & _U32
    b_hi = b >> _S32
    ll = a_lo * b_lo
    lh = a_lo * b_hi
    hl = a_hi * b_lo
    hh = a_hi * b_hi
    mid = (ll >> _S32) + (lh & _U32) + (hl & _U32)
    return hh + (lh >> _S32) + (hl >> _S32) + (mid >> _S32)


@numba.njit("uint64(uint64, uint64, uint64)", cache=True, nogil=True)
def ref128_u64(z, m, shift):
    # Exact (2**shift * z) mod m from the full 128-bit product, m < 2**55.
    p = np.uint64(1) << shift
    hi = mulhi_u64(z, p)
    lo = z * p
    rem = hi % m
    for i in range(8):
        byte = (lo >> np.uint64(56 - 8 * i)) & np.uint64(0xFF)
        rem = ((rem << np.uint64(8)) | byte) % m
    return rem


@numba.njit("int64(int64, int64, int64, int64, float64, boolean)", cache=True, nogil=True)
def _lecuyer_stage(s, m, q, r, qinv, fast):
    if fast:
        t = np.int64(np.float64(s) * qinv)
    else:
        t = s // q
    s = ((s - t * q) << np.int64(25)) - t * r
    if s < 0:
        s += m
    return s


@numba.njit("uint64(uint64, int64, int64, int64, float64, boolean)", cache=True, nogil=True)
def lecuyer_u64(z, m, q, r, qinv, fast):
    s = np.int64(z) << np.int64(2)
    s = _lecuyer_stage(s, m, q, r, qinv, fast)
    s = _lecuyer_stage(s << np.int64(1), m, q, r, qinv, fast)
    return np.uint64(s)


@numba.njit("uint64(uint64, uint64, uint64)", cache=True, nogil=True)
def barrett_u64(z, m, mu):
    t53 = np.uint64(1) << np.uint64(53)
    mask54 = np.uint64(0x3FFFFFFFFFFFFF)
    xlo = t53 * z
    xhi = mulhi_u64(t53, z)
    q1 = (xhi << np.uint64(12)) | (xlo >> np.uint64(52))
    qhi = mulhi_u64(q1, mu)
    qlo = q1 * mu
    q3 = (qhi << np.uint64(10)) | (qlo >> np.uint64(54))
    r1 = xlo & mask54
    r2 = (q3 * m) & mask54
    r = r1 - r2
    if r1 < r2:
        r += np.uint64(0x40000000000000)
    while r >= m:
        r -= m
    return r


@numba.njit("uint64(uint64, uint64, uint64)", cache=True, nogil=True)
def barrett_modified_u64(z, m, mu):
    qhi = mulhi_u64(z, mu)
    lo = z * mu
    r2 = (((qhi << np.uint64(11)) | (lo >> np.uint64(53))) * m) & np.uint64(0x1FFFFFFFFFFFFF)
    r = np.uint64(0x20000000000000) - r2
    if r >= m:
        r -= m
    return r


# ---------------------------------------------------------------------------
# checked Python-facing wrappers


def _check_residue(z, m, allow_zero=True):
    z = int(z)
    lo = 0 if allow_zero else 1
    if not lo <= z < m:
        raise ValueError(f"residue {z} outside [{lo}, {m})")
    return z


def wide_mul_hi(a, b):
    """High 64 bits of the 128-bit product of two unsigned 64-bit ints."""
    a, b = int(a), int(b)
    if not (0 <= a <= MASK64 and 0 <= b <= MASK64):
        raise ValueError("operands must be unsigned 64-bit")
    return int(mulhi_u64(np.uint64(a), np.uint64(b)))


def reduce_ref(z, m=MODULUS):
    """Exact ``2**53 * z mod m`` through an arbitrary-precision product."""
    z = _check_residue(z, m)
    return (z << 53) % m


def lecuyer_step(z, c=CONSTANTS, fast_quotient=False):
    """Two-stage L'Ecuyer reduction ``2**25 * 2 * (2**25 * 4z mod m) mod m``.

    The quotient ``z // q`` is an exact integer division unless
    ``fast_quotient`` is set, in which case it is ``int(z * (1/q))`` in
    double precision.
    """
    z = _check_residue(z, c.m)
    return int(lecuyer_u64(np.uint64(z), c.m, c.q, c.r, c.qinv, fast_quotient))


def barrett_step(z, c=CONSTANTS):
    """Classic Barrett reduction of ``x = 2**53 * z`` with shifts k-1=52, k+1=54."""
    z = _check_residue(z, c.m)
    return int(barrett_u64(np.uint64(z), np.uint64(c.m), np.uint64(c.mu)))


def barrett_modified_step(z, c=CONSTANTS):
    """Barrett reduction with the shifts folded to k=53.

    Only valid on ``[1, m)``: for ``z = 0`` the formula yields
    ``2**53 - m``, so zero is rejected.
    """
    z = _check_residue(z, c.m, allow_zero=False)
    return int(barrett_modified_u64(np.uint64(z), np.uint64(c.m), np.uint64(c.mu)))


# ---------------------------------------------------------------------------
# array sweeps, used by the equivalence checks


@numba.njit(cache=True, nogil=True)
def _sweep(z, out, kind, m, q, r, qinv, mu):
    mm = np.uint64(m)
    mmu = np.uint64(mu)
    for i in range(z.shape[0]):
        x = z[i]
        if kind == 0:
            out[i] = ref128_u64(x, mm, np.uint64(53))
        elif kind == 1:
            out[i] = lecuyer_u64(x, m, q, r, qinv, False)
        elif kind == 2:
            out[i] = lecuyer_u64(x, m, q, r, qinv, True)
        elif kind == 3:
            out[i] = barrett_u64(x, mm, mmu)
        else:
            out[i] = barrett_modified_u64(x, mm, mmu)
    return out


_KERNEL_CODES = {
    "ref128": 0,
    "lecuyer": 1,
    "lecuyer_fast": 2,
    "barrett": 3,
    "barrett_modified": 4,
}


def apply_kernel(name, z, c=CONSTANTS):
    """Apply one kernel elementwise to a uint64 array of residues.

    ``name`` is one of ``ref128``, ``lecuyer``, ``lecuyer_fast``, ``barrett``,
    ``barrett_modified``. No range checks are made; callers pass residues.
    """
    z = np.ascontiguousarray(z, dtype=np.uint64)
    out = np.empty_like(z)
    return _sweep(z, out, _KERNEL_CODES[name], c.m, c.q, c.r, c.qinv, c.mu)


def reduce_ref_array(z, m=MODULUS):
    """Exact reference over an array, via Python integers."""
    exact = (np.asarray(z, dtype=np.uint64).astype(object) << 53) % m
    return exact.astype(np.uint64)
