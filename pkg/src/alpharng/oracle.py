"""Ground truth independent of the step kernels.

``alpha_fraction`` evaluates the fractional part of ``2**n * alpha`` straight
from the series with exact rationals, and ``multiplicative_order`` finds the
cycle length of ``2**53`` modulo a small power of three by brute force.
"""

from dataclasses import dataclass
from fractions import Fraction

from .generator import modpow2


@dataclass(frozen=True)
class AlphaFraction:
    """``numerator / 3**denominator_power``, an exact value in [0, 1)."""

    numerator: int
    denominator_power: int

    @property
    def denominator(self):
        return 3**self.denominator_power

    def as_fraction(self):
        return Fraction(self.numerator, self.denominator)

    def __float__(self):
        return self.numerator / self.denominator


def alpha_fraction(n, terms):
    """Fractional part of ``2**n * sum_{k<=terms} 1 / (3**k * 2**(3**k))``.

    Term ``k`` contributes ``(2**(n - 3**k) mod 3**k) / 3**k``; the sum is
    brought over the common denominator ``3**terms``. Requires every term to
    have a positive power of two, i.e. ``n > 3**terms``.
    """
    n, terms = int(n), int(terms)
    if terms < 1:
        raise ValueError("terms must be positive")
    if n <= 3**terms:
        raise ValueError(f"n={n} must exceed 3**{terms}")
    denom = 3**terms
    num = 0
    for k in range(1, terms + 1):
        num += modpow2(n - 3**k, 3**k) * 3 ** (terms - k)
    return AlphaFraction(num % denom, terms)


def multiplicative_order(base_exponent=53, modulus_power=2):
    """Least ``t > 0`` with ``(2**base_exponent)**t == 1 mod 3**modulus_power``, by iteration."""
    j = int(modulus_power)
    if not 2 <= j <= 13:
        raise ValueError("modulus_power must be in [2, 13]")
    modulus = 3**j
    g = pow(2, int(base_exponent), modulus)
    if g % 3 == 0:
        raise ValueError("base is not a unit")
    x, t = g, 1
    while x != 1:
        x = x * g % modulus
        t += 1
    return t


def near_power_of_three(a, margin=200):
    """True if ``a`` lies within ``margin`` of some power of three."""
    p = 1
    while p <= a + margin:
        if abs(a - p) <= margin:
            return True
        p *= 3
    return False


def stream_window(a, width=53):
    """``width`` binary digits of alpha after position ``a``, from the series alone."""
    frac = alpha_fraction(a, 33)
    return (frac.numerator << width) // frac.denominator
