from fractions import Fraction

import pytest

from alpharng.generator import MIN_SEED, MODULUS, generate, seed_residue
from alpharng.oracle import (
    AlphaFraction,
    alpha_fraction,
    multiplicative_order,
    near_power_of_three,
    stream_window,
)


def _alpha_direct(n, terms):
    """Fractional part of 2**n * sum_{k<=terms} 3**-k 2**-(3**k), by plain rationals."""
    total = sum(Fraction(2 ** (n - 3**k), 3**k) for k in range(1, terms + 1))
    return total - (total.numerator // total.denominator)


def test_single_term():
    assert alpha_fraction(4, 1) == AlphaFraction(2, 1)
    assert alpha_fraction(4, 1).as_fraction() == Fraction(2, 3)


@pytest.mark.parametrize("n, terms", [(28, 3), (30, 3), (100, 4), (250, 5)])
def test_small_cases_against_direct_rationals(n, terms):
    assert alpha_fraction(n, terms).as_fraction() == _alpha_direct(n, terms)


def test_known_small_value():
    # 2**27/3 + 2**19/9 + 2/27 has fractional part 26/27
    assert alpha_fraction(28, 3).as_fraction() == Fraction(26, 27)


def test_rejects_short_index():
    with pytest.raises(ValueError):
        alpha_fraction(27, 3)
    with pytest.raises(ValueError):
        alpha_fraction(100, 0)


@pytest.mark.parametrize("a", [MIN_SEED, MODULUS + 10**6, 2**53, 7 * 10**15])
def test_seed_matches_series(a):
    assert not near_power_of_three(a, margin=99)
    frac = alpha_fraction(a, 33)
    diff = abs(frac.as_fraction() - Fraction(seed_residue(a), MODULUS))
    assert diff < Fraction(1, 10**25)
    assert abs(float(frac) - seed_residue(a) / MODULUS) < 1e-15


def test_windows_are_one_step_apart():
    a = MIN_SEED + 1000
    z1 = int(generate(seed_residue(a), 1, kind="residue")[0][0])
    assert stream_window(a + 53) == (z1 << 53) // MODULUS
    # overlapping digit strings: low 53-10 bits of window(a) are the top of window(a+10)
    assert stream_window(a) % 2**43 == stream_window(a + 10) >> 10


@pytest.mark.parametrize("j, expected", [(2, 6), (5, 162), (10, 39366)])
def test_order_examples(j, expected):
    assert multiplicative_order(53, j) == expected


@pytest.mark.parametrize("j", [1, 14])
def test_order_range(j):
    with pytest.raises(ValueError):
        multiplicative_order(53, j)


def test_near_power_of_three():
    assert near_power_of_three(3**33 + 150)
    assert not near_power_of_three(3**33 + 201)
    assert near_power_of_three(25)
