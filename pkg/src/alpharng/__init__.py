"""Pseudorandom doubles from the binary digits of a 2-normal constant.

The generator is the LCG ``z -> 2**53 * z mod 3**33`` seeded from a digit
position of ``alpha = sum 1/(3**k * 2**(3**k))``.
"""

from .generator import (
    DEFAULT_SEED,
    MAX_SEED,
    MIN_SEED,
    PERIOD,
    Generator,
    GeneratorState,
    Method,
    modpow2,
    next_state,
    seed_from_index,
    state_at,
    to_unit_interval,
)
from .modred import (
    CONSTANTS,
    MODULUS,
    ReductionConstants,
    barrett_modified_step,
    barrett_step,
    lecuyer_step,
    reduce_ref,
    wide_mul_hi,
)
from .parallel import Layout, PartitionPlan, deinterleave, fill, generate_parallel, make_plan

__version__ = "0.1.0"
