"""
Random Function Generator

Seeded random functions GF(p^n) -> GF(p^s) for property sweeps:
- uniformly random tables with values in the codomain subfield
- random permutations of the field
- random odd / even functions (odd characteristic)
- random elements of a subfield (for c, u, v parameters)

Every generator takes `seed`, which may be an int, None, or a numpy Generator
so that sweeps can thread a single stream through many draws.
"""

from typing import List, Optional, Union

import numpy as np

from errors import EvenCharacteristic
from funcrep import Origin, VecFunc
from gf import FieldCtx

Seed = Union[int, None, np.random.Generator]


def _rng(seed: Seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_element(f: FieldCtx, s: Optional[int] = None, nonzero: bool = False, seed: Seed = None) -> int:
    """Uniform element of GF(p^s) (optionally nonzero)."""
    rng = _rng(seed)
    pool = f.subfield_array(f.n if s is None else s)
    if nonzero:
        pool = pool[pool != 0]
    return int(rng.choice(pool))


def generate_random_function(f: FieldCtx, s: Optional[int] = None, seed: Seed = None) -> VecFunc:
    """
    Generate a uniformly random function into GF(p^s).

    Args:
        f: Domain field
        s: Codomain subfield degree (defaults to n)
        seed: Random seed or Generator for reproducibility

    Returns:
        VecFunc with raw origin
    """
    rng = _rng(seed)
    s = f.n if s is None else s
    pool = f.subfield_array(s)
    return VecFunc(f, s, rng.choice(pool, size=f.order), Origin("raw", "random"))


def generate_random_permutation(f: FieldCtx, seed: Seed = None) -> VecFunc:
    rng = _rng(seed)
    return VecFunc(f, f.n, rng.permutation(f.order), Origin("raw", "random_permutation"))


def _symmetric_function(f: FieldCtx, odd: bool, seed: Seed) -> VecFunc:
    if f.p == 2:
        raise EvenCharacteristic("odd/even functions need odd characteristic")
    rng = _rng(seed)
    x = f.elements
    minus = f.vneg(x)
    lut = np.zeros(f.order, dtype=np.int64)
    reps = x[x < minus]
    values = rng.integers(0, f.order, size=reps.size)
    lut[reps] = values
    lut[minus[reps]] = f.vneg(values) if odd else values
    if not odd:
        lut[0] = rng.integers(0, f.order)
    return VecFunc(f, f.n, lut, Origin("raw", "random_odd" if odd else "random_even"))


def generate_random_odd_function(f: FieldCtx, seed: Seed = None) -> VecFunc:
    """O(-x) = -O(x) for all x; O(0) = 0."""
    return _symmetric_function(f, True, seed)


def generate_random_even_function(f: FieldCtx, seed: Seed = None) -> VecFunc:
    """E(-x) = E(x) for all x."""
    return _symmetric_function(f, False, seed)


def generate_function_batch(f: FieldCtx, count: int, s: Optional[int] = None, seed: Seed = None) -> List[VecFunc]:
    """`count` random functions drawn from one seeded stream."""
    rng = _rng(seed)
    return [generate_random_function(f, s, rng) for _ in range(count)]


# Example usage
if __name__ == "__main__":
    from gf import field_create

    print("=== Function Generator Examples ===\n")

    f = field_create(3, 2)
    print("1. Random function on GF(3^2):")
    F = generate_random_function(f, seed=42)
    print(f"   Values: {F.lut.tolist()}")

    print("\n2. Random permutation:")
    P = generate_random_permutation(f, seed=42)
    print(f"   Values: {P.lut.tolist()}")

    print("\n3. Random odd function:")
    O = generate_random_odd_function(f, seed=42)
    print(f"   Values: {O.lut.tolist()}")

    print("\n=== Examples Complete ===")
