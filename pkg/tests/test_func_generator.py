import numpy as np
import pytest

from errors import EvenCharacteristic
from func_generator import (
    generate_function_batch,
    generate_random_even_function,
    generate_random_function,
    generate_random_odd_function,
    generate_random_permutation,
    random_element,
)
from funcrep import is_permutation


def test_seeded_functions_are_reproducible(gf16):
    assert generate_random_function(gf16, seed=7) == generate_random_function(gf16, seed=7)
    assert generate_random_function(gf16, seed=7) != generate_random_function(gf16, seed=8)


def test_codomain_subfield(gf16):
    F = generate_random_function(gf16, s=2, seed=1)
    assert F.s == 2
    assert set(F.lut.tolist()) <= set(gf16.subfield_array(2).tolist())


def test_random_permutation(gf9):
    assert is_permutation(generate_random_permutation(gf9, seed=2))


def test_random_elements(gf16):
    rng = np.random.default_rng(0)
    for _ in range(20):
        c = random_element(gf16, s=2, nonzero=True, seed=rng)
        assert c != 0 and gf16.in_subfield(c, 2)


def test_odd_and_even_functions(gf27):
    f = gf27
    minus = f.vneg(f.elements)
    O = generate_random_odd_function(f, seed=4)
    E = generate_random_even_function(f, seed=4)
    assert O(0) == 0
    assert np.array_equal(O.lut[minus], f.vneg(O.lut))
    assert np.array_equal(E.lut[minus], E.lut)


def test_symmetric_functions_need_odd_characteristic(gf16):
    with pytest.raises(EvenCharacteristic):
        generate_random_odd_function(gf16)


def test_batch_draws_from_one_stream(gf9):
    batch = generate_function_batch(gf9, 5, seed=9)
    assert len(batch) == 5
    assert len({F.lut.tobytes() for F in batch}) == 5
    assert [F.lut.tolist() for F in batch] == [F.lut.tolist() for F in generate_function_batch(gf9, 5, seed=9)]
