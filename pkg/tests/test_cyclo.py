import numpy as np
import pytest

from cyclo import CycInt, conj_array, from_cycint, mul_array, to_cycint
from errors import NonRationalResult


@pytest.mark.parametrize("p", [2, 3, 5])
def test_xi_is_a_pth_root_of_unity(p):
    xi = CycInt.xi(p)
    acc = CycInt.one(p)
    for _ in range(p):
        acc = acc * xi
    assert acc == CycInt.one(p)
    assert CycInt.from_exponent_counts([1] * p) == CycInt.zero(p)


def test_canonical_form():
    z = CycInt((3, 1, 1))
    assert z.coeffs == (2, 0, 0)
    assert z.is_rational()
    assert int(z) == 2


def test_conjugation_and_norm():
    xi = CycInt.xi(3)
    assert xi.conj() == CycInt.xi(3, 2)
    assert xi.norm2() == CycInt.one(3)
    z = CycInt((2, 1, 0))
    assert z.norm2().is_rational()
    assert int(z.norm2()) == 3          # |2 + xi|^2 = 4 + 2(xi + xi^2) + 1


def test_integer_coercion():
    z = CycInt.xi(5) + 3
    assert z - 3 == CycInt.xi(5)
    assert 2 * CycInt.one(5) == CycInt.from_int(5, 2)
    assert 1 - CycInt.one(5) == CycInt.zero(5)


def test_non_rational_values():
    with pytest.raises(NonRationalResult):
        CycInt.xi(3).rational_value()
    assert str(CycInt.from_int(3, -4)) == "-4"


def test_mixing_characteristics():
    with pytest.raises(ValueError):
        CycInt.one(3) + CycInt.one(5)


def test_array_helpers_match_scalars():
    rng = np.random.default_rng(1)
    xs = rng.integers(-5, 6, size=(6, 5)).astype(object)
    ys = rng.integers(-5, 6, size=(6, 5)).astype(object)
    prod = mul_array(xs, ys)
    conj = conj_array(xs)
    for i in range(6):
        a, b = to_cycint(xs[i]), to_cycint(ys[i])
        assert to_cycint(prod[i]) == a * b
        assert to_cycint(conj[i]) == a.conj()
    assert list(from_cycint(CycInt.xi(5, 2))) == [0, 0, 1, 0, 0]
