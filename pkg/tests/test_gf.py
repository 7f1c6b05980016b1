import pickle

import numpy as np
import pytest

from errors import (
    BadParameters,
    DegreeMismatch,
    DivideByZero,
    FieldSpecError,
    InvalidC,
    NotADivisor,
    NotPrime,
    ReducibleModulus,
)
from gf import canonical_modulus, field_create, parse_field_spec, subfield_elements


@pytest.mark.parametrize("p, n, modulus", [(2, 3, 11), (2, 4, 19), (3, 2, 10), (5, 1, 5)])
def test_canonical_modulus(p, n, modulus):
    assert canonical_modulus(p, n) == modulus
    assert field_create(p, n).modulus == modulus


def test_parse_field_spec():
    f = parse_field_spec("gf(2^4)")
    assert (f.p, f.n, f.order) == (2, 4, 16)
    assert f.spec == "gf(2^4)"
    g = parse_field_spec(" GF( 2 ^ 4 ; mod = 25 ) ")
    assert g.modulus == 25
    assert g.spec == "gf(2^4;mod=25)"
    assert f != g


@pytest.mark.parametrize("text, error", [
    ("GF(16)", FieldSpecError),
    ("gf(2^4", FieldSpecError),
    ("gf(4^2)", NotPrime),
    ("gf(2^4;mod=21)", ReducibleModulus),
    ("gf(2^4;mod=7)", DegreeMismatch),
    ("gf(2^0)", DegreeMismatch),
])
def test_parse_field_spec_errors(text, error):
    with pytest.raises(error):
        parse_field_spec(text)


def test_contexts_are_cached_and_picklable(gf16):
    assert field_create(2, 4) is gf16
    assert pickle.loads(pickle.dumps(gf16)) == gf16


def test_characteristic_two_arithmetic(gf16):
    f = gf16
    assert f.add(5, 3) == 6
    assert f.sub(5, 3) == 6
    assert f.mul(2, 8) == 3          # x * x^3 = x + 1
    assert f.inv(2) == 9             # x^-1 = x^3 + 1
    assert f.div(3, 2) == f.mul(3, 9)
    assert f.pow(2, 15) == 1
    with pytest.raises(DivideByZero):
        f.inv(0)
    with pytest.raises(BadParameters):
        f.add(16, 0)


def test_odd_characteristic_arithmetic(gf9):
    f = gf9
    assert f.mul(3, 3) == 2          # x^2 = -1
    assert f.add(1, 2) == 0
    assert f.neg(3) == 6
    assert f.frobenius(3) == f.pow(3, 3)


def test_zero_powers(gf9):
    assert gf9.pow(0, 0) == 1
    assert gf9.pow(0, 4) == 0
    assert list(gf9.vpow(np.array([0, 1]), 0)) == [1, 1]
    with pytest.raises(DivideByZero):
        gf9.pow(0, -1)


def test_vectorised_ops_match_scalars(gf9):
    f = gf9
    x = f.elements
    y = (x * 5 + 1) % f.order
    assert list(f.vmul(x, y)) == [f.mul(int(a), int(b)) for a, b in zip(x, y)]
    assert list(f.vsub(x, y)) == [f.sub(int(a), int(b)) for a, b in zip(x, y)]


def test_absolute_trace(gf16, gf8):
    assert set(gf16.abs_trace.tolist()) == {0, 1}
    assert int(np.count_nonzero(gf16.abs_trace == 0)) == 8
    assert gf16.trace(1, 1) == 0
    assert gf8.trace(1, 1) == 1


def test_relative_trace_lands_in_subfield(gf16):
    f = gf16
    values = f.vtrace(f.elements, 2)
    assert set(values.tolist()) <= set(f.subfield_array(2).tolist())
    # Tr_1^2 o Tr_2^4 = Tr_1^4
    assert np.array_equal(f.vtrace(values, 1, from_degree=2), f.abs_trace)
    with pytest.raises(NotADivisor):
        f.trace(3, 3)


def test_subfields(gf16):
    f = gf16
    assert list(f.subfield_array(1)) == [0, 1]
    assert len(f.subfield_array(2)) == 4
    assert len(f.nonzero_subfield(2, exclude_one=True)) == 2
    assert subfield_elements(f, 4) == frozenset(range(16))
    assert f.in_subfield(1, 2)
    assert not f.in_subfield(2, 2)


def test_subfield_coordinates(gf16):
    co = gf16.coords(2)
    sub = gf16.subfield_array(2)
    vecs = co.to_coords(sub)
    assert vecs.shape == (4, 2)
    assert sorted(co.from_coords(vecs).tolist()) == sorted(sub.tolist())
    with pytest.raises(InvalidC):
        co.to_coords(np.array([2]))


@pytest.mark.parametrize("c", [2, 7, 13])
def test_scale_matrix_is_multiplication(gf16, c):
    f = gf16
    M = f.scale_matrix(c)
    lhs = (f.to_vec(f.elements) @ M.T) % f.p
    assert np.array_equal(lhs, f.to_vec(f.vmul(c, f.elements)))


def test_scale_matrix_on_subfield(gf16):
    f = gf16
    c = int(f.nonzero_subfield(2, exclude_one=True)[0])
    co = f.coords(2)
    sub = f.subfield_array(2)
    lhs = (co.to_coords(sub) @ f.scale_matrix(c, 2).T) % 2
    assert np.array_equal(co.from_coords(lhs), f.vmul(c, sub))
    with pytest.raises(InvalidC):
        f.scale_matrix(2, 2)
