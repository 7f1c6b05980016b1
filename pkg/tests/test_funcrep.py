import numpy as np
import pytest

from errors import (
    BadParameters,
    CodomainViolation,
    DomainMismatch,
    FuncSpecError,
    LutFormatError,
    NotAPermutation,
)
from funcrep import (
    DODescriptor,
    VecFunc,
    algebraic_degree,
    cc_derivative,
    compose,
    constant,
    even_part,
    from_do,
    from_power,
    from_univariate,
    identity,
    interpolate,
    inverse,
    is_permutation,
    load_lut,
    odd_part,
    p_weight,
    parse_func_spec,
    pointwise_add,
    save_lut,
    scale_in,
    trace_function,
    trace_linear,
    translate_in,
)
from func_generator import generate_random_function


def test_power_map(gf16):
    F = from_power(gf16, 3)
    assert F.power_exponent == 3
    assert F(2) == 8
    assert F(0) == 0
    with pytest.raises(BadParameters):
        from_power(gf16, 0)


def test_univariate_evaluation(gf9):
    F = from_univariate(gf9, [1, 0, 1])
    x = gf9.elements
    assert np.array_equal(F.lut, gf9.vadd(gf9.vpow(x, 2), 1))
    assert from_univariate(gf9, [4]) == constant(gf9, 4)


def test_table_validation(gf16):
    with pytest.raises(DomainMismatch):
        VecFunc(gf16, 4, np.array([0, 1]))
    with pytest.raises(CodomainViolation):
        VecFunc(gf16, 2, gf16.elements)
    with pytest.raises(CodomainViolation):
        VecFunc(gf16, 4, np.full(16, 16))


def test_equality_ignores_origin(gf16):
    F = from_power(gf16, 1)
    assert F == identity(gf16)
    assert hash(F) == hash(identity(gf16))


@pytest.mark.parametrize("d", [1, 3, 5, 7])
def test_interpolate_power_maps(gf16, d):
    assert interpolate(from_power(gf16, d)) == [0] * d + [1]


def test_interpolate_constants(gf9):
    assert interpolate(constant(gf9, 5)) == [5]
    assert interpolate(constant(gf9, 0)) == [0]


def test_interpolate_recovers_random_tables(gf9):
    F = generate_random_function(gf9, seed=3)
    assert from_univariate(gf9, interpolate(F)) == F


def test_p_weight_and_degree(gf16, gf9):
    assert p_weight(10, 3) == 2
    assert p_weight(7, 2) == 3
    assert algebraic_degree(from_power(gf16, 3)) == 2
    assert algebraic_degree(from_power(gf16, 7)) == 3
    assert algebraic_degree(from_power(gf9, 4)) == 2
    assert algebraic_degree(constant(gf9, 2)) == 0
    assert algebraic_degree(trace_function(gf16)) == 1


def test_do_polynomial_matches_power(gf9):
    desc = DODescriptor.build((1, 1), {(0, 1): 1})
    assert desc.weight_sum == 2
    D = from_do(gf9, desc)
    assert D.origin.kind == "do"
    assert np.array_equal(D.lut, from_power(gf9, 4).lut)


def test_do_descriptor_validation(gf9):
    with pytest.raises(BadParameters):
        DODescriptor.build((0,), {(0,): 1})
    with pytest.raises(BadParameters):
        DODescriptor.build((1, 1), {(0,): 1})
    with pytest.raises(BadParameters):
        from_do(gf9, DODescriptor.build((1,), {(5,): 1}))


@pytest.mark.parametrize("index", [(0,), (1,)])
def test_do_coefficient_outside_field(gf9, index):
    # x^1 and x^3, both nonconstant terms
    with pytest.raises(BadParameters) as info:
        from_do(gf9, DODescriptor.build((1,), {index: 9}))
    assert info.value.exit_code == 2


def test_trace_function(gf16):
    T = trace_function(gf16, 1)
    assert T.s == 1
    assert np.array_equal(T.lut, gf16.abs_trace)
    assert set(trace_function(gf16, 2).lut.tolist()) == set(gf16.subfield_array(2).tolist())


def test_trace_linear_is_permutation(gf16):
    f = gf16
    u = 1
    v = next(int(v) for v in f.elements[1:] if f.trace(v, 1) == 0)
    assert is_permutation(trace_linear(f, u, v, 1))


def test_composition_and_inverse(gf16):
    F = from_power(gf16, 7)
    G = inverse(F)
    assert G == from_power(gf16, 13)
    assert compose(G, F) == identity(gf16)
    with pytest.raises(NotAPermutation):
        inverse(from_power(gf16, 3))


def test_pointwise_helpers(gf9):
    f = gf9
    F = generate_random_function(f, seed=11)
    assert translate_in(F, 0) == F
    assert scale_in(F, 1) == F
    assert pointwise_add(odd_part(F), even_part(F)) == F
    O = odd_part(F)
    assert np.array_equal(O.lut[f.vneg(f.elements)], f.vneg(O.lut))


def test_cc_derivative_at_one_is_plain_derivative(gf16):
    f = gf16
    F = from_power(f, 3)
    D = cc_derivative(F, 1, 5)
    assert np.array_equal(D.lut, f.vsub(F.lut[f.vadd(f.elements, 5)], F.lut))


def test_lut_file_round_trip(gf9, tmp_path):
    F = generate_random_function(gf9, seed=5)
    path = tmp_path / "f.lut"
    save_lut(F, str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "3 2 2 10"
    assert len(lines) == 10
    assert load_lut(str(path)) == F
    assert parse_func_spec(gf9, f"lutfile:{path}") == F


def test_lut_file_errors(gf16, tmp_path):
    bad = tmp_path / "bad.lut"
    bad.write_text("2 4 4 19\n1\n2\n")
    with pytest.raises(LutFormatError):
        load_lut(str(bad))
    with pytest.raises(LutFormatError):
        load_lut(str(tmp_path / "missing.lut"))
    bad.write_text("2 four 4 19\n")
    with pytest.raises(LutFormatError):
        load_lut(str(bad))


def test_lut_file_over_other_field(gf9, gf16, tmp_path):
    path = tmp_path / "f.lut"
    save_lut(from_power(gf9, 2), str(path))
    with pytest.raises(DomainMismatch):
        parse_func_spec(gf16, f"lutfile:{path}")


def test_parse_func_spec(gf16):
    assert parse_func_spec(gf16, "power:3") == from_power(gf16, 3)
    assert parse_func_spec(gf16, "poly:0,0,0,1") == from_power(gf16, 3)
    for text in ("power3", "power:x", "poly:1,a", "exp:3", ""):
        with pytest.raises(FuncSpecError):
            parse_func_spec(gf16, text)
