import numpy as np
import pytest

from diffspec import cc_ddt, cc_uniformity
from equivlab import (
    SHAPES,
    AffineMap,
    ProductAffineMap,
    c1_invariance_check,
    c_ea_apply,
    ccz_invariance_check,
    construct_gold_ccz_pair,
    construct_odd_trace_ccz_pair,
    ea_to_ccz_map,
    gold_subfield_companion,
    gold_trace_companion,
    graph_image,
    is_c_affine,
    load_product_map,
    random_invariance_sweep,
    save_product_map,
    scaled_graph_map,
    trace_switch_map,
)
from errors import (
    BadParameters,
    EvenCharacteristic,
    MapFormatError,
    NotAGraph,
    NotCAffine,
)
from func_generator import generate_random_function, generate_random_permutation
from funcrep import from_power, inverse, trace_linear
from gf import field_create


def _outside_gf4(f):
    return int(next(c for c in f.elements[2:] if not f.in_subfield(int(c), 2)))


def test_scalar_and_identity_maps(gf9):
    f = gf9
    x = f.elements
    assert np.array_equal(AffineMap.scalar(f, 5).apply(x), f.vmul(5, x))
    assert np.array_equal(AffineMap.scalar(f, 5, constant=1).apply(x), f.vadd(f.vmul(5, x), 1))
    assert np.array_equal(AffineMap.identity(f).apply(x), x)
    assert not AffineMap.zero(f, 2, 2).is_permutation()


def test_affine_map_from_function(gf16):
    L = trace_linear(gf16, 1, 1, 2)
    A = AffineMap.from_function(L)
    assert np.array_equal(A.as_function().lut, L.lut)
    with pytest.raises(BadParameters):
        AffineMap.from_function(from_power(gf16, 3))


def test_affine_inverse_and_compose(gf16):
    A = AffineMap.random(gf16, 4, 4, invertible=True, seed=1)
    ident = A.compose(A.inverse())
    assert np.array_equal(ident.apply(gf16.elements), gf16.elements)


def test_random_c_affine_maps_commute(gf16):
    c = _outside_gf4(gf16)
    A = AffineMap.random(gf16, 4, 4, c=c, seed=2)
    assert is_c_affine(A, c)
    x = gf16.elements
    lin = A.linear_part
    assert np.array_equal(lin.apply(gf16.vmul(c, x)), gf16.vmul(c, lin.apply(x)))


def test_swap_maps_graph_to_inverse(gf9):
    P = generate_random_permutation(gf9, seed=3)
    assert graph_image(ProductAffineMap.swap(gf9), P) == inverse(P)


def test_product_inverse_and_compose(gf9):
    A = ProductAffineMap.random_c_affine(gf9, 2, 2, seed=4)
    ident = A.compose(A.inverse())
    xs = np.repeat(gf9.elements, 9)
    ys = np.tile(gf9.elements, 9)
    X, Y = ident.apply(xs, ys)
    assert np.array_equal(X, xs) and np.array_equal(Y, ys)


def test_trace_switch_map(gf16):
    f = gf16
    T = trace_switch_map(f)
    assert T(5, 7) == (f.add(5, f.trace(7, 1)), 7)
    assert is_c_affine(T, 1)
    assert not is_c_affine(T, 2)


def test_trace_switch_sends_cube_to_companion(gf16):
    G = graph_image(trace_switch_map(gf16), from_power(gf16, 3))
    assert G == gold_trace_companion(gf16, 1)


@pytest.mark.parametrize("shape", SHAPES)
def test_random_c_affine_product_maps(gf16, shape):
    c = _outside_gf4(gf16)
    A = ProductAffineMap.random_c_affine(gf16, 4, c, seed=5, shape=shape)
    assert A.is_permutation()
    assert is_c_affine(A, c)
    L11, L12, _, _ = A.blocks
    if shape == "lower":
        assert not L12.any()
    if shape == "swap":
        assert not L11.any()


def test_c_affine_outside_codomain_subfield(gf16):
    A = ProductAffineMap.identity(gf16, 2)
    assert is_c_affine(A, 3) is False
    assert is_c_affine(A, int(gf16.nonzero_subfield(2, exclude_one=True)[0]))


def test_non_graph_images(gf9):
    F = from_power(gf9, 2)
    with pytest.raises(NotAGraph):
        graph_image(ProductAffineMap.swap(gf9), F)


def test_invariance_under_c_affine_maps(gf16):
    c = _outside_gf4(gf16)
    rng = np.random.default_rng(6)
    checked = 0
    while checked < 10:
        F = generate_random_function(gf16, seed=rng)
        A = ProductAffineMap.random_c_affine(gf16, 4, c, seed=rng, shape="lower")
        report = ccz_invariance_check(F, A, c)
        assert report.c_affine and report.preserved
        checked += 1


def test_plain_ccz_control(gf16):
    c = _outside_gf4(gf16)
    report = ccz_invariance_check(from_power(gf16, 3), trace_switch_map(gf16), c)
    assert not report.c_affine
    assert (report.uniformity_F, report.uniformity_G) == (3, 4)
    assert report.holds


@pytest.mark.parametrize("p, n", [(2, 3), (3, 2)])
def test_random_sweep(p, n):
    f = field_create(p, n)
    sweep = random_invariance_sweep(f, f.primitive_element, count=30, seed=7)
    assert sweep.cases == 30
    assert sweep.holds


def test_random_sweep_with_prime_field_c(gf9):
    sweep = random_invariance_sweep(gf9, 2, count=30, seed=7)
    assert sweep.cases == 30
    assert sweep.holds


def test_c_ea_and_its_ccz_map(gf16):
    f = gf16
    c = _outside_gf4(f)
    F = generate_random_function(f, seed=8)
    A1 = AffineMap.random(f, 4, 4, c=c, invertible=True, seed=9)
    A2 = AffineMap.random(f, 4, 4, c=c, invertible=True, seed=10)
    A3 = AffineMap.random(f, 4, 4, c=c, seed=11)
    G = c_ea_apply(A1, F, A2, A3, c)
    assert graph_image(ea_to_ccz_map(A1, A2, A3), F) == G
    assert cc_ddt(G, c).spectrum == cc_ddt(F, c).spectrum
    with pytest.raises(NotCAffine):
        c_ea_apply(AffineMap.from_function(trace_linear(f, 1, 1, 1)), F, A2, A3, c)


def test_c1_invariance(gf9):
    F = generate_random_function(gf9, seed=12)
    for c in range(2, 9):
        A1 = AffineMap.random(gf9, 2, 2, c=c, invertible=True, seed=c)
        A2 = AffineMap.random(gf9, 2, 2, invertible=True, seed=100 + c)
        report = c1_invariance_check(F, A1, A2, c)
        assert report.c_affine and report.preserved


def test_c1_requires_c_affine(gf16):
    F = from_power(gf16, 3)
    A1 = AffineMap.from_function(trace_linear(gf16, 1, 1, 1))
    with pytest.raises(NotCAffine):
        c1_invariance_check(F, A1, AffineMap.identity(gf16), 2)


def test_scaled_graph_map(gf9):
    F = generate_random_function(gf9, seed=13)
    assert scaled_graph_map(ProductAffineMap.identity(gf9), 1, 1, F) == F
    G = scaled_graph_map(ProductAffineMap.identity(gf9), 2, 2, F)
    assert G(gf9.mul(2, 4)) == gf9.mul(2, F(4))
    with pytest.raises(BadParameters):
        scaled_graph_map(ProductAffineMap.identity(gf9), 0, 1, F)


def test_gold_pair_at_c_one():
    F, F2, cert = construct_gold_ccz_pair(4, 1, 1)
    assert cert.holds
    assert cert.degrees == (2, 3)
    assert cert.map_is_c_linear and cert.spectra_equal
    assert F2 == gold_trace_companion(F.field, 1)


def test_gold_pair_outside_subfield():
    f = field_create(2, 4)
    c = _outside_gf4(f)
    _, F2, cert = construct_gold_ccz_pair(4, 1, c)
    assert cert.holds and cert.closed_form_ok and cert.inverse_ok
    assert not cert.map_is_c_linear
    assert cert.uniformities == (3, 4)
    assert cert.to_json()["degrees"] == [2, 3]


@pytest.mark.parametrize("m, i", [(5, 1), (4, 2), (4, 0)])
def test_gold_pair_parameters(m, i):
    with pytest.raises(BadParameters):
        construct_gold_ccz_pair(m, i, 1)


def test_odd_trace_pair():
    f = field_create(3, 4)
    for c in [1] + [int(c) for c in f.nonzero_subfield(2, exclude_one=True)[:2]]:
        _, _, cert = construct_odd_trace_ccz_pair(3, 4, 2, c)
        assert cert.holds
        assert cert.inverse_ok and cert.closed_form_ok


def test_odd_trace_pair_parameters():
    with pytest.raises(EvenCharacteristic):
        construct_odd_trace_ccz_pair(2, 4, 2, 1)
    with pytest.raises(BadParameters):
        construct_odd_trace_ccz_pair(3, 4, 3, 1)


def test_subfield_companion_field():
    with pytest.raises(BadParameters):
        gold_subfield_companion(field_create(2, 4))


def test_product_map_files(gf16, tmp_path):
    path = tmp_path / "map.txt"
    A = ProductAffineMap.random_c_affine(gf16, 2, int(gf16.nonzero_subfield(2, exclude_one=True)[0]), seed=14)
    save_product_map(A, str(path))
    B = load_product_map(str(path))
    assert B.s == 2
    assert np.array_equal(A.matrix, B.matrix) and A.constant == B.constant
    with pytest.raises(MapFormatError):
        load_product_map(str(path), field_create(3, 2))


@pytest.mark.parametrize("text", ["", "2 4 4\n1 0\n0 0\n", "2 2 2\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 2\n0 0\n"])
def test_malformed_product_map_files(tmp_path, text):
    path = tmp_path / "map.txt"
    path.write_text(text)
    with pytest.raises(MapFormatError):
        load_product_map(str(path))
