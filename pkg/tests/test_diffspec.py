from math import gcd

import numpy as np
import pytest

from diffspec import (
    Spectrum,
    binary_gold_expected,
    c_ddt,
    cc_ddt,
    cc_ddt_entry,
    cc_duality,
    cc_entry_by_preimages,
    cc_spectrum,
    cc_uniformity,
    c_uniformity,
    classify,
    ddt,
    default_c_set,
    do_reduction,
    gold_cc_uniformity,
    half_gold_applies,
    half_gold_expected,
    half_gold_exponent,
    half_gold_minus_one_expected,
    half_gold_pccn,
    inverse_map_expected,
    minus_one_checks,
    monomial_reduction,
    per_c_profile,
    trace_perturb_invariance,
)
from errors import (
    BadParameters,
    EvenCharacteristic,
    HypothesisViolated,
    InvalidC,
    NotDOOrigin,
)
from func_generator import generate_random_function, generate_random_permutation
from funcrep import DODescriptor, from_do, from_power, inverse, trace_linear
from gf import field_create


def test_spectrum_basics():
    s = Spectrum.from_values([2, 0, 2, 1])
    assert s.as_dict() == {0: 1, 1: 1, 2: 2}
    assert s.total == 4
    assert s.support == [0, 1, 2]
    assert s.to_json() == {"0": 1, "1": 1, "2": 2}
    assert str(s) == "{0^1, 1^1, 2^2}"


def test_classical_ddt_of_cube(gf16):
    tab = cc_ddt(from_power(gf16, 3), 1)
    assert tab.uniformity == 2          # APN; the a = 0 row is dropped at c = 1
    assert tab.full_max == 16
    assert np.array_equal(tab.table, c_ddt(from_power(gf16, 3), 1).table)


def test_rows_sum_to_field_order(gf9):
    F = generate_random_function(gf9, seed=1)
    for c in (1, 2, 5):
        for kind in ("cc", "c"):
            tab = ddt(F, c, kind)
            assert np.all(tab.table.sum(axis=1) == 9)
            assert tab.spectrum.total == 81


def test_codomain_subfield_tables(gf16):
    F = generate_random_function(gf16, s=2, seed=3)
    c = int(gf16.nonzero_subfield(2, exclude_one=True)[0])
    tab = cc_ddt(F, c)
    assert tab.table.shape == (16, 4)
    assert tab.spectrum.total == 64
    assert tab.entry(5, 2) == 0         # 2 lies outside the codomain
    with pytest.raises(InvalidC):
        cc_ddt(F, 2)


def test_entries_match_table(gf9):
    F = generate_random_function(gf9, seed=2)
    tab = cc_ddt(F, 5)
    for a in range(9):
        for b in range(9):
            assert cc_ddt_entry(F, 5, a, b) == tab.entry(a, b)


def test_invalid_arguments(gf16):
    F = from_power(gf16, 3)
    with pytest.raises(InvalidC):
        cc_uniformity(F, 0)
    with pytest.raises(InvalidC):
        cc_uniformity(F, 16)
    with pytest.raises(BadParameters):
        ddt(F, 2, "bogus")


def test_cube_is_three_uniform_for_every_c(gf16):
    F = from_power(gf16, 3)
    assert {cc_uniformity(F, c) for c in default_c_set(F)} == {3}


@pytest.mark.parametrize("p, n", [(2, 4), (3, 2)])
def test_power_map_fast_path_agrees(p, n):
    f = field_create(p, n)
    for d in range(1, f.order):
        F = from_power(f, d)
        for c in range(1, f.order):
            assert cc_uniformity(F, c, fast=True) == cc_uniformity(F, c, fast=False)


def test_quadratic_maps(gf16, gf9):
    assert {cc_uniformity(from_power(gf16, 2), c) for c in range(2, 16)} == {1}
    assert {cc_uniformity(from_power(gf9, 2), c) for c in range(2, 9)} == {2}
    assert classify(from_power(gf9, 2), 2).label == "APccN"
    assert classify(from_power(gf16, 2), 3).label == "PccN"
    assert str(classify(from_power(gf16, 3), 2)) == "3-uniform"


def test_trace_linear_contrast(gf16):
    f = gf16
    c = int(f.nonzero_subfield(2, exclude_one=True)[0])
    L = trace_linear(f, 1, 1, 2)        # Tr^2_4(1) = 0, so L is a permutation
    assert c_uniformity(L, c) == 1
    assert cc_uniformity(L, c) == 16


def test_per_c_profile(gf8):
    F = from_power(gf8, 3)
    profile = per_c_profile(F, "cc")
    assert sorted(profile.values) == list(range(2, 8))
    assert profile.spectrum.total == 6
    assert per_c_profile(F, "cc", workers=2) == profile
    assert per_c_profile(F, "c", [1, 3]).values.keys() == {1, 3}
    with pytest.raises(InvalidC):
        per_c_profile(F, "cc", [0])


def test_preimage_union_and_duality(gf9):
    F = generate_random_function(gf9, seed=6)
    tab = cc_ddt(F, 2)
    for a in range(9):
        for b in range(9):
            assert cc_entry_by_preimages(F, 2, a, b) == tab.entry(a, b)
            lhs, rhs = cc_duality(F, 2, a, b)
            assert lhs == rhs


def test_do_reduction(gf9):
    D = from_do(gf9, DODescriptor.build((1, 1), {(0, 0): 1, (0, 1): 2}))
    for c in (1, 2):
        report = do_reduction(D, c)
        assert report.holds
        assert report.entrywise_equal
    with pytest.raises(InvalidC):
        do_reduction(D, 4)
    with pytest.raises(NotDOOrigin):
        do_reduction(from_power(gf9, 4), 2)


def test_monomial_reduction(gf16):
    for d in (3, 5, 7, 14):
        F = from_power(gf16, d)
        for c in range(1, 16):
            assert monomial_reduction(F, c).holds


def test_degenerate_monomial(gf16):
    F = from_power(gf16, 4)
    for c in gf16.nonzero_subfield(2, exclude_one=True):
        report = monomial_reduction(F, int(c))
        assert report.degenerate
        assert report.uniformity == 16


def test_trace_perturbation(gf16):
    f = gf16
    F = generate_random_function(f, seed=8)
    u, v, t = 3, 5, 2
    assert f.trace(f.mul(u, v), t) != 1
    for c in f.nonzero_subfield(t):
        assert trace_perturb_invariance(F, u, v, t, int(c)).holds
    with pytest.raises(InvalidC):
        trace_perturb_invariance(F, u, v, t, 2)


def test_trace_perturbation_hypothesis(gf16):
    f = gf16
    v = next(int(v) for v in f.elements if f.trace(v, 1) == 1)
    with pytest.raises(HypothesisViolated):
        trace_perturb_invariance(from_power(f, 3), 1, v, 1, 1)


def test_inverse_permutations_share_spectra(gf9):
    P = generate_random_permutation(gf9, seed=3)
    Q = inverse(P)
    for c in range(1, 9):
        assert cc_spectrum(P, c) == cc_spectrum(Q, c)


@pytest.mark.parametrize("p, n", [(3, 2), (3, 3), (5, 2)])
def test_minus_one_checks(p, n):
    f = field_create(p, n)
    for seed in range(3):
        report = minus_one_checks(generate_random_function(f, seed=seed))
        assert report.holds
        assert report.uniformity >= 2


def test_minus_one_needs_odd_characteristic(gf16):
    with pytest.raises(EvenCharacteristic):
        minus_one_checks(from_power(gf16, 3))


@pytest.mark.parametrize("p, n, m", [(2, 4, 2), (3, 2, 1), (3, 3, 1), (5, 2, 1)])
def test_gold_exponents(p, n, m):
    want, g = gold_cc_uniformity(p, n, m)
    f = field_create(p, n)
    F = from_power(f, p ** m + 1)
    for c in f.nonzero_subfield(g, exclude_one=True):
        assert cc_uniformity(F, int(c)) == want


@pytest.mark.slow
@pytest.mark.parametrize("p, n_max", [(2, 7), (3, 4), (5, 3)])
def test_gold_exponents_exhaustive(p, n_max):
    for n in range(1, n_max + 1):
        f = field_create(p, n)
        for m in range(1, n + 1):
            want, g = gold_cc_uniformity(p, n, m)
            F = from_power(f, p ** m + 1)
            for c in f.nonzero_subfield(g, exclude_one=True):
                assert cc_uniformity(F, int(c)) == want


@pytest.mark.parametrize("n", [4, 5])
def test_inverse_map(n):
    f = field_create(2, n)
    F = from_power(f, f.order - 2)
    for c in range(2, f.order):
        assert cc_uniformity(F, c) == inverse_map_expected(f, c)


@pytest.mark.parametrize("p, n", [(3, 3), (5, 2)])
def test_inverse_map_odd_characteristic(p, n):
    f = field_create(p, n)
    d = f.order - 2
    F = from_power(f, d)
    cs = [c for c in range(2, f.order) if f.pow(c, 1 - d) != 1]
    assert cs
    for c in cs:
        want = inverse_map_expected(f, c)
        assert want in (2, 3)
        assert cc_uniformity(F, c) == want
        assert cc_ddt(F, c).uniformity == want


@pytest.mark.parametrize("n, k, want", [(5, 2, 3), (5, 3, 3), (6, 2, 5), (6, 4, 5), (6, 5, 3)])
def test_binary_gold_outside_subfield(n, k, want):
    f = field_create(2, n)
    F = from_power(f, 2 ** k + 1)
    g = gcd(n, k)
    for c in range(2, f.order):
        if f.in_subfield(c, g):
            assert binary_gold_expected(f, k, c) is None
            continue
        assert binary_gold_expected(f, k, c) == want
        assert cc_uniformity(F, c) == want


def test_binary_gold_range(gf16, gf9):
    # n/g = 2 for every k on GF(2^4), and k = 1 is outside the family
    for k in (1, 2, 3):
        assert all(binary_gold_expected(gf16, k, c) is None for c in range(2, 16))
    assert binary_gold_expected(gf9, 2, 3) is None


def test_half_gold_exponent_rows(gf27):
    assert half_gold_exponent(3, 1) == 2
    assert half_gold_exponent(3, 2) == 5
    assert not half_gold_pccn(3, 1)
    assert half_gold_pccn(3, 2)
    assert half_gold_minus_one_expected(3, 3, 1) == 2
    assert half_gold_minus_one_expected(3, 3, 2) == 1
    assert half_gold_minus_one_expected(5, 3, 1) == 3
    assert c_uniformity(from_power(gf27, 2), 2) == 2
    assert c_uniformity(from_power(gf27, 5), 2) == 1


def test_half_gold_at_c_with_minus_one_ratio(gf27):
    # x^2 on GF(27): c^(1-d) = -1 only at c = -1
    assert [c for c in range(1, 27) if half_gold_applies(gf27, 1, c)] == [2]
    assert half_gold_expected(gf27, 1, 2) == 2
    assert cc_uniformity(from_power(gf27, 2), 2) == 2
    assert half_gold_expected(gf27, 1, 4) is None

    f = field_create(5, 3)
    # x^3 on GF(125): c^2 = -1 at c = 2, 3
    assert [c for c in range(1, 125) if half_gold_applies(f, 1, c)] == [2, 3]
    for c in (2, 3):
        assert half_gold_expected(f, 1, c) == 3
        assert cc_uniformity(from_power(f, 3), c) == 3


@pytest.mark.parametrize("p, n, k", [(3, 3, 2), (5, 3, 2), (3, 5, 2), (3, 5, 4)])
def test_half_gold_pccn_branch_has_no_c(p, n, k):
    assert half_gold_pccn(n, k)
    f = field_create(p, n)
    assert not any(half_gold_applies(f, k, c) for c in range(1, f.order))


def test_half_gold_range(gf9, gf16):
    assert half_gold_expected(gf9, 1, 2) is None
    assert not half_gold_applies(gf16, 1, 3)


def test_x14_on_gf27_at_nonsquare_c(gf27):
    F = from_power(gf27, 14)
    assert gf27.pow(2, 13) == gf27.neg(1)
    assert cc_uniformity(F, 2) > 1
