import numpy as np
import pytest

from cyclo import CycInt
from diffspec import cc_ddt
from errors import BadParameters, WorkLimitExceeded
from func_generator import generate_random_function, random_element
from funcrep import from_power
from gf import field_create
from walshlab import (
    apccn_corollary,
    convolution_entry,
    fwht,
    g_sum,
    g_sum_identity,
    g_sums,
    pccn_walsh_sum,
    per_a_certificate,
    phi_poly,
    s_count,
    s_moment,
    uniformity_certificate,
    walsh,
    walsh_table,
)


def test_fwht():
    assert list(fwht(np.array([1, 0, 0, 0]))) == [1, 1, 1, 1]
    assert list(fwht(np.ones(8, dtype=np.int64))) == [8, 0, 0, 0, 0, 0, 0, 0]


def test_walsh_at_origin(gf9):
    F = generate_random_function(gf9, seed=1)
    assert walsh(F, 0, 0) == CycInt.from_int(3, 9)
    assert walsh(F, 4, 0) == CycInt.zero(3)


def test_fast_path_matches_naive(gf16):
    F = generate_random_function(gf16, seed=2)
    fast = walsh_table(F, fast=True)
    naive = walsh_table(F, fast=False)
    assert np.array_equal(fast.values, naive.values)
    assert fast.get(5, 7) == walsh(F, 5, 7)


def test_fast_path_needs_characteristic_two(gf9):
    with pytest.raises(BadParameters):
        walsh_table(from_power(gf9, 2), fast=True)


@pytest.mark.parametrize("p, n, s", [(2, 3, 3), (3, 2, 2), (2, 4, 2)])
def test_parseval(p, n, s):
    f = field_create(p, n)
    F = generate_random_function(f, s=s, seed=3)
    table = walsh_table(F)
    assert table.values.shape == (f.order, p ** s, p)
    assert table.parseval_ok()


def test_walsh_table_entries(gf9):
    F = generate_random_function(gf9, seed=4)
    table = walsh_table(F)
    for u in (0, 3, 8):
        for v in (0, 1, 5):
            assert table.get(u, v) == walsh(F, u, v)
    with pytest.raises(BadParameters):
        walsh(F, 0, 9)


def test_phi_poly():
    phi = phi_poly(2)
    assert phi.A == (2, -3, 1)
    assert phi(3) == 2
    assert phi.check(10)
    assert phi_poly(3).A == (-6, 11, -6, 1)
    with pytest.raises(BadParameters):
        phi_poly(0)


def test_s_count_and_moment(gf9):
    F = generate_random_function(gf9, seed=5)
    tab = cc_ddt(F, 2)
    assert s_moment(F, 2, 1) == int((tab.table.astype(object) ** 2).sum())
    total = sum(s_count(F, 2, a, x) for a in range(9) for x in range(9))
    assert total == s_moment(F, 2, 1)


@pytest.mark.parametrize("p, n, ks", [(2, 3, (1, 2, 3)), (3, 2, (1, 2)), (2, 2, (1, 2))])
def test_moment_identity(p, n, ks):
    f = field_create(p, n)
    rng = np.random.default_rng(10 * p + n)
    for _ in range(3):
        F = generate_random_function(f, seed=rng)
        c = random_element(f, nonzero=True, seed=rng)
        for k in ks:
            walsh_side, count_side = g_sum_identity(F, c, k)
            assert walsh_side == count_side


def test_direct_and_convolution_agree(gf8):
    F = generate_random_function(gf8, seed=6)
    assert g_sums(F, 3, 2, method="direct") == g_sums(F, 3, 2)
    assert g_sum(F, 3, 2) == CycInt.from_int(2, g_sums(F, 3, 2)[-1])


def test_subfield_codomain_moments(gf16):
    F = generate_random_function(gf16, s=2, seed=7)
    c = int(gf16.nonzero_subfield(2, exclude_one=True)[0])
    walsh_side, count_side = g_sum_identity(F, c, 2)
    assert walsh_side == count_side


def test_work_limit(gf8):
    F = from_power(gf8, 3)
    with pytest.raises(WorkLimitExceeded) as info:
        g_sums(F, 3, 2, work_limit=100)
    assert info.value.exit_code == 3
    with pytest.raises(WorkLimitExceeded):
        uniformity_certificate(F, 3, 3, work_limit=1000)
    with pytest.raises(BadParameters):
        g_sums(F, 3, 0)
    with pytest.raises(BadParameters):
        g_sums(F, 3, 1, method="bogus")


def test_certificate_of_cube(gf16):
    F = from_power(gf16, 3)
    c = 2
    exact = uniformity_certificate(F, c, 3)
    assert exact.equality and exact.exact_reading and exact.consistent
    assert exact.to_json()["lhs"] == "0"
    slack = uniformity_certificate(F, c, 2)
    assert not slack.equality
    assert slack.lhs > 0
    assert slack.lhs == slack.oracle


def test_certificate_above_the_uniformity(gf9):
    cert = uniformity_certificate(from_power(gf9, 2), 2, 3)
    assert cert.equality
    assert not cert.exact_reading
    assert cert.to_json()["equality_means_exactly_m"] is False


def test_pccn_and_apccn_sums(gf8, gf9, gf16):
    g2, target = pccn_walsh_sum(from_power(gf8, 2), 3)
    assert g2 == target == 2 ** 12
    g3, rhs = apccn_corollary(from_power(gf9, 2), 2)
    assert g3 == rhs
    g3, rhs = apccn_corollary(from_power(gf16, 3), 2)
    assert g3 > rhs


def test_pccn_sum_detects_failure(gf16):
    g2, target = pccn_walsh_sum(from_power(gf16, 3), 2)
    assert g2 > target


def test_per_a_certificates(gf16):
    F = from_power(gf16, 3)
    for a in (1, 6):
        assert per_a_certificate(F, 2, a, 3).zero
        cert = per_a_certificate(F, 2, a, 1)
        assert cert.value == cert.oracle > 0
    with pytest.raises(BadParameters):
        per_a_certificate(F, 1, 0, 2)


def test_per_a_certificate_subfield_codomain(gf16):
    F = generate_random_function(gf16, s=2, seed=8)
    c = int(gf16.nonzero_subfield(2, exclude_one=True)[0])
    row = cc_ddt(F, c).table[3]
    cert = per_a_certificate(F, c, 3, int(row.max()))
    assert cert.zero


def test_convolution_entries(gf8, gf9):
    for f, seed in ((gf8, 1), (gf9, 2)):
        F = generate_random_function(f, seed=seed)
        c = 2
        tab = cc_ddt(F, c)
        for u in range(f.order):
            for v in range(f.order):
                assert convolution_entry(F, c, u, v) == tab.entry(u, v)
