"""
Walsh Transforms and cc-Uniformity Certificates

    W_F(u, v) = sum_x xi_p^(Tr_s(v F(x)) - Tr_n(u x)),  u in GF(p^n), v in GF(p^s)

Values are exact cyclotomic integers (cyclo.CycInt). On top of the table:

- G_{k+1} moments. With h(u, v) = W(u, v) * conj W(cu, cv) on the group
  GF(p^n) x GF(p^s),  G_{k+1} = sum_g conj h(g) * h^{*k}(g),  where h^{*k}
  is the k-fold additive convolution. p^{-(n+s)k} G_{k+1} equals
  sum over (a, b_point) of S^k(a, b_point).
- uniformity certificates: p^{2n} A_0 + sum_k p^{-(n+s)k} A_k G_{k+1} >= 0
  with phi_m(x) = prod_{j<=m} (x - j) = sum A_k x^k, zero iff every
  cc-DDT entry is <= m.
- per-a certificates built from Walsh transforms of cc-derivatives.
- the convolution of graph indicators that reproduces single DDT entries.
"""

import itertools
import logging
import multiprocessing as mp
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Dict, List, Optional, Tuple

import numpy as np

import settings
from cyclo import CycInt, canon_array, conj_array, mul_array, to_cycint
from diffspec import cc_ddt, cc_ddt_entry, check_c
from errors import (
    BadParameters,
    IdentityViolation,
    NonRationalResult,
    WorkLimitExceeded,
)
from funcrep import VecFunc, cc_derivative
from gf import FieldCtx

logger = logging.getLogger(__name__)

METHOD_CONVOLUTION = "convolution"
METHOD_DIRECT = "direct"


# --- Walsh transforms ---

@lru_cache(maxsize=8)
def trace_form(f: FieldCtx) -> np.ndarray:
    """T[u, x] = Tr_n(u x) as residues mod p."""
    x = f.elements
    return f.abs_trace[f.vmul(x[:, None], x[None, :])]


@lru_cache(maxsize=8)
def _trace_dual_index(f: FieldCtx) -> np.ndarray:
    """omega(u) = sum_i Tr(u alpha^i) 2^i, so that Tr(u x) = <omega(u), bits(x)> for p = 2."""
    x = f.elements
    omega = np.zeros(f.order, dtype=np.int64)
    for i in range(f.n):
        omega |= f.abs_trace[f.vmul(x, 1 << i)] << i
    return omega


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised fast Walsh-Hadamard transform of a length-2^n vector."""
    a = np.asarray(values, dtype=np.int64).copy()
    size = a.size
    h = 1
    while h < size:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0, :] + a[:, 1, :], a[:, 0, :] - a[:, 1, :]), axis=1)
        h *= 2
    return a.reshape(size)


def _component_exponents(F: VecFunc, v: int) -> np.ndarray:
    """Tr_1^s(v F(x)) for every x."""
    f = F.field
    return f.vtrace(f.vmul(v, F.lut), 1, from_degree=F.s)


def walsh(F: VecFunc, u: int, v: int) -> CycInt:
    f = F.field
    if not f.in_subfield(v, F.s):
        raise BadParameters(f"v={v} is not in GF({f.p}^{F.s})")
    ux = f.abs_trace[f.vmul(f.check(u), f.elements)]
    exps = (_component_exponents(F, v) - ux) % f.p
    return CycInt.from_exponent_counts(np.bincount(exps, minlength=f.p))


def _walsh_column(F: VecFunc, fast: bool, v: int) -> np.ndarray:
    """All u for one v, as a (q, p) object array of canonical coefficients."""
    f = F.field
    q, p = f.order, f.p
    fv = _component_exponents(F, v)
    out = np.zeros((q, p), dtype=object)
    if fast:
        spectrum = fwht(1 - 2 * fv)
        out[:, 0] = spectrum[_trace_dual_index(f)].astype(object)
        return out
    exps = (fv[None, :] - trace_form(f)) % p
    for r in range(p):
        out[:, r] = (exps == r).sum(axis=1).astype(object)
    return canon_array(out)


@dataclass(frozen=True, eq=False)
class WalshTable:
    F: VecFunc = field(repr=False)
    v_values: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)     # (q, len(v_values), p), dtype=object

    def _col(self, v: int) -> int:
        hits = np.flatnonzero(self.v_values == int(v))
        if hits.size == 0:
            raise BadParameters(f"v={v} is not in the codomain")
        return int(hits[0])

    def get(self, u: int, v: int) -> CycInt:
        return to_cycint(self.values[int(u), self._col(v)])

    def flat(self) -> np.ndarray:
        """(q * len(v_values), p) with row index u * len(v_values) + column(v)."""
        q, nv, p = self.values.shape
        return self.values.reshape(q * nv, p)

    def norms(self) -> np.ndarray:
        """|W(u, v)|^2 as a (q, len(v_values)) object array of integers."""
        return mul_array(self.values, conj_array(self.values))[..., 0]

    def parseval_ok(self) -> bool:
        q = self.F.field.order
        return all(int(s) == q * q for s in self.norms().sum(axis=0))


def walsh_table(F: VecFunc, fast: Optional[bool] = None, workers: Optional[int] = None) -> WalshTable:
    """
    Exact Walsh table of F.

    Args:
        F: Function under study
        fast: use the p = 2 butterfly path (default: whenever p = 2)
        workers: process count for the per-v columns

    Returns:
        WalshTable over all u and all v in the codomain
    """
    f = F.field
    fast = (f.p == 2) if fast is None else fast
    if fast and f.p != 2:
        raise BadParameters("the butterfly path needs p = 2")
    v_values = f.subfield_array(F.s)
    workers = settings.DEFAULT_WORKERS if workers is None else workers
    job = partial(_walsh_column, F, fast)
    if workers > 1 and v_values.size > 1:
        with mp.Pool(processes=workers) as pool:
            columns = pool.map(job, [int(v) for v in v_values])
    else:
        columns = [job(int(v)) for v in v_values]
    logger.debug("Walsh table of %r (%s path)", F, "fast" if fast else "naive")
    return WalshTable(F, v_values, np.stack(columns, axis=1))


# --- Phi polynomials ---

@dataclass(frozen=True)
class PhiPoly:
    m: int
    A: Tuple[int, ...]     # A[k] is the coefficient of x^k

    def __call__(self, x: int) -> int:
        return sum(a * x ** k for k, a in enumerate(self.A))

    def check(self, limit: int) -> bool:
        """Zero on 1..m and positive on m+1..limit."""
        return (all(self(j) == 0 for j in range(1, self.m + 1))
                and all(self(j) > 0 for j in range(self.m + 1, limit + 1)))


def phi_poly(m: int) -> PhiPoly:
    """Coefficients of prod_{j=1}^m (x - j)."""
    if m < 1:
        raise BadParameters(f"m must be >= 1, got {m}")
    coeffs = [1]
    for j in range(1, m + 1):
        nxt = [0] * (len(coeffs) + 1)
        for k, a in enumerate(coeffs):
            nxt[k + 1] += a
            nxt[k] -= j * a
        coeffs = nxt
    return PhiPoly(m, tuple(coeffs))


# --- S counts ---

def s_count(F: VecFunc, c: int, a: int, b_point: int) -> int:
    """#{x : D(x) = D(b_point)} for the cc-derivative D of F at (c, a)."""
    check_c(F, c)
    target = cc_derivative(F, c, a)(F.field.check(b_point))
    return cc_ddt_entry(F, c, a, target)


def s_moment(F: VecFunc, c: int, k: int) -> int:
    """sum over (a, b_point) of S^k, i.e. sum over (a, b) of ccDelta(a, b)^(k+1)."""
    table = cc_ddt(F, c).table.astype(object)
    return int((table ** (k + 1)).sum())


# --- Moments G_{k+1} ---

def _work(group_size: int, k: int, method: str) -> int:
    if method == METHOD_DIRECT:
        return group_size ** k
    return k * group_size * group_size


def _guard(group_size: int, k: int, method: str, work_limit: Optional[int], what: str) -> None:
    limit = settings.WORK_LIMIT if work_limit is None else work_limit
    needed = _work(group_size, k, method)
    if needed > limit:
        raise WorkLimitExceeded(needed, limit, what)


class _PairGroup:
    """Additive group GF(p^n) x GF(p^s) indexed by u * Ns + column(v)."""

    def __init__(self, f: FieldCtx, v_values: np.ndarray):
        self.f = f
        self.v_values = v_values
        self.nv = v_values.size
        self.size = f.order * self.nv
        col = np.full(f.order, -1, dtype=np.int64)
        col[v_values] = np.arange(self.nv)
        self.col = col
        self.us = np.repeat(f.elements, self.nv)
        self.vs = np.tile(v_values, f.order)

    def index(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        return us * self.nv + self.col[vs]

    def shifted(self, g: int) -> np.ndarray:
        """Index of g + h for every h."""
        u, v = int(self.us[g]), int(self.vs[g])
        return self.index(self.f.vadd(self.us, u), self.f.vadd(self.vs, v))

    def scaled(self, c: int) -> np.ndarray:
        return self.index(self.f.vmul(self.us, c), self.f.vmul(self.vs, c))


def _convolve(a: np.ndarray, b: np.ndarray, shift) -> np.ndarray:
    """(a * b)(g) = sum_{g1} a(g1) b(g - g1) over an additive group."""
    out = np.zeros_like(b)
    for g1 in range(a.shape[0]):
        if not any(a[g1]):
            continue
        out[shift(g1)] += mul_array(a[g1][None, :], b)
    return canon_array(out)


def _rational(vec: np.ndarray, what: str) -> int:
    z = to_cycint(canon_array(vec))
    if not z.is_rational():
        raise NonRationalResult(f"{what} = {z} is not rational")
    return z.rational_value()


def _moment_kernel(F: VecFunc, c: int, table: Optional[WalshTable]):
    table = walsh_table(F) if table is None else table
    group = _PairGroup(F.field, table.v_values)
    w = table.flat()
    h = mul_array(w, conj_array(w[group.scaled(c)]))
    return group, w, h


def g_sums(F: VecFunc, c: int, k_max: int, work_limit: Optional[int] = None,
           method: str = METHOD_CONVOLUTION, table: Optional[WalshTable] = None) -> List[int]:
    """[G_2, ..., G_{k_max+1}] as exact integers."""
    c = check_c(F, c)
    if k_max < 1:
        raise BadParameters(f"k must be >= 1, got {k_max}")
    if method not in (METHOD_CONVOLUTION, METHOD_DIRECT):
        raise BadParameters(f"unknown method {method!r}")
    f = F.field
    group_size = f.order * f.p ** F.s
    _guard(group_size, k_max, method, work_limit, f"G_{k_max + 1}")

    group, w, h = _moment_kernel(F, c, table)
    h_conj = conj_array(h)
    results = []
    if method == METHOD_CONVOLUTION:
        power = h
        for k in range(1, k_max + 1):
            if k > 1:
                power = _convolve(power, h, group.shifted)
            results.append(_rational(mul_array(h_conj, power).sum(axis=0), f"G_{k + 1}"))
    else:
        for k in range(1, k_max + 1):
            acc = np.zeros(f.p, dtype=object)
            for gs in itertools.product(range(group.size), repeat=k):
                total = 0      # index of (0, 0)
                term = np.zeros(f.p, dtype=object)
                term[0] = 1
                for g in gs:
                    total = int(group.shifted(g)[total])
                    term = mul_array(term, h[g])
                acc = acc + mul_array(h_conj[total], term)
            results.append(_rational(acc, f"G_{k + 1}"))

    for k, value in enumerate(results, start=1):
        if value % f.p ** ((f.n + F.s) * k):
            raise IdentityViolation(f"G_{k + 1} = {value} is not divisible by p^((n+s)k)")
    logger.debug("moments for %r at c=%d: %s", F, c, results)
    return results


def g_sum(F: VecFunc, c: int, k: int, work_limit: Optional[int] = None,
          method: str = METHOD_CONVOLUTION, table: Optional[WalshTable] = None) -> CycInt:
    """G_{k+1} as a rational CycInt."""
    return CycInt.from_int(F.field.p, g_sums(F, c, k, work_limit, method, table)[-1])


def g_sum_identity(F: VecFunc, c: int, k: int, work_limit: Optional[int] = None,
                   method: str = METHOD_CONVOLUTION) -> Tuple[int, int]:
    """(p^{-(n+s)k} G_{k+1}, sum of S^k) for one k."""
    f = F.field
    value = g_sums(F, c, k, work_limit, method)[-1]
    return value // f.p ** ((f.n + F.s) * k), s_moment(F, c, k)


# --- Certificates ---

@dataclass(frozen=True)
class Certificate:
    m: int
    c: int
    lhs: int
    oracle: int
    cc_uniformity: int
    full_max: int

    @property
    def equality(self) -> bool:
        return self.lhs == 0

    @property
    def consistent(self) -> bool:
        """Equality iff every entry (a = 0 row included) is <= m, and lhs matches the count oracle."""
        return self.lhs == self.oracle and self.equality == (self.full_max <= self.m)

    @property
    def exact_reading(self) -> bool:
        """The stricter 'equality iff ccDelta = m' reading."""
        return self.equality and self.cc_uniformity == self.m

    def to_json(self) -> Dict:
        return {
            "m": self.m,
            "c": self.c,
            "lhs": str(self.lhs),
            "equality": self.equality,
            "uniformity": self.cc_uniformity,
            "equality_means_exactly_m": self.exact_reading,
        }


def _phi_oracle(counts: np.ndarray, phi: PhiPoly) -> int:
    counts = counts.astype(object)
    return int(sum(int(n) * phi(int(n)) for n in counts.ravel() if n))


def uniformity_certificate(F: VecFunc, c: int, m: int, work_limit: Optional[int] = None,
                           method: str = METHOD_CONVOLUTION, strict: bool = True) -> Certificate:
    """
    Evaluate p^{2n} A_0 + sum_k p^{-(n+s)k} A_k G_{k+1} exactly.

    Args:
        F: Function under study
        c: multiplier in GF(p^s)^*
        m: uniformity bound
        work_limit: elementary-term guard (default settings.WORK_LIMIT)
        method: 'convolution' or 'direct'
        strict: raise IdentityViolation if the value disagrees with the DDT

    Returns:
        Certificate (equality iff all cc-DDT entries <= m)
    """
    c = check_c(F, c)
    f = F.field
    _guard(f.order * f.p ** F.s, m, method, work_limit, f"certificate m={m}")
    phi = phi_poly(m)
    moments = g_sums(F, c, m, work_limit, method)
    lhs = f.order ** 2 * phi.A[0]
    for k, g in enumerate(moments, start=1):
        lhs += phi.A[k] * (g // f.p ** ((f.n + F.s) * k))
    tab = cc_ddt(F, c)
    cert = Certificate(m, c, lhs, _phi_oracle(tab.table, phi), tab.uniformity, tab.full_max)
    if strict and not cert.consistent:
        raise IdentityViolation(f"certificate disagrees with the DDT: {cert}")
    return cert


def pccn_walsh_sum(F: VecFunc, c: int, work_limit: Optional[int] = None) -> Tuple[int, int]:
    """(sum |W(u,v)|^2 |W(cu,cv)|^2, p^(3n+s)); equal iff every entry is <= 1."""
    f = F.field
    return g_sums(F, c, 1, work_limit)[0], f.p ** (3 * f.n + F.s)


def apccn_corollary(F: VecFunc, c: int, work_limit: Optional[int] = None) -> Tuple[int, int]:
    """(G_3, 3 p^(s+n) G_2 - 2 p^(2(s+2n))); equal iff every entry is <= 2."""
    f = F.field
    g2, g3 = g_sums(F, c, 2, work_limit)
    return g3, 3 * f.p ** (F.s + f.n) * g2 - 2 * f.p ** (2 * (F.s + 2 * f.n))


@dataclass(frozen=True)
class PerACertificate:
    a: int
    m: int
    value: int
    oracle: int

    @property
    def zero(self) -> bool:
        return self.value == 0


def per_a_certificate(F: VecFunc, c: int, a: int, m: int, work_limit: Optional[int] = None,
                      strict: bool = True) -> PerACertificate:
    """p^n A_0 + sum_k p^{-ks} A_k sum_{v_1..v_k} conj W_D(0, sum v) prod W_D(0, v_j), D = ccD_a F."""
    c = check_c(F, c)
    f = F.field
    if c == 1 and int(a) == 0:
        raise BadParameters("a = 0 is excluded when c = 1")
    nv = f.p ** F.s
    _guard(nv, m, METHOD_CONVOLUTION, work_limit, f"per-a certificate m={m}")
    D = cc_derivative(F, c, a)
    v_values = f.subfield_array(F.s)
    h = np.stack([np.array(walsh(D, 0, int(v)).coeffs, dtype=object) for v in v_values])
    col = np.full(f.order, -1, dtype=np.int64)
    col[v_values] = np.arange(nv)

    def shift(g: int) -> np.ndarray:
        return col[f.vadd(v_values, int(v_values[g]))]

    phi = phi_poly(m)
    value = f.order * phi.A[0]
    power = h
    h_conj = conj_array(h)
    for k in range(1, m + 1):
        if k > 1:
            power = _convolve(power, h, shift)
        moment = _rational(mul_array(h_conj, power).sum(axis=0), f"derivative moment k={k}")
        value += phi.A[k] * (moment // f.p ** (F.s * k))
    row = cc_ddt(F, c).table[f.check(a)]
    cert = PerACertificate(int(a), m, value, _phi_oracle(row, phi))
    if strict and cert.value != cert.oracle:
        raise IdentityViolation(f"per-a certificate disagrees with the DDT row: {cert}")
    return cert


# --- Graph indicator convolution ---

def convolution_entry(F: VecFunc, c: int, u: int, v: int, strict: bool = True) -> int:
    """(1_{graph cF} (x) 1_{graph F_c})(u/c, v) with F_c(x) = F(cx), over GF(p^n) x GF(p^s)."""
    c = check_c(F, c)
    f = F.field
    v_values = f.subfield_array(F.s)
    col = np.full(f.order, -1, dtype=np.int64)
    col[v_values] = np.arange(v_values.size)
    x = f.elements

    graph_cf = np.zeros((f.order, v_values.size), dtype=bool)
    graph_cf[x, col[f.vmul(c, F.lut)]] = True
    graph_fc = np.zeros_like(graph_cf)
    graph_fc[x, col[F.lut[f.vmul(c, x)]]] = True

    alpha = f.mul(f.check(u), f.inv(c))
    rows = f.vadd(x, alpha)
    cols = col[f.vadd(v_values, int(v))]
    count = int(np.count_nonzero(graph_cf & graph_fc[rows][:, cols]))
    if strict:
        expected = cc_ddt_entry(F, c, u, v)
        if count != expected:
            raise IdentityViolation(f"convolution entry {count} != DDT entry {expected} at u={u}, v={v}")
    return count
