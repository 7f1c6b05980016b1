"""
c- and cc-Difference Distribution Tables

For F: GF(p^n) -> GF(p^s) and c in GF(p^s)^*:
- cc-DDT:  ccDelta(a, b) = #{x : F(cx + a) - cF(x) = b}
- c-DDT:   cDelta(a, b)  = #{x : F(x + a) - cF(x) = b}

Uniformities take the max over all (a, b), dropping the a = 0 row only when
c = 1. Spectra count every (a, b), a = 0 included, so a spectrum always has
mass p^(n+s).

Also hosts the structural reductions (preimage unions, the (1/c, 1/c)
duality, DO and monomial reductions, trace perturbations, c = -1 checks) and
the per-c profile sweep, which fans out over a multiprocessing pool.
"""

import logging
import multiprocessing as mp
from dataclasses import dataclass, field
from functools import cached_property, partial
from math import gcd
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

import settings
from errors import (
    BadParameters,
    EvenCharacteristic,
    HypothesisViolated,
    IdentityViolation,
    InvalidC,
    NotDOOrigin,
)
from funcrep import (
    Origin,
    VecFunc,
    even_part,
    odd_part,
    pointwise_add,
    trace_function,
    translate_out,
)

logger = logging.getLogger(__name__)

KIND_CC = "cc"
KIND_C = "c"
KINDS = (KIND_CC, KIND_C)


# --- Spectra ---

@dataclass(frozen=True)
class Spectrum:
    """Multiset {value: multiplicity}, stored sorted by value."""
    items: Tuple[Tuple[int, int], ...]

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "Spectrum":
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values).ravel()
        if arr.size == 0:
            return cls(())
        vals, mult = np.unique(arr, return_counts=True)
        return cls(tuple((int(v), int(m)) for v, m in zip(vals, mult)))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.items)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.items)

    @property
    def support(self) -> List[int]:
        return [v for v, _ in self.items]

    def to_json(self) -> Dict[str, int]:
        return {str(v): m for v, m in self.items}

    def __str__(self) -> str:
        return "{" + ", ".join(f"{v}^{m}" for v, m in self.items) + "}"


# --- Tables ---

def check_c(F: VecFunc, c: int) -> int:
    """c must be a nonzero element of GF(p^s) (= GF(p^gcd(n, s)) since s | n)."""
    f = F.field
    c = int(c)
    if c == 0 or not 0 <= c < f.order or not f.in_subfield(c, F.s):
        raise InvalidC(f"c={c} is not in GF({f.p}^{F.s})^*")
    return c


def _check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise BadParameters(f"unknown DDT kind {kind!r} (expected 'cc' or 'c')")
    return kind


def derivative_values(F: VecFunc, c: int, a_values: np.ndarray, kind: str = KIND_CC) -> np.ndarray:
    """Matrix D[i, x] = F(c x + a_i) - cF(x)  (cc)  or  F(x + a_i) - cF(x)  (c)."""
    f = F.field
    x = f.elements
    a_values = np.asarray(a_values, dtype=np.int64).reshape(-1)
    inner = f.vmul(c, x) if kind == KIND_CC else x
    args = f.vadd(a_values[:, None], inner[None, :])
    return f.vsub(F.lut[args], f.vmul(c, F.lut)[None, :])


def _count_rows(values: np.ndarray, q: int) -> np.ndarray:
    rows = values.shape[0]
    flat = (np.arange(rows, dtype=np.int64)[:, None] * q + values).ravel()
    return np.bincount(flat, minlength=rows * q).reshape(rows, q)


@dataclass(frozen=True, eq=False)
class DDT:
    """A full table; rows are indexed by enc(a), columns by the codomain elements b_values."""
    kind: str
    c: int
    F: VecFunc = field(repr=False)
    b_values: np.ndarray = field(repr=False)
    table: np.ndarray = field(repr=False)

    @cached_property
    def _col(self) -> np.ndarray:
        col = np.full(self.F.field.order, -1, dtype=np.int64)
        col[self.b_values] = np.arange(self.b_values.size)
        return col

    def entry(self, a: int, b: int) -> int:
        col = self._col[int(b)]
        return 0 if col < 0 else int(self.table[int(a), col])

    def column(self, b: np.ndarray) -> np.ndarray:
        return self._col[np.asarray(b, dtype=np.int64)]

    @cached_property
    def uniformity(self) -> int:
        rows = self.table[1:] if self.c == 1 else self.table
        return int(rows.max()) if rows.size else 0

    @cached_property
    def full_max(self) -> int:
        """Max over every (a, b), a = 0 included."""
        return int(self.table.max())

    @cached_property
    def spectrum(self) -> Spectrum:
        return Spectrum.from_values(self.table)


def _build_ddt(F: VecFunc, c: int, kind: str) -> DDT:
    c = check_c(F, c)
    f = F.field
    q = f.order
    b_values = f.subfield_array(F.s)
    table = np.zeros((q, b_values.size), dtype=np.int64)
    block = max(1, settings.ROW_BLOCK // q)
    for start in range(0, q, block):
        a_values = f.elements[start:start + block]
        counts = _count_rows(derivative_values(F, c, a_values, kind), q)
        table[start:start + a_values.size] = counts[:, b_values]
    logger.debug("%s-DDT of %r at c=%d done", kind, F, c)
    return DDT(kind, c, F, b_values, table)


def cc_ddt(F: VecFunc, c: int) -> DDT:
    return _build_ddt(F, c, KIND_CC)


def c_ddt(F: VecFunc, c: int) -> DDT:
    return _build_ddt(F, c, KIND_C)


def ddt(F: VecFunc, c: int, kind: str = KIND_CC) -> DDT:
    return _build_ddt(F, c, _check_kind(kind))


def _entry(F: VecFunc, c: int, a: int, b: int, kind: str) -> int:
    c = check_c(F, c)
    f = F.field
    if not f.in_subfield(b, F.s):
        raise BadParameters(f"b={b} is not in the codomain GF({f.p}^{F.s})")
    values = derivative_values(F, c, np.array([f.check(a)]), kind)[0]
    return int(np.count_nonzero(values == int(b)))


def cc_ddt_entry(F: VecFunc, c: int, a: int, b: int) -> int:
    return _entry(F, c, a, b, KIND_CC)


def c_ddt_entry(F: VecFunc, c: int, a: int, b: int) -> int:
    return _entry(F, c, a, b, KIND_C)


def _power_map_cc_uniformity(F: VecFunc, c: int) -> int:
    """Uniformity of x^d from the a = 1 row plus gcd(d, p^n - 1) for the a = 0 row."""
    f = F.field
    d = F.power_exponent
    row = _count_rows(derivative_values(F, c, np.array([1]), KIND_CC), f.order)[0]
    if c == 1:
        return int(row.max())
    if f.pow(c, d - 1) == 1:
        return f.order
    return max(int(row.max()), gcd(d, f.order - 1))


def cc_uniformity(F: VecFunc, c: int, fast: bool = True) -> int:
    c = check_c(F, c)
    if fast and F.power_exponent is not None and F.s == F.n:
        return _power_map_cc_uniformity(F, c)
    return cc_ddt(F, c).uniformity


def c_uniformity(F: VecFunc, c: int) -> int:
    return c_ddt(F, c).uniformity


def uniformity(F: VecFunc, c: int, kind: str = KIND_CC) -> int:
    if _check_kind(kind) == KIND_CC:
        return cc_uniformity(F, c)
    return c_uniformity(F, c)


def cc_spectrum(F: VecFunc, c: int) -> Spectrum:
    return cc_ddt(F, c).spectrum


def c_spectrum(F: VecFunc, c: int) -> Spectrum:
    return c_ddt(F, c).spectrum


# --- Per-c profiles ---

@dataclass(frozen=True)
class Profile:
    kind: str
    values: Dict[int, int]

    @property
    def spectrum(self) -> Spectrum:
        return Spectrum.from_values(np.fromiter(self.values.values(), dtype=np.int64))


def default_c_set(F: VecFunc, include_one: bool = False) -> List[int]:
    """GF(p^s)^* minus {1} unless include_one."""
    return [int(c) for c in F.field.nonzero_subfield(F.s, exclude_one=not include_one)]


def _profile_worker(F: VecFunc, kind: str, c: int) -> int:
    return uniformity(F, c, kind)


def per_c_profile(F: VecFunc, kind: str = KIND_CC, c_set: Optional[Iterable[int]] = None,
                  workers: Optional[int] = None) -> Profile:
    """
    Uniformity for every c in c_set.

    Args:
        F: Function under study
        kind: 'cc' or 'c'
        c_set: multipliers (default: GF(p^s)^* without 1)
        workers: process count; 1 runs inline

    Returns:
        Profile mapping c -> uniformity (ordered by c)
    """
    _check_kind(kind)
    cs = sorted(set(default_c_set(F) if c_set is None else (int(c) for c in c_set)))
    for c in cs:
        check_c(F, c)
    workers = settings.DEFAULT_WORKERS if workers is None else workers
    logger.info("%s-profile of %r over %d values of c (%d workers)", kind, F, len(cs), workers)
    job = partial(_profile_worker, F, kind)
    if workers > 1 and len(cs) > 1:
        with mp.Pool(processes=workers) as pool:
            results = pool.map(job, cs)
    else:
        results = [job(c) for c in cs]
    return Profile(kind, dict(zip(cs, results)))


# --- Classification ---

@dataclass(frozen=True)
class Classification:
    c: int
    uniformity: int

    @property
    def label(self) -> str:
        if self.uniformity == 1:
            return "PccN"
        if self.uniformity == 2:
            return "APccN"
        return f"{self.uniformity}-uniform"

    def __str__(self) -> str:
        return self.label


def classify(F: VecFunc, c: int) -> Classification:
    return Classification(int(c), cc_uniformity(F, c))


# --- Structural reductions ---

def cc_entry_by_preimages(F: VecFunc, c: int, a: int, b: int) -> int:
    """Count through the disjoint union over y of A_{y/c} intersected with (A_{y+b} - a)/c."""
    c = check_c(F, c)
    f = F.field
    a = f.check(a)
    c_inv = f.inv(c)
    total = 0
    for y in f.subfield_array(F.s):
        first = np.flatnonzero(F.lut == f.mul(c_inv, int(y)))
        if first.size == 0:
            continue
        targets = np.flatnonzero(F.lut == f.add(int(y), b))
        if targets.size == 0:
            continue
        second = f.vmul(c_inv, f.vsub(targets, a))
        total += int(np.isin(first, second).sum())
    return total


def cc_duality(F: VecFunc, c: int, a: int, b: int, strict: bool = True) -> Tuple[int, int]:
    """(ccDelta at (c, a, b), ccDelta at (1/c, -a/c, -b/c))."""
    c = check_c(F, c)
    f = F.field
    c_inv = f.inv(c)
    lhs = cc_ddt_entry(F, c, a, b)
    rhs = cc_ddt_entry(F, c_inv, f.neg(f.mul(a, c_inv)), f.neg(f.mul(b, c_inv)))
    if strict and lhs != rhs:
        raise IdentityViolation(f"duality fails at c={c}, a={a}, b={b}: {lhs} != {rhs}")
    return lhs, rhs


@dataclass(frozen=True)
class DOReduction:
    c: int
    c_prime: int
    cc_uniformity: int
    c_uniformity: int
    entrywise_equal: bool
    # c != 1 but c' = 1: the two uniformities drop different rows
    exclusion_mismatch: bool

    @property
    def uniformity_equal(self) -> bool:
        return self.cc_uniformity == self.c_uniformity

    @property
    def holds(self) -> bool:
        return self.entrywise_equal and (self.uniformity_equal or self.exclusion_mismatch)


def do_reduction(F: VecFunc, c: int, strict: bool = True) -> DOReduction:
    """For DO-type F and c in F_p^*: ccDelta_F(a, b) = c'Delta_F(a, b), c' = c^(1 - sum n_j)."""
    if F.origin.kind != "do":
        raise NotDOOrigin(f"{F!r} was not built from a DO descriptor")
    c = check_c(F, c)
    f = F.field
    if c >= f.p:
        raise InvalidC(f"c={c} is not in the prime field F_{f.p}")
    c_prime = f.pow(c, 1 - F.origin.detail.weight_sum)
    cc_tab = cc_ddt(F, c)
    c_tab = c_ddt(F, c_prime)
    report = DOReduction(
        c=c,
        c_prime=c_prime,
        cc_uniformity=cc_tab.uniformity,
        c_uniformity=c_tab.uniformity,
        entrywise_equal=bool(np.array_equal(cc_tab.table, c_tab.table)),
        exclusion_mismatch=(c == 1) != (c_prime == 1),
    )
    if strict and not report.holds:
        raise IdentityViolation(f"DO reduction fails at c={c}: {report}")
    return report


@dataclass(frozen=True)
class MonomialReport:
    c: int
    c_prime: int
    entrywise_equal: bool
    uniformity: int
    # c^(d-1) = 1 with c != 1: the whole field solves the a = 0, b = 0 entry
    degenerate: bool
    fast_path_agrees: bool

    @property
    def holds(self) -> bool:
        return self.entrywise_equal and self.fast_path_agrees


def monomial_reduction(F: VecFunc, c: int, strict: bool = True) -> MonomialReport:
    """For F = x^d: ccDelta_F(a, b) = c'Delta_F(a/c, b/c^d) with c' = c^(1-d)."""
    d = F.power_exponent
    if d is None or F.s != F.n:
        raise BadParameters(f"{F!r} is not a power map of the field")
    c = check_c(F, c)
    f = F.field
    c_prime = f.pow(c, 1 - d)
    cc_tab = cc_ddt(F, c)
    c_tab = c_ddt(F, c_prime)
    rows = f.vmul(f.elements, f.inv(c))
    cols = f.vmul(cc_tab.b_values, f.inv(f.pow(c, d)))
    mapped = c_tab.table[rows][:, c_tab.column(cols)]
    report = MonomialReport(
        c=c,
        c_prime=c_prime,
        entrywise_equal=bool(np.array_equal(cc_tab.table, mapped)),
        uniformity=cc_tab.uniformity,
        degenerate=c != 1 and f.pow(c, d - 1) == 1,
        fast_path_agrees=_power_map_cc_uniformity(F, c) == cc_tab.uniformity,
    )
    if strict and not report.holds:
        raise IdentityViolation(f"monomial reduction fails for d={d}, c={c}: {report}")
    return report


@dataclass(frozen=True)
class PerturbationReport:
    G: VecFunc
    c: int
    uniformity_F: int
    uniformity_G: int

    @property
    def holds(self) -> bool:
        return self.uniformity_F == self.uniformity_G


def trace_perturbation(F: VecFunc, u: int, v: int, t: int) -> VecFunc:
    """G(x) = F(x) + u Tr^t_n(v F(x))."""
    f = F.field
    tr = f.vtrace(f.vmul(v, F.lut), t)
    return VecFunc(f, f.n, f.vadd(F.lut, f.vmul(u, tr)), Origin("composite", "trace_perturbation"))


def trace_perturb_invariance(F: VecFunc, u: int, v: int, t: int, c: int, strict: bool = True) -> PerturbationReport:
    """Check ccDelta_G = ccDelta_F for G = F + u Tr^t_n(vF), c in GF(p^t)^*, Tr^t_n(-uv) != 1."""
    f = F.field
    if F.s != f.n:
        raise BadParameters("trace perturbation needs F: GF(p^n) -> GF(p^n)")
    if c == 0 or not f.in_subfield(c, t):
        raise InvalidC(f"c={c} is not in GF({f.p}^{t})^*")
    if f.trace(f.neg(f.mul(u, v)), t) == 1:
        raise HypothesisViolated(f"Tr(-uv) = 1 for u={u}, v={v}, t={t}")
    G = trace_perturbation(F, u, v, t)
    report = PerturbationReport(G, int(c), cc_uniformity(F, c), cc_uniformity(G, c))
    if strict and not report.holds:
        raise IdentityViolation(f"trace perturbation changed ccDelta: {report.uniformity_F} -> {report.uniformity_G}")
    return report


# --- c = -1 ---

@dataclass(frozen=True)
class MinusOneReport:
    uniformity: int
    evenness_ok: bool
    pccn_criterion: bool
    criterion_agrees: bool
    odd_identity_ok: bool
    even_identity_ok: bool
    even_plus_affine_ok: bool

    @property
    def holds(self) -> bool:
        return (self.evenness_ok and self.criterion_agrees and self.odd_identity_ok
                and self.even_identity_ok and self.even_plus_affine_ok)


def _negated_table(tab: DDT, f) -> np.ndarray:
    """T'[a, b] = T[-a, -b]."""
    x = f.elements
    return tab.table[f.vneg(x)][:, tab.column(f.vneg(tab.b_values))]


def minus_one_checks(F: VecFunc, affine: Optional[VecFunc] = None, strict: bool = True) -> MinusOneReport:
    """
    Properties of F(a - x) + F(x) = b, i.e. c = -1, in odd characteristic.

    Args:
        F: Function under study
        affine: affine map added to the even part (default Tr^s_n(x) + 1)
        strict: raise IdentityViolation if any property fails

    Returns:
        MinusOneReport
    """
    f = F.field
    if f.p == 2:
        raise EvenCharacteristic("c = -1 coincides with c = 1 in characteristic 2")
    c = f.p - 1
    x = f.elements
    tab = cc_ddt(F, c)
    half = f.inv(2)

    # solutions pair up as x <-> a - x except at x = a/2
    special = f.vmul(2, F.lut[f.vmul(half, x)])
    special_col = tab.column(special)
    off = np.ones_like(tab.table, dtype=bool)
    off[x, special_col] = False
    evenness_ok = bool(np.all(tab.table[off] % 2 == 0))

    pccn_criterion = bool(np.all(tab.table[off] == 0) and np.all(tab.table[x, special_col] == 1))
    criterion_agrees = pccn_criterion == (tab.uniformity == 1)

    O = odd_part(F)
    odd_identity_ok = bool(np.array_equal(cc_ddt(O, c).table, _negated_table(c_ddt(O, 1), f)))

    E = even_part(F)
    e_c = c_ddt(E, c)
    even_identity_ok = bool(np.array_equal(cc_ddt(E, c).table, e_c.table[f.vneg(x)]))

    if affine is None:
        affine = translate_out(trace_function(f, F.s), 1)
    even_plus_affine_ok = cc_uniformity(pointwise_add(E, affine), c) == e_c.uniformity

    report = MinusOneReport(
        uniformity=tab.uniformity,
        evenness_ok=evenness_ok,
        pccn_criterion=pccn_criterion,
        criterion_agrees=criterion_agrees,
        odd_identity_ok=odd_identity_ok,
        even_identity_ok=even_identity_ok,
        even_plus_affine_ok=even_plus_affine_ok,
    )
    if strict and not report.holds:
        raise IdentityViolation(f"c = -1 checks failed: {report}")
    return report


# --- Closed forms for power maps ---

def gold_cc_uniformity(p: int, n: int, m: int) -> Tuple[int, int]:
    """Expected ccDelta of x^(p^m + 1) and the degree g = gcd(m, n) of the admissible c subfield."""
    return gcd(p ** m + 1, p ** n - 1), gcd(m, n)


def _is_nonzero_square(f, x: int) -> bool:
    return x != 0 and f.pow(x, (f.order - 1) // 2) == 1


def inverse_map_expected(f, c: int) -> int:
    """
    Uniformity of x^(p^n - 2) at c with c' = c^(1-d) != 1.

    p = 2: 2 if Tr(c') = Tr(1/c') = 1, else 3.
    p odd: 3 if c'^2 - 4c' or 1 - 4c' is a nonzero square, else 2.
    """
    d = f.order - 2
    c_prime = f.pow(c, 1 - d)
    if f.p == 2:
        if f.trace(c_prime, 1) == 1 and f.trace(f.inv(c_prime), 1) == 1:
            return 2
        return 3
    four = 4 % f.p
    disc_one = f.sub(f.mul(c_prime, c_prime), f.mul(four, c_prime))
    disc_c = f.sub(1, f.mul(four, c_prime))
    if _is_nonzero_square(f, disc_one) or _is_nonzero_square(f, disc_c):
        return 3
    return 2


def binary_gold_expected(f, k: int, c: int) -> Optional[int]:
    """
    ccDelta of x^(2^k + 1) on GF(2^n) at c outside GF(2^g), g = gcd(n, k): 2^g + 1.

    Covers 2 <= k < n with n/g >= 3; returns None outside that range. At n/g = 2
    no right-hand side has 2^g + 1 roots, so that case is left out.
    """
    n = f.n
    g = gcd(n, k)
    if f.p != 2 or not 2 <= k < n or n // g < 3 or f.in_subfield(c, g):
        return None
    return 2 ** g + 1


def half_gold_exponent(p: int, k: int) -> int:
    return (p ** k + 1) // 2


def half_gold_applies(f, k: int, c: int) -> bool:
    """c^(1-d) = -1 for d = (p^k + 1)/2."""
    return f.p > 2 and f.pow(c, 1 - half_gold_exponent(f.p, k)) == f.neg(1)


def half_gold_pccn(n: int, k: int) -> bool:
    return (2 * n // gcd(2 * n, k)) % 2 == 1


def half_gold_minus_one_expected(p: int, n: int, k: int) -> int:
    """c-differential uniformity of x^((p^k + 1)/2) at c = -1, for p odd, 1 <= k < n, n >= 3."""
    if half_gold_pccn(n, k):
        return 1
    return (p ** gcd(k, n) + 1) // 2


def half_gold_expected(f, k: int, c: int) -> Optional[int]:
    """
    ccDelta of x^((p^k + 1)/2), p odd, 1 <= k < n, n >= 3, at c with c^(1-d) = -1.

    1 (PccN) when 2n/gcd(2n, k) is odd, else (p^gcd(k, n) + 1)/2. None when not applicable.
    In the PccN case no c satisfies c^(1-d) = -1, so only the second value is ever attained.
    """
    n = f.n
    if not (1 <= k < n and n >= 3) or not half_gold_applies(f, k, c):
        return None
    return half_gold_minus_one_expected(f.p, n, k)
