"""
Function Representations F: GF(p^n) -> GF(p^s), s | n

A function is a total lookup table indexed by element encoding, plus an
optional record of where it came from (power map, univariate polynomial,
generalized DO polynomial, composite). The origin is what lets diffspec take
the power-map fast path and the DO reduction.

LUT file format:
    line 1: p n s modulus_enc
    then p^n lines, line i = enc of F(element with enc i)
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import (
    BadParameters,
    CodomainViolation,
    DomainMismatch,
    FuncSpecError,
    LutFormatError,
    NotAPermutation,
)
from gf import FieldCtx, field_create

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Origin:
    """Where a table came from: power | univariate | do | composite | raw."""
    kind: str
    detail: Any = None


RAW = Origin("raw")


@dataclass(frozen=True)
class DODescriptor:
    """Generalized DO polynomial sum a_{i_1..i_k} x^{n_1 p^{i_1} + ... + n_k p^{i_k}}."""
    type_vector: Tuple[int, ...]
    coeffs: Tuple[Tuple[Tuple[int, ...], int], ...]

    @classmethod
    def build(cls, type_vector: Sequence[int], coeffs: Dict[Tuple[int, ...], int]) -> "DODescriptor":
        tv = tuple(int(t) for t in type_vector)
        if not tv or any(t == 0 for t in tv):
            raise BadParameters("DO type vector must be non-empty with nonzero entries")
        items = []
        for idx, a in sorted(coeffs.items()):
            idx = tuple(int(i) for i in idx)
            if len(idx) != len(tv):
                raise BadParameters(f"index tuple {idx} does not match weight {len(tv)}")
            items.append((idx, int(a)))
        return cls(tv, tuple(items))

    @property
    def k(self) -> int:
        return len(self.type_vector)

    @property
    def weight_sum(self) -> int:
        return sum(self.type_vector)


@dataclass(frozen=True, eq=False)
class VecFunc:
    """Lookup table of F: GF(p^n) -> GF(p^s)."""
    field: FieldCtx
    s: int
    lut: np.ndarray
    origin: Origin = RAW

    def __post_init__(self):
        f = self.field
        lut = np.array(self.lut, dtype=np.int64).reshape(-1)
        if lut.shape != (f.order,):
            raise DomainMismatch(f"table has {lut.size} entries, {f.spec} has {f.order} elements")
        if lut.size and (lut.min() < 0 or lut.max() >= f.order):
            raise CodomainViolation("table value outside the field")
        if not f.subfield_mask(self.s)[lut].all():
            bad = int(lut[~f.subfield_mask(self.s)[lut]][0])
            raise CodomainViolation(f"value {bad} is not in GF({f.p}^{self.s})")
        lut.setflags(write=False)
        object.__setattr__(self, "s", int(self.s))
        object.__setattr__(self, "lut", lut)

    def __call__(self, x: int) -> int:
        return int(self.lut[int(x)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, VecFunc):
            return NotImplemented
        return self.field == other.field and self.s == other.s and np.array_equal(self.lut, other.lut)

    def __hash__(self) -> int:
        return hash((self.field, self.s, self.lut.tobytes()))

    def __repr__(self) -> str:
        return f"VecFunc({self.field.spec} -> GF({self.field.p}^{self.s}), origin={self.origin.kind})"

    @property
    def n(self) -> int:
        return self.field.n

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def power_exponent(self) -> Optional[int]:
        return self.origin.detail if self.origin.kind == "power" else None

    def with_origin(self, origin: Origin) -> "VecFunc":
        return VecFunc(self.field, self.s, self.lut, origin)


# --- Constructors ---

def from_lut(f: FieldCtx, values: Sequence[int], s: Optional[int] = None) -> VecFunc:
    return VecFunc(f, f.n if s is None else s, np.asarray(values, dtype=np.int64))


def from_callable(f: FieldCtx, fn, s: Optional[int] = None, label: str = "composite") -> VecFunc:
    """Tabulate fn, which maps the int array of all encodings to an int array."""
    return VecFunc(f, f.n if s is None else s, fn(f.elements), Origin("composite", label))


def identity(f: FieldCtx) -> VecFunc:
    return VecFunc(f, f.n, f.elements, Origin("power", 1))


def constant(f: FieldCtx, b: int, s: Optional[int] = None) -> VecFunc:
    return VecFunc(f, f.n if s is None else s, np.full(f.order, f.check(b), dtype=np.int64),
                   Origin("univariate", (int(b),)))


def from_power(f: FieldCtx, d: int, s: Optional[int] = None) -> VecFunc:
    """Tabulate x -> x^d (0^d = 0)."""
    if d < 1:
        raise BadParameters(f"power exponent must be >= 1, got {d}")
    return VecFunc(f, f.n if s is None else s, f.vpow(f.elements, d), Origin("power", int(d)))


def from_univariate(f: FieldCtx, coeffs: Sequence[int], s: Optional[int] = None) -> VecFunc:
    """Horner evaluation of sum coeffs[j] x^j at every point."""
    coeffs = [f.check(a) for a in coeffs]
    if len(coeffs) > f.order:
        raise BadParameters(f"{len(coeffs)} coefficients exceed the field order {f.order}")
    x = f.elements
    acc = np.zeros(f.order, dtype=np.int64)
    for a in reversed(coeffs):
        acc = f.vadd(f.vmul(acc, x), a)
    return VecFunc(f, f.n if s is None else s, acc, Origin("univariate", tuple(coeffs)))


def from_do(f: FieldCtx, desc: DODescriptor, s: Optional[int] = None) -> VecFunc:
    """Evaluate a generalized DO polynomial.

    A raw exponent of exactly 0 is a constant term. Any other exponent is
    reduced into [1, p^n - 1], so nonzero inputs see x^(e mod p^n-1) and 0 maps to 0.
    """
    q = f.order
    x = f.elements
    acc = np.zeros(q, dtype=np.int64)
    for idx, a in desc.coeffs:
        if any(not 0 <= i < f.n for i in idx):
            raise BadParameters(f"DO index {idx} out of range for n={f.n}")
        a = f.check(a)
        e = sum(nj * f.p ** ij for nj, ij in zip(desc.type_vector, idx))
        if e == 0:
            term = np.full(q, a, dtype=np.int64)
        else:
            r = e % (q - 1) or (q - 1)
            term = f.vmul(a, f.vpow(x, r))
        acc = f.vadd(acc, term)
    return VecFunc(f, f.n if s is None else s, acc, Origin("do", desc))


def trace_function(f: FieldCtx, s: int = 1) -> VecFunc:
    """x -> Tr^s_n(x)."""
    return VecFunc(f, s, f.vtrace(f.elements, s), Origin("do", DODescriptor.build(
        (1,), {(j * s,): 1 for j in range(f.n // s)})))


def trace_linear(f: FieldCtx, u: int, v: int, t: int) -> VecFunc:
    """x -> x + u Tr^t_n(v x); an F_{p^t}-linear map, bijective iff Tr^t_n(-uv) != 1."""
    x = f.elements
    tr = f.vtrace(f.vmul(v, x), t)
    return VecFunc(f, f.n, f.vadd(x, f.vmul(u, tr)), Origin("composite", f"trace_linear(u={u},v={v},t={t})"))


# --- Interpolation and degree ---

def interpolate(F: VecFunc) -> List[int]:
    """Univariate coefficients a_0..a_d of the unique polynomial of degree < p^n.

    Uses F(x) = sum_y F(y) (1 - (x - y)^{q-1}):
        a_0 = F(0),  a_k = -sum_y F(y) y^{q-1-k}  (1 <= k <= q-1, with y^0 = 1).
    Trailing zero coefficients are dropped; the zero function gives [0].
    """
    f = F.field
    q = f.order
    GF = f.GF
    ys = f.arr(f.elements)
    exps = np.arange(q, dtype=np.int64)
    powers = ys[None, :] ** exps[:, None]
    powers[0, :] = 1
    sums = (powers @ GF(F.lut.reshape(-1, 1)))[:, 0]   # sums[e] = sum_y F(y) y^e
    coeffs = np.zeros(q, dtype=np.int64)
    coeffs[0] = F.lut[0]
    if q > 1:
        tail = -sums[::-1][1:]          # k = 1..q-1  <->  e = q-1-k
        coeffs[1:] = tail.view(np.ndarray).astype(np.int64)
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        return [0]
    return [int(a) for a in coeffs[: nz[-1] + 1]]


def p_weight(m: int, p: int) -> int:
    w = 0
    while m:
        m, r = divmod(m, p)
        w += r
    return w


def algebraic_degree(F: VecFunc) -> int:
    """Max p-weight of an exponent with nonzero coefficient; 0 for the zero function."""
    coeffs = interpolate(F)
    return max((p_weight(k, F.p) for k, a in enumerate(coeffs) if a), default=0)


# --- Pointwise algebra ---

def _same_field(F: VecFunc, G: VecFunc) -> FieldCtx:
    if F.field != G.field:
        raise DomainMismatch(f"{F.field.spec} vs {G.field.spec}")
    return F.field


def compose(G: VecFunc, F: VecFunc) -> VecFunc:
    """x -> G(F(x))."""
    _same_field(G, F)
    return VecFunc(F.field, G.s, G.lut[F.lut], Origin("composite", "compose"))


def pointwise_add(F: VecFunc, G: VecFunc) -> VecFunc:
    f = _same_field(F, G)
    s = F.s * G.s // gcd(F.s, G.s)
    return VecFunc(f, s, f.vadd(F.lut, G.lut), Origin("composite", "add"))


def neg(F: VecFunc) -> VecFunc:
    return VecFunc(F.field, F.s, F.field.vneg(F.lut), Origin("composite", "neg"))


def scale(lam: int, F: VecFunc, s: Optional[int] = None) -> VecFunc:
    """x -> lam * F(x)."""
    return VecFunc(F.field, F.s if s is None else s, F.field.vmul(lam, F.lut), Origin("composite", "scale"))


def scale_in(F: VecFunc, lam: int) -> VecFunc:
    """x -> F(lam * x)."""
    f = F.field
    return VecFunc(f, F.s, F.lut[f.vmul(lam, f.elements)], Origin("composite", "scale_in"))


def translate_in(F: VecFunc, a: int) -> VecFunc:
    """x -> F(x + a)."""
    f = F.field
    return VecFunc(f, F.s, F.lut[f.vadd(f.elements, a)], Origin("composite", "translate_in"))


def translate_out(F: VecFunc, b: int) -> VecFunc:
    """x -> F(x) + b; b must lie in the codomain."""
    return VecFunc(F.field, F.s, F.field.vadd(F.lut, b), Origin("composite", "translate_out"))


def odd_part(F: VecFunc) -> VecFunc:
    """(F(x) - F(-x)) / 2, odd characteristic only."""
    f = F.field
    half = f.inv(2 % f.p)
    minus = F.lut[f.vneg(f.elements)]
    return VecFunc(f, F.s, f.vmul(half, f.vsub(F.lut, minus)), Origin("composite", "odd_part"))


def even_part(F: VecFunc) -> VecFunc:
    f = F.field
    half = f.inv(2 % f.p)
    minus = F.lut[f.vneg(f.elements)]
    return VecFunc(f, F.s, f.vmul(half, f.vadd(F.lut, minus)), Origin("composite", "even_part"))


def cc_derivative(F: VecFunc, c: int, a: int) -> VecFunc:
    """x -> F(cx + a) - c F(x)."""
    f = F.field
    x = f.elements
    shifted = F.lut[f.vadd(f.vmul(c, x), a)]
    return VecFunc(f, F.s, f.vsub(shifted, f.vmul(c, F.lut)), Origin("composite", "cc_derivative"))


# --- Permutations ---

def is_permutation(F: VecFunc) -> bool:
    return F.s == F.n and np.unique(F.lut).size == F.field.order


def inverse(F: VecFunc) -> VecFunc:
    if not is_permutation(F):
        raise NotAPermutation("function is not a permutation of the field")
    inv = np.empty_like(F.lut)
    inv[F.lut] = F.field.elements
    return VecFunc(F.field, F.s, inv, Origin("composite", "inverse"))


# --- File I/O and CLI function specs ---

def save_lut(F: VecFunc, filename: str) -> None:
    f = F.field
    with open(filename, "w") as fh:
        fh.write(f"{f.p} {f.n} {F.s} {f.modulus}\n")
        for y in F.lut:
            fh.write(f"{int(y)}\n")
    logger.info("wrote LUT for %s to %s", f.spec, filename)


def load_lut(filename: str) -> VecFunc:
    try:
        with open(filename, "r") as fh:
            lines = [line.strip() for line in fh if line.strip()]
    except OSError as exc:
        raise LutFormatError(f"cannot read {filename}: {exc}") from exc
    if not lines:
        raise LutFormatError(f"{filename} is empty")
    try:
        p, n, s, modulus = (int(t) for t in lines[0].split())
        values = [int(t) for t in lines[1:]]
    except ValueError as exc:
        raise LutFormatError(f"{filename}: malformed line ({exc})") from exc
    f = field_create(p, n, modulus)
    if len(values) != f.order:
        raise LutFormatError(f"{filename}: expected {f.order} values, found {len(values)}")
    return from_lut(f, values, s)


def parse_func_spec(f: FieldCtx, text: str, s: Optional[int] = None) -> VecFunc:
    """Parse `power:d`, `poly:c0,c1,...` or `lutfile:PATH`."""
    kind, sep, body = (text or "").partition(":")
    if not sep:
        raise FuncSpecError(f"cannot parse function spec {text!r}")
    kind = kind.strip().lower()
    try:
        if kind == "power":
            return from_power(f, int(body), s)
        if kind == "poly":
            return from_univariate(f, [int(t) for t in body.split(",") if t.strip()], s)
    except ValueError as exc:
        raise FuncSpecError(f"bad number in function spec {text!r}") from exc
    if kind == "lutfile":
        F = load_lut(body)
        if F.field != f:
            raise DomainMismatch(f"LUT is over {F.field.spec}, command uses {f.spec}")
        return F
    raise FuncSpecError(f"unknown function kind {kind!r} (power, poly, lutfile)")
