"""
Finite Field Substrate GF(p^n)

Exact arithmetic in GF(p^n) on top of galois, with the element encoding used
by every other module and every file format:

- enc(x) = sum x_i p^i for x = sum x_i alpha^i in the polynomial basis
- canonical modulus = lexicographically least monic irreducible of degree n
- scalar operations on Python ints, vectorised ones on numpy int arrays
- relative traces, subfields and F_p coordinates of subfields
"""

import logging
import re
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import FrozenSet, Optional, Union

import galois
import numpy as np

import settings
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

logger = logging.getLogger(__name__)

ArrayLike = Union[int, np.ndarray]

_FIELD_SPEC = re.compile(
    r"^\s*gf\(\s*(\d+)\s*\^\s*(\d+)\s*(?:;\s*mod\s*=\s*(\d+)\s*)?\)\s*$",
    re.IGNORECASE,
)


def _ints(a) -> np.ndarray:
    """Field array (or plain array) -> int64 ndarray of encodings."""
    if isinstance(a, galois.FieldArray):
        a = a.view(np.ndarray)
    return np.asarray(a).astype(np.int64)


@lru_cache(maxsize=None)
def canonical_modulus(p: int, n: int) -> int:
    """Coefficient integer of the least monic irreducible of degree n over F_p."""
    if n == 1:
        return p  # x - 0
    return int(galois.irreducible_poly(p, n, method="min"))


@dataclass(frozen=True)
class SubfieldCoords:
    """F_p coordinates of GF(p^s) inside GF(p^n).

    For s = n the basis is the polynomial basis, so coordinates are the base-p
    digits of enc. For s < n the basis is 1, b, ..., b^{s-1} with b a primitive
    element of the subfield.
    """
    p: int
    s: int
    basis: tuple
    to_index: np.ndarray = dc_field(repr=False, compare=False)
    from_index: np.ndarray = dc_field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.s

    def to_coords(self, xs: ArrayLike) -> np.ndarray:
        idx = self.to_index[np.asarray(xs, dtype=np.int64)]
        if np.any(idx < 0):
            raise InvalidC(f"element outside GF({self.p}^{self.s})")
        return (idx[..., None] // self.p ** np.arange(self.s)) % self.p

    def from_coords(self, vecs: np.ndarray) -> np.ndarray:
        vecs = np.asarray(vecs, dtype=np.int64) % self.p
        return self.from_index[(vecs * self.p ** np.arange(self.s)).sum(axis=-1)]


@dataclass(frozen=True)
class FieldCtx:
    """Immutable description of GF(p^n).

    Equality and hashing use (p, n, modulus) only, so contexts built twice
    for the same field compare equal.
    """
    p: int
    n: int
    modulus: int
    GF: type = dc_field(repr=False, compare=False)
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __reduce__(self):
        return (field_create, (self.p, self.n, self.modulus))

    # --- Basic attributes ---

    @cached_property
    def order(self) -> int:
        return self.p ** self.n

    @property
    def spec(self) -> str:
        if self.modulus == canonical_modulus(self.p, self.n):
            return f"gf({self.p}^{self.n})"
        return f"gf({self.p}^{self.n};mod={self.modulus})"

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    @cached_property
    def primitive_element(self) -> int:
        return int(self.GF.primitive_element)

    @property
    def has_tables(self) -> bool:
        return self.order <= settings.TABLE_LIMIT

    @cached_property
    def exp_table(self) -> Optional[np.ndarray]:
        """g^k for 0 <= k < p^n - 1, or None above TABLE_LIMIT."""
        if not self.has_tables:
            return None
        g = self.GF(self.primitive_element)
        return _ints(g ** np.arange(self.order - 1))

    @cached_property
    def log_table(self) -> Optional[np.ndarray]:
        if self.exp_table is None:
            return None
        log = np.full(self.order, -1, dtype=np.int64)
        log[self.exp_table] = np.arange(self.order - 1)
        return log

    def check(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.order:
            raise BadParameters(f"{x} is not an element of {self.spec}")
        return x

    # --- Scalar arithmetic ---

    def add(self, x: int, y: int) -> int:
        return int(self.GF(self.check(x)) + self.GF(self.check(y)))

    def sub(self, x: int, y: int) -> int:
        return int(self.GF(self.check(x)) - self.GF(self.check(y)))

    def neg(self, x: int) -> int:
        return int(-self.GF(self.check(x)))

    def mul(self, x: int, y: int) -> int:
        return int(self.GF(self.check(x)) * self.GF(self.check(y)))

    def inv(self, x: int) -> int:
        if self.check(x) == 0:
            raise DivideByZero("0 has no inverse")
        return int(self.GF(x) ** -1)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, k: int) -> int:
        x = self.check(x)
        k = int(k)
        if x == 0:
            if k < 0:
                raise DivideByZero("negative power of 0")
            return 1 if k == 0 else 0
        return int(self.GF(x) ** (k % (self.order - 1)))

    def frobenius(self, x: int, k: int = 1) -> int:
        return self.pow(x, self.p ** (k % self.n))

    # --- Vectorised arithmetic (int arrays in, int arrays out) ---

    def arr(self, xs: ArrayLike):
        return self.GF(np.asarray(xs, dtype=np.int64))

    def vadd(self, xs: ArrayLike, ys: ArrayLike) -> np.ndarray:
        return _ints(self.arr(xs) + self.arr(ys))

    def vsub(self, xs: ArrayLike, ys: ArrayLike) -> np.ndarray:
        return _ints(self.arr(xs) - self.arr(ys))

    def vneg(self, xs: ArrayLike) -> np.ndarray:
        return _ints(-self.arr(xs))

    def vmul(self, xs: ArrayLike, ys: ArrayLike) -> np.ndarray:
        return _ints(self.arr(xs) * self.arr(ys))

    def vinv(self, xs: ArrayLike) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if np.any(xs == 0):
            raise DivideByZero("0 has no inverse")
        return _ints(self.arr(xs) ** -1)

    def vpow(self, xs: ArrayLike, k: int) -> np.ndarray:
        """x^k with 0^0 = 1 and 0^k = 0 for k > 0."""
        xs = np.asarray(xs, dtype=np.int64)
        k = int(k)
        if k == 0:
            return np.ones_like(xs)
        if k < 0:
            if np.any(xs == 0):
                raise DivideByZero("negative power of 0")
            return _ints(self.arr(xs) ** (k % (self.order - 1)))
        k_red = (k - 1) % (self.order - 1) + 1
        return _ints(self.arr(xs) ** k_red)

    # --- Traces and subfields ---

    def _check_divisor(self, s: int, t: Optional[int] = None) -> int:
        t = self.n if t is None else t
        if s < 1 or t < 1 or self.n % t or t % s:
            raise NotADivisor(f"{s} does not divide {t} (field degree {self.n})")
        return t

    def vtrace(self, xs: ArrayLike, s: int, from_degree: Optional[int] = None) -> np.ndarray:
        """Relative trace Tr^s_t(x) = sum_{j < t/s} x^{p^{js}}, t = from_degree or n.

        Inputs are assumed to lie in GF(p^t); with t = n this is Tr^s_n.
        """
        t = self._check_divisor(s, from_degree)
        a = self.arr(xs)
        acc = a.copy()
        term = a
        for _ in range(t // s - 1):
            term = term ** (self.p ** s)
            acc = acc + term
        return _ints(acc)

    def trace(self, x: int, s: int, from_degree: Optional[int] = None) -> int:
        return int(self.vtrace(self.check(x), s, from_degree))

    @cached_property
    def abs_trace(self) -> np.ndarray:
        """Tr_1^n of every element, as residues 0..p-1."""
        return self.vtrace(self.elements, 1)

    def subfield_mask(self, s: int) -> np.ndarray:
        self._check_divisor(s)
        key = ("mask", s)
        if key not in self._cache:
            frob = _ints(self.arr(self.elements) ** (self.p ** s))
            self._cache[key] = frob == self.elements
        return self._cache[key]

    def subfield_array(self, s: int) -> np.ndarray:
        """Sorted encodings of GF(p^s) inside this field."""
        return np.flatnonzero(self.subfield_mask(s)).astype(np.int64)

    def in_subfield(self, x: int, s: int) -> bool:
        return bool(self.subfield_mask(s)[self.check(x)])

    def nonzero_subfield(self, s: int, exclude_one: bool = False) -> np.ndarray:
        sub = self.subfield_array(s)
        sub = sub[sub != 0]
        if exclude_one:
            sub = sub[sub != 1]
        return sub

    # --- F_p coordinates ---

    def to_vec(self, xs: ArrayLike) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        return (xs[..., None] // self.p ** np.arange(self.n)) % self.p

    def from_vec(self, vecs: np.ndarray) -> np.ndarray:
        vecs = np.asarray(vecs, dtype=np.int64) % self.p
        return (vecs * self.p ** np.arange(self.n)).sum(axis=-1)

    def coords(self, s: int) -> SubfieldCoords:
        self._check_divisor(s)
        key = ("coords", s)
        if key in self._cache:
            return self._cache[key]
        q = self.order
        if s == self.n:
            basis = tuple(self.p ** i for i in range(self.n))
            ident = np.arange(q, dtype=np.int64)
            coords = SubfieldCoords(self.p, s, basis, ident, ident)
        else:
            beta = self.pow(self.primitive_element, (q - 1) // (self.p ** s - 1))
            basis = tuple(self.pow(beta, j) for j in range(s))
            idx = np.arange(self.p ** s, dtype=np.int64)
            digits = (idx[:, None] // self.p ** np.arange(s)) % self.p
            values = np.zeros(self.p ** s, dtype=np.int64)
            for j, b in enumerate(basis):
                # digits are prime-field elements, whose encodings are the digits
                values = self.vadd(values, self.vmul(digits[:, j], b))
            to_index = np.full(q, -1, dtype=np.int64)
            to_index[values] = idx
            coords = SubfieldCoords(self.p, s, basis, to_index, values)
        self._cache[key] = coords
        return coords

    def scale_matrix(self, c: int, s: Optional[int] = None) -> np.ndarray:
        """F_p-matrix of y -> c*y on GF(p^s) in the coordinates of coords(s)."""
        s = self.n if s is None else s
        if not self.in_subfield(c, s):
            raise InvalidC(f"c={c} is not in GF({self.p}^{s})")
        co = self.coords(s)
        images = self.vmul(c, np.array(co.basis, dtype=np.int64))
        return co.to_coords(images).T.copy()


def field_create(p: int, n: int, modulus: Optional[int] = None) -> FieldCtx:
    """Build (or fetch from cache) the context for GF(p^n).

    Args:
        p: prime characteristic
        n: extension degree >= 1
        modulus: monic degree-n irreducible as coefficient integer; canonical if None

    Returns:
        FieldCtx with a verified irreducible modulus
    """
    p, n = int(p), int(n)
    if modulus is None:
        if p < 2 or not galois.is_prime(p):
            raise NotPrime(f"{p} is not prime")
        modulus = canonical_modulus(p, n) if n >= 1 else 0
    return _field_create(p, n, int(modulus))


@lru_cache(maxsize=None)
def _field_create(p: int, n: int, modulus: int) -> FieldCtx:
    if p < 2 or not galois.is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if n < 1:
        raise DegreeMismatch(f"degree must be >= 1, got {n}")
    order = p ** n
    if order > settings.MAX_ORDER:
        raise BadParameters(f"GF({p}^{n}) exceeds the supported order {settings.MAX_ORDER}")
    if not order <= modulus < 2 * order:
        raise DegreeMismatch(f"modulus {modulus} is not monic of degree {n} over F_{p}")

    if n == 1:
        gf_class = galois.GF(p)
    else:
        poly = galois.Poly.Int(modulus, field=galois.GF(p))
        if not poly.is_irreducible():
            raise ReducibleModulus(f"{poly} is reducible over F_{p}")
        gf_class = galois.GF(order, irreducible_poly=poly)

    ctx = FieldCtx(p, n, modulus, gf_class)
    logger.debug("created %s (modulus %d, primitive element %d)", ctx.spec, modulus, ctx.primitive_element)
    return ctx


def parse_field_spec(text: str) -> FieldCtx:
    """Parse `gf(p^n)` or `gf(p^n;mod=M)`."""
    match = _FIELD_SPEC.match(text or "")
    if not match:
        raise FieldSpecError(f"cannot parse field spec {text!r}; expected gf(p^n) or gf(p^n;mod=M)")
    p, n, mod = match.groups()
    return field_create(int(p), int(n), None if mod is None else int(mod))


# --- Module-level operations (thin wrappers for call sites that prefer functions) ---

def add(f: FieldCtx, x: int, y: int) -> int:
    return f.add(x, y)


def sub(f: FieldCtx, x: int, y: int) -> int:
    return f.sub(x, y)


def neg(f: FieldCtx, x: int) -> int:
    return f.neg(x)


def mul(f: FieldCtx, x: int, y: int) -> int:
    return f.mul(x, y)


def inv(f: FieldCtx, x: int) -> int:
    return f.inv(x)


def div(f: FieldCtx, x: int, y: int) -> int:
    return f.div(x, y)


def power(f: FieldCtx, x: int, k: int) -> int:
    return f.pow(x, k)


def trace(f: FieldCtx, x: int, s: int) -> int:
    return f.trace(x, s)


def subfield_elements(f: FieldCtx, s: int) -> FrozenSet[int]:
    return frozenset(int(x) for x in f.subfield_array(s))
