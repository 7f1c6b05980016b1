"""
Exact cyclotomic integers Z[xi_p]

CycInt holds sum c_i xi^i, i = 0..p-1, reduced with 1 + xi + ... + xi^(p-1) = 0
to the canonical form c_{p-1} = 0, so equality is coefficient equality.

The module also carries array helpers that apply the same arithmetic to numpy
object arrays whose last axis holds the p coefficients; Walsh tables and the
moment convolutions use those to stay exact without per-element objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Tuple, Union

import numpy as np

from errors import NonRationalResult


def _canonical(coeffs: Iterable[int], p: int) -> Tuple[int, ...]:
    cs = [int(a) for a in coeffs]
    if len(cs) != p:
        raise ValueError(f"expected {p} coefficients, got {len(cs)}")
    top = cs[-1]
    return tuple(a - top for a in cs)


@dataclass(frozen=True)
class CycInt:
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _canonical(self.coeffs, len(self.coeffs)))

    @property
    def p(self) -> int:
        return len(self.coeffs)

    @classmethod
    def from_int(cls, p: int, k: int) -> CycInt:
        return cls((int(k),) + (0,) * (p - 1))

    @classmethod
    def zero(cls, p: int) -> CycInt:
        return cls.from_int(p, 0)

    @classmethod
    def one(cls, p: int) -> CycInt:
        return cls.from_int(p, 1)

    @classmethod
    def xi(cls, p: int, i: int = 1) -> CycInt:
        cs = [0] * p
        cs[i % p] = 1
        return cls(tuple(cs))

    @classmethod
    def from_exponent_counts(cls, counts: Iterable[int]) -> CycInt:
        """sum_r counts[r] xi^r, i.e. a character sum given residue counts."""
        return cls(tuple(int(k) for k in counts))

    def _coerce(self, other: Union[int, CycInt]) -> CycInt:
        if isinstance(other, CycInt):
            if other.p != self.p:
                raise ValueError(f"mixing Z[xi_{self.p}] and Z[xi_{other.p}]")
            return other
        if isinstance(other, (int, np.integer)):
            return CycInt.from_int(self.p, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[(i + j) % p] += a * b
        return CycInt(tuple(out))

    __rmul__ = __mul__

    def conj(self) -> CycInt:
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            out[(p - i) % p] += a
        return CycInt(tuple(out))

    def norm2(self) -> CycInt:
        """|z|^2 = z * conj(z)."""
        return self * self.conj()

    def is_rational(self) -> bool:
        return all(a == 0 for a in self.coeffs[1:])

    def rational_value(self) -> int:
        if not self.is_rational():
            raise NonRationalResult(f"{self} is not a rational integer")
        return self.coeffs[0]

    def __int__(self) -> int:
        return self.rational_value()

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.coeffs[0])
        terms = [f"{a}*x^{i}" if i else str(a) for i, a in enumerate(self.coeffs) if a]
        return " + ".join(terms) or "0"


# --- Array helpers: last axis = p coefficients, dtype=object (Python ints) ---

def canon_array(arr: np.ndarray) -> np.ndarray:
    return arr - arr[..., -1:]


def conj_array(arr: np.ndarray) -> np.ndarray:
    p = arr.shape[-1]
    idx = (-np.arange(p)) % p
    out = np.empty_like(arr)
    out[..., idx] = arr
    return canon_array(out)


def mul_array(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Elementwise product in Z[xi_p] with broadcasting over leading axes."""
    p = x.shape[-1]
    shape = np.broadcast_shapes(x.shape, y.shape)
    out = np.zeros(shape, dtype=object)
    for i in range(p):
        for j in range(p):
            out[..., (i + j) % p] = out[..., (i + j) % p] + x[..., i] * y[..., j]
    return canon_array(out)


def to_cycint(vec: np.ndarray) -> CycInt:
    return CycInt(tuple(int(a) for a in vec))


def from_cycint(z: CycInt) -> np.ndarray:
    return np.array(z.coeffs, dtype=object)
