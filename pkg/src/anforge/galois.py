"""
Arithmetic in GF(p^m) and search for primitive polynomials.

Elements are tuples of m coefficients over GF(p), position i holding the
coefficient of xi^i. An element is identified with the integer whose base-p
digits are its coefficients (little-endian), which is also how alphabet
symbols are mapped to field elements when q = p^m is used as an alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .core import check_space
from .errors import DomainError

FieldElement = tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """(p, m) with q = p**m, or None if q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while q % p:
        p += 1
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    return (p, m) if rest == 1 else None


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int
    modulus: tuple[int, ...]  # c_0..c_m, monic (c_m = 1)
    primitive: bool = True

    @property
    def order(self) -> int:
        return self.p ** self.m

    def element(self, symbol: int) -> FieldElement:
        if not 0 <= symbol < self.order:
            raise DomainError(f"symbol {symbol} outside 0..{self.order - 1}")
        digits = []
        for _ in range(self.m):
            symbol, d = divmod(symbol, self.p)
            digits.append(d)
        return tuple(digits)

    def symbol(self, a: FieldElement) -> int:
        s = 0
        for c in reversed(a):
            s = s * self.p + c
        return s

    @property
    def zero(self) -> FieldElement:
        return (0,) * self.m

    @property
    def one(self) -> FieldElement:
        return (1,) + (0,) * (self.m - 1)

    @property
    def generator(self) -> FieldElement:
        """The class of xi (for m = 1 this is -c_0)."""
        if self.m == 1:
            return ((-self.modulus[0]) % self.p,)
        return (0, 1) + (0,) * (self.m - 2)

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: dict) -> "FieldSpec":
        spec = cls(int(data["p"]), int(data["m"]), tuple(int(c) for c in data["modulus"]))
        _validate_spec(spec)
        return spec


def _validate_spec(spec: FieldSpec) -> None:
    if not is_prime(spec.p):
        raise DomainError(f"{spec.p} is not prime")
    if len(spec.modulus) != spec.m + 1 or spec.modulus[-1] != 1:
        raise DomainError("modulus must be monic of degree m")


def _check(spec: FieldSpec, *elements: Sequence[int]) -> None:
    for a in elements:
        if len(a) != spec.m or any(not 0 <= c < spec.p for c in a):
            raise DomainError(f"{tuple(a)} is not a reduced element of GF({spec.p}^{spec.m})")


def add(spec: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    _check(spec, a, b)
    return tuple((x + y) % spec.p for x, y in zip(a, b))


def neg(spec: FieldSpec, a: FieldElement) -> FieldElement:
    _check(spec, a)
    return tuple((-x) % spec.p for x in a)


def sub(spec: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    return add(spec, a, neg(spec, b))


def mul(spec: FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement:
    _check(spec, a, b)
    p, m = spec.p, spec.m
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # reduce with xi^m = -(c_0 + ... + c_{m-1} xi^{m-1})
    for top in range(2 * m - 2, m - 1, -1):
        c = prod[top]
        if c:
            prod[top] = 0
            for i in range(m):
                prod[top - m + i] = (prod[top - m + i] - c * spec.modulus[i]) % p
    return tuple(prod[:m])


def power(spec: FieldSpec, a: FieldElement, e: int) -> FieldElement:
    result, base = spec.one, a
    while e:
        if e & 1:
            result = mul(spec, result, base)
        base = mul(spec, base, base)
        e >>= 1
    return result


def element_order(spec: FieldSpec, a: FieldElement) -> int:
    """Multiplicative order of a nonzero element, by repeated multiplication."""
    _check(spec, a)
    if not any(a):
        raise DomainError("zero has no multiplicative order")
    t, x = 1, a
    while x != spec.one:
        x = mul(spec, x, a)
        t += 1
        if t > spec.order:
            raise DomainError("element is not invertible (modulus is not irreducible)")
    return t


def inverse(spec: FieldSpec, a: FieldElement) -> FieldElement:
    return power(spec, a, element_order(spec, a) - 1)


# --------------------------------------------------------------------------
# symbol-level tables and primitive polynomial search over GF(q)


@dataclass(frozen=True, eq=False)
class SymbolField:
    """GF(q) on the symbols 0..q-1, with full operation tables."""

    spec: FieldSpec
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray

    @property
    def q(self) -> int:
        return self.spec.order


def symbol_field(spec: FieldSpec) -> SymbolField:
    q = spec.order
    elems = [spec.element(s) for s in range(q)]
    add_t = np.array([[spec.symbol(add(spec, a, b)) for b in elems] for a in elems], dtype=np.int64)
    mul_t = np.array([[spec.symbol(mul(spec, a, b)) for b in elems] for a in elems], dtype=np.int64)
    neg_t = np.array([spec.symbol(neg(spec, a)) for a in elems], dtype=np.int64)
    for t in (add_t, mul_t, neg_t):
        t.flags.writeable = False
    return SymbolField(spec, add_t, mul_t, neg_t)


@lru_cache(maxsize=None)
def field_of_order(q: int) -> SymbolField:
    """GF(q) for a prime power q, built on the smallest primitive modulus."""
    pm = prime_power(q)
    if pm is None:
        raise DomainError(f"{q} is not a prime power")
    return symbol_field(find_primitive_polynomial(*pm))


def companion_images(field: SymbolField, coeffs: Sequence[int]) -> np.ndarray:
    """Images of multiplication by xi on GF(q)^n, modulo xi^n + sum c_i xi^i.

    Coordinate i of the result is x_{i-1} - c_i * x_{n-1} (with x_{-1} = 0).
    """
    q, n = field.q, len(coeffs)
    size = check_space(n, q)
    idx = np.arange(size, dtype=np.int64)
    top = (idx // q ** (n - 1)) % q
    images = np.zeros(size, dtype=np.int64)
    for i in range(n):
        prev = (idx // q ** (i - 1)) % q if i else np.zeros(size, dtype=np.int64)
        fb = field.neg[field.mul[coeffs[i], top]]
        images += field.add[prev, fb] * q ** i
    return images


def _orbit_length(images: np.ndarray, start: int, cap: int) -> int:
    nxt = images.tolist()
    x, t = nxt[start], 1
    while x != start:
        x = nxt[x]
        t += 1
        if t > cap:
            return -1
    return t


def primitive_coefficients(field: SymbolField, n: int) -> tuple[int, ...]:
    """Low coefficients c_0..c_{n-1} of the smallest primitive monic degree-n polynomial over GF(q).

    Candidates are tried by increasing ``sum(c_i * q**i)``; a candidate is
    accepted when xi has multiplicative order q**n - 1, checked by walking the
    orbit of 1 under multiplication by xi.
    """
    q = field.q
    target = q ** n - 1
    one = 1  # configuration (1, 0, ..., 0)
    for code in range(q ** n):
        coeffs = [(code // q ** i) % q for i in range(n)]
        if coeffs[0] == 0:
            continue
        images = companion_images(field, coeffs)
        if _orbit_length(images, one, target) == target:
            return tuple(coeffs)
    raise DomainError(f"no primitive polynomial of degree {n} over GF({q})")  # pragma: no cover


@lru_cache(maxsize=None)
def find_primitive_polynomial(p: int, m: int) -> FieldSpec:
    """Smallest primitive monic polynomial of degree m over GF(p).

    "Smallest" compares coefficient sequences read from the highest degree
    down, i.e. by the integer ``sum(c_i * p**i)``; for p=2, m=3 this gives
    xi^3 + xi + 1.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if m < 1:
        raise DomainError(f"degree must be >= 1, got {m}")
    prime = SymbolField(
        FieldSpec(p, 1, (p - 1, 1), primitive=False),
        np.add.outer(np.arange(p), np.arange(p)) % p,
        np.multiply.outer(np.arange(p), np.arange(p)) % p,
        (-np.arange(p)) % p,
    )
    coeffs = primitive_coefficients(prime, m)
    return FieldSpec(p, m, tuple(coeffs) + (1,))
