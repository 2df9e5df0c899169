"""Exact arithmetic in GF(p) (p prime, p <= 2**16) and GF(2**m) (m <= 16).

Elements are plain integers in ``[0, q)``.  GF(2**m) elements are m-bit
integers whose bits are polynomial coefficients (bit k <-> x**k), reduced
modulo a fixed irreducible polynomial.  Every arithmetic method accepts
either Python ints or numpy integer arrays, so the linear algebra layer can
operate on whole rows at once.

Default GF(2**m) moduli (bit-vector, highest bit = x**m)::

    m   modulus    polynomial
    2   0x7        x^2 + x + 1
    3   0xB        x^3 + x + 1
    4   0x13       x^4 + x + 1
    5   0x25       x^5 + x^2 + 1
    6   0x43       x^6 + x + 1
    7   0x83       x^7 + x + 1
    8   0x11D      x^8 + x^4 + x^3 + x^2 + 1
    9   0x211      x^9 + x^4 + 1
    10  0x409      x^10 + x^3 + 1
    11  0x805      x^11 + x^2 + 1
    12  0x1053     x^12 + x^6 + x^4 + x + 1
    13  0x201B     x^13 + x^4 + x^3 + x + 1
    14  0x4443     x^14 + x^10 + x^6 + x + 1
    15  0x8003     x^15 + x + 1
    16  0x1100B    x^16 + x^12 + x^3 + x + 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, FieldMismatchError

MAX_PRIME = 1 << 16
MAX_EXTENSION = 16

DEFAULT_MODULI = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def poly_degree(a: int) -> int:
    return a.bit_length() - 1


def poly_mod(a: int, m: int) -> int:
    """Remainder of a modulo m, both GF(2)[x] polynomials as bit-vectors."""
    dm = poly_degree(m)
    while a and poly_degree(a) >= dm:
        a ^= m << (poly_degree(a) - dm)
    return a


def poly_mulmod(a: int, b: int, m: int) -> int:
    dm = poly_degree(m)
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> dm) & 1:
            a ^= m
    return r


def is_irreducible(poly: int) -> bool:
    """Brute-force factor search over all divisors of degree <= deg/2."""
    d = poly_degree(poly)
    if d < 1:
        return False
    for cand in range(2, 1 << (d // 2 + 1)):
        if poly_mod(poly, cand) == 0:
            return False
    return True


class FieldSpec:
    """The field GF(q), q = p**m.

    Only m == 1 (any prime p <= 2**16) or p == 2 (m <= 16) is supported.
    Instances are immutable and compare equal iff (p, m, modulus) agree.
    """

    def __init__(self, p: int, m: int = 1, modulus: int | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if m == 1:
            if p > MAX_PRIME:
                raise ValueError(f"prime fields are limited to p <= {MAX_PRIME}")
            if modulus is not None:
                raise ValueError("a modulus is only meaningful for GF(2^m), m > 1")
        else:
            if p != 2:
                raise ValueError("extension fields are supported only in characteristic 2")
            if m > MAX_EXTENSION:
                raise ValueError(f"GF(2^m) is limited to m <= {MAX_EXTENSION}")
            if modulus is None:
                modulus = DEFAULT_MODULI[m]
            if poly_degree(modulus) != m:
                raise ValueError(f"modulus {modulus:#x} does not have degree {m}")
            if not is_irreducible(modulus):
                raise ValueError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.q = p**m
        self._inv_table = None
        if m > 1:
            self._build_tables()

    # -- construction helpers -------------------------------------------------

    def _build_tables(self):
        q, mod = self.q, self.modulus
        order = q - 1
        factors = _prime_factors(order)
        gen = None
        for g in range(2, q):
            if all(self._slow_pow(g, order // f) != 1 for f in factors):
                gen = g
                break
        if gen is None:  # q == 2 never reaches here
            gen = 1
        exp = [0] * (2 * order)
        log = [0] * q
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = poly_mulmod(x, gen, mod)
        for i in range(order, 2 * order):
            exp[i] = exp[i - order]
        self._exp = exp
        self._log = log
        self._exp_np = np.array(exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)
        self.generator = gen

    def _slow_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = poly_mulmod(r, a, self.modulus)
            a = poly_mulmod(a, a, self.modulus)
            e >>= 1
        return r

    def _inverse_table(self):
        if self._inv_table is None:
            p = self.p
            table = np.zeros(p, dtype=np.int64)
            for a in range(1, p):
                table[a] = pow(a, p - 2, p)
            self._inv_table = table
        return self._inv_table

    # -- identity -------------------------------------------------------------

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    @property
    def key(self):
        return (self.p, self.m, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.q})"
        if self.modulus != DEFAULT_MODULI[self.m]:
            return f"GF({self.q}, modulus={self.modulus:#x})"
        return f"GF({self.q})"

    def spec_string(self) -> str:
        return f"gf({self.q})"

    # -- elements -------------------------------------------------------------

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(self, self.canonical(value))

    def canonical(self, value: int) -> int:
        if self.m == 1:
            return int(value) % self.p
        value = int(value)
        if not 0 <= value < self.q:
            raise DomainError(f"{value} is not an element of {self!r}")
        return value

    def elements(self):
        return range(self.q)

    def array(self, values) -> np.ndarray:
        arr = np.array(values, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            if self.m == 1:
                arr %= self.p
            else:
                raise DomainError(f"values out of range for {self!r}")
        return arr

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def random(self, rng: np.random.Generator, shape=None):
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    # -- arithmetic (ints or arrays) -----------------------------------------

    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.p
        return a ^ b

    def sub(self, a, b):
        if self.m == 1:
            return (a - b) % self.p
        return a ^ b

    def neg(self, a):
        if self.m == 1:
            return (-a) % self.p
        return a

    def mul(self, a, b):
        if self.m == 1:
            return (a * b) % self.p
        if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
            a = np.asarray(a, dtype=np.int64)
            b = np.asarray(b, dtype=np.int64)
            r = self._exp_np[self._log_np[a] + self._log_np[b]]
            return np.where((a == 0) | (b == 0), 0, r)
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a):
        if isinstance(a, np.ndarray):
            if np.any(a == 0):
                raise DomainError("zero has no multiplicative inverse")
            if self.m == 1:
                return self._inverse_table()[a]
            return self._exp_np[(self.q - 1) - self._log_np[a]]
        if a == 0:
            raise DomainError("zero has no multiplicative inverse")
        if self.m == 1:
            return pow(int(a), self.p - 2, self.p)
        return self._exp[(self.q - 1) - self._log[a]]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def dot(self, u, v) -> int:
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if self.m == 1:
            return int(np.dot(u, v) % self.p)
        return int(np.bitwise_xor.reduce(self.mul(u, v), axis=None)) if u.size else 0

    def matvec(self, M, x) -> np.ndarray:
        M = np.asarray(M, dtype=np.int64)
        x = np.asarray(x, dtype=np.int64)
        if self.m == 1:
            return (M @ x) % self.p
        if M.shape[1] == 0:
            return np.zeros(M.shape[0], dtype=np.int64)
        return np.bitwise_xor.reduce(self.mul(M, x[None, :]), axis=1)

    def matmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.m == 1:
            return (A @ B) % self.p
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            out ^= self.mul(A[:, k : k + 1], B[k : k + 1, :])
        return out


@lru_cache(maxsize=None)
def GF(q: int, modulus: int | None = None) -> FieldSpec:
    """Field of order q (a prime, or a power of two up to 2**16)."""
    if q < 2:
        raise ValueError("field order must be >= 2")
    if is_prime(q):
        if modulus is not None:
            raise ValueError("a modulus is only meaningful for GF(2^m), m > 1")
        return FieldSpec(q)
    if q & (q - 1) == 0:
        return FieldSpec(2, q.bit_length() - 1, modulus)
    raise ValueError(f"unsupported field order {q}: need a prime or a power of two")


_FIELD_RE = re.compile(r"^\s*gf\s*\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?\)\s*$", re.IGNORECASE)


def parse_field(text: str, modulus: str | int | None = None) -> FieldSpec:
    """Parse ``gf(q)`` (also ``gf(2^m)``) with an optional hex modulus."""
    match = _FIELD_RE.match(text)
    if not match:
        raise ValueError(f"cannot parse field {text!r}; expected gf(q)")
    q = int(match.group(1))
    if match.group(2) is not None:
        q = q ** int(match.group(2))
    if isinstance(modulus, str):
        modulus = int(modulus, 16)
    return GF(q, modulus)


@dataclass(frozen=True)
class FieldElement:
    """A canonical element of a FieldSpec; supports + - * / and unary -."""

    field: FieldSpec
    value: int

    def _peer(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine {self.field!r} and {other.field!r}")
            return other.value
        if isinstance(other, int):
            return self.field.canonical(other)
        return NotImplemented

    def __add__(self, other):
        v = self._peer(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._peer(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.sub(self.value, v))

    def __rsub__(self, other):
        v = self._peer(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.sub(v, self.value))

    def __mul__(self, other):
        v = self._peer(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._peer(other)
        if v is NotImplemented:
            return v
        return FieldElement(self.field, self.field.div(self.value, v))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value}@{self.field!r}"


def _check_same(a: FieldElement, b: FieldElement):
    if a.field != b.field:
        raise FieldMismatchError(f"operands live in {a.field!r} and {b.field!r}")


def fadd(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return a + b


def fmul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return a * b


def finv(a: FieldElement) -> FieldElement:
    return a.inverse()


def fneg(a: FieldElement) -> FieldElement:
    return -a
