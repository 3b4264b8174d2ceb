"""Arithmetic in F_p and small extension fields F_{p^k}.

Elements of a prime field are plain ints in [0, p). Elements of an
extension field are k-tuples of coefficients (low degree first) reduced
modulo a monic irreducible polynomial. Every element also has an integer
key ``sum(c_i * p**i)`` in [0, q), which is what the numeric kernels see.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import DivisionByZero, NotPrime, ZeroElement
from .ntheory import FactoredInteger, factor, is_prime, make_rng

Elem = Union[int, tuple]

MAX_Q = 2**62


# -- polynomials over F_p, coefficient lists low degree first --------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _x_pow_mod(e: int, m: Sequence[int], p: int) -> list[int]:
    """x**e mod m by square-and-multiply."""
    result = [1]
    base = _pmod([0, 1], m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial of degree k over F_p.

    Irreducible iff x^(p^k) = x mod f and gcd(x^(p^(k/r)) - x, f) = 1 for
    every prime r dividing k.
    """
    f = _trim([c % p for c in modulus])
    k = len(f) - 1
    if k < 1 or f[-1] != 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _psub(_x_pow_mod(p**k, f, p), _pmod(x, f, p), p):
        return False
    for r in factor(k).primes:
        h = _psub(_x_pow_mod(p ** (k // r), f, p), x, p)
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


@dataclass(frozen=True)
class FieldCtx:
    p: int
    k: int = 1
    modulus: tuple[int, ...] | None = None

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    @property
    def zero(self) -> Elem:
        return 0 if self.k == 1 else (0,) * self.k

    @property
    def one(self) -> Elem:
        return 1 if self.k == 1 else (1,) + (0,) * (self.k - 1)

    def __repr__(self):
        if self.k == 1:
            return f"FieldCtx(p={self.p}, k=1, q={self.p})"
        return f"FieldCtx(p={self.p}, k={self.k}, q={self.q}, modulus={list(self.modulus)})"

    # -- representation ---------------------------------------------------

    def elem(self, x) -> Elem:
        """Coerce an int (embedded as a constant) or coefficient sequence."""
        if self.k == 1:
            if isinstance(x, (tuple, list)):
                if len(x) != 1:
                    raise ValueError(f"{x!r} is not an element of F_{self.p}")
                x = x[0]
            return int(x) % self.p
        if isinstance(x, (int, np.integer)):
            return (int(x) % self.p,) + (0,) * (self.k - 1)
        coeffs = [int(c) % self.p for c in x]
        if len(coeffs) > self.k:
            return tuple(_pmod(coeffs, self.modulus, self.p) + [0] * self.k)[: self.k]
        return tuple(coeffs + [0] * (self.k - len(coeffs)))

    def is_zero(self, a: Elem) -> bool:
        return a == self.zero

    def encode(self, a: Elem) -> int:
        if self.k == 1:
            return a
        key = 0
        for c in reversed(a):
            key = key * self.p + c
        return key

    def decode(self, key: int) -> Elem:
        key = int(key)
        if self.k == 1:
            return key
        out = []
        for _ in range(self.k):
            key, c = divmod(key, self.p)
            out.append(c)
        return tuple(out)

    def elements(self, nonzero: bool = True) -> Iterator[Elem]:
        """All elements in ascending key order."""
        for key in range(1 if nonzero else 0, self.q):
            yield self.decode(key)

    # -- arithmetic -------------------------------------------------------

    def add(self, a: Elem, b: Elem) -> Elem:
        if self.k == 1:
            return (a + b) % self.p
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a: Elem, b: Elem) -> Elem:
        if self.k == 1:
            return (a - b) % self.p
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a: Elem) -> Elem:
        if self.k == 1:
            return -a % self.p
        return tuple(-x % self.p for x in a)

    def mul(self, a: Elem, b: Elem) -> Elem:
        if self.k == 1:
            return a * b % self.p
        r = _pmod(_pmul(a, b, self.p), self.modulus, self.p)
        return tuple(r + [0] * (self.k - len(r)))

    def scale(self, c: int, a: Elem) -> Elem:
        """Multiply by an integer constant from F_p."""
        if self.k == 1:
            return c * a % self.p
        return tuple(c * x % self.p for x in a)

    def pow(self, a: Elem, e: int) -> Elem:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: Elem) -> Elem:
        if self.is_zero(a):
            raise DivisionByZero("inverse of zero")
        if self.k == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def mul_keys(self, xs: Sequence[Elem], ys: Sequence[Elem]) -> np.ndarray:
        """Table of encoded products, shape (len(xs), len(ys))."""
        if self.k == 1 and self.p < 2**31:
            a = np.asarray(xs, dtype=np.int64)
            b = np.asarray(ys, dtype=np.int64)
            return (a[:, None] * b[None, :]) % self.p
        out = np.empty((len(xs), len(ys)), dtype=np.int64)
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                out[i, j] = self.encode(self.mul(x, y))
        return out

    # -- serialization ----------------------------------------------------

    def elem_to_json(self, a: Elem):
        return a if self.k == 1 else list(a)

    def elem_from_json(self, obj) -> Elem:
        return self.elem(obj)

    def to_json(self) -> dict:
        if self.k == 1:
            return {"p": self.p, "k": 1}
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldCtx":
        p, k = int(obj["p"]), int(obj.get("k", 1))
        if k == 1:
            return make_prime_field(p)
        return _checked_extension(p, k, [int(c) for c in obj["modulus"]])


def make_prime_field(p: int) -> FieldCtx:
    p = int(p)
    if p >= MAX_Q:
        raise ValueError("q must stay below 2**62")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return FieldCtx(p)


def _checked_extension(p: int, k: int, modulus: list[int]) -> FieldCtx:
    if len(modulus) != k + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p):
        raise ValueError(f"{modulus} is not a monic irreducible polynomial of degree {k} over F_{p}")
    return FieldCtx(p, k, tuple(modulus))


def make_extension_field(p: int, k: int, seed) -> FieldCtx:
    """F_{p^k} with a monic irreducible modulus found by seeded random search."""
    if k < 2:
        raise ValueError("extension degree must be at least 2")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p**k >= MAX_Q:
        raise ValueError("q must stay below 2**62")
    rng = make_rng(seed)
    while True:
        low = [int(c) for c in rng.integers(0, p, size=k)]
        if low[0] == 0:
            continue
        modulus = low + [1]
        if is_irreducible(modulus, p):
            return FieldCtx(p, k, tuple(modulus))


def element_order(ctx: FieldCtx, g: Elem, fact: FactoredInteger | Sequence[tuple[int, int]]) -> int:
    """Multiplicative order of g, given the factorization of q-1."""
    if isinstance(fact, FactoredInteger):
        pairs = fact.factors
    else:
        pairs = tuple((int(r), int(e)) for r, e in fact)
    if ctx.is_zero(g):
        raise ZeroElement("zero has no multiplicative order")
    order = ctx.q - 1
    one = ctx.one
    for r, e in pairs:
        order //= r**e
        x = ctx.pow(g, order)
        while x != one:
            x = ctx.pow(x, r)
            order *= r
    return order
