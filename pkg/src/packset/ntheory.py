"""Primality, factoring, random factored integers and primitive roots.

All integers handled here are below 2**62, so Python's built-in ``pow``
with a modulus is exact and fast enough; nothing needs big-integer
libraries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import NoPrimeFound, ZeroElement

if TYPE_CHECKING:
    from .field import FieldCtx

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
# deterministic for every n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def make_rng(seed) -> np.random.Generator:
    """Return a PCG64 generator for an int, SeedSequence or Generator seed."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        raise ValueError("a seed is required; wall-clock entropy is not used")
    return np.random.default_rng(seed)


def split_seed(seed, n: int) -> list[np.random.SeedSequence]:
    if isinstance(seed, np.random.SeedSequence):
        return seed.spawn(n)
    return np.random.SeedSequence(seed).spawn(n)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all n < 2**64."""
    n = int(n)
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for prime, exp in self.factors:
            if prime <= last or exp < 1:
                raise ValueError(f"malformed factorization {self.factors}")
            prod *= prime**exp
            last = prime
        if prod != self.value:
            raise ValueError(f"factors {self.factors} multiply to {prod}, not {self.value}")

    @classmethod
    def from_primes(cls, primes: Iterable[int]) -> "FactoredInteger":
        counts: dict[int, int] = {}
        value = 1
        for r in primes:
            r = int(r)
            counts[r] = counts.get(r, 0) + 1
            value *= r
        return cls(value, tuple(sorted(counts.items())))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.factors)

    def times(self, other: "FactoredInteger") -> "FactoredInteger":
        expanded = [r for r, e in self.factors for _ in range(e)]
        expanded += [r for r, e in other.factors for _ in range(e)]
        return FactoredInteger.from_primes(expanded)

    def to_json(self) -> dict:
        return {"value": self.value, "factors": [[r, e] for r, e in self.factors]}

    @classmethod
    def from_json(cls, obj: dict) -> "FactoredInteger":
        return cls(int(obj["value"]), tuple((int(r), int(e)) for r, e in obj["factors"]))


def random_prime_in_step1_interval(K: int, seed) -> int:
    """Rejection-sample a prime from [K+1, floor(K + K/ln K)].

    Raises NoPrimeFound after ceil(10 (ln K)^2) composite draws; small K
    can give a prime-free interval.
    """
    if K < 3:
        raise ValueError("K must be at least 3")
    rng = make_rng(seed)
    lo = K + 1
    hi = math.floor(K + K / math.log(K))
    budget = math.ceil(10 * math.log(K) ** 2)
    for _ in range(budget):
        k = int(rng.integers(lo, hi, endpoint=True))
        if is_prime(k):
            return k
    raise NoPrimeFound(f"no prime in [{lo}, {hi}] after {budget} draws")


def random_factored_integer(lo: int, hi: int, seed) -> FactoredInteger:
    """Uniform m in [lo, hi] together with its factorization (Kalai).

    A chain hi >= s1 >= s2 >= ... >= 1 is drawn with each step uniform
    below the previous one; the product r of its prime members is kept
    with probability r/hi, which makes r uniform on [1, hi]. Values
    outside [lo, hi] are rejected.
    """
    if not 2 <= lo <= hi:
        raise ValueError("need 2 <= lo <= hi")
    rng = make_rng(seed)
    while True:
        s = hi
        primes = []
        r = 1
        while s > 1:
            s = int(rng.integers(1, s, endpoint=True))
            if is_prime(s):
                primes.append(s)
                r *= s
                if r > hi:
                    break
        if r > hi:
            continue
        if int(rng.integers(1, hi, endpoint=True)) > r:
            continue
        if r >= lo:
            return FactoredInteger.from_primes(primes)


def _pollard_brent(n: int, c: int) -> int:
    """One Brent cycle search; returns a divisor of n (possibly n)."""
    y, m, g, r, q = 2, 128, 1, 1, 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g


def _split(n: int) -> list[int]:
    if is_prime(n):
        return [n]
    c = 1
    while True:
        d = _pollard_brent(n, c)
        if 1 < d < n:
            return _split(d) + _split(n // d)
        c += 1


def factor(n: int) -> FactoredInteger:
    """Trial division by primes below 1000, then Pollard rho (Brent)."""
    n = int(n)
    if n < 2:
        raise ValueError("factor() needs n >= 2")
    primes = []
    d = 2
    while d < 1000 and d * d <= n:
        while n % d == 0:
            primes.append(d)
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        primes.extend(_split(n))
    return FactoredInteger.from_primes(primes)


def is_primitive_root(ctx: "FieldCtx", a, fact: FactoredInteger) -> bool:
    if fact.value != ctx.q - 1:
        raise ValueError(f"factorization of {fact.value} given, field needs q-1 = {ctx.q - 1}")
    a = ctx.elem(a)
    if ctx.is_zero(a):
        raise ZeroElement("zero is never a primitive root")
    one = ctx.one
    return all(ctx.pow(a, fact.value // r) != one for r in fact.primes)


def find_primitive_root(ctx: "FieldCtx", fact: FactoredInteger, seed):
    rng = make_rng(seed)
    while True:
        a = ctx.decode(int(rng.integers(1, ctx.q - 1, endpoint=True)))
        if is_primitive_root(ctx, a, fact):
            return a
