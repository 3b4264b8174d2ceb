"""Error alphabets, error vectors, syndromes and packing-set verification.

A set B of nonzero field elements is a (t, A, q)-packing set when the map
``e -> sum(e_b * b)`` is injective on error vectors whose nonzero entries
lie in A and whose weight is at most t.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from ._config import SORT_THRESHOLD, enum_cap
from .errors import EnumerationTooLarge
from .field import Elem, FieldCtx
from .ntheory import make_rng


class Status(str, enum.Enum):
    UNVERIFIED = "Unverified"
    VERIFIED_EXHAUSTIVE = "VerifiedExhaustive"
    VERIFIED_SUFFICIENT = "VerifiedSufficient"
    REFUTED = "Refuted"
    # verdicts of the sufficient-condition check only
    SUFFICIENT_CHECK_FAILED = "SufficientCheckFailed"
    TOO_LARGE = "TooLarge"


CERTIFIED = (Status.VERIFIED_EXHAUSTIVE, Status.VERIFIED_SUFFICIENT)


@dataclass(frozen=True)
class ErrorAlphabet:
    elements: tuple
    lam: int | None = None

    def __post_init__(self):
        if not self.elements:
            raise ValueError("error alphabet must be nonempty")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("error alphabet has duplicates")

    @classmethod
    def of(cls, ctx: FieldCtx, elements: Iterable) -> "ErrorAlphabet":
        elems = tuple(ctx.elem(a) for a in elements)
        if any(ctx.is_zero(a) for a in elems):
            raise ValueError("0 cannot be an error value")
        lam = None
        if ctx.is_prime_field and set(elems) == set(range(1, len(elems) + 1)):
            lam = len(elems)
        return cls(elems, lam)

    @classmethod
    def limited_magnitude(cls, ctx: FieldCtx, lam: int) -> "ErrorAlphabet":
        if not ctx.is_prime_field:
            raise ValueError("limited-magnitude alphabets live in prime fields")
        if not 1 <= lam < ctx.p:
            raise ValueError(f"need 1 <= lambda < p, got {lam}")
        return cls(tuple(range(1, lam + 1)), lam)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class ErrorVector:
    """Sparse error: ``values[i]`` sits at position ``support[i]`` of B."""

    support: tuple[int, ...] = ()
    values: tuple = ()

    def __post_init__(self):
        if len(self.support) != len(self.values):
            raise ValueError("support and values differ in length")
        if any(b <= a for a, b in zip(self.support, self.support[1:])):
            raise ValueError("support must be strictly increasing")

    @property
    def weight(self) -> int:
        return len(self.support)

    def to_json(self, ctx: FieldCtx) -> dict:
        return {"support": list(self.support), "values": [ctx.elem_to_json(v) for v in self.values]}

    @classmethod
    def from_json(cls, ctx: FieldCtx, obj: dict) -> "ErrorVector":
        return cls(tuple(int(i) for i in obj["support"]), tuple(ctx.elem(v) for v in obj["values"]))

    def dense(self, ctx: FieldCtx, length: int) -> list:
        out = [ctx.zero] * length
        for i, v in zip(self.support, self.values):
            out[i] = v
        return out


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: tuple[ErrorVector, ErrorVector] | ErrorVector | None = None
    count: int = 0


@dataclass(frozen=True)
class PackingSet:
    field: FieldCtx
    elements: tuple
    alphabet: ErrorAlphabet
    t: int
    status: Status = Status.UNVERIFIED
    witness: tuple[ErrorVector, ErrorVector] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be a positive integer")
        if any(self.field.is_zero(b) for b in self.elements):
            raise ValueError("0 cannot belong to a packing set")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("packing set has duplicates")

    @classmethod
    def build(cls, ctx: FieldCtx, elements: Iterable, alphabet, t: int) -> "PackingSet":
        if not isinstance(alphabet, ErrorAlphabet):
            alphabet = ErrorAlphabet.of(ctx, alphabet)
        return cls(ctx, tuple(ctx.elem(b) for b in elements), alphabet, t)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def n_errors(self) -> int:
        """Number of restricted error vectors of weight <= t."""
        return count_error_vectors(self.size, len(self.alphabet), self.t)

    def with_verdict(self, verdict: Verdict) -> "PackingSet":
        witness = verdict.witness if verdict.status == Status.REFUTED else None
        return replace(self, status=verdict.status, witness=witness)

    def to_json(self) -> dict:
        ctx = self.field
        out = {
            "field": ctx.to_json(),
            "B": [ctx.elem_to_json(b) for b in self.elements],
            "A": [ctx.elem_to_json(a) for a in self.alphabet],
            "t": self.t,
            "status": self.status.value,
        }
        if self.witness is not None:
            out["witness"] = [w.to_json(ctx) for w in self.witness]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PackingSet":
        ctx = FieldCtx.from_json(obj["field"])
        ps = cls.build(ctx, obj["B"], obj["A"], int(obj["t"]))
        witness = None
        if "witness" in obj:
            witness = tuple(ErrorVector.from_json(ctx, w) for w in obj["witness"])
        return replace(ps, status=Status(obj.get("status", "Unverified")), witness=witness)


def count_error_vectors(n: int, a: int, t: int) -> int:
    """M = sum_{j<=t} C(n, j) a^j."""
    return sum(comb(n, j) * a**j for j in range(0, min(t, n) + 1))


def syndrome(ps: PackingSet, e: ErrorVector) -> Elem:
    ctx = ps.field
    s = ctx.zero
    for i, v in zip(e.support, e.values):
        s = ctx.add(s, ctx.mul(v, ps.elements[i]))
    return s


def enumerate_error_vectors(n: int, alphabet: Sequence, t: int, wmin: int = 0) -> Iterator[ErrorVector]:
    """All restricted vectors of weight wmin..t, in the kernels' order."""
    from itertools import combinations, product

    values = tuple(alphabet)
    for j in range(wmin, min(t, n) + 1):
        for support in combinations(range(n), j):
            for vals in product(values, repeat=j):
                yield ErrorVector(support, vals)


def _unrank_combination(rank: int, n: int, j: int) -> tuple[int, ...]:
    out = []
    start = 0
    for slot in range(j):
        for c in range(start, n):
            block = comb(n - c - 1, j - slot - 1)
            if rank < block:
                out.append(c)
                start = c + 1
                break
            rank -= block
    return tuple(out)


def unrank_error_vector(index: int, n: int, alphabet: Sequence, t: int, wmin: int = 0) -> ErrorVector:
    """The vector at position ``index`` of enumerate_error_vectors."""
    values = tuple(alphabet)
    a = len(values)
    for j in range(wmin, min(t, n) + 1):
        block = comb(n, j) * a**j
        if index < block:
            srank, vrank = divmod(index, a**j)
            digits = []
            for _ in range(j):
                vrank, d = divmod(vrank, a)
                digits.append(values[d])
            return ErrorVector(_unrank_combination(srank, n, j), tuple(reversed(digits)))
        index -= block
    raise IndexError("index beyond the enumeration")


def term_keys(ctx: FieldCtx, elements: Sequence[Elem], alphabet: Sequence[Elem]) -> np.ndarray:
    """Encoded products a*b, shape (len(elements), len(alphabet))."""
    if len(elements) == 0:
        return np.zeros((0, len(alphabet)), dtype=np.int64)
    return ctx.mul_keys(list(elements), list(alphabet))


def syndrome_keys(ps: PackingSet, wmax: int | None = None, backend=None) -> np.ndarray:
    """Encoded syndromes of every restricted vector of weight <= wmax, in order."""
    ks = backend or kernels.ACTIVE
    wmax = ps.t if wmax is None else wmax
    terms = term_keys(ps.field, ps.elements, ps.alphabet.elements)
    if len(ps.elements) == 0:
        return np.zeros(1, dtype=np.int64)
    return ks.syndrome_keys(terms, ps.field.p, ps.field.k, 0, wmax)


def check_cap(count: int, cap: int | None) -> None:
    cap = enum_cap() if cap is None else cap
    if count > cap:
        raise EnumerationTooLarge(count, cap)


def verify_packing(ps: PackingSet, cap: int | None = None, strategy: str = "auto", backend=None) -> Verdict:
    """Exhaustive injectivity check of the syndrome map.

    ``strategy`` picks the collision search: "table" (associative table),
    "sort", or "auto" (table up to 10^7 syndromes, sort above). The
    witness is the same either way: the earliest vector in enumeration
    order whose syndrome repeats, paired with the vector it repeats.
    """
    ks = backend or kernels.ACTIVE
    m = ps.n_errors
    check_cap(m, cap)
    keys = syndrome_keys(ps, backend=ks)
    if strategy == "auto":
        strategy = "table" if m <= SORT_THRESHOLD else "sort"
    if strategy == "table":
        i, j = ks.first_repeat_table(keys, ps.field.q)
    elif strategy == "sort":
        i, j = kernels.first_repeat_sort(keys)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if j < 0:
        return Verdict(Status.VERIFIED_EXHAUSTIVE, count=m)
    n, alph = ps.size, ps.alphabet.elements
    pair = (unrank_error_vector(i, n, alph, ps.t), unrank_error_vector(j, n, alph, ps.t))
    return Verdict(Status.REFUTED, pair, count=m)


def certify(ps: PackingSet, cap: int | None = None) -> PackingSet:
    return ps.with_verdict(verify_packing(ps, cap))


class _Extender:
    """Incremental state for growing a packing set one element at a time.

    Keeps ``occupied`` (a byte per field element, set on every syndrome of
    weight <= t) and, for each j < t, the syndromes of weight <= j. Adding u
    is legal iff every a*u + s, with a in A and s of weight <= t-1, is
    unoccupied and these sums are pairwise distinct.
    """

    def __init__(self, ps: PackingSet, backend=None):
        self.ks = backend or kernels.ACTIVE
        self.ctx = ps.field
        self.alphabet = ps.alphabet.elements
        self.t = ps.t
        self.elements = list(ps.elements)
        q = self.ctx.q
        self.occupied = np.zeros(q, dtype=np.uint8)
        self.scratch = np.zeros(q, dtype=np.uint8)
        self.levels = [syndrome_keys(ps, wmax=j, backend=self.ks) for j in range(self.t)]
        self.occupied[syndrome_keys(ps, backend=self.ks)] = 1

    def scaled(self, u: Elem) -> np.ndarray:
        return self.ctx.mul_keys(list(self.alphabet), [u])[:, 0]

    def can_add(self, u: Elem = None, au: np.ndarray | None = None) -> bool:
        au = self.scaled(u) if au is None else au
        return self.ks.try_extend(self.levels[-1], au, self.occupied, self.scratch, self.ctx.p, self.ctx.k)

    def first_addable(self, scaled: np.ndarray, start: int) -> int:
        """Index of the first row of ``scaled`` (from ``start``) that can be added, or -1."""
        return self.ks.first_addable(self.levels[-1], scaled, start, self.occupied, self.scratch,
                                     self.ctx.p, self.ctx.k)

    def add(self, u: Elem, au: np.ndarray | None = None) -> np.ndarray:
        """Add u (assumed legal); returns the newly occupied keys for undo."""
        au = self.scaled(u) if au is None else au
        p, k = self.ctx.p, self.ctx.k
        new = kernels.np_add_keys(self.levels[-1][None, :], au[:, None], p, k).ravel()
        self.occupied[new] = 1
        for j in range(self.t - 1, 0, -1):
            shifted = kernels.np_add_keys(self.levels[j - 1][None, :], au[:, None], p, k).ravel()
            self.levels[j] = np.concatenate([self.levels[j], shifted])
        self.elements.append(u)
        return new

    def remove_last(self, new: np.ndarray) -> None:
        self.elements.pop()
        self.occupied[new] = 0
        # weight-exact blocks were appended in order, so truncate back
        n, a = len(self.elements), len(self.alphabet)
        for j in range(1, self.t):
            self.levels[j] = self.levels[j][: count_error_vectors(n, a, j)]


def _scaled_candidates(ctx: FieldCtx, cands: np.ndarray, alphabet) -> np.ndarray:
    """Row c holds the keys of a*u for u = cands[c] and a in the alphabet."""
    elems = cands if ctx.is_prime_field else [ctx.decode(c) for c in cands]
    if len(elems) == 0:
        return np.zeros((0, len(alphabet)), dtype=np.int64)
    return ctx.mul_keys(elems, list(alphabet))


def _candidate_keys(ps: PackingSet, order: str, seed) -> np.ndarray:
    keys = np.arange(1, ps.field.q, dtype=np.int64)
    taken = np.array([ps.field.encode(b) for b in ps.elements], dtype=np.int64)
    keys = keys[~np.isin(keys, taken)]
    if order in ("asc", "ascending"):
        return keys
    if order in ("shuffle", "seeded_shuffle"):
        rng = make_rng(seed)
        return rng.permutation(keys)
    raise ValueError(f"unknown candidate order {order!r}")


def extend_to_maximal(ps: PackingSet, order: str = "asc", seed=None, cap: int | None = None,
                      backend=None) -> PackingSet:
    """Greedily add elements of F_q^* \\ B in the given order while B stays packing.

    ``order`` is "asc" or "shuffle" (seeded). The input must already be a
    packing set. The result is checked for maximality by a final pass.
    """
    if ps.status not in CERTIFIED:
        verdict = verify_packing(ps, cap, backend=backend)
        if verdict.status != Status.VERIFIED_EXHAUSTIVE:
            raise ValueError("extend_to_maximal needs a packing set to start from")
    check_cap(ps.field.q, cap)
    ctx = ps.field
    ext = _Extender(ps, backend)
    cands = _candidate_keys(ps, order, seed)
    scaled = _scaled_candidates(ctx, cands, ps.alphabet.elements)
    i = 0
    while True:
        i = ext.first_addable(scaled, i)
        if i < 0:
            break
        ext.add(ctx.decode(cands[i]), scaled[i])
        i += 1
    check_cap(count_error_vectors(len(ext.elements), len(ps.alphabet), ps.t), cap)
    out = replace(ps, elements=tuple(ext.elements), status=Status.VERIFIED_EXHAUSTIVE, witness=None)
    if not is_maximal(out, backend=backend):
        raise AssertionError("greedy pass left an addable element")
    return out


def is_maximal(ps: PackingSet, backend=None) -> bool:
    """True iff no u in F_q^* \\ B keeps B + {u} a packing set (B must be packing)."""
    ext = _Extender(ps, backend)
    cands = _candidate_keys(ps, "asc", None)
    return ext.first_addable(_scaled_candidates(ps.field, cands, ps.alphabet.elements), 0) < 0


def exhaustive_maximum(ctx: FieldCtx, alphabet, t: int, size_cap: int | None = None,
                       backend=None) -> tuple[int, PackingSet]:
    """Largest (t, A, q)-packing set by depth-first search (q <= 257).

    Scaling a packing set by a nonzero constant keeps it packing, so the
    search fixes 1 as the first element. A branch is cut when its size
    plus the candidates still addable cannot beat the best found, and the
    search stops once the best hits the counting bound or ``size_cap``.
    """
    from .bounds import max_B_upper

    if ctx.q > 257:
        raise ValueError("exhaustive_maximum is limited to q <= 257")
    if not isinstance(alphabet, ErrorAlphabet):
        alphabet = ErrorAlphabet.of(ctx, alphabet)
    target = max_B_upper(len(alphabet), t, ctx.q)
    if size_cap is not None:
        target = min(target, size_cap)
    start = PackingSet(ctx, (ctx.one,), alphabet, t)
    if verify_packing(start).status != Status.VERIFIED_EXHAUSTIVE:
        return 0, PackingSet(ctx, (), alphabet, t, Status.VERIFIED_EXHAUSTIVE)
    ext = _Extender(start, backend)
    best = [tuple(ext.elements)]

    def dfs(cands: list) -> bool:
        feasible = [u for u in cands if ext.can_add(u)]
        if len(ext.elements) + len(feasible) <= len(best[0]):
            return False
        if not feasible:
            best[0] = tuple(ext.elements)
            return len(best[0]) >= target
        for i, u in enumerate(feasible):
            if len(ext.elements) + len(feasible) - i <= len(best[0]):
                break
            new = ext.add(u)
            done = dfs(feasible[i + 1:])
            ext.remove_last(new)
            if done:
                return True
        return False

    if len(best[0]) < target:
        dfs([u for u in ctx.elements() if u != ctx.one])
    winner = PackingSet(ctx, best[0], alphabet, t, Status.VERIFIED_EXHAUSTIVE)
    return len(best[0]), winner
