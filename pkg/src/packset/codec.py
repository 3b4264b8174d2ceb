"""Single-parity-check codes that correct restricted errors via a syndrome table."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import CertificationContradiction
from .field import Elem, FieldCtx
from .ntheory import make_rng
from .packing import (
    CERTIFIED,
    ErrorVector,
    PackingSet,
    count_error_vectors,
    enumerate_error_vectors,
    syndrome_keys,
    check_cap,
)


@dataclass(frozen=True)
class RestrictedCode:
    """Length B, dimension B-1, parity row H = B; the last coordinate is parity."""

    packing: PackingSet

    def __post_init__(self):
        if self.packing.status not in CERTIFIED:
            raise ValueError(f"code needs a certified packing set, got {self.packing.status.value}")
        if self.packing.size < 1:
            raise ValueError("code needs at least one parity element")

    @property
    def field(self) -> FieldCtx:
        return self.packing.field

    @property
    def length(self) -> int:
        return self.packing.size

    @property
    def dimension(self) -> int:
        return self.packing.size - 1

    @property
    def rate(self) -> float:
        return self.dimension / self.length

    def check(self, word: Sequence[Elem]) -> Elem:
        """H . word, i.e. the syndrome of a full-length word."""
        ctx = self.field
        s = ctx.zero
        for c, b in zip(word, self.packing.elements):
            s = ctx.add(s, ctx.mul(c, b))
        return s


@dataclass(frozen=True)
class SyndromeTable:
    code: RestrictedCode
    entries: dict  # encoded syndrome -> ErrorVector

    def __len__(self):
        return len(self.entries)

    def lookup(self, s: Elem) -> ErrorVector | None:
        return self.entries.get(self.code.field.encode(s))


class Decoded(NamedTuple):
    message: list
    error: ErrorVector


def encode(code: RestrictedCode, message: Sequence) -> list:
    ctx = code.field
    if len(message) != code.dimension:
        raise ValueError(f"message length {len(message)} != {code.dimension}")
    msg = [ctx.elem(m) for m in message]
    B = code.packing.elements
    acc = ctx.zero
    for m, b in zip(msg, B):
        acc = ctx.add(acc, ctx.mul(m, b))
    parity = ctx.mul(ctx.neg(acc), ctx.inv(B[-1]))
    return msg + [parity]


def build_syndrome_table(code: RestrictedCode, cap: int | None = None,
                         max_weight: int | None = None) -> SyndromeTable:
    """Map every weight <= t restricted error to its syndrome.

    ``max_weight`` overrides the packing set's t (0 gives the trivial table).
    """
    ps = code.packing
    t = ps.t if max_weight is None else max_weight
    check_cap(count_error_vectors(ps.size, len(ps.alphabet), t), cap)
    keys = syndrome_keys(ps, wmax=t)
    entries: dict = {}
    vectors = enumerate_error_vectors(ps.size, ps.alphabet.elements, t)
    for key, e in zip(keys.tolist(), vectors):
        if key in entries:
            raise CertificationContradiction(
                f"{entries[key]} and {e} share a syndrome in a certified packing set")
        entries[key] = e
    return SyndromeTable(code, entries)


def inject_error(ctx: FieldCtx, codeword: Sequence[Elem], alphabet: Sequence[Elem], t: int,
                 seed) -> tuple[list, ErrorVector]:
    """Add a uniformly drawn restricted error: weight 0..t, then support, then values."""
    rng = make_rng(seed)
    values = list(alphabet)
    n = len(codeword)
    w = int(rng.integers(0, min(t, n), endpoint=True))
    support = tuple(sorted(int(i) for i in rng.choice(n, size=w, replace=False)))
    vals = tuple(values[int(i)] for i in rng.integers(0, len(values), size=w))
    e = ErrorVector(support, vals)
    received = list(codeword)
    for i, v in zip(support, vals):
        received[i] = ctx.add(received[i], v)
    return received, e


def decode(code: RestrictedCode, table: SyndromeTable, received: Sequence[Elem]) -> Decoded | None:
    """Look up the syndrome; None means it matches no in-model error.

    Errors outside the model (weight > t or values outside A) can match a
    different table entry and decode wrongly; that is part of the contract.
    """
    ctx = code.field
    word = [ctx.elem(r) for r in received]
    e = table.lookup(code.check(word))
    if e is None:
        return None
    for i, v in zip(e.support, e.values):
        word[i] = ctx.sub(word[i], v)
    return Decoded(word[: code.dimension], e)
