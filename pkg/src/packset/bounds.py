"""Counting bounds on the size of packing sets.

Exact integer solvers are normative. The real-valued closed forms are
advisory and rounded to 6 significant digits.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from math import comb

from .field import FieldCtx


def _sig6(x: float) -> float:
    return float(f"{x:.6g}")


def _upper_sum_exceeds(B: int, A: int, t: int, q: int) -> bool:
    # partial sums only grow, so stop as soon as q is passed
    total = 0
    for j in range(min(t, B) + 1):
        total += comb(B, j) * A**j
        if total > q:
            return True
    return False


def hamming_like_bound_holds(B: int, A: int, t: int, q: int) -> bool:
    """sum_{j=0}^{t} C(B, j) A^j <= q, the necessary condition for a packing set of size B."""
    return not _upper_sum_exceeds(B, A, t, q)


def upper_closed_form(A: int, t: int, q: int) -> float:
    """t (q^(1/t) / A + 1); every packing set is strictly smaller."""
    return _sig6(t * (q ** (1.0 / t) / A + 1))


def max_B_upper(A: int, t: int, q: int) -> int:
    """Largest B >= 0 passing hamming_like_bound_holds (binary search)."""
    if A < 1 or t < 1 or q < 2:
        raise ValueError("need A >= 1, t >= 1, q >= 2")
    lo, hi = 0, (q - 1) // A + 1
    # invariant: lo passes, hi fails (1 + hi*A > q)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if hamming_like_bound_holds(mid, A, t, q):
            lo = mid
        else:
            hi = mid
    return lo


def maximal_lower_lhs(B: int, A: int, t: int) -> int:
    first = sum(comb(B + 1, h) * A**h for h in range(t + 1))
    second = sum(comb(B, k - 1) * A**k for k in range(1, t + 1))
    return first * second + B + 1


def maximal_lower_bound_holds(B: int, A: int, t: int, q: int) -> bool:
    """The inequality every maximal packing set of size B must satisfy."""
    return maximal_lower_lhs(B, A, t) >= q


def min_B_maximal(A: int, t: int, q: int) -> int:
    """Smallest B for which maximal_lower_bound_holds; the left side grows with B."""
    if A < 1 or t < 1:
        raise ValueError("need A >= 1, t >= 1")
    B = 0
    while not maximal_lower_bound_holds(B, A, t, q):
        B += 1
    return B


def lower_closed_form(A: int, t: int, q: int) -> float | None:
    """(q / (5A))^(1/(2t-1)) / A - 1, or None when q < 11 (not claimed there)."""
    if q < 11:
        return None
    return _sig6((q / (5 * A)) ** (1.0 / (2 * t - 1)) / A - 1)


def t1_lower_bound(A: int, q: int) -> int:
    """For t = 1 every maximal set has B >= (q-1)/A^2."""
    return -(-(q - 1) // (A * A))


def ratio_set(alphabet, ctx: FieldCtx) -> frozenset:
    """{a / b : a, b in A}."""
    elems = list(alphabet)
    invs = [ctx.inv(b) for b in elems]
    return frozenset(ctx.mul(a, bi) for a in elems for bi in invs)


def ratio_set_lower_bound(alphabet, ctx: FieldCtx) -> int:
    """For t = 1 every maximal set has B >= (q-1) / #(A/A)."""
    return -(-(ctx.q - 1) // len(ratio_set(alphabet, ctx)))


@dataclass(frozen=True)
class BoundsReport:
    q: int
    A: int
    t: int
    M: int
    upper_exact: int
    upper_closed: float
    lower_maximal_exact: int
    lower_closed: float | None
    lower_closed_vacuous: bool
    lower_t1: int | None = None
    ratio_set_size: int | None = None
    lower_ratio_set: int | None = None

    def to_json(self) -> dict:
        return asdict(self)

    def rows(self) -> list[tuple[str, str]]:
        out = [
            ("q", str(self.q)),
            ("A", str(self.A)),
            ("t", str(self.t)),
            ("M at upper_exact", str(self.M)),
            ("upper_exact (largest B)", str(self.upper_exact)),
            ("upper_closed (advisory, B <)", str(self.upper_closed)),
            ("lower_maximal_exact (maximal B >=)", str(self.lower_maximal_exact)),
            ("lower_closed (advisory, maximal B >)",
             "vacuous" if self.lower_closed_vacuous else str(self.lower_closed)),
        ]
        if self.lower_t1 is not None:
            out.append(("lower_t1 (maximal B >=)", str(self.lower_t1)))
        if self.lower_ratio_set is not None:
            out.append(("#(A/A)", str(self.ratio_set_size)))
            out.append(("lower_ratio_set (maximal B >=)", str(self.lower_ratio_set)))
        return out

    def table(self) -> str:
        rows = self.rows()
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def bounds_report(q: int, A: int, t: int, alphabet=None, ctx: FieldCtx | None = None) -> BoundsReport:
    from .packing import count_error_vectors

    upper = max_B_upper(A, t, q)
    closed = lower_closed_form(A, t, q)
    ratio_size = ratio_lower = None
    if alphabet is not None:
        ratio_size = len(ratio_set(alphabet, ctx))
        ratio_lower = ratio_set_lower_bound(alphabet, ctx)
    return BoundsReport(
        q=q,
        A=A,
        t=t,
        M=count_error_vectors(upper, A, t),
        upper_exact=upper,
        upper_closed=upper_closed_form(A, t, q),
        lower_maximal_exact=min_B_maximal(A, t, q),
        lower_closed=closed,
        lower_closed_vacuous=closed is None or closed <= 0,
        lower_t1=t1_lower_bound(A, q) if t == 1 else None,
        ratio_set_size=ratio_size,
        lower_ratio_set=ratio_lower,
    )
