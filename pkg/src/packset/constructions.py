"""Explicit packing-set constructions.

powers        {(lam+1)^i : i < L} in F_p, alphabet {1..lam}
basis         the power basis of F_{p^k} over F_p, alphabet F_p^*, t = k
qr            quadratic residues mod p, alphabet {1, 2}, t = 1
cyclotomic    nontrivial ell-th roots of unity mod a random prime p = m*ell + 1
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from math import comb

import numpy as np

from . import kernels
from ._config import enum_cap
from .errors import StepBudgetExceeded, TExceedsL, WrongResidueClass
from .field import Elem, FieldCtx, element_order, make_extension_field, make_prime_field
from .ntheory import (
    FactoredInteger,
    find_primitive_root,
    is_prime,
    random_factored_integer,
    random_prime_in_step1_interval,
    split_seed,
)
from .packing import (
    ErrorAlphabet,
    ErrorVector,
    PackingSet,
    Status,
    Verdict,
    certify,
    term_keys,
    unrank_error_vector,
    verify_packing,
)


def _certify_if_feasible(ps: PackingSet, cap: int | None) -> PackingSet:
    cap = enum_cap() if cap is None else cap
    if ps.n_errors > cap:
        return ps
    return certify(ps, cap)


def powers_exponent_count(p: int, lam: int) -> int:
    """L = floor(log p / log(lam+1)), computed in exact integer arithmetic."""
    L, power = 0, 1
    while power * (lam + 1) <= p:
        power *= lam + 1
        L += 1
    return L


def powers_packing_set(p: int, lam: int, t: int, cap: int | None = None) -> PackingSet:
    """Distinct (lam+1)-adic digit expansions stay below p, so sums never wrap."""
    ctx = make_prime_field(p)
    if lam < 1:
        raise ValueError("lambda must be at least 1")
    L = powers_exponent_count(p, lam)
    if L < 1:
        raise ValueError(f"lambda + 1 = {lam + 1} exceeds p = {p}")
    if t > L:
        raise TExceedsL(f"t = {t} exceeds L = {L}")
    if t < 1:
        raise ValueError("t must be positive")
    B = tuple((lam + 1) ** i for i in range(L))
    ps = PackingSet(ctx, B, ErrorAlphabet.limited_magnitude(ctx, lam), t)
    return _certify_if_feasible(ps, cap)


def basis_packing_set(p: int, k: int, seed, cap: int | None = None) -> PackingSet:
    """Power basis {1, x, ..., x^(k-1)} of F_{p^k}, errors from F_p^*, t = k.

    Every field element has exactly one coordinate vector, so all
    (A+1)^B = q syndromes are distinct and the counting bound is met with
    equality.
    """
    if k < 2:
        raise ValueError("basis construction needs k >= 2")
    ctx = make_extension_field(p, k, seed)
    B = tuple(ctx.elem([0] * i + [1]) for i in range(k))
    alphabet = ErrorAlphabet(tuple(ctx.elem(a) for a in range(1, p)))
    ps = PackingSet(ctx, B, alphabet, k)
    return _certify_if_feasible(ps, cap)


def quadratic_residue_packing_set(p: int, cap: int | None = None) -> PackingSet:
    """Squares mod p with alphabet {1, 2}, t = 1, for p = 3 or 5 mod 8.

    There 2 is a nonresidue, so the cosets B and 2B are disjoint.
    """
    ctx = make_prime_field(p)
    if p % 8 not in (3, 5):
        raise WrongResidueClass(f"{p} is {p % 8} mod 8; need 3 or 5")
    B = tuple(sorted({x * x % p for x in range(1, p)}))
    ps = PackingSet(ctx, B, ErrorAlphabet.limited_magnitude(ctx, 2), 1)
    return _certify_if_feasible(ps, cap)


@dataclass(frozen=True)
class RatioSetAlphabet:
    g: Elem
    order: int
    d: int
    alphabet: ErrorAlphabet
    degenerate: bool
    packing_cap: int


def ratio_set_alphabet(ctx: FieldCtx, g: Elem, fact: FactoredInteger) -> RatioSetAlphabet:
    """Alphabet {g, ..., g^d, g^(2d), ..., g^((d-1)d), g^(d^2)}, d = ceil(sqrt(k)).

    Its ratio set is the whole order-k subgroup generated by g, so any
    (1, A, q)-packing set has at most (q-1)/k elements (``packing_cap``).
    For small k some powers coincide; duplicates are dropped and
    ``degenerate`` is set.
    """
    k = element_order(ctx, g, fact)
    if k < 2:
        raise ValueError("g must have order at least 2")
    d = math.isqrt(k - 1) + 1
    exponents = list(range(1, d + 1)) + [i * d for i in range(2, d)] + [d * d]
    powers = [ctx.pow(g, e) for e in exponents]
    unique = list(dict.fromkeys(powers))
    return RatioSetAlphabet(
        g=g,
        order=k,
        d=d,
        alphabet=ErrorAlphabet(tuple(unique)),
        degenerate=len(unique) < len(powers),
        packing_cap=(ctx.q - 1) // k,
    )


# -- randomized cyclotomic construction ------------------------------------


def sufficient_count(n: int, lam: int, t: int) -> int:
    """Number of signed vectors checked: sum_{i=1}^{2t} C(n, i) (2 lam)^i."""
    return sum(comb(n, i) * (2 * lam) ** i for i in range(1, min(2 * t, n) + 1))


def sufficient_check(ctx: FieldCtx, elements, lam: int, t: int, cap: int | None = None,
                     backend=None) -> Verdict:
    """Check that no combination with coefficients in {-lam..lam}, weight 1..2t, vanishes.

    Passing implies the (t, {1..lam}, p)-packing property; failing does not
    refute it. Negative coefficients are represented as p - a. The witness
    on failure is the first vanishing combination in enumeration order.
    """
    ks = backend or kernels.ACTIVE
    cap = enum_cap() if cap is None else cap
    n = len(elements)
    count = sufficient_count(n, lam, t)
    if count > cap:
        return Verdict(Status.TOO_LARGE, count=count)
    signed = [ctx.elem(-a) for a in range(lam, 0, -1)] + [ctx.elem(a) for a in range(1, lam + 1)]
    terms = term_keys(ctx, list(elements), signed)
    keys = ks.syndrome_keys(terms, ctx.p, ctx.k, 1, 2 * t)
    hit = ks.first_zero(keys)
    if hit < 0:
        return Verdict(Status.VERIFIED_SUFFICIENT, count=count)
    return Verdict(Status.SUFFICIENT_CHECK_FAILED, unrank_error_vector(hit, n, signed, 2 * t, wmin=1), count)


def kq_proxy_holds(K: int, Q: int, lam: int, t: int) -> bool:
    """Finite stand-in for the asymptotic size condition relating K and Q."""
    return lam ** (2 * t) * (4 * K) ** (2 * t + 2) * max(math.log(t * lam), 1.0) < Q


@dataclass(frozen=True)
class CyclotomicRun:
    seed: int | None
    K: int
    Q: int
    lam: int
    t: int
    ell: int
    m_range: tuple[int, int]
    m: FactoredInteger
    p: int
    g: int
    b0: int
    B0: tuple[int, ...]
    kq_holds: bool
    step2_draws: int = 0
    status: Status = Status.UNVERIFIED
    witness: ErrorVector | tuple | None = field(default=None, compare=False)
    budgets: dict = field(default_factory=dict, compare=False)

    @property
    def field(self) -> FieldCtx:
        return make_prime_field(self.p)

    @property
    def packing(self) -> PackingSet:
        ctx = self.field
        status = self.status if self.status in (
            Status.VERIFIED_EXHAUSTIVE, Status.VERIFIED_SUFFICIENT, Status.REFUTED) else Status.UNVERIFIED
        ps = PackingSet(ctx, self.B0, ErrorAlphabet.limited_magnitude(ctx, self.lam), self.t, status)
        if status == Status.REFUTED:
            ps = replace(ps, witness=self.witness)
        return ps

    def to_json(self) -> dict:
        ctx = self.field
        witness = None
        if isinstance(self.witness, ErrorVector):
            witness = self.witness.to_json(ctx)
        elif self.witness is not None:
            witness = [w.to_json(ctx) for w in self.witness]
        return {
            "seed": self.seed,
            "K": self.K,
            "Q": self.Q,
            "lambda": self.lam,
            "t": self.t,
            "ell": self.ell,
            "m_range": list(self.m_range),
            "m": self.m.to_json(),
            "p": self.p,
            "g": self.g,
            "b0": self.b0,
            "B0": list(self.B0),
            "kq_holds": self.kq_holds,
            "step2_draws": self.step2_draws,
            "certified": self.status.value,
            "witness": witness,
            "budgets": self.budgets,
            "packing": self.packing.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CyclotomicRun":
        ctx = make_prime_field(int(obj["p"]))
        witness = obj.get("witness")
        if isinstance(witness, dict):
            witness = ErrorVector.from_json(ctx, witness)
        elif witness is not None:
            witness = tuple(ErrorVector.from_json(ctx, w) for w in witness)
        return cls(
            seed=obj.get("seed"),
            K=int(obj["K"]),
            Q=int(obj["Q"]),
            lam=int(obj["lambda"]),
            t=int(obj["t"]),
            ell=int(obj["ell"]),
            m_range=tuple(obj["m_range"]),
            m=FactoredInteger.from_json(obj["m"]),
            p=int(obj["p"]),
            g=int(obj["g"]),
            b0=int(obj["b0"]),
            B0=tuple(int(b) for b in obj["B0"]),
            kq_holds=bool(obj["kq_holds"]),
            step2_draws=int(obj.get("step2_draws", 0)),
            status=Status(obj.get("certified", "Unverified")),
            witness=witness,
            budgets=dict(obj.get("budgets", {})),
        )


def step2_range(Q: int, ell: int) -> tuple[int, int]:
    return -(-(Q - 1) // ell), 2 * (Q - 1) // ell


def assemble_run(K: int, Q: int, lam: int, t: int, ell: int, m: FactoredInteger, g: int,
                 seed=None, step2_draws: int = 0) -> CyclotomicRun:
    """Steps 4 onward: b0 = g^((p-1)/ell) and B0 = {b0^i : 1 <= i < ell}."""
    p = m.value * ell + 1
    ctx = make_prime_field(p)
    b0 = ctx.pow(g, m.value)
    B0 = []
    x = 1
    for _ in range(ell - 1):
        x = x * b0 % p
        B0.append(x)
    return CyclotomicRun(
        seed=seed, K=K, Q=Q, lam=lam, t=t, ell=ell,
        m_range=step2_range(Q, ell), m=m, p=p, g=int(g), b0=int(b0), B0=tuple(B0),
        kq_holds=kq_proxy_holds(K, Q, lam, t), step2_draws=step2_draws,
    )


def certify_sufficient(run: CyclotomicRun, cap: int | None = None, backend=None) -> Verdict:
    return sufficient_check(run.field, run.B0, run.lam, run.t, cap, backend)


def certify_run(run: CyclotomicRun, cap: int | None = None) -> CyclotomicRun:
    """Sufficient check first; the exhaustive check when that is unaffordable or fails."""
    cap = enum_cap() if cap is None else cap
    ps = run.packing
    budgets = {"sufficient": sufficient_count(len(run.B0), run.lam, run.t),
               "exhaustive": ps.n_errors, "cap": cap}
    verdict = certify_sufficient(run, cap)
    if verdict.status == Status.VERIFIED_SUFFICIENT:
        return replace(run, status=verdict.status, witness=None, budgets=budgets)
    if ps.n_errors <= cap:
        exhaustive = verify_packing(ps, cap)
        return replace(run, status=exhaustive.status, witness=exhaustive.witness, budgets=budgets)
    if verdict.status == Status.SUFFICIENT_CHECK_FAILED:
        budgets["sufficient_witness"] = verdict.witness.to_json(run.field)
    return replace(run, status=Status.UNVERIFIED, witness=None, budgets=budgets)


def cyclotomic_construct(K: int, Q: int, lam: int, t: int, seed, cap: int | None = None,
                         certify_output: bool = True) -> CyclotomicRun:
    """Randomized construction of a large (t, {1..lam}, p)-packing set with p in [Q, 2Q].

    1. ell: random prime in [K+1, K + K/ln K].
    2. m: uniform factored integer in [ceil((Q-1)/ell), floor(2(Q-1)/ell)],
       redrawn until p = m*ell + 1 is prime (at most ceil(40 ln Q) draws).
    3. g: random primitive root mod p, tested with the factorization ell * m.
    4. b0 = g^m, and B0 is the set of its powers b0, ..., b0^(ell-1).
    """
    if K < 3:
        raise ValueError("K must be at least 3")
    if Q <= 2 * K:
        raise ValueError("need Q > 2K")
    if lam < 1 or t < 1:
        raise ValueError("lambda and t must be positive")
    s1, s2, s3 = split_seed(seed, 3)
    ell = random_prime_in_step1_interval(K, s1)
    lo, hi = step2_range(Q, ell)
    if lo < 2:
        raise ValueError(f"Q = {Q} too small for ell = {ell}")
    budget = math.ceil(40 * math.log(Q))
    draw_rng = np.random.default_rng(s2)
    for draw in range(1, budget + 1):
        m = random_factored_integer(lo, hi, draw_rng)
        if is_prime(m.value * ell + 1):
            break
    else:
        raise StepBudgetExceeded(f"no prime p = m*{ell}+1 after {budget} draws")
    p = m.value * ell + 1
    ctx = make_prime_field(p)
    fact = m.times(FactoredInteger(ell, ((ell, 1),)))
    g = find_primitive_root(ctx, fact, np.random.default_rng(s3))
    run = assemble_run(K, Q, lam, t, ell, m, g,
                       seed=seed if isinstance(seed, int) else None, step2_draws=draw)
    return certify_run(run, cap) if certify_output else run
