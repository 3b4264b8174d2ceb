from itertools import combinations, product

import numpy as np
import pytest

from packset.bounds import ratio_set
from packset.constructions import (
    CyclotomicRun,
    assemble_run,
    basis_packing_set,
    certify_run,
    certify_sufficient,
    cyclotomic_construct,
    kq_proxy_holds,
    powers_exponent_count,
    powers_packing_set,
    quadratic_residue_packing_set,
    ratio_set_alphabet,
    step2_range,
    sufficient_check,
    sufficient_count,
)
from packset.errors import NotPrime, TExceedsL, WrongResidueClass
from packset.field import make_prime_field
from packset.ntheory import FactoredInteger, factor, is_prime
from packset.packing import PackingSet, Status, syndrome_keys, verify_packing


def brute_sufficient(p, B, lam, t):
    """True iff no combination with coefficients in +-{1..lam}, weight 1..2t, vanishes mod p."""
    coeffs = [c for c in range(-lam, lam + 1) if c]
    for w in range(1, min(2 * t, len(B)) + 1):
        for support in combinations(B, w):
            for cs in product(coeffs, repeat=w):
                if sum(c * b for c, b in zip(cs, support)) % p == 0:
                    return False
    return True


@pytest.mark.parametrize("p,lam,t,B", [(11, 1, 3, (1, 2, 4)), (101, 2, 4, (1, 3, 9, 27))])
def test_powers_examples(p, lam, t, B):
    ps = powers_packing_set(p, lam, t)
    assert ps.elements == B and ps.status == Status.VERIFIED_EXHAUSTIVE


def test_powers_errors():
    assert powers_exponent_count(11, 1) == 3
    assert powers_exponent_count(257, 3) == 4
    with pytest.raises(TExceedsL):
        powers_packing_set(11, 1, 4)
    with pytest.raises(NotPrime):
        powers_packing_set(12, 1, 1)


def test_powers_t1_allowed():
    assert powers_packing_set(11, 1, 1).status == Status.VERIFIED_EXHAUSTIVE


def test_powers_unverified_above_cap():
    assert powers_packing_set(101, 2, 4, cap=10).status == Status.UNVERIFIED


@pytest.mark.parametrize("p", [p for p in range(3, 258) if is_prime(p)][::7])
def test_powers_all_small(p):
    for lam in (1, 2, 3):
        if lam + 1 > p:
            continue
        for t in range(1, powers_exponent_count(p, lam) + 1):
            assert powers_packing_set(p, lam, t).status == Status.VERIFIED_EXHAUSTIVE


@pytest.mark.parametrize("p,k", [(3, 2), (2, 4), (2, 3), (5, 2)])
def test_basis_meets_bound_with_equality(p, k):
    ps = basis_packing_set(p, k, seed=3)
    assert ps.status == Status.VERIFIED_EXHAUSTIVE
    assert ps.size == k and ps.t == k and len(ps.alphabet) == p - 1
    keys = syndrome_keys(ps)
    assert len(keys) == ps.field.q == p**k
    assert np.array_equal(np.sort(keys), np.arange(p**k))


def test_basis_needs_k_at_least_2():
    with pytest.raises(ValueError):
        basis_packing_set(2, 1, seed=0)


def test_qr_examples():
    ps = quadratic_residue_packing_set(11)
    assert ps.elements == (1, 3, 4, 5, 9) and ps.status == Status.VERIFIED_EXHAUSTIVE
    assert ps.n_errors == 11
    ps = quadratic_residue_packing_set(19)
    assert ps.elements == (1, 4, 5, 6, 7, 9, 11, 16, 17)
    with pytest.raises(WrongResidueClass):
        quadratic_residue_packing_set(17)


def test_qr_is_a_bijection_for_valid_primes():
    for p in range(3, 201):
        if is_prime(p) and p % 8 in (3, 5):
            ps = quadratic_residue_packing_set(p)
            assert ps.status == Status.VERIFIED_EXHAUSTIVE
            assert sorted(syndrome_keys(ps).tolist()) == list(range(p))


def test_ratio_set_alphabet_examples():
    f13 = make_prime_field(13)
    r = ratio_set_alphabet(f13, 3, factor(12))
    assert (r.order, r.d) == (3, 2)
    assert r.alphabet.elements == (3, 9) and r.degenerate
    assert ratio_set(r.alphabet, f13) == {1, 3, 9}
    f11 = make_prime_field(11)
    r = ratio_set_alphabet(f11, 10, factor(10))
    assert (r.order, r.d) == (2, 2) and r.degenerate
    assert set(r.alphabet.elements) == {10, 1}
    with pytest.raises(ValueError):
        ratio_set_alphabet(f11, 1, factor(10))


@pytest.mark.parametrize("p", [101, 211, 401, 601, 1009])
def test_ratio_set_is_the_subgroup(p):
    ctx = make_prime_field(p)
    fact = factor(p - 1)
    for g in range(2, 40):
        r = ratio_set_alphabet(ctx, g, fact)
        subgroup = {pow(g, i, p) for i in range(r.order)}
        assert ratio_set(r.alphabet, ctx) == subgroup
        assert len(r.alphabet) <= 2 * r.d - 1
        assert r.packing_cap == (p - 1) // r.order


def test_step2_range():
    assert step2_range(100, 5) == (20, 39)
    assert step2_range(101, 5) == (20, 40)


def test_assemble_run_example():
    run = assemble_run(4, 100, 1, 2, 5, FactoredInteger.from_primes([2, 2, 5]), 2)
    assert (run.p, run.b0, run.B0) == (101, 95, (95, 36, 87, 84))
    assert pow(run.b0, 5, 101) == 1
    v = certify_sufficient(run)
    assert v.status == Status.VERIFIED_SUFFICIENT
    assert brute_sufficient(101, run.B0, 1, 2)
    assert sum(run.B0) % 101 == 100


def test_sufficient_check_t1_distinct_nonopposite():
    ctx = make_prime_field(31)
    assert sufficient_check(ctx, [1, 2, 5, 7], 1, 1).status == Status.VERIFIED_SUFFICIENT


def test_sufficient_check_constructed_failure():
    ctx = make_prime_field(31)
    v = sufficient_check(ctx, [3, 5, 28], 1, 1)
    assert v.status == Status.SUFFICIENT_CHECK_FAILED
    e = v.witness
    assert e.support == (0, 2)
    assert sum(c * b for c, b in zip(e.values, (3, 28))) % 31 == 0


def test_sufficient_check_budget():
    ctx = make_prime_field(101)
    assert sufficient_count(4, 1, 2) == 4 * 2 + 6 * 4 + 4 * 8 + 16
    assert sufficient_check(ctx, [1, 2, 3, 4], 1, 2, cap=10).status == Status.TOO_LARGE


@pytest.mark.parametrize("seed", range(25))
def test_sufficient_check_matches_brute_force(seed, backend):
    rng = np.random.default_rng(seed)
    p = int(rng.choice([31, 61, 101, 151, 181]))
    lam = int(rng.integers(1, 3))
    t = int(rng.integers(1, 3))
    B = rng.choice(np.arange(1, p), size=int(rng.integers(1, 6)), replace=False).tolist()
    v = sufficient_check(make_prime_field(p), B, lam, t, backend=backend)
    want = brute_sufficient(p, B, lam, t)
    assert (v.status == Status.VERIFIED_SUFFICIENT) == want
    if not want:
        e = v.witness
        signed = [c if c <= lam else c - p for c in e.values]
        assert sum(c * B[i] for c, i in zip(signed, e.support)) % p == 0


def test_sufficient_implies_packing():
    rng = np.random.default_rng(99)
    passed = 0
    for _ in range(200):
        p = int(rng.choice([101, 211, 307]))
        lam, t = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        B = rng.choice(np.arange(1, p), size=int(rng.integers(2, 6)), replace=False).tolist()
        ctx = make_prime_field(p)
        if sufficient_check(ctx, B, lam, t).status == Status.VERIFIED_SUFFICIENT:
            passed += 1
            ps = PackingSet.build(ctx, B, range(1, lam + 1), t)
            assert verify_packing(ps).status == Status.VERIFIED_EXHAUSTIVE
    assert passed > 20


def test_cyclotomic_invariants():
    for seed in range(20):
        run = cyclotomic_construct(4, 100, 1, 2, seed)
        assert run.ell == 5 and len(run.B0) == 4
        assert 100 <= run.p <= 201 and run.p % 5 == 1
        lo, hi = run.m_range
        assert lo <= run.m.value <= hi and run.m == factor(run.m.value)
        assert pow(run.b0, 5, run.p) == 1 and run.b0 != 1
        assert pow(run.g, (run.p - 1) // 2, run.p) != 1
        if run.status == Status.VERIFIED_SUFFICIENT:
            assert verify_packing(run.packing).status == Status.VERIFIED_EXHAUSTIVE


def test_cyclotomic_t1_always_certifies():
    for seed in range(10):
        run = cyclotomic_construct(4, 100, 1, 1, seed)
        assert run.status in (Status.VERIFIED_SUFFICIENT, Status.VERIFIED_EXHAUSTIVE)


def test_cyclotomic_is_deterministic():
    a = cyclotomic_construct(10, 10**6, 2, 2, 1234)
    b = cyclotomic_construct(10, 10**6, 2, 2, 1234)
    assert a == b and a.to_json() == b.to_json()
    assert a.ell in (11, 13) and 10**6 <= a.p <= 2 * 10**6 + 1


def test_cyclotomic_json_roundtrip():
    run = cyclotomic_construct(4, 100, 1, 2, 3)
    obj = run.to_json()
    assert obj["certified"] == run.status.value and obj["packing"]["B"] == list(run.B0)
    assert CyclotomicRun.from_json(obj) == run


def test_cyclotomic_preconditions():
    with pytest.raises(ValueError):
        cyclotomic_construct(2, 100, 1, 2, 0)
    with pytest.raises(ValueError):
        cyclotomic_construct(4, 8, 1, 2, 0)
    with pytest.raises(ValueError):
        cyclotomic_construct(4, 100, 0, 2, 0)


def test_certify_run_falls_back_to_exhaustive():
    # B0 for ell = 7 in F_29 with lam = 3: a vanishing signed combination exists
    run = assemble_run(6, 20, 3, 2, 7, FactoredInteger.from_primes([2, 2]), 2)
    out = certify_run(run)
    assert certify_sufficient(run).status == Status.SUFFICIENT_CHECK_FAILED
    assert out.status in (Status.VERIFIED_EXHAUSTIVE, Status.REFUTED)
    assert out.status == verify_packing(run.packing).status


def test_kq_proxy():
    assert not kq_proxy_holds(4, 100, 1, 2)
    assert kq_proxy_holds(4, 10**9, 1, 2)
