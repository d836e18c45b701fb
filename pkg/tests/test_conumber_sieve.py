import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavenum import oracle
from wavenum.conumber_sieve import (
    CoProduct,
    SieveState,
    WindowReport,
    circle_sum,
    circle_sum_test,
    coproduct_value,
    count_estimate,
    elementwise_value,
    initial_state,
    recursion_step,
    run_schedule,
    scan_window,
    surviving_fraction,
    verify_window,
    wheel_candidates,
    window_primes,
    zeros_equivalence_check,
)
from wavenum.errors import DomainError, VerificationError
from wavenum.wave_core import ZERO, Term

FIRST = oracle.first_primes(60)


def test_coproduct_value_examples():
    cp = CoProduct((2, 3))
    v = coproduct_value(cp, 25)
    assert v == Term.root(25, 6) and v.display(unreduced=True) == "25/6"
    assert not oracle.is_prime(25)
    assert coproduct_value(cp, 4) == ZERO
    assert math.gcd(49, 30) == 1
    assert coproduct_value(CoProduct((2, 3, 5)), 49) == Term.root(49, 30)


def test_coproduct_value_edges():
    cp = CoProduct((2, 3))
    assert coproduct_value(cp, 0) == ZERO
    with pytest.raises(DomainError):
        coproduct_value(cp, -1)


def test_coproduct_construction_checks():
    with pytest.raises(DomainError):
        CoProduct((3, 2))
    with pytest.raises(DomainError):
        CoProduct((2, 4))
    with pytest.raises(DomainError):
        CoProduct(())
    assert CoProduct(tuple(FIRST[:16])).period.bit_length() > 64


@pytest.mark.parametrize("N", range(1, 6))
def test_divisibility_value_matches_elementwise_product(N):
    cp = CoProduct(tuple(FIRST[:N]))
    for k in range(1, 2 * cp.period + 1):
        assert coproduct_value(cp, k) == elementwise_value(cp, k)


@settings(max_examples=300)
@given(st.integers(1, 10**6), st.integers(1, 8))
def test_zero_characterization(k, N):
    cp = CoProduct(tuple(FIRST[:N]))
    assert coproduct_value(cp, k).is_zero == (math.gcd(k, cp.period) > 1)


def _brute_zeros_equivalence(N, bound):
    primes = [p for p in range(2, N + 1) if all(p % d for d in range(2, p))]
    return all(
        any(k % n == 0 for n in range(2, N + 1)) == any(k % p == 0 for p in primes)
        for k in range(1, bound + 1)
    )


@pytest.mark.parametrize("N,bound", [(6, 1000), (2, 100), (10, 10**4)])
def test_zeros_equivalence(N, bound):
    assert _brute_zeros_equivalence(N, bound)
    assert zeros_equivalence_check(N, bound) is True


def test_zeros_equivalence_domain():
    with pytest.raises(DomainError):
        zeros_equivalence_check(1, 10)


def test_window_primes_examples():
    assert window_primes(initial_state()).surviving_phases == (3, 5, 7)
    s2 = SieveState(CoProduct((2, 3)), 5, 7)
    assert window_primes(s2).surviving_phases == (5, 7, 11, 13, 17, 19, 23)
    s3 = SieveState(CoProduct((2, 3, 5)), 7, 11)
    rep = window_primes(s3)
    assert rep.surviving_phases == tuple(oracle.sieve(48).primes_in(7, 49))
    assert rep.surviving_phases == (7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)
    assert rep.matched


@pytest.mark.parametrize("N", range(1, 9))
def test_window_soundness_and_completeness(N):
    state = SieveState(CoProduct(tuple(FIRST[:N])), FIRST[N], FIRST[N + 1])
    rep = window_primes(state)
    lo, hi = FIRST[N], FIRST[N] ** 2
    assert (rep.lo, rep.hi) == (lo, hi)
    assert list(rep.surviving_phases) == oracle.sieve(hi).primes_in(lo, hi)
    assert rep.verdict == "match" and not rep.missing and not rep.extra
    assert all(a < b for a, b in zip(rep.surviving_phases, rep.surviving_phases[1:]))


def test_recursion_step_examples():
    s = initial_state()
    s = recursion_step(s)
    assert (s.coproduct.primes, s.next_prime, s.bound_prime) == ((2, 3), 5, 7)
    s = recursion_step(s)
    assert (s.coproduct.primes, s.next_prime, s.bound_prime) == ((2, 3, 5), 7, 11)
    s = recursion_step(s)
    assert (s.coproduct.primes, s.next_prime, s.bound_prime) == ((2, 3, 5, 7), 11, 13)


def test_recursion_makes_progress_for_fifty_steps():
    s = initial_state()
    for _ in range(50):
        rep = window_primes(s)
        assert rep.matched
        new = [k for k in rep.surviving_phases if k > s.next_prime]
        assert len(new) >= 2
        # Bertrand: the prime after bound_prime lies below 2*bound_prime <= bound_prime**2
        assert new[1] <= 2 * s.bound_prime
        s = recursion_step(s, rep)
    assert s.coproduct.primes == tuple(FIRST[:51])


def test_recursion_step_refuses_mismatch():
    s = initial_state()
    bad = WindowReport(1, 3, 9, (3, 5, 7, 8), (3, 5, 7), "mismatch", extra=(8,))
    with pytest.raises(VerificationError) as exc:
        recursion_step(s, bad)
    assert exc.value.report.first_offending_phase == 8


def test_sieve_state_validation():
    with pytest.raises(DomainError):
        SieveState(CoProduct((2, 3)), 7, 5)
    with pytest.raises(DomainError):
        SieveState(CoProduct((2, 3)), 5, 9)


def test_window_report_json_roundtrip():
    import json

    rep = window_primes(initial_state())
    again = WindowReport.from_dict(json.loads(json.dumps(rep.to_dict())))
    assert again == rep


def test_scan_window_merge_is_order_deterministic():
    primes = FIRST[:10]
    serial = scan_window(primes, 31, 200_000, jobs=1, chunk_size=997)
    parallel = scan_window(primes, 31, 200_000, jobs=4, chunk_size=997)
    assert serial == parallel
    assert serial == sorted(serial)


def test_scan_window_big_integer_path():
    primes = FIRST[:20]
    lo = 2**64 + 1
    got = scan_window(primes, lo, lo + 500)
    assert got == [k for k in range(lo, lo + 500) if all(k % p for p in primes)]


def _nested_floor_oracle(n):
    out = [7]
    while len(out) < n:
        s = out[-1] ** 2 - 1
        while not oracle.is_prime(s):
            s -= 1
        out.append(s)
    return out


def test_maximal_schedule():
    want = _nested_floor_oracle(3)
    assert want == [7, 47, 2207]
    for n in (1, 2, 3):
        res = run_schedule(n, "maximal")
        assert [e.largest_prime for e in res.entries] == want[:n]
    res = run_schedule(3, "maximal")
    for e in res.entries:
        assert e.count == oracle.prime_count(e.hi - 1)


def test_maximal_schedule_estimate_at_two():
    e = run_schedule(2, "maximal").entries[1]
    assert e.count == 15 == oracle.prime_count(47)
    assert e.estimate == pytest.approx(49 / (2 * math.log(7)))
    assert round(e.estimate, 2) == 12.59
    assert e.relative_error == pytest.approx((15 - 49 / (2 * math.log(7))) / 15)
    assert round(e.relative_error, 2) == 0.16
    assert count_estimate(1) is None


def test_conservative_schedule_adds_one_prime_per_step():
    res = run_schedule(5, "conservative")
    assert [r.lo for r in res.reports] == FIRST[1:6]
    assert [e.largest_prime for e in res.entries] == [oracle.largest_prime_below(p * p) for p in FIRST[1:6]]
    assert [e.count for e in res.entries] == [oracle.prime_count(p * p - 1) for p in FIRST[1:6]]


def test_modes_cross_check_on_shared_window():
    cons = run_schedule(3, "conservative").reports[2]
    maxi = run_schedule(2, "maximal").reports[1]
    assert (cons.lo, cons.hi) == (maxi.lo, maxi.hi) == (7, 49)
    assert cons.surviving_phases == maxi.surviving_phases


def test_schedule_budget_stop():
    res = run_schedule(4, "maximal", phase_budget=10**4)
    assert res.budget_exhausted
    assert [e.largest_prime for e in res.entries] == [7, 47, 2207]
    assert res.phases_scanned == (9 - 3) + (49 - 7) + (2209 - 47)


def test_schedule_until():
    res = run_schedule(None, "conservative", until=100)
    assert res.reports[-1].hi > 100
    assert [p for p in res.primes if p <= 100] == oracle.sieve(100).as_list()


def test_schedule_argument_errors():
    with pytest.raises(DomainError):
        run_schedule(0)
    with pytest.raises(DomainError):
        run_schedule(2, "greedy")


def test_circle_sum_examples(trial_prime):
    assert circle_sum([2, 3, 5], 37) == 0 and circle_sum_test([2, 3, 5], 37)
    assert trial_prime(37)
    assert circle_sum([2, 3, 5], 35) == 1 and not circle_sum_test([2, 3, 5], 35)
    with pytest.raises(DomainError):
        circle_sum_test([2, 3, 5, 7], 121)
    with pytest.raises(DomainError):
        circle_sum_test([2, 3, 5, 7], 7)
    with pytest.raises(DomainError):
        circle_sum_test([2, 5], 11)


@pytest.mark.parametrize("N", range(1, 7))
def test_circle_sum_exhaustive(N, trial_prime):
    first = FIRST[:N]
    for k in range(first[-1] + 1, FIRST[N] ** 2):
        assert circle_sum_test(first, k) == trial_prime(k)


@pytest.mark.parametrize("N", range(1, 7))
def test_candidate_density(N):
    first = FIRST[:N]
    want = Fraction(1)
    for p in first:
        want *= Fraction(p - 1, p)
    assert surviving_fraction(first) == want


def test_wheel_candidates_count():
    c = wheel_candidates((2, 3, 5), 10**6)
    # 33333 full periods of 8 residues, then 1 and 7 in the last ten
    assert c.size == (10**6 // 30) * 8 + sum(1 for r in (1, 7, 11, 13, 17, 19, 23, 29) if r <= 10**6 % 30)
    assert c.size == 266_666


def test_verify_window_detects_wrong_primes():
    rep = verify_window((2, 3), 5, 49, iteration=2)
    assert rep.verdict == "mismatch"
    assert rep.extra == (25, 35)
    assert rep.first_offending_phase == 25
