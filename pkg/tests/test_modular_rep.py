import math
from fractions import Fraction

import pytest

from wavenum import oracle
from wavenum.conumber_sieve import CoProduct, coproduct_value
from wavenum.errors import DomainError
from wavenum.modular_rep import (
    TABLE1_EXPECTED,
    ModularCoProduct,
    ModularFrequency,
    check_coprime_table,
    check_table1,
    identity_holds,
    modular_phase_value,
    modular_product_value,
    nonblank_density,
    prime_subsets,
    table1,
    theorem9_filter,
    theorem9_for_first,
    unit_permutation_check,
    weights_idempotent_check,
    zeta_proportion,
)

FIRST = oracle.first_primes(8)


def test_modular_phase_value_examples():
    assert modular_phase_value(5, 7, starred=True) == ModularFrequency(2, 5)
    assert modular_phase_value(5, 7, starred=True).display() == "2/5"
    assert modular_phase_value(3, 9, starred=True).is_blank
    assert modular_phase_value(4, 4) == ModularFrequency(0, 4)
    assert [modular_phase_value(4, k).display() for k in range(1, 5)] == ["1/4", "2/4", "3/4", "0/4"]


def test_modular_frequency_invariant():
    with pytest.raises(DomainError):
        ModularFrequency(5, 5)
    assert ModularFrequency(None, 6).display() == "□"


def test_modular_product_examples():
    m23 = ModularCoProduct((2, 3))
    assert modular_product_value(m23, 1) == ModularFrequency(5, 6)
    assert modular_product_value(m23, 5) == ModularFrequency(1, 6)
    assert [modular_product_value(m23, k).display() for k in range(1, 7)] == ["5/6", "□", "□", "□", "1/6", "□"]
    m235 = ModularCoProduct((2, 3, 5))
    assert modular_product_value(m235, 7) == ModularFrequency(7, 30)
    assert modular_product_value(m235, 10).is_blank


def test_modular_coproduct_rejects_duplicates_and_composites():
    with pytest.raises(DomainError):
        ModularCoProduct((2, 2, 3))
    with pytest.raises(DomainError):
        ModularCoProduct((2, 9))


def test_weights():
    m = ModularCoProduct((2, 3, 5, 7))
    assert m.weights == (105, 70, 42, 30)
    for p, w in zip(m.primes, m.weights):
        assert w * p == m.period and math.gcd(w, p) == 1


def test_table1_fixture():
    cols = table1()
    assert check_table1(cols) == []
    assert cols[10].cells() == ["1/2", "2/3", "1/5", "11/30"]
    assert cols[29].cells() == ["□", "□", "□", "□"]
    assert cols[28].product.display() == "29/30"
    nonblank = [c.k for c in cols if not c.product.is_blank]
    assert nonblank == [1, 7, 11, 13, 17, 19, 23, 29]
    assert all(cols[k - 1].product == ModularFrequency(k, 30) for k in nonblank)


def test_table1_fixture_detects_a_changed_cell():
    cols = table1()
    broken = cols[:6] + [type(cols[6])(7, cols[6].rows, ModularFrequency(11, 30))] + cols[7:]
    assert check_table1(broken) == ["k=7 row product: got 11/30, expected 7/30"]


def test_table1_fixture_shape():
    assert all(len(v) == 30 for v in TABLE1_EXPECTED.values())


def test_generalized_table():
    cols = table1((2, 3, 5, 7))
    assert len(cols) == 210
    nonblank = sum(not c.product.is_blank for c in cols)
    assert nonblank == sum(1 for k in range(1, 211) if math.gcd(k, 210) == 1) == 48
    assert check_coprime_table((2, 3, 5, 7), cols) == []


def test_weights_idempotent_examples():
    assert (15 % 2, 10 % 3, 6 % 5) == (1, 1, 1)
    assert weights_idempotent_check((2, 3, 5))
    assert 2 % 3 == 2
    assert not weights_idempotent_check((2, 3))
    assert 42 % 5 == 2
    assert not weights_idempotent_check((2, 3, 5, 7))


def test_zeta_proportion_examples():
    assert zeta_proportion((2,)) == Fraction(1, 2)
    assert zeta_proportion((2, 3, 5)) == Fraction(4, 15) == Fraction(8, 30)
    assert zeta_proportion((2, 3, 5, 7, 11)) == Fraction(480, 2310) == Fraction(16, 77)


@pytest.mark.parametrize("N", range(1, 7))
def test_zeta_proportion_equals_counted_density(N):
    first = FIRST[:N]
    P = math.prod(first)
    phi = sum(1 for k in range(1, P + 1) if math.gcd(k, P) == 1)
    assert zeta_proportion(first) == nonblank_density(first) == Fraction(phi, P)


@pytest.mark.parametrize("N", range(1, 7))
def test_blank_iff_coproduct_zero(N):
    first = tuple(FIRST[:N])
    mcp, cp = ModularCoProduct(first), CoProduct(first)
    for k in range(1, mcp.period + 1):
        assert modular_product_value(mcp, k).is_blank == coproduct_value(cp, k).is_zero


@pytest.mark.parametrize("N", range(1, 7))
def test_unit_permutation(N):
    assert unit_permutation_check(FIRST[:N])


@pytest.mark.parametrize("N", range(1, 7))
def test_component_congruence(N):
    mcp = ModularCoProduct(tuple(FIRST[:N]))
    for k in range(1, min(mcp.period, 5000) + 1):
        total = sum(w * (k % p) for p, w in zip(mcp.primes, mcp.weights))
        for p, w in zip(mcp.primes, mcp.weights):
            assert (total - w * k) % p == 0
            assert (total % p == 0) == (k % p == 0)


def test_identity_condition_over_all_subsets():
    subsets = list(prime_subsets())
    assert len(subsets) == 63
    for s in subsets:
        assert identity_holds(s) == weights_idempotent_check(s), s


def test_theorem9_n3():
    rep = theorem9_filter((2, 3, 5), 7)
    assert (rep.lo, rep.hi) == (7, 30)
    assert rep.equality_phases == rep.nonzero_phases == (7, 11, 13, 17, 19, 23, 29)
    assert rep.agreement and rep.window_agreement
    assert rep.window_nonzero_phases == tuple(oracle.sieve(48).primes_in(7, 49))


def test_theorem9_n1():
    rep = theorem9_filter((2,), 3)
    assert rep.agreement and rep.window_agreement
    assert rep.window_equality_phases == rep.window_nonzero_phases == (3, 5, 7)


def test_theorem9_n2():
    rep = theorem9_filter((2, 3), 5)
    assert (rep.lo, rep.hi) == (5, 6)
    assert rep.nonzero_phases == (5,) and rep.equality_phases == ()
    assert not rep.agreement


def test_theorem9_n4_witness():
    assert 105 * 1 + 70 * 2 + 42 * 1 + 30 * 4 == 407 and 407 % 210 == 197
    mcp = ModularCoProduct((2, 3, 5, 7))
    assert modular_product_value(mcp, 11) == ModularFrequency(197, 210)
    rep = theorem9_filter((2, 3, 5, 7), 11)
    assert 11 in rep.nonzero_phases and 11 not in rep.equality_phases
    assert not rep.agreement


@pytest.mark.parametrize("N", range(1, 7))
def test_theorem9_nonblank_equals_oracle(N):
    rep = theorem9_for_first(N)
    assert rep.nonzero_matches_oracle
    assert rep.agreement == rep.weights_idempotent


def test_theorem9_report_serializes():
    import json

    d = json.loads(json.dumps(theorem9_for_first(3).to_dict()))
    assert d["equality_phases"] == [7, 11, 13, 17, 19, 23, 29]
    assert d["nonzero_matches_oracle"] is True
