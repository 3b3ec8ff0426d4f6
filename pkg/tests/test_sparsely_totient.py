import math
from fractions import Fraction

import numpy as np
import pytest

from sparsephi.arith import euler_phi
from sparsephi.errors import CriterionViolatedError, DomainError, HorizonTooSmallError
from sparsephi.inverse_totient import inverse_phi, is_totient
from sparsephi.sieve import HorizonPolicy, build_phi_sieve
from sparsephi.sparsely_totient import (
    bn1_set,
    h_ratio_experiment,
    limiting_constant,
    masser_shiu_generate,
    masser_shiu_up_to,
    max_n1_ratio,
    n1_divisibility_check,
    n1_of,
    n1_set_up_to,
    n1_values,
    sanna_table,
    sieve_for,
    successor_ratios,
)

RS = HorizonPolicy.ROSSER_SCHOENFELD

N1_FROZEN = {1: 2, 2: 6, 4: 12, 8: 30, 12: 42, 48: 210, 54: 210, 80: 330, 100: 420, 200: 840, 300: 1260}


def test_sieve_examples():
    assert build_phi_sieve(1).values.tolist() == [0, 1]
    assert build_phi_sieve(12)[12] == 4
    assert build_phi_sieve(10**6)[30030] == 5760


def test_n1_frozen_both_policies():
    for policy in HorizonPolicy:
        s = sieve_for(300, policy)
        for m, v in N1_FROZEN.items():
            assert n1_of(m, s, policy) == v
        assert n1_values(list(N1_FROZEN), s, policy).tolist() == list(N1_FROZEN.values())


def brute_n1(m, horizon):
    return max(x for x in range(1, horizon + 1) if euler_phi(x) <= m)


def test_n1_against_brute_force():
    s = sieve_for(60)
    for m in range(1, 61):
        assert n1_of(m, s) == brute_n1(m, 2 * m * m)


def test_n1_monotone_and_dominates_n2():
    s = sieve_for(1000)
    vals = n1_values(np.arange(1, 1001), s)
    assert np.all(np.diff(vals) >= 0)
    bn1 = set(bn1_set(1, 1000))
    for m in range(1, 1001):
        if is_totient(m):
            assert vals[m - 1] >= inverse_phi(m).n2
            assert (vals[m - 1] == inverse_phi(m).n2) == (m in bn1)


def test_horizon_too_small():
    s = build_phi_sieve(100)
    with pytest.raises(HorizonTooSmallError) as exc:
        n1_of(50, s)
    assert exc.value.required == 5000
    with pytest.raises(DomainError):
        n1_of(0, s)


def test_n1_set_small():
    assert [r.n for r in n1_set_up_to(100)] == [2, 6, 12, 18, 30, 42, 60, 66, 90]
    assert {2, 6} <= {r.n for r in n1_set_up_to(10)}
    assert 30 in {r.n for r in n1_set_up_to(30)}


def test_n1_set_definition_within_range():
    recs = n1_set_up_to(100)
    for r in recs:
        assert r.m == euler_phi(r.n)
        assert all(euler_phi(y) > r.m for y in range(r.n + 1, 101))


def test_n1_set_policies_agree():
    a = [r.n for r in n1_set_up_to(1000)]
    b = [r.n for r in n1_set_up_to(1000, RS)]
    assert a == b


def test_n1_set_1e4():
    recs = n1_set_up_to(10**4, RS)
    assert len(recs) == 49 and recs[-1].n == 9870
    assert all(r.certified_by == "SIEVE" and r.horizon == 20000 for r in recs)


def test_masser_shiu_examples():
    assert masser_shiu_generate(1, 2, 0).n == 6
    assert masser_shiu_generate(1, 3, 0).n == 30
    with pytest.raises(CriterionViolatedError) as exc:
        masser_shiu_generate(1, 2, 5)
    assert exc.value.inequality == "d (p_{k+l} - 1) < (d + 1)(p_k - 1)"
    with pytest.raises(CriterionViolatedError) as exc:
        masser_shiu_generate(4, 2, 0)
    assert exc.value.inequality == "d < p_{k+1} - 1"
    rec = masser_shiu_generate(1, 3, 1)
    assert rec.n == 2 * 3 * 7 and rec.params == (1, 3, 1) and rec.certified_by == "MASSER_SHIU"
    with pytest.raises(CriterionViolatedError):
        masser_shiu_generate(2, 3, 1)  # 2 * 6 < 3 * 4 fails at equality


def test_masser_shiu_outputs_are_sparsely_totient():
    members = {r.n for r in n1_set_up_to(10**4, RS)}
    gen = masser_shiu_up_to(10**4)
    assert len(gen) == 28
    assert all(r.n in members for r in gen)


def test_divisibility_thresholds():
    assert n1_divisibility_check(2, 1, 100) == 1
    assert n1_divisibility_check(3, 1, 100) == 2
    assert n1_divisibility_check(97, 1, 50) is None
    with pytest.raises(DomainError):
        n1_divisibility_check(4, 1, 10)


def test_bn1_frozen():
    assert bn1_set(1, 300) == [
        1, 2, 4, 6, 8, 12, 16, 20, 24, 32, 36, 40, 48, 64, 72, 80, 96,
        120, 128, 144, 160, 176, 192, 224, 240, 288,
    ]


def test_h_ratio():
    r = h_ratio_experiment(5, 7)
    assert (r.a, r.b, r.m_a, r.m_b, r.n1_a, r.n1_b) == (30, 42, 8, 12, 30, 42)
    assert (r.ratio_a, r.ratio_b) == (Fraction(15, 4), Fraction(7, 2))
    assert r.verdict
    r = h_ratio_experiment(7, 11, RS)
    assert (r.a, r.b, r.m_a, r.m_b) == (210, 330, 48, 80) and r.verdict
    with pytest.raises(DomainError):
        h_ratio_experiment(3, 5)
    with pytest.raises(DomainError):
        h_ratio_experiment(5, 11)


def test_max_ratio_and_diagnostics():
    m, v, ratio = max_n1_ratio(10**5)
    assert (m, v, ratio) == (92160, 510510, Fraction(17017, 3072))
    assert ratio >= 4
    assert math.isclose(limiting_constant(), 1.7810724179901979)
    rows = sanna_table([1000, 10**4], sieve_for(10**4, RS), RS)
    assert all(1 < row[3] < 3 for row in rows)
    ratios = successor_ratios(n1_set_up_to(1000))
    assert all(b > a and r > 1 for a, b, r in ratios)
