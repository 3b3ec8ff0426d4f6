import math

import numpy as np
import pytest

from sparsephi.arith import euler_phi, primorial
from sparsephi.errors import HorizonTooSmallError, ResourceError
from sparsephi.sieve import (
    EULER_GAMMA,
    HorizonPolicy,
    build_phi_sieve,
    phi_lower_bound,
    safe_horizon,
)


def test_sieve_matches_pointwise_phi():
    s = build_phi_sieve(20000)
    assert s.values.dtype == np.uint32
    assert s.values[0] == 0
    assert all(s[k] == euler_phi(k) for k in range(1, 20001))


def test_lower_bound_holds_on_sieve():
    s = build_phi_sieve(10**6)
    y = np.arange(3, 10**6 + 1, dtype=np.float64)
    ll = np.log(np.log(y))
    bound = y / (math.exp(EULER_GAMMA) * ll + 2.51 / ll)
    assert np.all(s.values[3:] > bound)


def test_lower_bound_at_primorial():
    n = primorial(23)
    assert n == 223092870
    assert euler_phi(n) > phi_lower_bound(n)
    # tight-ish: within 10 percent at a primorial
    assert euler_phi(n) < 1.1 * phi_lower_bound(n)


def test_conservative_horizon():
    assert safe_horizon(1) == 2
    assert safe_horizon(100) == 20000


def test_rs_horizon_certifies_small_m():
    s = build_phi_sieve(2 * 2000**2)
    sm = s.suffix_minima()
    for m in list(range(1, 200)) + list(range(200, 2001, 37)):
        h = safe_horizon(m, HorizonPolicy.ROSSER_SCHOENFELD)
        assert h <= 2 * m * m or m == 1
        # every y beyond h (up to the conservative bound) has phi(y) > m
        if h + 1 <= 2 * m * m:
            assert sm[h + 1] > m


def test_rs_horizon_value():
    assert safe_horizon(10**5, "rosser-schoenfeld") == 557734


def test_require_and_budget():
    s = build_phi_sieve(100)
    s.require(100)
    with pytest.raises(HorizonTooSmallError) as exc:
        s.require(101)
    assert exc.value.required == 101
    with pytest.raises(ResourceError):
        build_phi_sieve(10**6, memory_budget=1000)


def test_suffix_minima():
    s = build_phi_sieve(30)
    sm = s.suffix_minima()
    for k in range(1, 31):
        assert sm[k] == min(s.values[k:])
