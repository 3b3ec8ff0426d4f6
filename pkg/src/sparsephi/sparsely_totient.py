"""N1(m) = max{x : phi(x) <= m} and the sparsely totient numbers.

Every N1 query is answered from a phi table whose horizon H satisfies
phi(y) > m for all y > H (see :func:`sparsephi.sieve.safe_horizon`), so the
answer is certified rather than heuristic. With suffix minima
``sm[k] = min(phi(k..H))``, N1(m) is the number of k with ``sm[k] <= m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import DEFAULT_MEMORY_BUDGET, check_u64, euler_phi, is_prime, nth_prime, primes_up_to, primorial
from .errors import CriterionViolatedError, DomainError
from .inverse_totient import inverse_phi
from .sieve import EULER_GAMMA, HorizonPolicy, PhiSieve, build_phi_sieve, safe_horizon  # noqa: F401

@dataclass(frozen=True)
class SparselyTotientRecord:
    n: int
    m: int
    certified_by: str  # "SIEVE" or "MASSER_SHIU"
    horizon: int | None = None
    params: tuple | None = None  # (d, k, l) for MASSER_SHIU


def sieve_for(m_max, policy=HorizonPolicy.CONSERVATIVE_2M2, memory_budget=DEFAULT_MEMORY_BUDGET):
    """A phi table large enough to answer N1(m) for every m <= m_max."""
    return build_phi_sieve(safe_horizon(m_max, policy), memory_budget)


def n1_of(m, sieve, policy=HorizonPolicy.CONSERVATIVE_2M2):
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    sieve.require(safe_horizon(m, policy))
    hits = np.flatnonzero(sieve.values[1:] <= m)
    return int(hits[-1]) + 1


def n1_values(ms, sieve, policy=HorizonPolicy.CONSERVATIVE_2M2, suffix_minima=None):
    """Vectorized N1 over an array of m values."""
    ms = np.asarray(ms, dtype=np.int64)
    if ms.size == 0:
        return ms
    sieve.require(safe_horizon(int(ms.max()), policy))
    sm = sieve.suffix_minima() if suffix_minima is None else suffix_minima
    return np.searchsorted(sm[1:], ms, side="right").astype(np.int64)


def n1_set_up_to(x, policy=HorizonPolicy.CONSERVATIVE_2M2, memory_budget=DEFAULT_MEMORY_BUDGET):
    """All sparsely totient numbers <= x, each certified by a sieve scan.

    Any element n <= x has phi(n) < phi(y) for every y in (x, 2x], so the
    minimum M of phi over (x, 2x] caps phi(n); the table is then extended to
    safe_horizon(M) to rule out every larger competitor.
    """
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    boot = build_phi_sieve(2 * x, memory_budget)
    cap = int(boot.values[x + 1 :].min())
    horizon = max(2 * x, safe_horizon(cap, policy))
    sieve = boot if horizon == 2 * x else build_phi_sieve(horizon, memory_budget)
    sm = sieve.suffix_minima()
    vals = sieve.values
    ns = np.flatnonzero(vals[1 : x + 1] < sm[2 : x + 2]) + 1
    return [SparselyTotientRecord(int(n), int(vals[n]), "SIEVE", horizon) for n in ns]


def masser_shiu_generate(d, k, l):
    """d * p_1 ... p_{k-1} * p_{k+l}, provided the (d, k, l) criterion holds."""
    if k < 2 or d < 1 or l < 0:
        raise DomainError(f"need k >= 2, d >= 1, l >= 0; got d={d}, k={k}, l={l}")
    pk, pk1, pkl = nth_prime(k), nth_prime(k + 1), nth_prime(k + l)
    if not d < pk1 - 1:
        raise CriterionViolatedError("d < p_{k+1} - 1", f"{d} >= {pk1 - 1}")
    if not d * (pkl - 1) < (d + 1) * (pk - 1):
        raise CriterionViolatedError(
            "d (p_{k+l} - 1) < (d + 1)(p_k - 1)", f"{d * (pkl - 1)} >= {(d + 1) * (pk - 1)}"
        )
    n = d * pkl
    for p in primes_up_to(nth_prime(k - 1)):
        n *= p
    check_u64(n, "Masser-Shiu product")
    return SparselyTotientRecord(n, euler_phi(n), "MASSER_SHIU", None, (d, k, l))


def _totients_in(lo, hi):
    return [m for m in range(max(1, lo), hi + 1) if inverse_phi(m)]


def n1_divisibility_check(p, lo, hi, policy=HorizonPolicy.CONSERVATIVE_2M2,
                          memory_budget=DEFAULT_MEMORY_BUDGET):
    """Least totient m0 in [lo, hi] with p | N1(m) for every totient m in [m0, hi].

    Returns None when N1 at the last totient of the range is not divisible by p.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    ms = _totients_in(lo, hi)
    if not ms:
        return None
    vals = n1_values(ms, sieve_for(hi, policy, memory_budget), policy)
    threshold = None
    for m, v in zip(reversed(ms), vals[::-1]):
        if v % p:
            break
        threshold = m
    return threshold


def bn1_set(lo, hi, policy=HorizonPolicy.CONSERVATIVE_2M2, memory_budget=DEFAULT_MEMORY_BUDGET):
    """Totients m in [lo, hi] with N1(m) = N2(m)."""
    ms = _totients_in(lo, hi)
    if not ms:
        return []
    vals = n1_values(ms, sieve_for(hi, policy, memory_budget), policy)
    return [m for m, v in zip(ms, vals) if v == inverse_phi(m).n2]


@dataclass(frozen=True)
class HRatioRecord:
    p1: int
    p2: int
    a: int
    b: int
    m_a: int
    m_b: int
    n1_a: int
    n1_b: int
    ratio_a: Fraction
    ratio_b: Fraction

    @property
    def verdict(self):
        return (
            self.n1_a == self.a
            and self.n1_b == self.b
            and self.m_a < self.m_b
            and self.ratio_a > self.ratio_b
        )


def h_ratio_experiment(p1, p2, policy=HorizonPolicy.CONSERVATIVE_2M2,
                       memory_budget=DEFAULT_MEMORY_BUDGET):
    """Witness that N1(m)/m is not increasing on BN1.

    a is the primorial of p1 and b the primorial of p2 with p1 removed; both
    are sparsely totient, phi(a) < phi(b), yet a/phi(a) > b/phi(b).
    """
    if not (is_prime(p1) and is_prime(p2) and p1 < p2):
        raise DomainError(f"({p1}, {p2}) are not increasing primes")
    if primes_up_to(p2)[-2] != p1:
        raise DomainError(f"{p1} and {p2} are not consecutive primes")
    if p1 <= 3:
        raise DomainError("the construction needs 3 < p1")
    a = primorial(p1)
    b = primorial(p2) // p1
    m_a, m_b = euler_phi(a), euler_phi(b)
    sieve = sieve_for(max(m_a, m_b), policy, memory_budget)
    na, nb = n1_values([m_a, m_b], sieve, policy)
    return HRatioRecord(p1, p2, a, b, m_a, m_b, int(na), int(nb), Fraction(a, m_a), Fraction(b, m_b))


def totients_from_sieve(sieve, x, policy=HorizonPolicy.CONSERVATIVE_2M2):
    """Sorted array of totients <= x, read off a sieve that covers safe_horizon(x)."""
    sieve.require(safe_horizon(x, policy))
    v = sieve.values[1:]
    return np.unique(v[v <= x]).astype(np.int64)


def max_n1_ratio(m_max, policy=HorizonPolicy.ROSSER_SCHOENFELD, memory_budget=DEFAULT_MEMORY_BUDGET):
    """(m, N1(m), N1(m)/m) maximising the ratio over totients m <= m_max."""
    sieve = sieve_for(m_max, policy, memory_budget)
    ms = totients_from_sieve(sieve, m_max, policy)
    vals = n1_values(ms, sieve, policy)
    # exact argmax via cross-multiplication against the float candidate
    i = int(np.argmax(vals / ms))
    best = Fraction(int(vals[i]), int(ms[i]))
    for j in np.flatnonzero(vals / ms >= float(best) * (1 - 1e-12)):
        r = Fraction(int(vals[j]), int(ms[j]))
        if r > best:
            best, i = r, int(j)
    return int(ms[i]), int(vals[i]), best


def sanna_table(ms, sieve, policy=HorizonPolicy.CONSERVATIVE_2M2):
    """Rows (m, N1(m), N1(m)/m, N1(m)/(m log log m)); diagnostic only."""
    vals = n1_values(ms, sieve, policy)
    rows = []
    for m, v in zip(ms, vals):
        m, v = int(m), int(v)
        lll = math.log(math.log(m)) if m > 15 else float("nan")
        rows.append((m, v, v / m, v / (m * lll)))
    return rows


def limiting_constant():
    """e^gamma, the conjectured limit of N1(m) / (m log log m)."""
    return math.exp(EULER_GAMMA)


def successor_ratios(records):
    """n'/n for consecutive sparsely totient numbers; diagnostic only."""
    ns = [r.n for r in records]
    return [(a, b, b / a) for a, b in zip(ns, ns[1:])]


def masser_shiu_up_to(x):
    """Every (d, k, l)-certified product <= x."""
    out = {}
    k = 2
    while primorial(nth_prime(k - 1)) * nth_prime(k) <= x:
        base = primorial(nth_prime(k - 1))
        for d in range(1, nth_prime(k + 1) - 1):
            l = 0
            while d * base * nth_prime(k + l) <= x:
                try:
                    rec = masser_shiu_generate(d, k, l)
                except CriterionViolatedError:
                    break  # the inequality only gets worse as l grows
                out.setdefault(rec.n, rec)
                l += 1
        k += 1
    return [out[n] for n in sorted(out)]
