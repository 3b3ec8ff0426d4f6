"""Enumeration of phi^{-1}(m) and the extremal maps N2, N3.

``inverse_phi`` assembles solutions from prime powers: a prime p can divide a
solution only if (p - 1) | m, and p^k contributes p^(k-1) (p - 1). Recursing
over the candidate primes in decreasing order, each used at most once, yields
every solution exactly once, so completeness follows from the divisor
structure of m alone.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import U64_MAX, _check_positive, divisors, factorize, is_prime
from .errors import DomainError, NotATotientError, Overflow64Error, ResourceError
from .sieve import build_phi_sieve

DEFAULT_SCAN_BUDGET = 10**8


@dataclass(frozen=True)
class PreimageSet:
    m: int
    solutions: tuple

    @property
    def n2(self):
        if not self.solutions:
            raise NotATotientError(self.m)
        return self.solutions[-1]

    @property
    def n3(self):
        if not self.solutions:
            raise NotATotientError(self.m)
        return self.solutions[0]

    @property
    def multiplicity(self):
        return len(self.solutions)

    def __bool__(self):
        return bool(self.solutions)

    def __contains__(self, x):
        return x in self.solutions

    def to_dict(self):
        d = {"m": self.m, "solutions": list(self.solutions)}
        if self.solutions:
            d["n2"] = self.n2
            d["n3"] = self.n3
        return d


def _enumerate(m):
    primes = sorted(d + 1 for d in divisors(m) if d + 1 <= U64_MAX and is_prime(d + 1))
    out = []

    def rec(rem, top, acc):
        # top: exclusive upper index into primes
        if rem == 1:
            out.append(acc)
        elif rem & 1:
            return
        i = min(top, bisect.bisect_right(primes, rem + 1))
        while i > 0:
            i -= 1
            p = primes[i]
            if rem % (p - 1):
                continue
            r = rem // (p - 1)
            pk = p
            while True:
                if acc * pk > U64_MAX:
                    raise Overflow64Error(f"candidate solution {acc * pk} of phi(x) = {m} exceeds 64 bits")
                rec(r, i, acc * pk)
                if r % p:
                    break
                r //= p
                pk *= p

    rec(m, len(primes), 1)
    return tuple(sorted(out))


@lru_cache(maxsize=4096)
def inverse_phi(m):
    m = _check_positive(m, "m")
    if m > 1 and m & 1:
        return PreimageSet(m, ())
    return PreimageSet(m, _enumerate(m))


_oracle_table = None


def _oracle_phi_table(horizon):
    # one shared table, regrown on demand
    global _oracle_table
    if _oracle_table is None or _oracle_table.n < horizon:
        _oracle_table = build_phi_sieve(horizon)
    return _oracle_table.values


def inverse_phi_oracle(m, scan_budget=DEFAULT_SCAN_BUDGET):
    """Brute-force phi^{-1}(m): scan every n <= 2 m^2.

    The bound is exhaustive because phi(n) >= sqrt(n / 2) for all n.
    """
    m = _check_positive(m, "m")
    horizon = max(2, 2 * m * m)
    if horizon > scan_budget:
        raise ResourceError(f"oracle scan to {horizon} exceeds budget {scan_budget}")
    values = _oracle_phi_table(horizon)[: horizon + 1]
    sols = np.flatnonzero(values == m)
    return PreimageSet(m, tuple(int(x) for x in sols))


def inverse_phi_oracle_batch(m_max, scan_budget=DEFAULT_SCAN_BUDGET):
    """Oracle preimages for every 1 <= m <= m_max from a single scan to 2 m_max^2."""
    horizon = max(2, 2 * m_max * m_max)
    if horizon > scan_budget:
        raise ResourceError(f"oracle scan to {horizon} exceeds budget {scan_budget}")
    values = _oracle_phi_table(horizon)[: horizon + 1]
    ns = np.flatnonzero(values <= m_max)[1:]  # drop index 0
    vs = values[ns].astype(np.int64)
    ns = ns[ns <= 2 * vs * vs]
    vs = values[ns].astype(np.int64)
    order = np.lexsort((ns, vs))
    ns, vs = ns[order], vs[order]
    bounds = np.searchsorted(vs, np.arange(1, m_max + 2))
    return {
        m: PreimageSet(m, tuple(int(x) for x in ns[bounds[m - 1] : bounds[m]]))
        for m in range(1, m_max + 1)
    }


def n2(m):
    return inverse_phi(m).n2


def n3(m):
    return inverse_phi(m).n3


def multiplicity(m):
    return inverse_phi(m).multiplicity


def is_totient(m):
    return bool(inverse_phi(m))


def _require_totient(m):
    pre = inverse_phi(m)
    if not pre:
        raise NotATotientError(m)
    return pre


def _prime_power(x):
    """(p, a) if x = p^a with a >= 1, else None."""
    f = factorize(x).factors
    if len(f) == 1:
        return f[0]
    return None


@dataclass(frozen=True)
class KleeClassification:
    m: int
    shape: str  # "PAIR" or "QUAD"
    p: int
    exponent: int  # alpha for PAIR, beta for QUAD
    q: int | None = None

    def solutions(self):
        pe = self.p**self.exponent
        sols = [pe, 2 * pe]
        if self.shape == "QUAD":
            sols += [self.q, 2 * self.q]
        return tuple(sorted(sols))


def klee_classify(m):
    """Shape of phi^{-1}(m) for m = 2 (mod 4), m > 2."""
    if m == 2:
        raise DomainError("m = 2 has three preimages {3, 4, 6}; the classification needs m > 2")
    if m % 4 != 2:
        raise DomainError(f"{m} is not 2 mod 4")
    pre = _require_totient(m)
    odd = [x for x in pre.solutions if x & 1]
    pp = [_prime_power(x) for x in odd]
    if any(t is None or t[0] % 4 != 3 for t in pp):
        raise DomainError(f"phi^-1({m}) has a solution outside the form p^a, 2p^a with p = 3 mod 4")
    if len(odd) == 1:
        p, a = pp[0]
        cls = KleeClassification(m, "PAIR", p, a)
    elif len(odd) == 2:
        (p, beta), (q, gamma) = sorted(pp)
        if gamma != 1 or beta <= 1:
            raise DomainError(f"phi^-1({m}) has two odd solutions of unexpected shape {odd}")
        cls = KleeClassification(m, "QUAD", p, beta, q)
    else:
        raise DomainError(f"phi^-1({m}) has {len(odd)} odd solutions")
    if cls.solutions() != pre.solutions:
        raise DomainError(f"shape {cls} does not reproduce phi^-1({m}) = {pre.solutions}")
    return cls


@dataclass(frozen=True)
class BoundReport:
    m: int
    n2: int
    n3: int
    ratio: Fraction
    strict_ok: bool
    # only defined for m = 2 (mod 4)
    tight_ok: bool | None
    ratio_ok: bool | None

    @property
    def passed(self):
        return self.strict_ok and self.tight_ok is not False and self.ratio_ok is not False


def check_preimage_bounds(m):
    """m < N3 < 2m and 2m < N2 < 4m, plus the sharper 2 (mod 4) bounds."""
    if not (m % 4 == 2 or m % 8 == 4):
        raise DomainError(f"{m} is neither 2 mod 4 nor 4 mod 8")
    pre = _require_totient(m)
    hi, lo = pre.n2, pre.n3
    ratio = Fraction(hi, lo)
    strict_ok = m < lo < 2 * m and 2 * m < hi < 4 * m
    tight_ok = ratio_ok = None
    if m % 4 == 2:
        tight_ok = 2 * lo <= 3 * m and hi <= 3 * m
        ratio_ok = 2 <= ratio <= 3
    return BoundReport(m, hi, lo, ratio, strict_ok, tight_ok, ratio_ok)


def ratio_n2_n3(m):
    pre = _require_totient(m)
    return Fraction(pre.n2, pre.n3)


@dataclass(frozen=True)
class OddSolution:
    u: int
    form: str  # "two_primes" or "prime_power"
    params: tuple  # (z1, z2) or (z3,)
    in_range: bool  # 4m < u <= 7m


def check_odd_4m_lemma(m):
    """Every odd u with phi(u) = 4m, tagged with its closed form (m odd)."""
    if m < 1 or m % 2 == 0:
        raise DomainError(f"m must be a positive odd integer, got {m}")
    out = []
    for u in inverse_phi(4 * m).solutions:
        if not u & 1:
            continue
        primes = [p for p, _ in factorize(u).factors]
        if len(primes) == 2:
            z1, z2 = ((p - 1) // 2 for p in primes)
            ok = m % (z1 * z2) == 0 and Fraction((2 * z1 + 1) * (2 * z2 + 1), z1 * z2) * m == u
            form, params = "two_primes", (z1, z2)
        elif len(primes) == 1 and primes[0] % 4 == 1:
            z3 = (primes[0] - 1) // 4
            ok = m % z3 == 0 and Fraction(4 * z3 + 1, z3) * m == u
            form, params = "prime_power", (z3,)
        else:
            ok, form, params = False, "unexpected", tuple(primes)
        if not ok:
            raise DomainError(f"odd solution {u} of phi(u) = {4 * m} fits neither closed form")
        out.append(OddSolution(u, form, params, 4 * m < u <= 7 * m))
    return out


check_bounds_thm14 = check_preimage_bounds  # name kept for external callers
