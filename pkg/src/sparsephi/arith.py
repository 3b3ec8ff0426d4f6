"""Exact 64-bit integer arithmetic.

Primality is a deterministic Miller-Rabin test (the first twelve prime bases
are a proven witness set for every n < 3.3e24). Factorization uses trial
division followed by Brent's variant of Pollard rho with fixed seeds, so the
output is deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, Overflow64Error, ResourceError

U64_MAX = 2**64 - 1
DEFAULT_MEMORY_BUDGET = 1 << 30  # bytes

#: returned by :func:`valuation` for ``n == 0``
INFINITY = math.inf

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_LIMIT = 1 << 20
_TRIAL_LIMIT = 1 << 10


def check_u64(value, what="value"):
    """Return ``value`` unchanged, or raise if it does not fit in 64 bits."""
    if value > U64_MAX:
        raise Overflow64Error(f"{what} = {value} exceeds 2^64 - 1")
    return value


def _check_positive(n, name="n"):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise DomainError(f"{name} must be an integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise DomainError(f"{name} must be >= 1, got {n}")
    check_u64(n, name)
    return n


@lru_cache(maxsize=1)
def _small_sieve():
    s = np.ones(_SMALL_LIMIT, dtype=bool)
    s[:2] = False
    for p in range(2, math.isqrt(_SMALL_LIMIT - 1) + 1):
        if s[p]:
            s[p * p::p] = False
    return s


def _miller_rabin(n):
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n):
    n = _check_positive(n)
    if n < _SMALL_LIMIT:
        return bool(_small_sieve()[n])
    if n % 2 == 0:
        return False
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return False
    return _miller_rabin(n)


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple  # ((p, e), ...) with p strictly increasing

    @property
    def primes(self):
        """The set of prime divisors, W(value)."""
        return frozenset(p for p, _ in self.factors)

    def as_dict(self):
        return dict(self.factors)

    def product(self):
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


def _pollard_brent(n):
    # n odd composite, no factor below _TRIAL_LIMIT
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"pollard rho failed on {n}")  # pragma: no cover


def _split(n, out):
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


def factorize(n):
    n = _check_positive(n)
    out = {}
    m = n
    for p in (2, 3, 5):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    # wheel 2*3*5
    p, steps, i = 7, (4, 2, 4, 2, 4, 6, 2, 6), 0
    while p <= _TRIAL_LIMIT and p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += steps[i]
        i = (i + 1) & 7
    if m > 1:
        if m < _TRIAL_LIMIT * _TRIAL_LIMIT:
            out[m] = out.get(m, 0) + 1
        else:
            _split(m, out)
    return Factorization(n, tuple(sorted(out.items())))


def euler_phi(n):
    f = factorize(n)
    out = n
    for p, _ in f.factors:
        out = out // p * (p - 1)
    return out


def valuation(p, n):
    """Largest r with p**r dividing n; :data:`INFINITY` when n == 0."""
    if not is_prime(p):
        raise DomainError(f"valuation base {p} is not prime")
    if n == 0:
        return INFINITY
    n = abs(int(n))
    r = 0
    while n % p == 0:
        n //= p
        r += 1
    return r


def primes_up_to(x, memory_budget=DEFAULT_MEMORY_BUDGET):
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    if x + 1 > memory_budget:
        raise ResourceError(f"prime sieve to {x} needs {x + 1} bytes, budget is {memory_budget}")
    if x < _SMALL_LIMIT:
        s = _small_sieve()[: x + 1]
    else:
        s = np.ones(x + 1, dtype=bool)
        s[:2] = False
        for p in range(2, math.isqrt(x) + 1):
            if s[p]:
                s[p * p::p] = False
    return [int(p) for p in np.flatnonzero(s)]


def nth_prime(k):
    """The k-th prime, 1-indexed (p_1 = 2)."""
    if k < 1:
        raise DomainError(f"prime index must be >= 1, got {k}")
    # p_k < k (ln k + ln ln k) for k >= 6
    bound = 15 if k < 6 else int(k * (math.log(k) + math.log(math.log(k)))) + 1
    return primes_up_to(bound)[k - 1]


def primorial(p):
    """Product of all primes <= p."""
    if not is_prime(p):
        raise DomainError(f"primorial argument {p} is not prime")
    out = 1
    for q in primes_up_to(p):
        out *= q
        if out > U64_MAX:
            raise Overflow64Error(f"primorial overflows 64 bits at prime {q}")
    return out


def divisors(n):
    """All positive divisors of n in increasing order."""
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)
