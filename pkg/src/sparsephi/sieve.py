"""Tabulated Euler phi and certified search horizons.

The table is built from a smallest-prime-factor array: every ``i`` gets
``phi(i)`` from ``phi(i // p)`` in one multiplication, processed in doubling
blocks so each block only reads entries that are already final.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .arith import DEFAULT_MEMORY_BUDGET, check_u64
from .errors import DomainError, HorizonTooSmallError, ResourceError

EULER_GAMMA = 0.577215664901532861
_RS_CONSTANT = 2.51
# spf + phi + block temporaries
_BYTES_PER_ENTRY = 24
# tables below this size are cheaper to rebuild than to read back
CACHE_MIN_HORIZON = 1 << 16

_cache_dir = None


def use_cache(directory):
    """Route large build_phi_sieve calls through an on-disk cache (None disables it)."""
    global _cache_dir
    _cache_dir = directory


class HorizonPolicy(enum.Enum):
    CONSERVATIVE_2M2 = "conservative"
    ROSSER_SCHOENFELD = "rosser-schoenfeld"


def phi_lower_bound(y):
    """Rosser-Schoenfeld lower bound for phi(y), valid for y >= 3."""
    t = math.log(math.log(y))
    return y / (math.exp(EULER_GAMMA) * t + _RS_CONSTANT / t)


def safe_horizon(m, policy=HorizonPolicy.CONSERVATIVE_2M2):
    """A horizon H with phi(y) > m for every y > H.

    The conservative bound comes from phi(y) >= sqrt(y / 2). The
    Rosser-Schoenfeld bound is much tighter; it is never allowed to exceed the
    conservative one.
    """
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    policy = HorizonPolicy(policy)
    conservative = max(2, 2 * m * m)
    if policy is HorizonPolicy.CONSERVATIVE_2M2:
        return conservative
    # phi_lower_bound is increasing on [3, inf): bisect for the first y with bound > m
    lo, hi = 3, max(4, conservative)
    if phi_lower_bound(hi) <= m:
        return conservative
    while lo < hi:
        mid = (lo + hi) // 2
        if phi_lower_bound(mid) > m:
            hi = mid
        else:
            lo = mid + 1
    # margin against rounding in the float evaluation
    return min(conservative, max(2, math.ceil(lo * 1.001) + 16))


@dataclass(frozen=True)
class PhiSieve:
    n: int
    values: np.ndarray  # values[k] = phi(k) for 1 <= k <= n, values[0] = 0

    def __getitem__(self, k):
        return int(self.values[k])

    def __len__(self):
        return self.n

    def require(self, horizon):
        if self.n < horizon:
            raise HorizonTooSmallError(self.n, horizon)

    def suffix_minima(self):
        """sm[k] = min(values[k:]) for 1 <= k <= n; sm[0] = 0."""
        sm = np.minimum.accumulate(self.values[::-1])[::-1].copy()
        sm[0] = 0
        return sm


def sieve_bytes(n):
    return _BYTES_PER_ENTRY * (n + 1)


def build_phi_sieve(n, memory_budget=DEFAULT_MEMORY_BUDGET):
    if n < 1:
        raise DomainError(f"sieve horizon must be >= 1, got {n}")
    check_u64(n, "sieve horizon")
    if sieve_bytes(n) > memory_budget:
        raise ResourceError(
            f"phi sieve to {n} needs ~{sieve_bytes(n)} bytes, budget is {memory_budget}"
        )
    if _cache_dir is not None and n >= CACHE_MIN_HORIZON:
        from . import cache

        table = cache.fetch(_cache_dir, n, _compute)
        return PhiSieve(n, table.values[: n + 1])
    return _compute(n)


def _compute(n):
    dtype = np.uint32 if n <= 0xFFFFFFFF else np.uint64
    spf = np.zeros(n + 1, dtype=dtype)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.arange(n + 1, dtype=dtype)
    unset = spf == 0
    spf[unset] = idx[unset]
    spf[0] = 0
    phi = np.zeros(n + 1, dtype=dtype)
    phi[1] = 1
    lo = 2
    while lo <= n:
        hi = min(2 * lo, n + 1)
        i = idx[lo:hi]
        p = spf[lo:hi]
        j = i // p
        prev = phi[j]
        phi[lo:hi] = np.where(j % p == 0, prev * p, prev * (p - 1))
        lo = hi
    return PhiSieve(n, phi)
