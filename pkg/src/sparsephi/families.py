"""Explicit families inside N2 and N3, with certificates.

Each generator returns a :class:`FamilyCertificate` recording the element,
its phi value, whether the claimed extremal property held, and which method
produced the evidence:

* ``ORACLE_SCAN``: brute-force scan of n <= 2 m^2 (m <= 2000),
* ``STRUCTURAL_INVPHI``: the structural preimage enumeration,
* ``SIEVE``: a phi table up to a certified horizon for m.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .arith import (
    DEFAULT_MEMORY_BUDGET,
    check_u64,
    euler_phi,
    factorize,
    is_prime,
    primes_up_to,
)
from .errors import DomainError, HypothesisError, ResourceError
from .inverse_totient import inverse_phi, inverse_phi_oracle
from .sieve import HorizonPolicy, build_phi_sieve, safe_horizon, sieve_bytes

ORACLE_SCAN = "ORACLE_SCAN"
STRUCTURAL_INVPHI = "STRUCTURAL_INVPHI"
SIEVE = "SIEVE"

ORACLE_LIMIT = 2000
STRUCTURAL_LIMIT = 10**7
# N1 membership is only decided when the sieve stays this small
N1_SIEVE_LIMIT = 10**7


@dataclass(frozen=True)
class FermatPrimeTable:
    known: tuple = (3, 5, 17, 257, 65537)
    next_exists: str = "UNKNOWN"  # YES / NO / UNKNOWN for F_6

    def __getitem__(self, j):
        """F_j, 1-indexed."""
        if not 1 <= j <= len(self.known):
            raise DomainError(f"F_{j} is not a known Fermat prime")
        return self.known[j - 1]

    def exists(self, j):
        if 1 <= j <= len(self.known):
            return "YES"
        return self.next_exists if j == len(self.known) + 1 else "UNKNOWN"


FERMAT = FermatPrimeTable()


@dataclass(frozen=True)
class FamilyCertificate:
    element: int
    family: str  # K_MAX, K_MIN, R, FERMAT
    parameters: dict
    m: int
    claim: str  # "N2" or "N3"
    verdict: bool
    method: str
    in_n1: bool | None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        d = {
            "element": self.element,
            "family": self.family,
            "parameters": dict(self.parameters),
            "m": self.m,
            f"verdict_{self.claim.lower()}": self.verdict,
            "method": self.method,
            "in_n1": self.in_n1,
        }
        d.update(self.extra)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


_sieve_cache = {}


def _shared_sieve(horizon, memory_budget):
    s = _sieve_cache.get("phi")
    if s is None or s.n < horizon:
        s = build_phi_sieve(horizon, memory_budget)
        _sieve_cache["phi"] = s
    return s


def preimage_by(m, method, memory_budget=DEFAULT_MEMORY_BUDGET):
    """phi^{-1}(m) as a sorted tuple, computed with the named method."""
    if method == ORACLE_SCAN:
        return inverse_phi_oracle(m).solutions
    if method == STRUCTURAL_INVPHI:
        return inverse_phi(m).solutions
    if method == SIEVE:
        h = safe_horizon(m, HorizonPolicy.ROSSER_SCHOENFELD)
        vals = _shared_sieve(h, memory_budget).values[: h + 1]
        return tuple(int(x) for x in np.flatnonzero(vals == m))
    raise DomainError(f"unknown certification method {method!r}")


def choose_method(m, memory_budget=DEFAULT_MEMORY_BUDGET):
    if m <= ORACLE_LIMIT:
        return ORACLE_SCAN
    if m <= STRUCTURAL_LIMIT:
        return STRUCTURAL_INVPHI
    if sieve_bytes(safe_horizon(m, HorizonPolicy.ROSSER_SCHOENFELD)) <= memory_budget:
        return SIEVE
    return STRUCTURAL_INVPHI


def n1_membership(element, limit=N1_SIEVE_LIMIT, memory_budget=DEFAULT_MEMORY_BUDGET):
    """True/False if element is/isn't N1(phi(element)); None when the sieve is too large."""
    m = euler_phi(element)
    h = safe_horizon(m, HorizonPolicy.ROSSER_SCHOENFELD)
    if h > limit:
        return None
    vals = _shared_sieve(h, memory_budget).values[1 : h + 1]
    return int(np.flatnonzero(vals <= m)[-1]) + 1 == element


def certify(element, claim, method=None, memory_budget=DEFAULT_MEMORY_BUDGET):
    """(m, verdict, method) for the claim element = N2(m) or N3(m), m = phi(element)."""
    m = euler_phi(element)
    method = method or choose_method(m, memory_budget)
    sols = preimage_by(m, method, memory_budget)
    if claim == "N2":
        ok = bool(sols) and sols[-1] == element
    elif claim == "N3":
        ok = bool(sols) and sols[0] == element
    else:
        raise DomainError(f"claim must be N2 or N3, got {claim!r}")
    return m, ok, method


def _require_q(q):
    if not is_prime(q) or q % 4 != 3:
        raise DomainError(f"q = {q} must be a prime = 3 mod 4")


def gen_k_max(q, r, method=None, check_n1=True):
    """K_{q,r} = 2 q^(r+1), the largest preimage of q^r (q - 1)."""
    _require_q(q)
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    element = check_u64(2 * q ** (r + 1), "K_{q,r}")
    m, ok, how = certify(element, "N2", method)
    in_n1 = n1_membership(element) if check_n1 else None
    return FamilyCertificate(element, "K_MAX", {"q": q, "r": r}, m, "N2", ok, how, in_n1)


def k_min_value(q, r):
    cand = check_u64(q**r * (q - 1) + 1, "q^r (q-1) + 1")
    prime = is_prime(cand)
    return (cand if prime else check_u64(q ** (r + 1), "q^(r+1)")), prime


def gen_k_min(q, r, method=None):
    """k_{q,r}: q^r (q - 1) + 1 when prime, else q^(r+1); the smallest preimage."""
    _require_q(q)
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    element, prime = k_min_value(q, r)
    m, ok, how = certify(element, "N3", method)
    extra = {"candidate_is_prime": prime, "composite": not prime}
    # odd elements > 2 are never N1(m): phi(2x) = phi(x)
    return FamilyCertificate(element, "K_MIN", {"q": q, "r": r}, m, "N3", ok, how, False, extra)


def gen_r(r1, r2, method=None, check_n1=True):
    """R(r1, r2) = 2 * 3^r1 * 5^r2, in N2 whenever r2 > 2."""
    if r1 < 1:
        raise DomainError(f"r1 must be >= 1, got {r1}")
    if r2 <= 2:
        raise HypothesisError(f"R(r1, r2) needs r2 > 2, got r2 = {r2}")
    element = check_u64(2 * 3**r1 * 5**r2, "R(r1, r2)")
    m, ok, how = certify(element, "N2", method)
    in_n1 = n1_membership(element) if check_n1 else None
    return FamilyCertificate(element, "R", {"r1": r1, "r2": r2}, m, "N2", ok, how, in_n1)


def fermat_exponent_bound(k):
    """log2(F_{k+1} - 1) = 2^k when F_{k+1} is known, else None."""
    if k + 1 <= len(FERMAT.known):
        return 2**k
    return None


def gen_fermat(k, a, method=None, check_n1=True):
    """2^a F_1 ... F_k, in N2 for 1 <= a <= log2(F_{k+1} - 1).

    For k = 5 the bound depends on whether F_6 exists; the certificate is then
    marked conditional.
    """
    if not 1 <= k <= len(FERMAT.known):
        raise DomainError(f"k = {k} is not an index of a known Fermat prime")
    if a < 1:
        raise DomainError(f"a must be >= 1, got {a}")
    bound = fermat_exponent_bound(k)
    if bound is not None and a > bound:
        raise DomainError(f"a = {a} exceeds log2(F_{k + 1} - 1) = {bound}")
    prod = 1
    for j in range(1, k + 1):
        prod *= FERMAT[j]
    element = check_u64(2**a * prod, "2^a F")
    m, ok, how = certify(element, "N2", method)
    if m & (m - 1):
        raise DomainError(f"phi({element}) = {m} is not a power of two")
    in_n1 = n1_membership(element) if check_n1 else None
    extra = {"conditional": bound is None, "phi_log2": m.bit_length() - 1}
    return FamilyCertificate(element, "FERMAT", {"k": k, "a": a}, m, "N2", ok, how, in_n1, extra)


def fermat_admissible(k, a_cap=None):
    """All admissible a for k (capped for k = 5, where every a is admissible)."""
    bound = fermat_exponent_bound(k)
    if bound is None:
        prod = 1
        for j in range(1, k + 1):
            prod *= FERMAT[j]
        bound = (2**64 - 1) // prod
        bound = bound.bit_length() - 1
    if a_cap is not None:
        bound = min(bound, a_cap)
    return range(1, bound + 1)


# --- D(A, B) and the inequality lemmas behind the N2 proofs ---------------


def _primes_only(s, name):
    for q in s:
        if not is_prime(q):
            raise DomainError(f"{q} in {name} is not prime")


def d_quantity(A, B):
    """prod_{q in A} (q - 1)/q * prod_{q in B} q/(q - 1), exactly."""
    _primes_only(A, "A")
    _primes_only(B, "B")
    out = Fraction(1)
    for q in set(A):
        out *= Fraction(q - 1, q)
    for q in set(B):
        out *= Fraction(q, q - 1)
    return out


def prime_divisors(x):
    return factorize(x).primes


def lemma_sum_powers(a, xs):
    """sum a^x_i <= a^(x_1 + ... + x_k) when k <= a and two x_i are positive."""
    k = len(xs)
    if a < 2 or k < 2 or k > a or min(xs) < 0 or sum(1 for x in xs if x > 0) < 2:
        raise HypothesisError(f"hypothesis fails for a={a}, xs={xs}")
    return sum(a**x for x in xs) <= a ** sum(xs)


def lemma_mixed_powers(x, y, pairs):
    """sum x^a_i y^b_i <= x^t y^u for k <= min(x, y) and no (a_i, b_i) = (0, 0)."""
    k = len(pairs)
    if x < 2 or y < 2 or k < 2 or k > min(x, y) or any(a < 0 or b < 0 or a + b == 0 for a, b in pairs):
        raise HypothesisError(f"hypothesis fails for x={x}, y={y}, pairs={pairs}")
    t = sum(a for a, _ in pairs)
    u = sum(b for _, b in pairs)
    return sum(x**a * y**b for a, b in pairs) <= x**t * y**u


def lemma_d_ge_one(A, B):
    """D(B, A) >= 1 when |B| <= |A| and (B subset of A or min(B - A) > max(A))."""
    A, B = frozenset(A), frozenset(B)
    if len(B) > len(A):
        raise HypothesisError("needs |B| <= |A|")
    if not (B <= A or min(B - A) > max(A)):
        raise HypothesisError("needs B subset of A or min(B \\ A) > max(A)")
    return d_quantity(B, A) >= 1


def lemma_d_lt_one(y, x):
    """D(W(y), W(x)) < 1 whenever phi(y) <= phi(x) and y > x >= 2."""
    if x < 2 or not y > x or euler_phi(y) > euler_phi(x):
        raise HypothesisError(f"hypothesis fails for y={y}, x={x}")
    return d_quantity(prime_divisors(y), prime_divisors(x)) < 1


def lemma_inequality_checks(size=4, pair_limit=300):
    """Exhaustive small-grid runs of the four lemmas: {name: (instances, failures)}."""
    report = {}

    cases = fails = 0
    for a in range(2, size + 2):
        for k in range(2, a + 1):
            for xs in itertools.product(range(size), repeat=k):
                if sum(1 for x in xs if x > 0) < 2:
                    continue
                cases += 1
                fails += not lemma_sum_powers(a, xs)
    report["sum_powers"] = (cases, fails)

    cases = fails = 0
    exps = [(a, b) for a in range(3) for b in range(3) if a + b]
    for x in range(2, size + 1):
        for y in range(2, size + 1):
            for k in range(2, min(x, y) + 1):
                for pairs in itertools.product(exps, repeat=k):
                    cases += 1
                    fails += not lemma_mixed_powers(x, y, pairs)
    report["mixed_powers"] = (cases, fails)

    cases = fails = 0
    ps = primes_up_to(13)
    subsets = [frozenset(c) for r in range(len(ps) + 1) for c in itertools.combinations(ps, r)]
    for A in subsets:
        for B in subsets:
            if len(B) > len(A) or not (B <= A or (A and min(B - A) > max(A))):
                continue
            cases += 1
            fails += not lemma_d_ge_one(A, B)
    report["d_ge_one"] = (cases, fails)

    cases = fails = 0
    phis = [0] + [euler_phi(n) for n in range(1, pair_limit + 1)]
    for x in range(2, pair_limit + 1):
        for y in range(x + 1, pair_limit + 1):
            if phis[y] <= phis[x]:
                cases += 1
                fails += not lemma_d_lt_one(y, x)
    report["d_lt_one"] = (cases, fails)
    return report


def n2_exponent_scan(p, max_exp):
    """Which 2 * prod_{2<q<p} q^r_q (1 <= r_q <= max_exp) lie in N2; exploratory only."""
    if not is_prime(p) or p < 5:
        raise DomainError(f"p must be a prime >= 5, got {p}")
    qs = [q for q in primes_up_to(p - 1) if q > 2]
    out = {}
    for rs in itertools.product(range(1, max_exp + 1), repeat=len(qs)):
        x = 2
        for q, r in zip(qs, rs):
            x *= q**r
        if x > 2**64 - 1:
            raise ResourceError(f"2 * prod q^r = {x} exceeds 64 bits")
        out[rs] = inverse_phi(euler_phi(x)).n2 == x
    return qs, out
