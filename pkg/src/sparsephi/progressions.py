"""Arithmetic and geometric progressions in finite integer sets.

The detectors start from every pair (a, b) that opens a maximal progression
(the term before a is absent) and walk forward by set lookups. Each pair of
consecutive terms belongs to exactly one maximal progression, so the whole
scan is O(n^2) time and O(n) memory.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import U64_MAX, is_prime, primes_up_to
from .errors import DomainError, NoProgressionError, Overflow64Error, VerificationError
from .families import gen_k_max, gen_k_min
from .inverse_totient import inverse_phi, inverse_phi_oracle


@dataclass(frozen=True)
class ProgressionRecord:
    kind: str  # "AP" or "GP"
    first: int
    step: Fraction  # common difference (AP) or ratio (GP)
    length: int
    elements: tuple

    def __post_init__(self):
        if self.regenerate() != self.elements:
            raise VerificationError(f"{self} does not reproduce its elements")

    def regenerate(self):
        if self.kind == "AP":
            return tuple(int(self.first + i * self.step) for i in range(self.length))
        out, x = [], Fraction(self.first)
        for _ in range(self.length):
            out.append(int(x))
            x *= self.step
        return tuple(out)

    def to_dict(self):
        return {
            "kind": self.kind,
            "first": self.first,
            "step": str(self.step),
            "length": self.length,
            "elements": list(self.elements),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _prepare(values):
    vals = sorted(set(int(v) for v in values))
    if len(vals) < 3:
        raise DomainError(f"need at least 3 distinct values, got {len(vals)}")
    return vals


def longest_ap(values):
    """A longest AP (length >= 3); ties go to the smallest step, then smallest first term."""
    a = _prepare(values)
    members = set(a)
    top = a[-1]
    best = (2, 0, 0)  # (length, -step, -first) maximised
    for i, x in enumerate(a):
        for y in a[i + 1 :]:
            d = y - x
            cap = (top - x) // d + 1
            if cap < best[0]:
                break  # larger d only lowers the cap
            if x - d in members:
                continue
            n, z = 2, y + d
            while z in members:
                n += 1
                z += d
            key = (n, -d, -x)
            if key > best:
                best = key
    n, d, x = best[0], -best[1], -best[2]
    if n < 3:
        raise NoProgressionError("no arithmetic progression of length >= 3")
    return ProgressionRecord("AP", x, Fraction(d), n, tuple(x + k * d for k in range(n)))


def longest_gp(values, allow_rational=False):
    """A longest GP with ratio > 1 (integer ratios unless allow_rational)."""
    a = _prepare(values)
    if a[0] < 1:
        raise DomainError("geometric progressions need positive members")
    members = set(a)
    top = a[-1]
    best = None  # (length, -ratio, -first)
    for i, x in enumerate(a):
        for y in a[i + 1 :]:
            if allow_rational:
                q = Fraction(y, x)
            elif y % x == 0:
                q = Fraction(y // x)
            else:
                continue
            cap = int(math.log(top / x) / math.log(q)) + 2  # +1 slack for rounding
            if best is not None and cap < best[0]:
                continue
            prev = x / q
            if prev.denominator == 1 and int(prev) in members:
                continue
            n, z = 2, y * q
            while z.denominator == 1 and int(z) in members:
                n += 1
                z *= q
            key = (n, -q, -x)
            if best is None or key > best:
                best = key
    if best is None or best[0] < 3:
        raise NoProgressionError("no geometric progression of length >= 3")
    n, q, x = best[0], -best[1], -best[2]
    elems, z = [], Fraction(x)
    for _ in range(n):
        elems.append(int(z))
        z *= q
    return ProgressionRecord("GP", x, q, n, tuple(elems))


def _residue_class(q):
    if not is_prime(q) or q % 20 not in (3, 7):
        raise DomainError(f"q = {q} must be a prime = 3 or 7 mod 20")
    return 3 if q % 20 == 3 else 2


def mod20_composite_branch(q, r_max):
    """(r, q^r (q-1) + 1, divisible by 5) for every r <= r_max in q's residue class mod 4."""
    cls = _residue_class(q)
    if q**r_max * (q - 1) + 1 > U64_MAX:
        raise Overflow64Error(f"q^{r_max} (q-1) + 1 exceeds 64 bits for q = {q}")
    out = []
    for r in range(1, r_max + 1):
        if r % 4 == cls:
            v = q**r * (q - 1) + 1
            out.append((r, v, v % 5 == 0))
    return out


def max_exponent(q):
    """Largest r with q^r (q - 1) + 1 < 2^64."""
    r = 0
    while q ** (r + 1) * (q - 1) + 1 <= U64_MAX:
        r += 1
    return r


def _as_gp(elements):
    q = Fraction(elements[1], elements[0])
    rec = ProgressionRecord("GP", elements[0], q, len(elements), tuple(elements))
    return rec


def gp_in_n2_witness(q, r_max):
    """K_{q,1..r_max}: a GP in N2 with ratio q, every term certified."""
    certs = [gen_k_max(q, r, check_n1=False) for r in range(1, r_max + 1)]
    failed = [c for c in certs if not c.verdict]
    if failed:
        raise VerificationError(f"certification failed for {[c.parameters for c in failed]}")
    return _as_gp([c.element for c in certs]), certs


def gp_in_n3_witness(q, r_list):
    """k_{q,r} over r_list (q = 3, 7 mod 20): a GP in N3 on the composite branch."""
    _residue_class(q)
    if len(r_list) < 3:
        raise DomainError("need at least three exponents")
    certs = [gen_k_min(q, r) for r in r_list]
    failed = [c for c in certs if not c.verdict]
    if failed:
        raise VerificationError(f"certification failed for {[c.parameters for c in failed]}")
    elems = [c.element for c in certs]
    ratios = {Fraction(b, a) for a, b in zip(elems, elems[1:])}
    if len(ratios) != 1:
        raise DomainError(f"k_(q,r) over {list(r_list)} is not geometric: {elems}")
    return _as_gp(elems), certs


@dataclass(frozen=True)
class ScalingVerdict:
    m: int
    p: int
    preimage: tuple
    target: tuple  # phi^{-1}(m (p - 1))

    @property
    def verdict(self):
        return self.target == tuple(self.p * x for x in self.preimage)


def erdos_scaling_test(m, p, oracle=False):
    """Does phi^{-1}(m (p - 1)) equal p * phi^{-1}(m)? (m with exactly two preimages)."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    invert = inverse_phi_oracle if oracle else inverse_phi
    pre = invert(m)
    if pre.multiplicity != 2:
        raise DomainError(f"m = {m} has {pre.multiplicity} preimages, not 2")
    target = m * (p - 1)
    if target > U64_MAX:
        raise Overflow64Error(f"m (p - 1) = {target} exceeds 64 bits")
    return ScalingVerdict(m, p, pre.solutions, invert(target).solutions)


def erdos_scan(m_max, p_max):
    out = []
    for m in range(1, m_max + 1):
        if inverse_phi(m).multiplicity != 2:
            continue
        for p in primes_up_to(p_max):
            out.append(erdos_scaling_test(m, p))
    return out


def _selector(selector):
    if selector == "n2":
        return lambda pre: pre.n2
    if selector == "n3":
        return lambda pre: pre.n3
    if callable(selector):
        return selector
    raise DomainError(f"unknown selector {selector!r}")


def totient_preimages(x):
    """PreimageSet for every totient m <= x."""
    return [pre for pre in (inverse_phi(m) for m in [1] + list(range(2, x + 1, 2))) if pre]


def reciprocal_sum_profile(selector, checkpoints):
    """Partial sums of 1/f(m) over totients m <= each checkpoint (floats, diagnostic)."""
    f = _selector(selector)
    pres = totient_preimages(max(checkpoints))
    rows = []
    for c in sorted(checkpoints):
        terms = []
        for pre in pres:
            if pre.m > c:
                break
            v = f(pre)
            if v not in pre:
                raise DomainError(f"selector returned {v}, not in phi^-1({pre.m})")
            terms.append(1.0 / v)
        rows.append((c, math.fsum(terms), len(terms)))
    return rows


def sandwich_check(selector, checkpoints):
    """Per checkpoint: (c, sum over N2, sum over f, sum over N3, ordered)."""
    f = _selector(selector)
    pres = totient_preimages(max(checkpoints))
    rows = []
    for c in sorted(checkpoints):
        sub = [pre for pre in pres if pre.m <= c]
        termwise = all(pre.n3 <= f(pre) <= pre.n2 for pre in sub)
        s2 = math.fsum(1.0 / pre.n2 for pre in sub)
        sf = math.fsum(1.0 / f(pre) for pre in sub)
        s3 = math.fsum(1.0 / pre.n3 for pre in sub)
        rows.append((c, s2, sf, s3, termwise and s2 <= sf <= s3))
    return rows


def selector_image_ap(selector, x):
    """Longest AP inside f(V cap [1, x])."""
    f = _selector(selector)
    return longest_ap([f(pre) for pre in totient_preimages(x)])
