"""Walk through phi^{-1}(m): who maps where, and how lopsided the preimages get.

Run: python3 demos/inverse_totient_tour.py
"""
from sparsephi import inverse_phi, inverse_phi_oracle, klee_classify, ratio_n2_n3

# The smallest values already show the pattern: odd m > 1 never appear,
# and every odd solution x > 1 drags 2x along with it.
for m in range(1, 21):
    pre = inverse_phi(m)
    print(f"phi^-1({m:2d}) = {list(pre.solutions)}")

# The structural enumerator never scans; the brute-force oracle does.
# On small inputs they must agree exactly.
for m in (4, 12, 200):
    assert inverse_phi(m).solutions == inverse_phi_oracle(m).solutions
print("\nstructural enumeration agrees with the scan for m = 4, 12, 200")

# For m = 2 (mod 4) the preimage is always one of two rigid shapes.
print()
for m in (6, 10, 54, 18, 42):
    c = klee_classify(m)
    extra = f", q = {c.q}" if c.q else ""
    print(f"m = {m:3d}: {c.shape:4s} p = {c.p}, exponent {c.exponent}{extra} -> {c.solutions()}")

# N2/N3 stays between 2 and 3 in that residue class.
ratios = [ratio_n2_n3(m) for m in range(6, 2000, 4) if inverse_phi(m)]
print(f"\nN2/N3 over m = 2 (mod 4) below 2000: min {min(ratios)}, max {max(ratios)}")

# Large inputs are cheap: phi^{-1}(2^32) is built from Fermat primes.
big = inverse_phi(2**32)
print(f"\n|phi^-1(2^32)| = {big.multiplicity}, N3 = {big.n3}, N2 = {big.n2}")
