"""Sparsely totient numbers: the record-holders for 'large x, small phi(x)'.

Run: python3 demos/sparsely_totient_walk.py
"""
import math

from sparsephi import HorizonPolicy, n1_set_up_to, sieve_for
from sparsephi.sparsely_totient import h_ratio_experiment, masser_shiu_up_to, max_n1_ratio, n1_values

rs = HorizonPolicy.ROSSER_SCHOENFELD

recs = n1_set_up_to(1000, rs)
print("sparsely totient numbers <= 1000:")
print(" ".join(str(r.n) for r in recs))
print(f"(certified against every y up to {recs[0].horizon})")

# Products of small primes with one prime swapped out are always in the set.
gen = masser_shiu_up_to(1000)
print(f"\n{len(gen)} of them come from the (d, k, l) construction:")
for r in gen[:8]:
    print(f"  d, k, l = {r.params} -> {r.n}")

# N1(m) / m is not monotone even along the set itself.
rec = h_ratio_experiment(5, 7)
print(f"\nN1({rec.m_a}) = {rec.n1_a}, ratio {rec.ratio_a}")
print(f"N1({rec.m_b}) = {rec.n1_b}, ratio {rec.ratio_b}  (smaller, although {rec.m_b} > {rec.m_a})")

# Growth: N1(m) / (m log log m) drifts slowly towards e^gamma.
ms = [10**3, 10**4, 10**5]
vals = n1_values(ms, sieve_for(10**5, rs), rs)
for m, v in zip(ms, vals):
    print(f"m = {m:>6}: N1 = {int(v):>7}, N1/(m log log m) = {v / (m * math.log(math.log(m))):.3f}")
m, v, ratio = max_n1_ratio(10**5)
print(f"largest N1(m)/m below 1e5: N1({m}) = {v}, ratio {float(ratio):.3f}")
