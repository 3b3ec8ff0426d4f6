"""Window densities and long progressions inside the image sets.

Run: python3 demos/density_and_progressions.py
"""
from sparsephi import HorizonPolicy, longest_ap, longest_gp
from sparsephi import density as dn
from sparsephi.progressions import erdos_scaling_test, gp_in_n2_witness, gp_in_n3_witness, reciprocal_sum_profile

rs = HorizonPolicy.ROSSER_SCHOENFELD
x = 10**5

# Totients thin out steadily.
prof = dn.asymptotic_density_profile(dn.totients_bitmap(10**4, rs), [100, 1000, 10**4])
print("density of totients:", ", ".join(f"{n}: {float(d):.4f}" for n, d in prof))

# The densest window of length 1000 in each set: N1 is far sparser than N3.
for name, bm in (("N1", dn.n1_bitmap(x, rs)), ("N2", dn.n2_bitmap(x, rs)), ("N3", dn.n3_bitmap(x))):
    w, d = dn.banach_lower_bound(bm, x, 1000)
    print(f"{name}: densest window ({w.start}, {w.end}] has density {float(d):.3f}")

# N3 contains long arithmetic progressions (mostly primes p with N3(p - 1) = p).
ap = longest_ap(dn.n3_bitmap(10**4).members())
print(f"\nlongest AP in N3 below 1e4: start {ap.first}, step {ap.step}, length {ap.length}")

# Geometric progressions come straight from the families.
gp, _ = gp_in_n2_witness(3, 6)
print(f"GP in N2: {list(gp.elements)}")
gp, _ = gp_in_n3_witness(3, [3, 7, 11])
print(f"GP in N3: {list(gp.elements)} (ratio {gp.step})")
print(f"longest GP among N2 elements below 5000: {list(longest_gp(dn.n2_bitmap(5000, rs).members()).elements)}")

# Sums of 1/N3(m) keep creeping up.
for c, s, n in reciprocal_sum_profile("n3", [100, 1000, 10**4]):
    print(f"sum of 1/N3(m) over {n} totients m <= {c}: {s:.4f}")

# Scaling phi^{-1}(m) by a prime p sometimes works and sometimes does not.
for m, p in ((10, 3), (10, 59), (22, 3), (22, 53)):
    v = erdos_scaling_test(m, p)
    print(f"phi^-1({m}*{p - 1}) == {p} * phi^-1({m})? {v.verdict}")
