import csv
import io
import json
import random
from fractions import Fraction

import numpy as np
import pytest

from sparsephi import density as dn
from sparsephi.errors import DomainError, HypothesisError, ResourceError
from sparsephi.sieve import HorizonPolicy

RS = HorizonPolicy.ROSSER_SCHOENFELD


def test_window_basics():
    assert dn.FolnerWindow(3, 4).end == 7
    with pytest.raises(DomainError):
        dn.FolnerWindow(0, 0)
    ev = dn.evens_bitmap(1000)
    assert dn.window_density(ev, dn.FolnerWindow(17, 100)) == Fraction(1, 2)
    assert dn.window_density(dn.primes_bitmap(100), dn.FolnerWindow(0, 100)) == Fraction(25, 100)
    n1 = dn.n1_bitmap(100)
    assert dn.window_count(n1, dn.FolnerWindow(0, 100)) == 9
    with pytest.raises(ResourceError):
        dn.window_count(ev, dn.FolnerWindow(990, 20))


@pytest.mark.parametrize("maker", [dn.primes_bitmap, dn.evens_bitmap, dn.spikes_bitmap, dn.n3_bitmap])
def test_window_density_against_membership_loop(maker):
    bm = maker(5000)
    members = set(bm.members().tolist())
    rng = random.Random(3)
    for _ in range(100):
        length = rng.randint(1, 600)
        start = rng.randint(0, 5000 - length)
        direct = sum(1 for x in range(start + 1, start + length + 1) if x in members)
        w = dn.FolnerWindow(start, length)
        assert dn.window_count(bm, w) == direct
        assert 0 <= dn.window_density(bm, w) <= 1


def test_asymptotic_profiles():
    v = dn.totients_bitmap(10**4, RS)
    assert dn.asymptotic_density_profile(v, [10]) == [(10, Fraction(6, 10))]
    prof = [d for _, d in dn.asymptotic_density_profile(v, [100, 1000, 10**4])]
    assert prof == [Fraction(38, 100), Fraction(291, 1000), Fraction(2374, 10**4)]
    assert prof[0] > prof[1] > prof[2]
    assert all(d == 1 for _, d in dn.asymptotic_density_profile(dn.naturals_bitmap(100), [1, 50, 100]))
    assert all(d == 0 for _, d in dn.asymptotic_density_profile(dn.empty_bitmap(100), [1, 50, 100]))


def test_totient_bitmap_policies_agree():
    a = dn.totients_bitmap(300).mask
    b = dn.totients_bitmap(300, RS).mask
    assert np.array_equal(a, b)


def test_totient_count():
    assert dn.totient_count(1) == 1
    assert dn.totient_count(10) == 6
    assert dn.totient_count(100) == 38
    assert dn.totient_count(1000, RS) == 291


def test_ford_rows():
    rows = dn.ford_diagnostic([10, 1000, 10**4])
    assert [r["V"] for r in rows] == [6, 291, 2374]


def test_banach_examples():
    w, d = dn.banach_lower_bound(dn.evens_bitmap(10**4), 10**4, 100)
    assert d == Fraction(1, 2)
    w, d = dn.banach_lower_bound(dn.spikes_bitmap(10**4), 10**4, 4)
    assert (w.start, w.length, d) == (999, 4, 1)
    w, d = dn.banach_lower_bound(dn.primes_bitmap(10**6), 10**6, 10**4)
    assert (w.start, d) == (0, Fraction(1229, 10**4))


def test_banach_monotone_in_range():
    bm = dn.n3_bitmap(20000)
    prev = Fraction(0)
    for end in range(1000, 20001, 1000):
        _, d = dn.banach_lower_bound(bm, end, 500)
        assert d >= prev
        prev = d


def test_n1_sparser_than_n3():
    _, d1 = dn.banach_lower_bound(dn.n1_bitmap(10**5, RS), 10**5, 1000)
    _, d3 = dn.banach_lower_bound(dn.n3_bitmap(10**5), 10**5, 1000)
    assert d1 == Fraction(3, 125) and d3 == Fraction(33, 125)
    assert d1 <= d3


def test_n2_bitmap_matches_inverse_phi():
    from sparsephi.inverse_totient import inverse_phi

    bm = dn.n2_bitmap(500, RS)
    expect = sorted({inverse_phi(m).n2 for m in range(1, 501) if inverse_phi(m) and inverse_phi(m).n2 <= 500})
    assert bm.members().tolist() == expect


def test_report_serialization():
    rep = dn.density_report(dn.primes_bitmap(1000), dn.tiling_windows(1000, 250), [100, 1000])
    d = json.loads(rep.to_json())
    assert d["summary"]["max_density"] == "53/250"
    assert d["summary"]["asymptotic"][0] == {"n": 100, "density": "1/4"}
    text = rep.to_csv()
    assert text.endswith("\r\n") and "\r\n" in text
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0][:5] == ["set_id", "start", "length", "count", "density"]
    assert len(rows) == 5


def test_fkl():
    assert [dn.fkl_value(2, 2, x) for x in range(4, 8)] == [20, 21, 22, 23]
    rep = dn.fkl_experiment(2, 2, 64)
    assert rep.injective and rep.increasing and not rep.ratio_monotone
    assert rep.blocks[1] == (1, 20, 4, 1, True)
    assert all(b[4] for b in rep.blocks)
    rep = dn.fkl_experiment(3, 2, 300)
    assert rep.blocks[1][1:3] == (90, 18)
    with pytest.raises(DomainError):
        dn.fkl_experiment(1, 2, 10)


def test_linear_image():
    rep = dn.linear_image_density(2, 2, lambda n: 2 * n, 5000)
    assert rep.r == 3 and rep.threshold == Fraction(1, 8) and rep.best_density == Fraction(1, 2)
    assert rep.passed
    rep = dn.linear_image_density(2, 5, lambda n: 2 * n + 3, 5000)
    assert rep.passed and rep.best_density > 0
    with pytest.raises(HypothesisError):
        dn.linear_image_density(1, 3, lambda n: n * n, 100)
