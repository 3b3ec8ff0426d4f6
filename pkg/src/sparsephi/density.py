"""Interval (Folner-window) densities of integer sets.

Sets are boolean masks over [0, limit] with ``mask[i]`` true iff i is in the
set; index 0 is always false. Densities are exact fractions.

The Banach density of a set is a supremum over all Folner sequences and can't
be computed from a finite range. :func:`banach_lower_bound` only reports the
densest window of one length inside a finite range. That is a lower-bound
estimate, never the density itself.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import DEFAULT_MEMORY_BUDGET, primes_up_to
from .errors import DomainError, HypothesisError, ResourceError
from .sieve import HorizonPolicy, build_phi_sieve, safe_horizon
from .sparsely_totient import n1_set_up_to

DEFAULT_EVAL_BUDGET = 10**8


@dataclass(frozen=True)
class FolnerWindow:
    """The interval (start, start + length]."""

    start: int
    length: int

    def __post_init__(self):
        if self.length < 1 or self.start < 0:
            raise DomainError(f"bad window ({self.start}, {self.start}+{self.length}]")

    @property
    def end(self):
        return self.start + self.length


@dataclass(frozen=True)
class SetBitmap:
    set_id: str
    mask: np.ndarray

    @property
    def limit(self):
        return len(self.mask) - 1

    def members(self):
        return np.flatnonzero(self.mask)

    def __contains__(self, x):
        return 0 < x <= self.limit and bool(self.mask[x])


def _mask(bitmap):
    return bitmap.mask if isinstance(bitmap, SetBitmap) else np.asarray(bitmap, dtype=bool)


def _check_budget(n, budget=DEFAULT_EVAL_BUDGET):
    if n > budget:
        raise ResourceError(f"evaluation range {n} exceeds budget {budget}")


# --- set builders --------------------------------------------------------


def from_members(set_id, members, limit):
    _check_budget(limit)
    mask = np.zeros(limit + 1, dtype=bool)
    members = np.asarray([x for x in members if 0 < x <= limit], dtype=np.int64)
    mask[members] = True
    return SetBitmap(set_id, mask)


def naturals_bitmap(limit):
    _check_budget(limit)
    mask = np.ones(limit + 1, dtype=bool)
    mask[0] = False
    return SetBitmap("naturals", mask)


def empty_bitmap(limit):
    _check_budget(limit)
    return SetBitmap("empty", np.zeros(limit + 1, dtype=bool))


def evens_bitmap(limit):
    _check_budget(limit)
    mask = np.zeros(limit + 1, dtype=bool)
    mask[2::2] = True
    return SetBitmap("evens", mask)


def primes_bitmap(limit):
    _check_budget(limit)
    mask = np.zeros(limit + 1, dtype=bool)
    mask[primes_up_to(limit)] = True
    return SetBitmap("primes", mask)


def spikes_bitmap(limit):
    """The union of the intervals [10^k, 10^k + k], k >= 1."""
    _check_budget(limit)
    mask = np.zeros(limit + 1, dtype=bool)
    k = 1
    while 10**k <= limit:
        mask[10**k : min(10**k + k, limit) + 1] = True
        k += 1
    return SetBitmap("spikes", mask)


def totients_bitmap(limit, policy=HorizonPolicy.CONSERVATIVE_2M2, memory_budget=DEFAULT_MEMORY_BUDGET):
    sieve = build_phi_sieve(safe_horizon(limit, policy), memory_budget)
    v = sieve.values[1:]
    mask = np.zeros(limit + 1, dtype=bool)
    mask[v[v <= limit].astype(np.int64)] = True
    return SetBitmap("V", mask)


def n1_bitmap(limit, policy=HorizonPolicy.CONSERVATIVE_2M2, memory_budget=DEFAULT_MEMORY_BUDGET):
    return from_members("N1", [r.n for r in n1_set_up_to(limit, policy, memory_budget)], limit)


def n2_bitmap(limit, policy=HorizonPolicy.CONSERVATIVE_2M2, memory_budget=DEFAULT_MEMORY_BUDGET):
    """x <= limit is in N2 iff no y > x shares its phi value."""
    boot = build_phi_sieve(limit, memory_budget)
    top = int(boot.values[1:].max())
    horizon = max(limit, safe_horizon(top, policy))
    sieve = boot if horizon == limit else build_phi_sieve(horizon, memory_budget)
    v = sieve.values[1:]
    # last occurrence of each value: unique over the reversed array
    _, first_rev = np.unique(v[::-1], return_index=True)
    last = len(v) - first_rev  # 1-based positions
    return from_members("N2", last[last <= limit], limit)


def n3_bitmap(limit, memory_budget=DEFAULT_MEMORY_BUDGET):
    """x <= limit is in N3 iff no y < x shares its phi value; needs no extra horizon."""
    v = build_phi_sieve(limit, memory_budget).values[1:]
    _, first = np.unique(v, return_index=True)
    return from_members("N3", first + 1, limit)


# --- densities ------------------------------------------------------------


def window_count(bitmap, w):
    mask = _mask(bitmap)
    if w.end > len(mask) - 1:
        raise ResourceError(f"window end {w.end} lies beyond the evaluated range {len(mask) - 1}")
    return int(np.count_nonzero(mask[w.start + 1 : w.end + 1]))


def window_density(bitmap, w):
    return Fraction(window_count(bitmap, w), w.length)


def asymptotic_density_profile(bitmap, checkpoints):
    mask = _mask(bitmap)
    if max(checkpoints) > len(mask) - 1:
        raise ResourceError(f"checkpoint {max(checkpoints)} beyond evaluated range {len(mask) - 1}")
    c = np.cumsum(mask)
    return [(n, Fraction(int(c[n]), n)) for n in checkpoints]


def window_counts(bitmap, range_end, window_length):
    """counts[s] = |A cap (s, s + L]| for 0 <= s <= range_end - L."""
    mask = _mask(bitmap)
    if range_end > len(mask) - 1:
        raise ResourceError(f"range end {range_end} beyond evaluated range {len(mask) - 1}")
    if not 1 <= window_length <= range_end:
        raise DomainError(f"window length {window_length} must lie in [1, {range_end}]")
    c = np.concatenate(([0], np.cumsum(mask[1 : range_end + 1], dtype=np.int64)))
    return c[window_length:] - c[: range_end - window_length + 1]


def banach_lower_bound(bitmap, range_end, window_length):
    """Densest window of the given length inside [1, range_end] (first on ties).

    Only a lower-side estimate of the Banach density: that density is a
    limit over ever longer windows, which no finite scan reaches.
    """
    counts = window_counts(bitmap, range_end, window_length)
    s = int(np.argmax(counts))
    return FolnerWindow(s, window_length), Fraction(int(counts[s]), window_length)


def totient_count(x, policy=HorizonPolicy.CONSERVATIVE_2M2, memory_budget=DEFAULT_MEMORY_BUDGET):
    """V(x) = number of totients <= x."""
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    return int(np.count_nonzero(totients_bitmap(x, policy, memory_budget).mask))


def ford_diagnostic(checkpoints, policy=HorizonPolicy.ROSSER_SCHOENFELD,
                    memory_budget=DEFAULT_MEMORY_BUDGET):
    """V(x), x/log x and the exponent C solving V(x) = x/log x * exp(C (log log log x)^2).

    Diagnostic only: at desk scale the o(1) term swamps C.
    """
    top = max(checkpoints)
    mask = totients_bitmap(top, policy, memory_budget).mask
    c = np.cumsum(mask)
    rows = []
    for x in checkpoints:
        v = int(c[x])
        base = x / math.log(x)
        lll = math.log(math.log(math.log(x))) if x > math.e**math.e else float("nan")
        implied = math.log(v / base) / lll**2 if lll == lll and lll != 0 else float("nan")
        rows.append({"x": x, "V": v, "x_over_log_x": base, "implied_C": implied})
    return rows


# --- reports ----------------------------------------------------------------


@dataclass
class DensityReport:
    set_id: str
    windows: list  # (FolnerWindow, count, Fraction)
    asymptotic: list = field(default_factory=list)  # (n, Fraction)

    @property
    def max_density(self):
        return max(d for _, _, d in self.windows)

    @property
    def min_density(self):
        return min(d for _, _, d in self.windows)

    def to_dict(self):
        return {
            "set_id": self.set_id,
            "windows": [
                {"start": w.start, "length": w.length, "count": c, "density": str(d)}
                for w, c, d in self.windows
            ],
            "summary": {
                "max_density": str(self.max_density),
                "min_density": str(self.min_density),
                "asymptotic": [{"n": n, "density": str(d)} for n, d in self.asymptotic],
            },
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["set_id", "start", "length", "count", "density", "density_decimal"])
        for win, c, d in self.windows:
            w.writerow([self.set_id, win.start, win.length, c, str(d), f"{float(d):.6f}"])
        return buf.getvalue()


def density_report(bitmap, windows, checkpoints=()):
    rows = [(w, window_count(bitmap, w), window_density(bitmap, w)) for w in windows]
    prof = asymptotic_density_profile(bitmap, checkpoints) if checkpoints else []
    set_id = bitmap.set_id if isinstance(bitmap, SetBitmap) else "custom"
    return DensityReport(set_id, rows, prof)


def tiling_windows(range_end, window_length):
    """Consecutive disjoint windows covering [1, range_end] (the tail is dropped)."""
    return [FolnerWindow(s, window_length) for s in range(0, range_end - window_length + 1, window_length)]


# --- the f_{k,l} example and linear corridors -------------------------------


def fkl_value(k, l, x):
    """f_{k,l}(x): linear with slope l-1 on [k^2n, k^2n+1), x^l on [k^2n+1, k^2n+2)."""
    e = 0
    while k ** (e + 1) <= x:
        e += 1
    if e % 2 == 0:
        return k ** (e * l) + (l - 1) * x
    return x**l


@dataclass(frozen=True)
class FklReport:
    k: int
    l: int
    horizon: int
    injective: bool
    increasing: bool
    ratio_monotone: bool
    blocks: tuple  # (n, first, length, difference, is_ap)


def fkl_experiment(k, l, horizon, budget=10**6):
    if k < 2 or l < 2:
        raise DomainError("need k, l >= 2")
    if horizon > budget:
        raise ResourceError(f"horizon {horizon} exceeds budget {budget}")
    vals = [fkl_value(k, l, x) for x in range(1, horizon + 1)]
    increasing = all(a < b for a, b in zip(vals, vals[1:]))
    injective = len(set(vals)) == len(vals)
    ratios = [Fraction(v, x) for x, v in enumerate(vals, start=1)]
    ratio_monotone = all(a <= b for a, b in zip(ratios, ratios[1:]))
    blocks = []
    n = 0
    while k ** (2 * n + 1) - 1 <= horizon:
        lo, hi = k ** (2 * n), k ** (2 * n + 1)
        seg = vals[lo - 1 : hi - 1]
        diffs = {b - a for a, b in zip(seg, seg[1:])}
        is_ap = diffs <= {l - 1} and len(seg) == hi - lo
        blocks.append((n, seg[0], len(seg), l - 1, is_ap))
        n += 1
    return FklReport(k, l, horizon, injective, increasing, ratio_monotone, tuple(blocks))


@dataclass(frozen=True)
class LinearImageReport:
    c1: Fraction
    c2: Fraction
    r: int
    threshold: Fraction  # 1 / (c1 (r - 1)^2)
    n: int  # the proof window is (n, r n]
    proof_window_density: Fraction
    proof_bound: Fraction  # threshold - 1/((r - 1) n)
    best_window: FolnerWindow
    best_density: Fraction

    @property
    def passed(self):
        return self.proof_bound > 0 and self.best_density >= self.proof_bound and \
            self.proof_window_density >= self.proof_bound


def linear_image_density(c1, c2, f, n_max, n0=1):
    """Positive window density of f(N) when c1 n <= f(n) <= c2 n for n >= n0."""
    c1, c2 = Fraction(c1), Fraction(c2)
    if not 0 < c1 <= c2:
        raise DomainError("need 0 < c1 <= c2")
    vals = [f(n) for n in range(1, n_max + 1)]
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise HypothesisError("f is not strictly increasing on the sample")
    for n, v in enumerate(vals, start=1):
        if n >= n0 and not c1 * n <= v <= c2 * n:
            raise HypothesisError(f"f({n}) = {v} leaves the corridor [{c1} n, {c2} n]")
    r = 2
    while not c2 < (r - 1) * c1:
        r += 1
    threshold = 1 / (c1 * (r - 1) ** 2)
    top = vals[-1]
    image = from_members("f(N)", vals, top)
    n = top // r
    w = FolnerWindow(n, (r - 1) * n)
    pwd = window_density(image, w)
    bound = threshold - Fraction(1, (r - 1) * n)
    best_w, best = banach_lower_bound(image, top, (r - 1) * n)
    return LinearImageReport(c1, c2, r, threshold, n, pwd, bound, best_w, best)
