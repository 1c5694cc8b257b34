"""Runs at an externally fixed quota, and the search for a divisor-like q.

A quota q is divisor-valid for n seats when every seat is bought with a
whole quota and no whole quota is left afterwards:

    w*[n-1] >= q >= w*[n]

Both sides depend on q, piecewise, with jumps where the allocation changes.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadRange
from .method import AllocationTrace, EpConfig, Reduction, Status, allocate
from .profile import Fixed, Profile, as_rational

__all__ = [
    "SweepSample",
    "DivisorSearchResult",
    "LabelChange",
    "run_fixed_quota",
    "sample_quota",
    "sweep",
    "find_divisor_quota",
    "allocation_label",
    "write_sweep_csv",
]


def run_fixed_quota(profile: Profile, n: int, q) -> AllocationTrace:
    """The basic method with the quota pinned to ``q`` and the Exact rule."""
    return allocate(profile, n, EpConfig(quota=Fixed(as_rational(q)), reduction=Reduction.EXACT))


def allocation_label(profile: Profile, seats) -> str:
    """``"4 C, 1 A, 1 B"``: most seats first, declaration order among equals."""
    order = sorted((i for i, k in enumerate(seats) if k), key=lambda i: (-seats[i], i))
    return ", ".join(f"{seats[i]} {profile.candidates[i].label}" for i in order)


@dataclass(frozen=True)
class SweepSample:
    q: Fraction
    w_star_penultimate: Fraction | None
    w_star_final: Fraction | None
    allocation_label: str
    divisor_valid: bool
    exhausted: bool  # some seat went for less than a quota
    seats: tuple = ()

    @property
    def gap(self) -> Fraction:
        """How far q is from satisfying the inequalities (0 when valid)."""
        if self.w_star_penultimate is None:
            return Fraction(0) if self.divisor_valid else self.q
        final = self.w_star_final or Fraction(0)
        return max(Fraction(0), self.q - self.w_star_penultimate, final - self.q)

    @property
    def side(self) -> str:
        """"valid", "low" (a whole quota remains) or "high" (a seat lacks a quota)."""
        if self.divisor_valid:
            return "valid"
        if self.exhausted or self.w_star_penultimate is None or self.w_star_penultimate < self.q:
            return "high"
        return "low"


def sample_quota(profile: Profile, n: int, q) -> SweepSample:
    q = as_rational(q)
    trace = run_fixed_quota(profile, n, q)
    complete = trace.status is Status.COMPLETED
    pen = trace.w_star(n - 1) if len(trace.steps) >= n else None
    fin = trace.w_star_final if complete else None
    exhausted = trace.any_exhausted or not complete
    valid = (
        not exhausted
        and pen is not None
        and pen >= q
        and q >= (fin if fin is not None else Fraction(0))
    )
    return SweepSample(q, pen, fin, allocation_label(profile, trace.seats), valid, exhausted,
                       trace.seats)


def _range(profile, n, q_lo, q_hi):
    q_lo = Fraction(0) if q_lo is None else as_rational(q_lo)
    q_hi = profile.total_votes / n if q_hi is None else as_rational(q_hi)
    if q_lo < 0 or q_hi <= q_lo:
        raise BadRange(f"need 0 <= q_lo < q_hi, got [{q_lo}, {q_hi}]")
    return q_lo, q_hi


def sweep(profile: Profile, n: int, q_lo, q_hi, steps: int) -> list:
    """``steps`` evenly spaced samples from q_lo to q_hi inclusive."""
    q_lo, q_hi = as_rational(q_lo), as_rational(q_hi)
    if not 0 < q_lo < q_hi:
        raise BadRange(f"need 0 < q_lo < q_hi, got [{q_lo}, {q_hi}]")
    if steps < 2:
        raise BadRange("a sweep needs at least 2 samples")
    return [
        sample_quota(profile, n, q_lo + (q_hi - q_lo) * Fraction(j, steps - 1))
        for j in range(steps)
    ]


def write_sweep_csv(samples, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["q", "w_star_penultimate", "w_star_final", "divisor_valid", "allocation_label"])
    dec = lambda x: "" if x is None else format(float(x), ".12g")  # noqa: E731
    for s in samples:
        w.writerow([dec(s.q), dec(s.w_star_penultimate), dec(s.w_star_final),
                    "true" if s.divisor_valid else "false", s.allocation_label])


# -- interval search --------------------------------------------------------


@dataclass(frozen=True)
class LabelChange:
    left: SweepSample  # last sample with the old label
    right: SweepSample  # first sample with the new label

    @property
    def jump(self) -> Fraction | None:
        """Change of w*[n-1] across the transition."""
        a, b = self.left.w_star_penultimate, self.right.w_star_penultimate
        if a is None or b is None:
            return None
        return b - a


@dataclass
class DivisorSearchResult:
    found: bool
    intervals: list  # (q_lo, q_hi, label), closed, endpoints are valid samples
    supremum: Fraction | None
    min_gap: Fraction  # 0 when found
    label_changes: list = field(default_factory=list)
    samples: list = field(default_factory=list, repr=False)

    @property
    def labels(self) -> list:
        return [iv[2] for iv in self.intervals]


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in [lo, hi] (lo <= hi)."""
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return lo
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    # lo and hi share the integer part; recurse on the reciprocals of the fractional parts
    rest = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / rest


class _Search:
    def __init__(self, profile, n, resolution):
        self.profile, self.n, self.res = profile, n, resolution
        self.cache = {}

    def at(self, q) -> SweepSample:
        if q not in self.cache:
            self.cache[q] = sample_quota(self.profile, self.n, q)
        return self.cache[q]

    def split(self, a: SweepSample, b: SweepSample, key):
        """Bisect until the pair straddling the change of ``key`` is closer than the resolution."""
        while b.q - a.q > self.res:
            m = self.at((a.q + b.q) / 2)
            if key(m) == key(a):
                a = m
            else:
                b = m
        return a, b

    def hunt(self, a: SweepSample, b: SweepSample):
        """Look for a valid point between a "low" sample and a "high" one."""
        while True:
            for q in (simplest_between(a.q, b.q), (a.q + b.q) / 2):
                if a.q < q < b.q:
                    m = self.at(q)
                    if m.divisor_valid:
                        return m
            if b.q - a.q <= self.res:
                return None
            m = self.at((a.q + b.q) / 2)
            if m.side == a.side:
                a = m
            else:
                b = m


def find_divisor_quota(profile: Profile, n: int, q_lo=None, q_hi=None,
                       resolution=Fraction(1, 10**6), grid: int = 512) -> DivisorSearchResult:
    """Locate the quotas that satisfy the divisor-like inequalities.

    The range defaults to (0, v/n].  A grid pass is refined by bisection at
    every change of validity or allocation label; between a sample where a
    whole quota remains and one where a seat lacks a quota, the search also
    probes the simplest rationals, which catches isolated valid points.
    """
    q_lo, q_hi = _range(profile, n, q_lo, q_hi)
    resolution = as_rational(resolution)
    if resolution <= 0:
        raise BadRange("resolution must be positive")
    srch = _Search(profile, n, resolution)
    start = 0 if q_lo > 0 else 1
    pts = [srch.at(q_lo + (q_hi - q_lo) * Fraction(j, grid)) for j in range(start, grid + 1)]

    label = lambda s: s.allocation_label  # noqa: E731
    valid = lambda s: s.divisor_valid  # noqa: E731
    changes = []
    for a, b in zip(pts, pts[1:]):
        if a.allocation_label != b.allocation_label:
            changes.append(LabelChange(*srch.split(a, b, label)))
        if a.divisor_valid != b.divisor_valid:
            lo, hi = srch.split(a, b, valid)
            # interval ends are often simple rationals; try the simplest one in the bracket
            srch.at(simplest_between(lo.q, hi.q))
        elif not a.divisor_valid and {a.side, b.side} == {"low", "high"}:
            hit = srch.hunt(a, b)
            if hit is not None:
                # probe either side of an isolated hit
                for nb in (hit.q - resolution, hit.q + resolution):
                    if q_lo < nb <= q_hi:
                        srch.at(nb)

    ordered = sorted(srch.cache.values(), key=lambda s: s.q)
    intervals = []
    run = None
    for s in ordered:
        if s.divisor_valid and run is not None and run[2] == s.allocation_label:
            run[1] = s.q
        elif s.divisor_valid:
            if run is not None:
                intervals.append(tuple(run))
            run = [s.q, s.q, s.allocation_label]
        elif run is not None:
            intervals.append(tuple(run))
            run = None
    if run is not None:
        intervals.append(tuple(run))
    gaps = [s.gap for s in ordered]
    return DivisorSearchResult(
        found=bool(intervals),
        intervals=intervals,
        supremum=max((iv[1] for iv in intervals), default=None),
        min_gap=min(gaps) if gaps else Fraction(0),
        label_changes=changes,
        samples=ordered,
    )
