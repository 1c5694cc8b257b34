"""The Eneström-Phragmén quota method.

Seats are handed out one at a time to the eligible candidate with the largest
current support.  The ballots that supported the winner then lose value so
that, in the basic version, exactly one quota is spent per seat; if the winner
had less than a quota, its supporting ballots are used up completely.

:class:`EpConfig` selects among the historical variants (rounded "simple
fractions" reduction, Hare or per-step quotas, a stopping threshold, zeroing
of ballots left without eligible candidates, and unrestricted negative
values).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    BranchCapExceeded,
    ConfigError,
    InsufficientCandidates,
    NonPositiveSupport,
    ZeroSeats,
)
from .profile import DROOP, Fixed, Profile, UpdatedPerStep, as_rational

__all__ = [
    "Reduction",
    "Status",
    "EpConfig",
    "StepRecord",
    "AllocationTrace",
    "Outcome",
    "allocate",
    "reduction_factor",
    "enumerate_allocations",
    "check_feasible",
]


class Reduction(enum.Enum):
    EXACT = "exact"
    SIMPLE = "simple"
    NEGATIVE = "negative"


class Status(enum.Enum):
    COMPLETED = "completed"
    STOPPED_BY_THRESHOLD = "stopped_by_threshold"
    UNDERFILLED = "underfilled"


@dataclass(frozen=True)
class EpConfig:
    quota: object = DROOP
    reduction: Reduction = Reduction.EXACT
    threshold: Fraction = Fraction(0)
    zero_empty: bool = False

    def __post_init__(self):
        object.__setattr__(self, "reduction", Reduction(self.reduction))
        t = as_rational(self.threshold)
        if not 0 <= t <= 1:
            raise ConfigError(f"threshold must lie in [0, 1], got {t}")
        object.__setattr__(self, "threshold", t)
        if self.zero_empty and not isinstance(self.quota, UpdatedPerStep):
            raise ConfigError("zeroing empty ballots only makes sense with the per-step quota")

    @classmethod
    def memoir_1906a(cls):
        """Per-step Hare quota with rounded reduction and empty-ballot zeroing."""
        return cls(quota=UpdatedPerStep(), reduction=Reduction.SIMPLE, zero_empty=True)


def reduction_factor(w_star, q, rule=Reduction.EXACT) -> Fraction:
    """Multiplier applied to the ballots that supported the winner."""
    w_star, q = as_rational(w_star), as_rational(q)
    if w_star <= 0 or q <= 0:
        raise NonPositiveSupport(f"need w* > 0 and q > 0, got w*={w_star}, q={q}")
    rule = Reduction(rule)
    if rule is Reduction.SIMPLE:
        return 1 - Fraction(1, math.ceil(w_star / q))
    if rule is Reduction.NEGATIVE:
        return 1 - q / w_star
    if w_star < q:
        return Fraction(0)
    return 1 - q / w_star


def _denominator(w_star: Fraction, q: Fraction, rule: Reduction, exhausted: bool) -> Fraction:
    # used votes lose 1/r of their value
    if rule is Reduction.SIMPLE:
        return Fraction(math.ceil(w_star / q))
    if exhausted and rule is Reduction.EXACT:
        return Fraction(1)
    return w_star / q


@dataclass(frozen=True)
class StepRecord:
    s: int
    chosen: int
    support_before: Fraction
    quota_used: Fraction
    reduction_factor: Fraction
    reduction_denominator: Fraction
    exhausted: bool
    supports: tuple  # w_i[s] for every candidate, eligible or not
    residual_weights: tuple  # v_k[s+1], aligned with profile.ballots
    tied: tuple = ()  # every eligible maximiser, chosen included
    eligible: tuple = ()  # I[s]


@dataclass
class AllocationTrace:
    profile: Profile
    n: int
    config: EpConfig
    quota: Fraction  # the quota in force at step 0
    steps: list = field(default_factory=list)
    seats: tuple = ()
    status: Status = Status.COMPLETED
    status_step: int | None = None
    final_weights: tuple = ()

    @property
    def elected(self) -> list:
        return [st.chosen for st in self.steps]

    @property
    def elected_labels(self) -> list:
        return [self.profile.candidates[i].label for i in self.elected]

    def seat_map(self) -> dict:
        return {c.label: self.seats[c.id] for c in self.profile.candidates if self.seats[c.id]}

    def eligible_after(self) -> list:
        return [
            c.id for c in self.profile.candidates if self.seats[c.id] < c.seats_cap(self.n)
        ]

    def final_supports(self) -> tuple:
        p = self.profile
        return tuple(
            sum((self.final_weights[k] for k in p.supporters(i)), Fraction(0))
            for i in range(len(p.candidates))
        )

    @property
    def w_star_final(self) -> Fraction | None:
        """Largest eligible support once allocation has finished (w*[n])."""
        sup = self.final_supports()
        elig = self.eligible_after()
        if not elig:
            return None
        return max(sup[i] for i in elig)

    def w_star(self, s: int) -> Fraction | None:
        if s < len(self.steps):
            return self.steps[s].support_before
        if s == len(self.steps):
            return self.w_star_final
        return None

    @property
    def has_ties(self) -> bool:
        return any(len(st.tied) > 1 for st in self.steps)

    @property
    def any_exhausted(self) -> bool:
        return any(st.exhausted for st in self.steps)


@dataclass(frozen=True)
class Outcome:
    sequence: tuple
    seats: tuple
    status: Status = Status.COMPLETED


def check_feasible(profile: Profile, n: int) -> None:
    """Enough positively supported capacity to fill n seats."""
    if n < 1:
        raise ZeroSeats("at least one seat is needed")
    room = 0
    for c in profile.candidates:
        if any(profile.ballots[k].weight > 0 for k in profile.supporters(c.id)):
            room += c.seats_cap(n)
    if room < n:
        raise InsufficientCandidates(
            f"only {room} seats' worth of supported candidates for {n} seats"
        )


class _Engine:
    def __init__(self, profile: Profile, n: int, config: EpConfig):
        check_feasible(profile, n)
        self.profile = profile
        self.n = n
        self.config = config
        self.caps = [c.seats_cap(n) for c in profile.candidates]
        self.v0 = profile.total_votes
        self.initial_quota = config.quota.value(self.v0, n, 0, self.v0)

    def supports(self, weights):
        p = self.profile
        return tuple(
            sum((weights[k] for k in p.supporters(i)), Fraction(0))
            for i in range(len(p.candidates))
        )

    def quota_at(self, s, weights):
        return self.config.quota.value(self.v0, self.n, s, sum(weights, Fraction(0)))

    def candidates_at(self, s, weights, seats):
        """(supports, eligible, w*, q, tied) ahead of seat s+1, or None when stuck."""
        supports = self.supports(weights)
        eligible = tuple(i for i, cap in enumerate(self.caps) if seats[i] < cap)
        w_star = max(supports[i] for i in eligible)
        tied = tuple(i for i in eligible if supports[i] == w_star)
        q = self.quota_at(s, weights)
        return supports, eligible, w_star, q, tied

    def blocked(self, w_star, q):
        if w_star <= 0:
            return Status.UNDERFILLED
        t = self.config.threshold
        if t > 0 and q > 0 and w_star / q < t:
            return Status.STOPPED_BY_THRESHOLD
        return None

    def advance(self, s, weights, seats, look, chosen):
        supports, eligible, w_star, q, tied = look
        rule = self.config.reduction
        exhausted = rule is not Reduction.NEGATIVE and w_star < q
        factor = reduction_factor(w_star, q, rule)
        new_seats = list(seats)
        new_seats[chosen] += 1
        still = {i for i in eligible if new_seats[i] < self.caps[i]}
        masks = self.profile.masks
        new_weights = list(weights)
        for k in self.profile.supporters(chosen):
            if self.config.zero_empty and not any(masks[k] >> i & 1 for i in still):
                new_weights[k] = Fraction(0)
            else:
                new_weights[k] = weights[k] * factor
        record = StepRecord(
            s=s,
            chosen=chosen,
            support_before=w_star,
            quota_used=q,
            reduction_factor=factor,
            reduction_denominator=_denominator(w_star, q, rule, exhausted),
            exhausted=exhausted,
            supports=supports,
            residual_weights=tuple(new_weights),
            tied=tied,
            eligible=eligible,
        )
        return record, tuple(new_weights), tuple(new_seats)

    def run(self, choose: Callable[[tuple], int] = min) -> AllocationTrace:
        weights = tuple(b.weight for b in self.profile.ballots)
        seats = (0,) * len(self.caps)
        trace = AllocationTrace(self.profile, self.n, self.config, self.initial_quota)
        for s in range(self.n):
            look = self.candidates_at(s, weights, seats)
            status = self.blocked(look[2], look[3])
            if status is not None:
                trace.status, trace.status_step = status, s
                break
            record, weights, seats = self.advance(s, weights, seats, look, choose(look[4]))
            trace.steps.append(record)
        trace.seats = seats
        trace.final_weights = weights
        return trace


def allocate(profile: Profile, n: int, config: EpConfig | None = None) -> AllocationTrace:
    """Run the method for ``n`` seats.

    Ties for the largest support go to the candidate declared first.
    """
    return _Engine(profile, n, config or EpConfig()).run()


def enumerate_allocations(
    profile: Profile, n: int, config: EpConfig | None = None, branch_cap: int = 256
) -> list:
    """Every outcome reachable by some resolution of the ties.

    Explores the tie tree depth first and raises :class:`BranchCapExceeded`
    as soon as more than ``branch_cap`` complete branches have been seen.
    Outcomes are deduplicated and returned sorted.
    """
    if branch_cap < 1:
        raise ValueError("branch_cap must be >= 1")
    eng = _Engine(profile, n, config or EpConfig())
    outcomes = set()
    leaves = 0
    stack = [(0, tuple(b.weight for b in profile.ballots), (0,) * len(eng.caps), ())]
    while stack:
        s, weights, seats, seq = stack.pop()
        status = Status.COMPLETED
        if s < n:
            look = eng.candidates_at(s, weights, seats)
            status = eng.blocked(look[2], look[3])
            if status is None:
                for chosen in reversed(look[4]):
                    _, w2, s2 = eng.advance(s, weights, seats, look, chosen)
                    stack.append((s + 1, w2, s2, seq + (chosen,)))
                continue
        leaves += 1
        if leaves > branch_cap:
            raise BranchCapExceeded(f"more than {branch_cap} tie branches")
        outcomes.add(Outcome(seq, seats, status))
    return sorted(outcomes, key=lambda o: (o.sequence, o.seats))


def winners(outcomes: Sequence[Outcome]) -> set:
    """Candidates that get at least one seat in some outcome."""
    return {i for o in outcomes for i, k in enumerate(o.seats) if k}


def fixed_config(q) -> EpConfig:
    return EpConfig(quota=Fixed(as_rational(q)))
