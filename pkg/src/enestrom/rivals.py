"""Rival rules: sequential Phragmén, Thiele addition and elimination, and the
closed-list baselines (largest remainders, D'Hondt).

The sequential rules are defined for individual candidates.  A candidate of
capacity m (or an unlimited party, clamped to n) behaves as m clones that
appear on exactly the same ballots.  The implementations below track a seat
multiplicity per candidate instead of materialising the clones; this gives
the same scores and, since clones of one party are contiguous in
declaration order, the same tie-breaks.  :func:`expand_parties` builds the
explicit clone profile for cross-checking.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import UnlimitedCapacityUnsupported, ZeroVotes
from .method import check_feasible
from .profile import BallotType, Candidate, Profile, as_rational

__all__ = [
    "SatisfactionFunction",
    "HARMONIC",
    "RivalTrace",
    "seq_phragmen",
    "thiele_addition",
    "thiele_addition_by_reweighting",
    "thiele_elimination",
    "largest_remainders",
    "dhondt",
    "dhondt_allocations",
    "expand_parties",
    "METHODS",
]


class SatisfactionFunction:
    """Per-voter satisfaction as a function of the number of approved winners."""

    def __init__(self, func: Callable[[int], Fraction], name: str = "custom"):
        self._func = func
        self.name = name
        self._cache = {}
        if self(0) != 0 or self(1) != 1:
            raise ValueError("a satisfaction function needs sigma(0) = 0 and sigma(1) = 1")

    def __call__(self, h: int) -> Fraction:
        if h not in self._cache:
            self._cache[h] = as_rational(self._func(h))
        return self._cache[h]

    def increment(self, h: int) -> Fraction:
        """sigma(h + 1) - sigma(h); must be non-negative."""
        d = self(h + 1) - self(h)
        if d < 0:
            raise ValueError(f"satisfaction function decreases at h={h}")
        return d

    def __repr__(self):
        return f"SatisfactionFunction({self.name})"


def _harmonic(h: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, h + 1)), Fraction(0))


HARMONIC = SatisfactionFunction(_harmonic, "harmonic")


@dataclass
class RivalTrace:
    method: str
    profile: Profile
    n: int
    sequence: list  # elected in order; for elimination, the eliminated in order
    seats: tuple
    scores: list = field(default_factory=list)  # one {candidate: score} per step
    tied: list = field(default_factory=list)  # per step: candidates sharing the best score

    @property
    def elected(self) -> list:
        if self.method == "thiele-elim":
            return [i for i, k in enumerate(self.seats) for _ in range(k)]
        return list(self.sequence)

    @property
    def elected_labels(self) -> list:
        return [self.profile.candidates[i].label for i in self.elected]

    @property
    def eliminated(self) -> list:
        return list(self.sequence) if self.method == "thiele-elim" else []

    def seat_map(self) -> dict:
        return {c.label: self.seats[c.id] for c in self.profile.candidates if self.seats[c.id]}

    @property
    def has_ties(self) -> bool:
        return any(len(t) > 1 for t in self.tied)


def _caps(profile: Profile, n: int, expand: bool) -> list:
    if not expand and any(c.capacity != 1 for c in profile.candidates):
        raise UnlimitedCapacityUnsupported(
            "candidates with capacity other than 1 need expand=True"
        )
    return [c.seats_cap(n) for c in profile.candidates]


def _weights(profile: Profile) -> list:
    return [b.weight for b in profile.ballots]


def seq_phragmen(profile: Profile, n: int, expand: bool = True) -> RivalTrace:
    """Phragmén's sequential (iterative minimax) rule, load formulation.

    Each ballot type carries a load per unit of weight.  Electing i gives all
    of its approvers the common load (1 + sum of their current loads) / w_i;
    the candidate minimising that value is elected.
    """
    check_feasible(profile, n)
    caps = _caps(profile, n, expand)
    weights = _weights(profile)
    support = [sum((weights[k] for k in profile.supporters(i)), Fraction(0)) for i in range(len(caps))]
    load = [Fraction(0)] * len(weights)
    seats = [0] * len(caps)
    trace = RivalTrace("seq-phragmen", profile, n, [], ())
    # candidates with identical supporter sets always score alike
    groups = {}
    for i in range(len(caps)):
        groups.setdefault(profile.supporters(i), []).append(i)
    for _ in range(n):
        scores = {}
        for sup, members in groups.items():
            open_ = [i for i in members if seats[i] < caps[i] and support[i] > 0]
            if not open_:
                continue
            spent = sum((weights[k] * load[k] for k in sup), Fraction(0))
            value = (1 + spent) / support[open_[0]]
            for i in open_:
                scores[i] = value
        best = min(scores.values())
        tied = tuple(i for i in sorted(scores) if scores[i] == best)
        chosen = tied[0]
        for k in profile.supporters(chosen):
            load[k] = best
        seats[chosen] += 1
        trace.sequence.append(chosen)
        trace.scores.append(scores)
        trace.tied.append(tied)
    trace.seats = tuple(seats)
    return trace


def thiele_addition(profile: Profile, n: int, sigma: SatisfactionFunction = HARMONIC,
                    expand: bool = True) -> RivalTrace:
    """Greedy Thiele: repeatedly add the candidate with the largest satisfaction gain."""
    check_feasible(profile, n)
    caps = _caps(profile, n, expand)
    weights = _weights(profile)
    h = [0] * len(weights)
    seats = [0] * len(caps)
    trace = RivalTrace("thiele-add", profile, n, [], ())
    for _ in range(n):
        scores = {}
        for i in range(len(caps)):
            if seats[i] >= caps[i]:
                continue
            scores[i] = sum(
                (weights[k] * sigma.increment(h[k]) for k in profile.supporters(i)), Fraction(0)
            )
        best = max(scores.values())
        tied = tuple(i for i in sorted(scores) if scores[i] == best)
        chosen = tied[0]
        for k in profile.supporters(chosen):
            h[k] += 1
        seats[chosen] += 1
        trace.sequence.append(chosen)
        trace.scores.append(scores)
        trace.tied.append(tied)
    trace.seats = tuple(seats)
    return trace


def thiele_addition_by_reweighting(profile: Profile, n: int, expand: bool = True) -> RivalTrace:
    """Harmonic Thiele addition phrased as ballot reweighting.

    A ballot that has helped elect h candidates counts with 1/(h+1) of its
    weight; each further win on it multiplies its value by h/(h+1).
    """
    check_feasible(profile, n)
    caps = _caps(profile, n, expand)
    current = _weights(profile)
    h = [0] * len(current)
    seats = [0] * len(caps)
    trace = RivalTrace("thiele-add-reweight", profile, n, [], ())
    for _ in range(n):
        scores = {}
        for i in range(len(caps)):
            if seats[i] < caps[i]:
                scores[i] = sum((current[k] for k in profile.supporters(i)), Fraction(0))
        best = max(scores.values())
        tied = tuple(i for i in sorted(scores) if scores[i] == best)
        chosen = tied[0]
        for k in profile.supporters(chosen):
            h[k] += 1
            current[k] *= Fraction(h[k], h[k] + 1)
        seats[chosen] += 1
        trace.sequence.append(chosen)
        trace.scores.append(scores)
        trace.tied.append(tied)
    trace.seats = tuple(seats)
    return trace


def thiele_elimination(profile: Profile, n: int, sigma: SatisfactionFunction = HARMONIC,
                       expand: bool = True) -> RivalTrace:
    """Start from every candidate and drop the one whose loss costs least.

    Ties are resolved against the candidate declared last, i.e. the
    declaration order keeps its meaning as a priority order.
    """
    check_feasible(profile, n)
    caps = _caps(profile, n, expand)
    weights = _weights(profile)
    present = list(caps)
    counts = [sum(present[i] for i in b.approvals) for b in profile.ballots]
    trace = RivalTrace("thiele-elim", profile, n, [], ())
    while sum(present) > n:
        scores = {}
        for i in range(len(caps)):
            if present[i] == 0:
                continue
            scores[i] = sum(
                (weights[k] * sigma.increment(counts[k] - 1) for k in profile.supporters(i)),
                Fraction(0),
            )
        best = min(scores.values())
        tied = tuple(i for i in sorted(scores) if scores[i] == best)
        chosen = tied[-1]
        present[chosen] -= 1
        for k in profile.supporters(chosen):
            counts[k] -= 1
        trace.sequence.append(chosen)
        trace.scores.append(scores)
        trace.tied.append(tied)
    trace.seats = tuple(present)
    return trace


METHODS = {
    "seq-phragmen": seq_phragmen,
    "thiele-add": thiele_addition,
    "thiele-elim": thiele_elimination,
}


def expand_parties(profile: Profile, n: int):
    """Replace every candidate of capacity m by min(m, n) unit clones.

    Returns the clone profile and the clone -> original id map.
    """
    cands, owner, clone_ids = [], [], []
    for c in profile.candidates:
        m = c.seats_cap(n)
        ids = []
        for j in range(m):
            label = c.label if m == 1 else f"{c.label}#{j + 1}"
            ids.append(len(cands))
            cands.append(Candidate(len(cands), label, 1))
            owner.append(c.id)
        clone_ids.append(ids)
    ballots = [
        BallotType(frozenset(x for i in b.approvals for x in clone_ids[i]), b.weight)
        for b in profile.ballots
    ]
    return Profile(cands, ballots), owner


# -- closed lists -----------------------------------------------------------


def _party_votes(party_votes) -> list:
    votes = [as_rational(v) for v in party_votes]
    if any(v < 0 for v in votes):
        raise ValueError("party votes must be non-negative")
    if not votes or not any(votes):
        raise ZeroVotes("all parties have zero votes")
    return votes


def largest_remainders(party_votes: Sequence, n: int, quota) -> set:
    """All seat vectors the largest-remainder rule admits.

    Whole quotas first, then the leftover seats to the largest remainders
    (every admissible choice among tied remainders is returned).  When the
    whole quotas already exceed n, which with the Droop quota happens only
    if every remainder is zero, the surplus is taken back from any party
    holding a quota.
    """
    votes = _party_votes(party_votes)
    q = as_rational(quota)
    if q <= 0:
        raise ValueError("quota must be positive")
    base = [int(v // q) for v in votes]
    rem = [v - b * q for v, b in zip(votes, base)]
    left = n - sum(base)
    out = set()
    if left < 0:
        holders = [i for i, b in enumerate(base) for _ in range(b)]
        for drop in itertools.combinations(range(len(holders)), -left):
            vec = list(base)
            for d in drop:
                vec[holders[d]] -= 1
            out.add(tuple(vec))
        return out
    eligible = [i for i, v in enumerate(votes) if v > 0]
    if left > len(eligible):
        raise ValueError("more leftover seats than parties with votes")
    if left == 0:
        return {tuple(base)}
    ranked = sorted(eligible, key=lambda i: -rem[i])
    cutoff = rem[ranked[left - 1]]
    sure = [i for i in ranked if rem[i] > cutoff]
    pool = [i for i in ranked if rem[i] == cutoff]
    for pick in itertools.combinations(pool, left - len(sure)):
        vec = list(base)
        for i in itertools.chain(sure, pick):
            vec[i] += 1
        out.add(tuple(vec))
    return out


def dhondt(party_votes: Sequence, n: int) -> tuple:
    """Highest averages with divisors 1, 2, 3, ...; ties go to the earlier party."""
    votes = _party_votes(party_votes)
    seats = [0] * len(votes)
    for _ in range(n):
        best = max(range(len(votes)), key=lambda i: (votes[i] / (seats[i] + 1), -i))
        seats[best] += 1
    return tuple(seats)


def dhondt_allocations(party_votes: Sequence, n: int) -> set:
    """Every seat vector D'Hondt admits once ties for the last seats are open."""
    votes = _party_votes(party_votes)
    quotients = sorted(
        ((v / d, i) for i, v in enumerate(votes) if v > 0 for d in range(1, n + 1)),
        key=lambda t: -t[0],
    )
    cutoff = quotients[n - 1][0]
    base = [0] * len(votes)
    pool = []
    for value, i in quotients:
        if value > cutoff:
            base[i] += 1
        elif value == cutoff:
            pool.append(i)
    left = n - sum(base)
    out = set()
    for pick in itertools.combinations(pool, left):
        vec = list(base)
        for i in pick:
            vec[i] += 1
        out.add(tuple(vec))
    return out
