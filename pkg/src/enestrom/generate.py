"""Seeded random profiles for property suites, fuzzing and counterexample search."""

from __future__ import annotations

import random
import string
from fractions import Fraction

from .errors import InsufficientCandidates
from .method import check_feasible
from .profile import Profile, aggregate

DEFAULT_SEED = 20190528

_LABELS = string.ascii_lowercase


def rng_for(seed=DEFAULT_SEED) -> random.Random:
    return random.Random(seed)


def random_profile(rng: random.Random, max_candidates=8, max_weight=50, max_types=8,
                   capacities=(1, 1, 1, 2, None), max_size=None) -> Profile:
    nc = rng.randint(1, max_candidates)
    cands = [(_LABELS[i], rng.choice(capacities)) for i in range(nc)]
    raw = []
    for _ in range(rng.randint(1, max_types)):
        size = rng.randint(1, nc if max_size is None else min(nc, max_size))
        raw.append((rng.sample([c[0] for c in cands], size), rng.randint(1, max_weight)))
    return aggregate(raw, cands)


def random_instance(rng: random.Random, max_seats=5, **kw):
    """A (profile, n) pair that satisfies the feasibility precondition."""
    while True:
        p = random_profile(rng, **kw)
        n = rng.randint(1, max_seats)
        try:
            check_feasible(p, n)
        except InsufficientCandidates:
            continue
        return p, n


def random_uninominal(rng: random.Random, parties: bool, max_candidates=6, max_weight=60,
                      max_seats=8):
    while True:
        nc = rng.randint(2, max_candidates)
        cap = None if parties else 1
        cands = [(_LABELS[i], cap) for i in range(nc)]
        raw = [([c[0]], rng.randint(0, max_weight)) for c in cands]
        n = rng.randint(1, max_seats)
        p = aggregate(raw, cands)
        try:
            check_feasible(p, n)
        except InsufficientCandidates:
            continue
        return p, n


def random_disjoint_parties(rng: random.Random, max_parties=5, max_weight=100, max_seats=10):
    return random_uninominal(rng, True, max_parties, max_weight, max_seats)


def two_party_profile(v_a, v_b, v_ab) -> Profile:
    cands = [("A", None), ("B", None)]
    return aggregate([("A", v_a), ("B", v_b), ("AB", v_ab)], cands)


def random_two_party(rng: random.Random, max_weight=100, max_seats=9):
    while True:
        v_a, v_b, v_ab = (rng.randint(0, max_weight) for _ in range(3))
        if v_a + v_b + v_ab == 0:
            continue
        return two_party_profile(v_a, v_b, v_ab), rng.randint(1, max_seats)


def random_delta(rng: random.Random, profile: Profile, candidate: int, max_weight=10) -> list:
    """Random legal additions of approvals for ``candidate``.

    Entries are ``(ballot index, label, weight)``; ballot index ``None`` adds
    new ballots approving only the candidate.
    """
    label = profile.candidates[candidate].label
    without = [k for k, b in enumerate(profile.ballots) if candidate not in b.approvals]
    delta = []
    for k in rng.sample(without, rng.randint(0, min(2, len(without)))):
        w = profile.ballots[k].weight
        moved = Fraction(rng.randint(1, int(w))) if w >= 1 else w
        delta.append((k, label, moved))
    if not delta or rng.random() < 0.3:
        delta.append((None, label, Fraction(rng.randint(1, max_weight))))
    return delta
