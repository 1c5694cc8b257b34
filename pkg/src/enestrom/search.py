"""Seeded searches for small counterexamples.

Each search returns its first hit as a :class:`Finding` (or ``None``), so
a seed always reproduces the same instance.  The hits ship as bundled
fixtures; the searches stay here so they can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BranchCapExceeded, InsufficientCandidates
from .generate import DEFAULT_SEED, random_delta, random_instance, rng_for
from .method import EpConfig, Reduction, allocate, check_feasible
from .profile import HARE, aggregate, format_profile
from .proportionality import check_majority, probe_monotonicity
from .rivals import METHODS

__all__ = [
    "Finding",
    "NEGATIVE",
    "find_hare_majority_failure",
    "find_monotonicity_failure",
    "sweep_monotonicity_failure",
    "closure_failure_for_elimination",
    "fixture_text",
    "parse_delta",
]

NEGATIVE = EpConfig(reduction=Reduction.NEGATIVE)


@dataclass
class Finding:
    kind: str
    profile: object
    n: int
    seed: int | None
    trial: int | None
    meta: dict = field(default_factory=dict)


def _run(method, profile, n, config=None):
    if method == "ep":
        return allocate(profile, n, config)
    return METHODS[method](profile, n)


def _three_party(rng):
    """A majority list facing a split opposition, with some overlap."""
    cands = [("A", None), ("B", None), ("C", None)]
    raw = [("A", rng.randint(1, 60)), ("B", rng.randint(1, 40)), ("C", rng.randint(1, 40))]
    for pair in ("AB", "AC", "BC"):
        if rng.random() < 0.3:
            raw.append((pair, rng.randint(1, 10)))
    return aggregate(raw, cands), rng.choice((1, 3, 5, 7))


def find_hare_majority_failure(seed=DEFAULT_SEED, trials=5000):
    """A list approved alone by a majority that gets a minority of seats under Hare."""
    rng = rng_for(seed)
    cfg = EpConfig(quota=HARE)
    for trial in range(trials):
        profile, n = _three_party(rng)
        try:
            check_feasible(profile, n)
        except InsufficientCandidates:
            continue
        trace = allocate(profile, n, cfg)
        rep = check_majority(profile, n, trace, ["A"])[0]
        if not rep.holds:
            return Finding("majority-hare", profile, n, seed, trial, {"quota": "hare", "J": "A"})
    return None


def _violated(rep, party):
    return not rep.party_holds if party else not rep.holds


def find_monotonicity_failure(method="ep", config=None, party=False, seed=DEFAULT_SEED,
                              trials=30000, capacities=(1,), delta_weight=11, **shape):
    """Random probes: a winner gains approvals; stop at the first failure.

    ``party`` looks for a drop in the candidate's seat count rather than the
    loss of its last seat.  Rival-rule probes that meet a tie are skipped.
    """
    rng = rng_for(seed)
    for trial in range(trials):
        profile, n = random_instance(rng, capacities=capacities, **shape)
        trace = _run(method, profile, n, config)
        if method != "ep" and trace.has_ties:
            continue
        cand = rng.choice([i for i, k in enumerate(trace.seats) if k])
        delta = random_delta(rng, profile, cand, max_weight=delta_weight)
        try:
            rep = probe_monotonicity(profile, n, cand, delta, method, config)
        except BranchCapExceeded:
            continue
        if method != "ep" and rep.ties:
            continue
        if _violated(rep, party):
            return Finding("party-monotonicity" if party else "individual-monotonicity",
                           profile, n, seed, trial,
                           {"method": method, "candidate": rep.candidate, "delta": delta})
    return None


def sweep_monotonicity_failure(method, party=False, seed=DEFAULT_SEED, trials=40000,
                               capacities=(1,), **shape):
    """Like :func:`find_monotonicity_failure`, but tries every single-ballot move.

    For each winner and each ballot type not approving it, moves the whole
    weight, half of it, and a single vote.
    """
    rng = rng_for(seed)
    for trial in range(trials):
        profile, n = random_instance(rng, capacities=capacities, **shape)
        if not party and len(profile.candidates) - n < 2:
            continue
        trace = _run(method, profile, n)
        if method != "ep" and trace.has_ties:
            continue
        for cand in [i for i, k in enumerate(trace.seats) if k]:
            label = profile.candidates[cand].label
            for k, b in enumerate(profile.ballots):
                if cand in b.approvals:
                    continue
                for w in sorted({b.weight, max(Fraction(1), b.weight // 2), Fraction(1)}):
                    delta = [(k, label, w)]
                    rep = probe_monotonicity(profile, n, cand, delta, method)
                    if rep.ties:
                        continue
                    if _violated(rep, party):
                        return Finding("party-monotonicity" if party else "individual-monotonicity",
                                       profile, n, seed, trial,
                                       {"method": method, "candidate": label, "delta": delta})
    return None


def closure_failure_for_elimination() -> Finding:
    """A closure-threshold failure of harmonic Thiele elimination.

    J = {a, b} is approved by 700 of 2747 votes, over two quotas for 7
    seats.  Those voters split over c and d, whose own single supporters
    keep them alive just long enough for b, then c, then d to go, each
    below the 300 of every singleton list x_i.  J* = {a, b, c, d} ends
    with one seat.
    """
    raw = [("a b c".split(), 350), ("a b d".split(), 350), (["c"], 118), (["d"], 119),
           (["a"], 10)]
    xs = [f"x{i}" for i in range(1, 7)]
    raw += [([x], 300) for x in xs]
    profile = aggregate(raw, ["a", "b", "c", "d"] + xs)
    return Finding("closure-threshold", profile, 7, None, None,
                   {"method": "thiele-elim", "J": "a b", "ell": 2})


def _delta_text(delta) -> str:
    return " ".join(f"{'new' if k is None else k}:{w}" for k, _label, w in delta)


def parse_delta(text: str, label: str) -> list:
    out = []
    for tok in text.split():
        k, _, w = tok.partition(":")
        out.append((None if k == "new" else int(k), label, Fraction(w)))
    return out


def fixture_text(f: Finding) -> str:
    how = f"{f.kind}, seed {f.seed}, trial {f.trial}" if f.seed is not None else f"{f.kind}, by hand"
    lines = [f"# seats: {f.n}", f"# found-by: {how}"]
    for key, value in f.meta.items():
        if key == "delta":
            value = _delta_text(value)
        lines.append(f"# {key}: {value}")
    return "\n".join(lines) + "\n" + format_profile(f.profile)
