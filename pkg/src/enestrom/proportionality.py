"""Proportionality and monotonicity checks on finished allocations.

The threshold checks read the seat counts off a trace, so the same harness
audits Eneström-Phragmén runs and the rival rules alike.  For a subset J of
candidates and ell <= min(n, m_J) they test

* the quota threshold: more than ell quotas of ballots approving exactly J
  must give J at least ell seats;
* the closure threshold: more than ell quotas of ballots approving all of J
  must give J* (everything those voters approve) at least ell seats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import (
    BranchCapExceeded,
    EllExceedsCapacity,
    IllegalModification,
    NotUninominal,
    TooManyCandidates,
)
from .generate import DEFAULT_SEED
from .method import AllocationTrace, EpConfig, allocate, enumerate_allocations
from .profile import DROOP, Profile, aggregate, star_closure
from .rivals import METHODS, largest_remainders

__all__ = [
    "TheoremReport",
    "check_quota_threshold",
    "check_pjr_threshold",
    "check_all_subsets",
    "check_majority",
    "check_uninominal_equivalence",
    "UninominalReport",
    "apply_modification",
    "derive_modification",
    "MonotonicityReport",
    "probe_candidate_monotonicity",
    "probe_monotonicity",
    "first_step_at_most_quota",
    "first_step_below_quota",
]


@dataclass
class TheoremReport:
    theorem: str  # "quota", "closure", "majority" or "majority-closure"
    J: tuple  # labels
    ell: int
    hypothesis: Fraction  # v_J or y_J
    quota: Fraction
    conclusion: int  # n_J or n_{J*}
    holds: bool
    strict: bool  # hypothesis > ell * quota
    p: int | None = None
    t: int | None = None
    closure: tuple = ()
    singular: bool = False  # borderline failure rescued by another tie resolution
    witness: list = field(default_factory=list)

    def as_dict(self) -> dict:
        from .serialize import rat

        return {
            "theorem": self.theorem,
            "J": list(self.J),
            "ell": self.ell,
            "hypothesis": rat(self.hypothesis),
            "quota": rat(self.quota),
            "conclusion": self.conclusion,
            "holds": self.holds,
            "strict": self.strict,
            "p": self.p,
            "t": self.t,
            "closure": list(self.closure),
            "singular": self.singular,
            "witness": [
                {k: (rat(v) if isinstance(v, Fraction) else v) for k, v in w.items()}
                for w in self.witness
            ],
        }


def _default_quota(profile: Profile, n: int, trace, q):
    if q is not None:
        return Fraction(q)
    if isinstance(trace, AllocationTrace):
        return trace.quota
    return DROOP.value(profile.total_votes, n)


def _w_star_seq(trace: AllocationTrace):
    # w*[0..len(steps)]; an empty eligible set at the end counts as 0
    for s in range(len(trace.steps) + 1):
        w = trace.w_star(s)
        if w is None and s == len(trace.steps) and not trace.eligible_after():
            w = Fraction(0)
        yield s, w


def first_step_at_most_quota(trace: AllocationTrace, q=None):
    """p: first s <= n with w*[s] <= q."""
    q = trace.quota if q is None else q
    for s, w in _w_star_seq(trace):
        if w is not None and w <= q:
            return s
    return None


def first_step_below_quota(trace: AllocationTrace, q=None):
    """t: first s <= n with w*[s] < q."""
    q = trace.quota if q is None else q
    for s, w in _w_star_seq(trace):
        if w is not None and w < q:
            return s
    return None


def _residual_tally(trace: AllocationTrace, select) -> list:
    """sum of residual weights of the ballots picked by ``select`` at each step."""
    picked = [k for k, b in enumerate(trace.profile.ballots) if select(b.approvals)]
    rows = [sum((trace.profile.ballots[k].weight for k in picked), Fraction(0))]
    for st in trace.steps:
        rows.append(sum((st.residual_weights[k] for k in picked), Fraction(0)))
    return rows


def _witness(trace, select, upto):
    if not isinstance(trace, AllocationTrace):
        return []
    tally = _residual_tally(trace, select)
    labels = trace.profile.labels
    out = []
    for s, st in enumerate(trace.steps[: upto if upto is not None else len(trace.steps)]):
        out.append({"s": s, "chosen": labels[st.chosen], "w_star": st.support_before,
                    "tally": tally[s]})
    return out


def _seats_in(trace, ids) -> int:
    return sum(trace.seats[i] for i in ids)


def _borderline_rescue(profile, n, trace, ids, ell) -> bool:
    if not isinstance(trace, AllocationTrace):
        return False
    try:
        outcomes = enumerate_allocations(profile, n, trace.config, branch_cap=512)
    except BranchCapExceeded:
        return False
    return any(sum(o.seats[i] for i in ids) >= ell for o in outcomes)


def _threshold_check(kind, profile, n, trace, J, ell, q, hyp, counted, select):
    ids = profile.ids(J)
    limit = profile.capacity_of(ids, n)
    if ell < 0 or ell > limit:
        raise EllExceedsCapacity(f"ell={ell} exceeds min(n, m_J)={limit}")
    q = _default_quota(profile, n, trace, q)
    got = _seats_in(trace, counted)
    strict = hyp > ell * q
    holds = got >= ell or hyp < ell * q
    singular = False
    if not holds and not strict:
        singular = _borderline_rescue(profile, n, trace, counted, ell)
        holds = singular
    p = t = None
    if isinstance(trace, AllocationTrace):
        p = first_step_at_most_quota(trace, q)
        t = first_step_below_quota(trace, q)
    report = TheoremReport(
        theorem=kind,
        J=tuple(profile.label_set(ids)),
        ell=ell,
        hypothesis=hyp,
        quota=q,
        conclusion=got,
        holds=holds,
        strict=strict,
        p=p,
        t=t,
        closure=tuple(profile.label_set(counted)),
        singular=singular,
    )
    if not holds:
        report.witness = _witness(trace, select, p)
    return report


def check_quota_threshold(profile: Profile, n: int, trace, J, ell: int, q=None) -> TheoremReport:
    """v_J > ell*q implies n_J >= ell.

    At the borderline v_J = ell*q a shortfall is accepted only if some other
    resolution of the ties gives J its ell seats (reported as ``singular``).
    """
    ids = profile.ids(J)
    hyp = sum((b.weight for b in profile.ballots if b.approvals == ids), Fraction(0))
    return _threshold_check("quota", profile, n, trace, J, ell, q, hyp, ids,
                            lambda a: a == ids)


def check_pjr_threshold(profile: Profile, n: int, trace, J, ell: int, q=None) -> TheoremReport:
    """y_J > ell*q implies n_{J*} >= ell (with ell bounded by m_J, not m_{J*})."""
    ids = profile.ids(J)
    hyp = sum((b.weight for b in profile.ballots if ids <= b.approvals), Fraction(0))
    closure = star_closure(profile, ids)
    return _threshold_check("closure", profile, n, trace, J, ell, q, hyp, closure,
                            lambda a: ids <= a)


def check_all_subsets(profile: Profile, n: int, trace, max_candidates: int = 12, q=None,
                      violations_only: bool = True) -> list:
    """Both threshold checks for every nonempty J and every admissible ell.

    By default only strict-hypothesis violations are returned.
    """
    nc = len(profile.candidates)
    if nc > max_candidates:
        raise TooManyCandidates(f"{nc} candidates, limit {max_candidates}")
    q = _default_quota(profile, n, trace, q)
    masks = profile.masks
    weights = [b.weight for b in profile.ballots]
    exact = dict(zip(masks, weights))
    caps = [c.seats_cap(n) for c in profile.candidates]
    seats = trace.seats
    out = []
    for J in range(1, 1 << nc):
        members = [i for i in range(nc) if J >> i & 1]
        limit = min(n, sum(caps[i] for i in members))
        v_J = exact.get(J, Fraction(0))
        y_J = Fraction(0)
        star = 0
        for bm, w in zip(masks, weights):
            if bm & J == J:
                y_J += w
                if w > 0:
                    star |= bm
        n_J = sum(seats[i] for i in members)
        n_star = sum(seats[i] for i in range(nc) if star >> i & 1)
        for kind, hyp, got in (("quota", v_J, n_J), ("closure", y_J, n_star)):
            if violations_only:
                ell = got + 1
                while ell <= limit and hyp > ell * q:
                    if kind == "quota":
                        out.append(check_quota_threshold(profile, n, trace, members, ell, q))
                    else:
                        out.append(check_pjr_threshold(profile, n, trace, members, ell, q))
                    ell += 1
            else:
                for ell in range(1, limit + 1):
                    check = check_quota_threshold if kind == "quota" else check_pjr_threshold
                    out.append(check(profile, n, trace, members, ell, q))
    return out


def check_majority(profile: Profile, n: int, trace, J) -> tuple:
    """Majority preservation, for v_J/n_J and for y_J/n_{J*}."""
    ids = profile.ids(J)
    need = (n + 1) // 2 if n % 2 else n // 2
    if profile.capacity_of(ids, n) < need:
        raise EllExceedsCapacity(f"m_J below {need}: the majority hypothesis cannot apply")
    v = profile.total_votes
    v_J = sum((b.weight for b in profile.ballots if b.approvals == ids), Fraction(0))
    y_J = sum((b.weight for b in profile.ballots if ids <= b.approvals), Fraction(0))
    closure = star_closure(profile, ids)
    reports = []
    for kind, hyp, counted in (("majority", v_J, ids), ("majority-closure", y_J, closure)):
        got = _seats_in(trace, counted)
        if n % 2:
            applies, ok = hyp > v / 2, 2 * got > n
        else:
            applies, ok = 2 * hyp >= v, 2 * got >= n
        reports.append(
            TheoremReport(
                theorem=kind,
                J=tuple(profile.label_set(ids)),
                ell=need,
                hypothesis=hyp,
                quota=v / 2,
                conclusion=got,
                holds=(not applies) or ok,
                strict=applies,
                closure=tuple(profile.label_set(counted)),
            )
        )
    return tuple(reports)


@dataclass
class UninominalReport:
    kind: str  # "unit" or "party"
    seats: tuple
    expected: set  # admissible seat vectors
    holds: bool


def check_uninominal_equivalence(profile: Profile, n: int, config: EpConfig | None = None):
    """Single-approval ballots: top-n for individuals, largest remainders for parties."""
    if any(len(b.approvals) != 1 for b in profile.ballots):
        raise NotUninominal("every ballot must approve exactly one candidate")
    trace = allocate(profile, n, config)
    votes = [Fraction(0)] * len(profile.candidates)
    for b in profile.ballots:
        (i,) = b.approvals
        votes[i] += b.weight
    if all(c.capacity == 1 for c in profile.candidates):
        top = sorted(range(len(votes)), key=lambda i: (-votes[i], i))[:n]
        vec = tuple(1 if i in top else 0 for i in range(len(votes)))
        return UninominalReport("unit", trace.seats, {vec}, trace.seats == vec)
    if all(c.seats_cap(n) == n for c in profile.candidates):
        allowed = largest_remainders(votes, n, DROOP.value(profile.total_votes, n))
        return UninominalReport("party", trace.seats, allowed, trace.seats in allowed)
    raise NotUninominal("capacities must be all 1 or all unlimited")


# -- monotonicity -----------------------------------------------------------


def _delta_entry(entry):
    if len(entry) == 2:
        return entry[0], entry[1], None
    return entry


def apply_modification(profile: Profile, candidate, delta) -> Profile:
    """Add approvals of ``candidate`` and nothing else.

    ``delta`` holds ``(ballot index, label[, weight])`` entries.  An index
    moves ``weight`` (default: all) of that ballot type onto the same set
    plus the candidate; index ``None`` adds ``weight`` new ballots approving
    only the candidate.
    """
    i = profile.index(candidate)
    label = profile.candidates[i].label
    weights = [b.weight for b in profile.ballots]
    extra = []
    for entry in delta:
        k, added, w = _delta_entry(entry)
        if profile.index(added) != i:
            raise IllegalModification(f"delta adds {added!r}, only {label!r} may gain approvals")
        if k is None:
            if w is None or Fraction(w) <= 0:
                raise IllegalModification("new ballots need a positive weight")
            extra.append(((label,), Fraction(w)))
            continue
        if not 0 <= k < len(weights):
            raise IllegalModification(f"no ballot type {k}")
        b = profile.ballots[k]
        if i in b.approvals:
            raise IllegalModification(f"ballot type {k} already approves {label!r}")
        w = weights[k] if w is None else Fraction(w)
        if w <= 0 or w > weights[k]:
            raise IllegalModification(f"cannot move {w} of ballot type {k}")
        weights[k] -= w
        extra.append((tuple(profile.label_set(b.approvals | {i})), w))
    raw = [(profile.label_set(b.approvals), w) for b, w in zip(profile.ballots, weights)]
    return aggregate(raw + extra, profile.candidates)


def derive_modification(before: Profile, after: Profile, candidate) -> list:
    """Recover a delta turning ``before`` into ``after``; raise if none is legal."""
    if before.labels != after.labels:
        raise IllegalModification("profiles declare different candidates")
    i = before.index(candidate)
    label = before.candidates[i].label
    wb = {b.approvals: b.weight for b in before.ballots}
    wa = {b.approvals: b.weight for b in after.ballots}
    index = {b.approvals: k for k, b in enumerate(before.ballots)}
    delta = []
    gained = {}
    for s in set(wb) | set(wa):
        if i in s:
            continue
        moved = wb.get(s, 0) - wa.get(s, 0)
        if moved < 0:
            raise IllegalModification(f"weight appeared on a set without {label!r}")
        if moved:
            delta.append((index[s], label, Fraction(moved)))
            gained[s | {i}] = gained.get(s | {i}, 0) + moved
    for s in set(wb) | set(wa):
        if i not in s:
            continue
        diff = wa.get(s, 0) - wb.get(s, 0) - gained.get(s, 0)
        if s == frozenset({i}) and diff > 0:
            delta.append((None, label, Fraction(diff)))
        elif diff != 0:
            raise IllegalModification("weights on sets with the candidate do not balance")
    return sorted(delta, key=lambda d: (d[0] is None, d[0] or 0))


@dataclass
class MonotonicityReport:
    candidate: str
    method: str
    before: list  # seat vectors over all tie resolutions
    after: list
    elected_before: bool
    elected_after: bool
    seats_before: int  # canonical (declaration-order) resolution
    seats_after: int
    holds: bool  # candidate-level claim
    party_holds: bool  # seat count did not drop
    profile_after: Profile | None = None
    ties: bool = False


def _outcomes(method, profile, n, config, branch_cap):
    if method == "ep":
        outs = enumerate_allocations(profile, n, config, branch_cap)
        canon = allocate(profile, n, config)
        return [o.seats for o in outs], canon.seats, len(outs) > 1 or canon.has_ties
    trace = METHODS[method](profile, n)
    return [trace.seats], trace.seats, trace.has_ties


def probe_monotonicity(profile: Profile, n: int, candidate, delta, method: str = "ep",
                       config: EpConfig | None = None, branch_cap: int = 256) -> MonotonicityReport:
    i = profile.index(candidate)
    after = apply_modification(profile, i, delta)
    before_all, before_canon, t1 = _outcomes(method, profile, n, config, branch_cap)
    after_all, after_canon, t2 = _outcomes(method, after, n, config, branch_cap)
    eb = any(s[i] > 0 for s in before_all)
    ea = any(s[i] > 0 for s in after_all)
    return MonotonicityReport(
        candidate=profile.candidates[i].label,
        method=method,
        before=sorted(set(before_all)),
        after=sorted(set(after_all)),
        elected_before=eb,
        elected_after=ea,
        seats_before=before_canon[i],
        seats_after=after_canon[i],
        holds=(not eb) or ea,
        party_holds=after_canon[i] >= before_canon[i],
        profile_after=after,
        ties=t1 or t2,
    )


def probe_candidate_monotonicity(profile: Profile, n: int, config: EpConfig | None, candidate,
                                 delta, branch_cap: int = 256) -> MonotonicityReport:
    """Give ``candidate`` extra approvals and see whether it can still win.

    Tie-aware: the claim is that if some resolution of ties elects the
    candidate before the change, some resolution elects it afterwards.
    """
    return probe_monotonicity(profile, n, candidate, delta, "ep", config, branch_cap)


def fuzz_monotonicity(trials: int, seed=DEFAULT_SEED, method="ep", config=None,
                      instance: Callable | None = None, stop_at_first=False) -> dict:
    """Random (profile, delta) probes; returns counts and the violating reports.

    For the rival rules, probes where either run meets a tie are skipped since
    those rules have no tie enumeration.
    """
    from .generate import random_delta, random_instance, rng_for

    rng = rng_for(seed)
    make = instance or (lambda r: random_instance(r, capacities=(1,)))
    violations, skipped = [], 0
    for _ in range(trials):
        profile, n = make(rng)
        trace = allocate(profile, n, config) if method == "ep" else METHODS[method](profile, n)
        winners = [i for i, k in enumerate(trace.seats) if k]
        cand = rng.choice(winners)
        delta = random_delta(rng, profile, cand)
        try:
            rep = probe_monotonicity(profile, n, cand, delta, method, config)
        except BranchCapExceeded:
            skipped += 1
            continue
        if method != "ep" and rep.ties:
            skipped += 1
            continue
        if not rep.holds:
            violations.append((profile, n, delta, rep))
            if stop_at_first:
                break
    return {"seed": seed, "trials": trials, "skipped": skipped, "violations": violations}
