"""Approval profiles, derived tallies and quotas.

A profile is a list of candidates (each with a seat capacity) and a list of
weighted ballot types, one per distinct approval set.  Every vote quantity is
a :class:`fractions.Fraction`; nothing in here rounds.

Candidates are referred to by their dense integer id.  The public tally
functions also accept a label, which is resolved through the profile.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .errors import (
    DuplicateApproval,
    EmptyApprovalSet,
    ParseError,
    ProfileError,
    UnknownCandidate,
    ZeroSeats,
)

__all__ = [
    "Candidate",
    "BallotType",
    "Profile",
    "Droop",
    "Hare",
    "Fixed",
    "UpdatedPerStep",
    "DROOP",
    "HARE",
    "UPDATED",
    "as_rational",
    "aggregate",
    "approval_support",
    "exact_support",
    "joint_support",
    "star_closure",
    "quota_value",
    "parse_profile",
    "format_profile",
    "load_profile",
]



def as_rational(x) -> Fraction:
    """Coerce ``x`` to an exact Fraction.

    Strings may be integers, decimals or ``p/q``.  Floats are refused: they
    would smuggle binary rounding into exact tallies.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not vote quantities")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass a Fraction or a decimal string")
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {x!r}") from exc
    # Decimal and friends
    return Fraction(x)


@dataclass(frozen=True)
class Candidate:
    id: int
    label: str
    capacity: int | None = 1  # None means unlimited (a party list)

    def __post_init__(self):
        if self.capacity is not None and self.capacity < 1:
            raise ProfileError(f"capacity of {self.label!r} must be >= 1")

    @property
    def unlimited(self) -> bool:
        return self.capacity is None

    def seats_cap(self, n: int) -> int:
        """Capacity clamped to the house size: nobody can take more than n seats."""
        return n if self.capacity is None else min(self.capacity, n)


@dataclass(frozen=True)
class BallotType:
    approvals: frozenset
    weight: Fraction

    def __contains__(self, candidate: int) -> bool:
        return candidate in self.approvals


class Profile:
    """Immutable approval profile.

    ``ballots`` never holds two types with the same approval set; use
    :func:`aggregate` to build one from raw ballot lines.
    """

    __slots__ = ("candidates", "ballots", "_by_label", "_masks", "_supporters")

    def __init__(self, candidates: Sequence[Candidate], ballots: Sequence[BallotType]):
        candidates = tuple(candidates)
        for pos, c in enumerate(candidates):
            if c.id != pos:
                raise ProfileError(f"candidate ids must be 0..{len(candidates) - 1} in order")
        by_label = {}
        for c in candidates:
            if c.label in by_label:
                raise ProfileError(f"duplicate candidate label {c.label!r}")
            by_label[c.label] = c.id
        seen = set()
        checked = []
        for b in ballots:
            if not b.approvals:
                raise EmptyApprovalSet("ballot type with an empty approval set")
            for i in b.approvals:
                if not (isinstance(i, int) and 0 <= i < len(candidates)):
                    raise UnknownCandidate(f"ballot references unknown candidate {i!r}")
            if b.approvals in seen:
                raise ProfileError("two ballot types share an approval set; aggregate first")
            if b.weight < 0:
                raise ProfileError("negative ballot weight")
            seen.add(b.approvals)
            checked.append(BallotType(frozenset(b.approvals), as_rational(b.weight)))
        object.__setattr__(self, "candidates", candidates)
        object.__setattr__(self, "ballots", tuple(checked))
        object.__setattr__(self, "_by_label", by_label)
        object.__setattr__(
            self, "_masks", tuple(sum(1 << i for i in b.approvals) for b in self.ballots)
        )
        supporters = [[] for _ in candidates]
        for k, b in enumerate(self.ballots):
            for i in b.approvals:
                supporters[i].append(k)
        object.__setattr__(self, "_supporters", tuple(tuple(s) for s in supporters))

    def __setattr__(self, name, value):
        raise AttributeError("Profile is immutable")

    def __eq__(self, other):
        if not isinstance(other, Profile):
            return NotImplemented
        return self.candidates == other.candidates and self.ballots == other.ballots

    def __hash__(self):
        return hash((self.candidates, self.ballots))

    def __repr__(self):
        return f"Profile({self.labels!r}, {len(self.ballots)} ballot types, v={self.total_votes})"

    @property
    def labels(self) -> tuple:
        return tuple(c.label for c in self.candidates)

    @property
    def total_votes(self) -> Fraction:
        return sum((b.weight for b in self.ballots), Fraction(0))

    @property
    def masks(self) -> tuple:
        """Approval sets as bitmasks, aligned with ``ballots``."""
        return self._masks

    def supporters(self, candidate: int) -> tuple:
        """Indices of the ballot types approving ``candidate``."""
        return self._supporters[candidate]

    def index(self, candidate) -> int:
        if isinstance(candidate, bool):
            raise UnknownCandidate(f"unknown candidate {candidate!r}")
        if isinstance(candidate, int):
            if 0 <= candidate < len(self.candidates):
                return candidate
            raise UnknownCandidate(f"unknown candidate id {candidate}")
        try:
            return self._by_label[candidate]
        except (KeyError, TypeError):
            raise UnknownCandidate(f"unknown candidate {candidate!r}") from None

    def ids(self, candidates: Iterable) -> frozenset:
        return frozenset(self.index(c) for c in candidates)

    def mask(self, candidates: Iterable) -> int:
        return sum(1 << i for i in self.ids(candidates))

    def label_set(self, ids: Iterable[int]) -> list:
        return [self.candidates[i].label for i in sorted(ids)]

    def capacity_of(self, ids: Iterable[int], n: int) -> int:
        """m_J clamped to n (only comparisons against ell <= n are ever needed)."""
        return min(n, sum(self.candidates[i].seats_cap(n) for i in ids))

    def weights(self) -> list:
        return [b.weight for b in self.ballots]

    def with_weights(self, weights: Sequence) -> "Profile":
        """Same approval sets, new weights; zero-weight types are kept."""
        return Profile(
            self.candidates,
            [BallotType(b.approvals, as_rational(w)) for b, w in zip(self.ballots, weights)],
        )

    def scaled(self, factor) -> "Profile":
        factor = as_rational(factor)
        return self.with_weights([b.weight * factor for b in self.ballots])

    def to_text(self) -> str:
        return format_profile(self)


def _resolve_candidates(candidates) -> list:
    out = []
    for pos, c in enumerate(candidates):
        if isinstance(c, Candidate):
            out.append(Candidate(pos, c.label, c.capacity))
        elif isinstance(c, tuple):
            label, cap = c
            out.append(Candidate(pos, label, cap))
        else:
            out.append(Candidate(pos, str(c), 1))
    return out


def aggregate(raw_ballots, candidates=None) -> Profile:
    """Build a profile from raw ``(approvals, weight)`` lines.

    ``approvals`` is an iterable of labels (a plain string iterates over its
    characters, so ``"ab"`` means ``{a, b}``).  Repeated approval sets are
    merged by summing weights, zero-weight types are dropped, and types keep
    the order in which their approval set first appeared.

    ``candidates`` may hold labels, ``(label, capacity)`` pairs or
    :class:`Candidate` objects; if omitted, every label seen becomes a
    unit-capacity candidate in order of first appearance.
    """
    raw = [(list(approvals), as_rational(weight)) for approvals, weight in raw_ballots]
    if candidates is None:
        seen = {}
        for approvals, _ in raw:
            for label in approvals:
                seen.setdefault(label, None)
        cands = [Candidate(pos, label, 1) for pos, label in enumerate(seen)]
    else:
        cands = _resolve_candidates(candidates)
    by_label = {c.label: c.id for c in cands}

    merged = {}
    for approvals, weight in raw:
        if weight < 0:
            raise ProfileError(f"negative weight {weight}")
        if not approvals:
            raise EmptyApprovalSet("ballot with an empty approval set")
        ids = []
        for label in approvals:
            if isinstance(label, int) and not isinstance(label, bool) and 0 <= label < len(cands):
                ids.append(label)
            elif label in by_label:
                ids.append(by_label[label])
            else:
                raise UnknownCandidate(f"unknown candidate {label!r}")
        key = frozenset(ids)
        if len(key) != len(ids):
            raise DuplicateApproval(f"candidate listed twice on one ballot: {approvals!r}")
        merged[key] = merged.get(key, Fraction(0)) + weight
    ballots = [BallotType(k, w) for k, w in merged.items() if w != 0]
    return Profile(cands, ballots)


def approval_support(profile: Profile, candidate) -> Fraction:
    """w_i: weight of all ballots approving the candidate."""
    i = profile.index(candidate)
    return sum((profile.ballots[k].weight for k in profile.supporters(i)), Fraction(0))


def exact_support(profile: Profile, J) -> Fraction:
    """v_J: weight of ballots whose approval set is exactly J."""
    target = profile.ids(J)
    for b in profile.ballots:
        if b.approvals == target:
            return b.weight
    return Fraction(0)


def joint_support(profile: Profile, J) -> Fraction:
    """y_J: weight of ballots approving every member of J."""
    m = profile.mask(J)
    return sum(
        (b.weight for b, bm in zip(profile.ballots, profile.masks) if bm & m == m),
        Fraction(0),
    )


def star_closure(profile: Profile, J) -> frozenset:
    """J*: union of the approval sets of all ballots containing J.

    Only ballots with positive weight count, since J* collects candidates
    approved by some voter.
    """
    m = profile.mask(J)
    out = set()
    for b, bm in zip(profile.ballots, profile.masks):
        if bm & m == m and b.weight > 0:
            out |= b.approvals
    return frozenset(out)


# -- quotas -----------------------------------------------------------------


@dataclass(frozen=True)
class Droop:
    """Unrounded Droop / Hagenbach-Bischoff quota v/(n+1)."""

    name = "droop"

    def value(self, v, n, s=0, v_s=None):
        return Fraction(v) / (n + 1)


@dataclass(frozen=True)
class Hare:
    name = "hare"

    def value(self, v, n, s=0, v_s=None):
        return Fraction(v) / n


@dataclass(frozen=True)
class Fixed:
    q: Fraction

    name = "fixed"

    def __post_init__(self):
        q = as_rational(self.q)
        if q <= 0:
            raise ValueError("a fixed quota must be positive")
        object.__setattr__(self, "q", q)

    def value(self, v, n, s=0, v_s=None):
        return self.q


@dataclass(frozen=True)
class UpdatedPerStep:
    """q'[s] = v[s] / (n - s), recomputed from the residual total before each seat."""

    name = "updated"

    def value(self, v, n, s=0, v_s=None):
        if s >= n:
            raise ZeroSeats(f"no seat left to price at step {s} of {n}")
        return Fraction(v if v_s is None else v_s) / (n - s)


DROOP = Droop()
HARE = Hare()
UPDATED = UpdatedPerStep()


def quota_value(rule, v, n: int, s: int = 0, v_s=None) -> Fraction:
    if n < 1:
        raise ZeroSeats("at least one seat is needed")
    return rule.value(as_rational(v), n, s, None if v_s is None else as_rational(v_s))


# -- text format ------------------------------------------------------------

_CAND_TOKEN = re.compile(r"^([^\s:()#]+)(?:\((\*|\d+)\))?$")


def _format_weight(w: Fraction) -> str:
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def parse_profile(text: str) -> Profile:
    """Parse the line-oriented profile format.

    ::

        # comment
        candidates: a b(2) C(*)
        21: a b
        3/2: C
    """
    candidates = None
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        head, sep, tail = stripped.partition(":")
        if not sep:
            raise ParseError(lineno, f"expected '<weight>: <labels>' or 'candidates: ...', got {stripped!r}")
        head = head.strip()
        if head == "candidates":
            if candidates is not None:
                raise ParseError(lineno, "second 'candidates:' line")
            if raw:
                raise ParseError(lineno, "'candidates:' must precede the ballot lines")
            candidates = []
            for tok in tail.split():
                m = _CAND_TOKEN.match(tok)
                if not m:
                    raise ParseError(lineno, f"bad candidate token {tok!r}")
                label, cap = m.groups()
                if cap is None:
                    capacity = 1
                elif cap == "*":
                    capacity = None
                else:
                    capacity = int(cap)
                    if capacity < 1:
                        raise ParseError(lineno, f"capacity of {label!r} must be >= 1")
                if any(label == c[0] for c in candidates):
                    raise ParseError(lineno, f"duplicate candidate {label!r}")
                candidates.append((label, capacity))
            if not candidates:
                raise ParseError(lineno, "no candidates declared")
            continue
        try:
            weight = Fraction(head)
        except (ValueError, ZeroDivisionError):
            raise ParseError(lineno, f"bad weight {head!r}") from None
        if weight < 0:
            raise ParseError(lineno, f"negative weight {head!r}")
        labels = tail.split()
        if not labels:
            raise ParseError(lineno, "empty approval set")
        if candidates is not None:
            known = {c[0] for c in candidates}
            for label in labels:
                if label not in known:
                    raise ParseError(lineno, f"unknown candidate {label!r}")
        if len(set(labels)) != len(labels):
            raise ParseError(lineno, "candidate listed twice on one ballot")
        raw.append((labels, weight))
    return aggregate(raw, candidates)


def format_profile(profile: Profile) -> str:
    toks = []
    for c in profile.candidates:
        if c.capacity is None:
            toks.append(f"{c.label}(*)")
        elif c.capacity == 1:
            toks.append(c.label)
        else:
            toks.append(f"{c.label}({c.capacity})")
    lines = ["candidates: " + " ".join(toks)]
    for b in profile.ballots:
        lines.append(f"{_format_weight(b.weight)}: " + " ".join(profile.label_set(b.approvals)))
    return "\n".join(lines) + "\n"


def load_profile(path) -> Profile:
    with open(path, encoding="utf-8") as fh:
        return parse_profile(fh.read())
