"""Method-by-property grid over the bundled fixtures and seeded batteries.

Columns:

* Type: how the rule treats single-approval ballots over party lists,
  "Dr" (largest remainders, Droop quota) or "D'H" (D'Hondt);
* Thm 1 / Thm 2: no strict violation of the quota / closure threshold on
  any fixture;
* Mono: "ind" if winners never lose their seat by gaining approvals but
  party seat counts can drop, "×" if even the former fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import fixtures
from .generate import DEFAULT_SEED, random_disjoint_parties, rng_for
from .method import allocate
from .profile import DROOP
from .proportionality import check_all_subsets, probe_monotonicity
from .rivals import METHODS, dhondt_allocations, largest_remainders
from .search import parse_delta

__all__ = ["GridRow", "METHOD_ORDER", "METHOD_NAMES", "run_method", "type_of",
           "property_grid", "format_grid", "profile_comparison"]

METHOD_ORDER = ("ep", "seq-phragmen", "thiele-add", "thiele-elim")
METHOD_NAMES = {
    "ep": "Enestrom-Phragmen",
    "seq-phragmen": "Phragmen, minimax",
    "thiele-add": "Thiele, addition",
    "thiele-elim": "Thiele, elimination",
}
YES, NO = "✓", "×"


def run_method(method: str, profile, n: int):
    if method == "ep":
        return allocate(profile, n)
    return METHODS[method](profile, n)


@dataclass
class GridRow:
    method: str
    type: str
    thm1: str
    thm2: str
    mono: str
    evidence: dict = field(default_factory=dict)

    def cells(self) -> list:
        return [METHOD_NAMES[self.method], self.type, self.thm1, self.thm2, self.mono]


def type_of(method: str, cases: int = 60, seed=DEFAULT_SEED) -> tuple:
    """Classify on seeded disjoint-list profiles; returns (label, counts)."""
    rng = rng_for(seed)
    dr = dh = 0
    for _ in range(cases):
        profile, n = random_disjoint_parties(rng)
        votes = [sum((profile.ballots[k].weight for k in profile.supporters(i)), 0)
                 for i in range(len(profile.candidates))]
        seats = run_method(method, profile, n).seats
        dr += seats in largest_remainders(votes, n, DROOP.value(profile.total_votes, n))
        dh += seats in dhondt_allocations(votes, n)
    if dr == cases and dh < cases:
        label = "Dr"
    elif dh == cases and dr < cases:
        label = "D'H"
    elif dr == dh == cases:
        label = "Dr/D'H"
    else:
        label = "-"
    return label, {"cases": cases, "dr": dr, "dh": dh}


def _threshold_columns(method: str, names) -> tuple:
    bad1, bad2 = [], []
    for name in names:
        profile, n = fixtures.load(name), fixtures.seats(name)
        trace = run_method(method, profile, n)
        q = DROOP.value(profile.total_votes, n)
        for r in check_all_subsets(profile, n, trace, q=q):
            (bad1 if r.theorem == "quota" else bad2).append((name, r.J, r.ell))
    return bad1, bad2


def probe_fixtures() -> list:
    """Fixtures that carry a monotonicity probe (candidate + delta)."""
    return [n for n in fixtures.names() if "delta" in fixtures.metadata(n)]


def _mono_column(method: str, names) -> tuple:
    ind, party = [], []
    for name in names:
        meta = fixtures.metadata(name)
        profile, n = fixtures.load(name), fixtures.seats(name)
        delta = parse_delta(meta["delta"], meta["candidate"])
        rep = probe_monotonicity(profile, n, meta["candidate"], delta, method)
        if method != "ep" and rep.ties:
            continue
        if not rep.holds:
            ind.append(name)
        if not rep.party_holds:
            party.append(name)
    return ind, party


def property_grid(names=None, type_cases: int = 60, seed=DEFAULT_SEED) -> list:
    names = fixtures.names() if names is None else list(names)
    probes = [n for n in probe_fixtures() if n in names]
    rows = []
    for method in METHOD_ORDER:
        label, counts = type_of(method, type_cases, seed)
        bad1, bad2 = _threshold_columns(method, names)
        ind, party = _mono_column(method, probes)
        mono = NO if ind else ("ind" if party else YES)
        rows.append(GridRow(method, label, NO if bad1 else YES, NO if bad2 else YES, mono,
                            {"type": counts, "thm1": bad1, "thm2": bad2,
                             "mono_individual": ind, "mono_party": party}))
    return rows


def format_grid(header: list, rows: list) -> str:
    widths = [max(len(str(r[c])) for r in [header] + rows) for c in range(len(header))]
    line = lambda r: " | ".join(str(x).ljust(w) for x, w in zip(r, widths)).rstrip()  # noqa: E731
    sep = "-+-".join("-" * w for w in widths)
    return "\n".join([line(header), sep] + [line(r) for r in rows])


def profile_comparison(profile, n: int) -> list:
    """Per-method elected lists and threshold checks for one profile."""
    out = []
    q = DROOP.value(profile.total_votes, n)
    for method in METHOD_ORDER:
        trace = run_method(method, profile, n)
        bad = check_all_subsets(profile, n, trace, q=q) if len(profile.candidates) <= 12 else None
        out.append({
            "method": method,
            "elected": trace.elected_labels,
            "thm1": None if bad is None else not any(r.theorem == "quota" for r in bad),
            "thm2": None if bad is None else not any(r.theorem == "closure" for r in bad),
            "violations": [] if bad is None else [(r.theorem, list(r.J), r.ell) for r in bad],
        })
    return out
