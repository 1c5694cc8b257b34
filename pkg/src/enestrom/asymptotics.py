"""Two parties, A and B, with A-only, B-only and A-and-B ballots.

Shares are normalised by the total vote: alpha = v_A/v, beta = v_B/v,
zeta = v_AB/v and rho = q/v = 1/(n+1).  While the running A-only share
exceeds the B-only one, every seat goes to A and scales the A and AB shares
by 1 - rho/(alpha + zeta).  The leading party keeps every seat until the
shares cross, after which the seats alternate.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import BadRange, BetaExceedsAlpha, DegenerateShares, StateExhausted
from .generate import two_party_profile
from .method import allocate
from .profile import as_rational
from .rivals import dhondt, seq_phragmen

__all__ = [
    "TwoPartyState",
    "TwoPartyResult",
    "initial_state",
    "two_party_step",
    "simulate_two_party",
    "leading_block_length",
    "two_party_limit",
    "limit_curve",
    "staircase_curve",
    "write_curve_csv",
    "trajectory_violations",
]


@dataclass(frozen=True)
class TwoPartyState:
    alpha: Fraction
    beta: Fraction
    zeta: Fraction
    rho: Fraction
    s: int = 0
    n: int = 1

    def total(self) -> Fraction:
        return self.alpha + self.beta + self.zeta


def initial_state(v_a, v_b, v_ab, n: int) -> TwoPartyState:
    v_a, v_b, v_ab = (as_rational(x) for x in (v_a, v_b, v_ab))
    if min(v_a, v_b, v_ab) < 0:
        raise ValueError("votes must be non-negative")
    v = v_a + v_b + v_ab
    if v <= 0:
        raise StateExhausted("no votes")
    if n < 1:
        raise ValueError("n must be at least 1")
    return TwoPartyState(v_a / v, v_b / v, v_ab / v, Fraction(1, n + 1), 0, n)


def two_party_step(state: TwoPartyState):
    """Allocate one seat; returns the new state and "A" or "B"."""
    if state.s >= state.n:
        raise StateExhausted(f"all {state.n} seats are allocated")
    a, b, z, rho = state.alpha, state.beta, state.zeta, state.rho
    if a + z <= 0 and b + z <= 0:
        raise StateExhausted("no support left for either party")
    if a >= b:
        f = 1 - rho / (a + z) if a + z > rho else Fraction(0)
        nxt = replace(state, alpha=a * f, zeta=z * f, s=state.s + 1)
        return nxt, "A"
    f = 1 - rho / (b + z) if b + z > rho else Fraction(0)
    return replace(state, beta=b * f, zeta=z * f, s=state.s + 1), "B"


def trajectory_violations(trajectory: list) -> list:
    """Steps at which the sum identity, positivity or the support bound fails.

    Only meaningful for an initial state with positive zeta.
    """
    bad = []
    for st in trajectory:
        if st.total() != (st.n + 1 - st.s) * st.rho:
            bad.append((st.s, "sum"))
        if not (st.alpha > 0 and st.beta > 0 and st.zeta > 0):
            bad.append((st.s, "positivity"))
        if st.s <= st.n - 1 and not max(st.alpha + st.zeta, st.beta + st.zeta) > st.rho:
            bad.append((st.s, "support"))
    return bad


@dataclass
class TwoPartyResult:
    n: int
    seats_A: int
    seats_B: int
    recipients: str  # e.g. "AAABAB"
    predicted_k: int | None
    first_crossing: int | None
    exact_limit: Fraction | None
    simulated_fraction: Fraction
    trajectory: list = field(default_factory=list, repr=False)

    @property
    def leader(self) -> str:
        return self.recipients[0]

    def block_structure_ok(self) -> bool:
        """Leading block, then an alternation that is balanced to one seat."""
        r = self.recipients
        k = len(r) - len(r.lstrip(r[0]))
        tail = r[k:]
        if any(x == y for x, y in zip(tail, tail[1:])):
            return False
        return abs(tail.count("A") - tail.count("B")) <= 1


def _first_crossing(trajectory, leader):
    for st in trajectory[1:]:
        ahead = st.alpha > st.beta if leader == "A" else st.beta > st.alpha
        if not ahead:
            return st.s
    return None


def simulate_two_party(v_a, v_b, v_ab, n: int, verify: bool = False) -> TwoPartyResult:
    """Run the reduced recursion for n seats.

    With ``verify`` the seat sequence is compared against :func:`allocate`
    on the three-ballot-type profile (AssertionError on mismatch).
    """
    state = initial_state(v_a, v_b, v_ab, n)
    traj = [state]
    rec = []
    for _ in range(n):
        state, who = two_party_step(state)
        traj.append(state)
        rec.append(who)
    recipients = "".join(rec)
    a0, b0, z0 = traj[0].alpha, traj[0].beta, traj[0].zeta
    predicted = limit = None
    if a0 > 0 and b0 > 0:
        limit = two_party_limit(a0, b0, z0)
        if a0 >= b0:
            predicted = leading_block_length(a0, b0, z0, n)
        else:
            predicted = leading_block_length(b0, a0, z0, n)
    elif a0 != b0:
        limit = Fraction(1) if b0 == 0 else Fraction(0)
    seats_a = recipients.count("A")
    result = TwoPartyResult(
        n=n,
        seats_A=seats_a,
        seats_B=n - seats_a,
        recipients=recipients,
        predicted_k=predicted,
        first_crossing=_first_crossing(traj, recipients[0]),
        exact_limit=limit,
        simulated_fraction=Fraction(seats_a, n),
        trajectory=traj,
    )
    if verify:
        trace = allocate(two_party_profile(v_a, v_b, v_ab), n)
        seq = "".join(trace.profile.labels[i] for i in trace.elected)
        if seq != recipients:
            raise AssertionError(f"recursion {recipients} != allocate {seq}")
    return result


def _check_shares(alpha, beta, zeta):
    alpha, beta, zeta = (as_rational(x) for x in (alpha, beta, zeta))
    if alpha + beta + zeta != 1:
        raise BadRange("shares must add up to 1")
    if zeta < 0:
        raise BadRange("zeta must be non-negative")
    if alpha <= 0 or beta <= 0:
        raise DegenerateShares("alpha and beta must be positive; the limit is then 0 or 1")
    return alpha, beta, zeta


def leading_block_length(alpha, beta, zeta, n: int) -> int:
    """ceil((alpha - beta)(alpha + zeta) / (alpha rho)) with rho = 1/(n+1)."""
    alpha, beta, zeta = _check_shares(alpha, beta, zeta)
    if beta > alpha:
        raise BetaExceedsAlpha("leading_block_length expects alpha >= beta")
    x = (alpha - beta) * (alpha + zeta) * (n + 1) / alpha
    return math.ceil(x)


def two_party_limit(alpha, beta, zeta) -> Fraction:
    """Limit of n_A/n as n grows."""
    alpha, beta, zeta = _check_shares(alpha, beta, zeta)
    if alpha >= beta:
        return (1 + (alpha - beta) * (alpha + zeta) / alpha) / 2
    return (1 - (beta - alpha) * (beta + zeta) / beta) / 2


def _grid(zeta, samples):
    zeta = as_rational(zeta)
    if not 0 <= zeta < 1:
        raise BadRange("zeta must lie in [0, 1)")
    if samples < 2:
        raise BadRange("need at least 2 samples")
    return zeta, [(1 - zeta) * Fraction(j, samples + 1) for j in range(1, samples + 1)]


def limit_curve(zeta, samples: int) -> list:
    """(alpha, limit) at evenly spaced interior alpha in (0, 1 - zeta)."""
    zeta, alphas = _grid(zeta, samples)
    return [(a, two_party_limit(a, 1 - zeta - a, zeta)) for a in alphas]


def staircase_curve(zeta, samples: int, n_probe: int = 200) -> list:
    """(alpha, n_A/n_probe) under sequential Phragmén on the same grid."""
    if n_probe < 1:
        raise BadRange("n_probe must be positive")
    zeta, alphas = _grid(zeta, samples)
    out = []
    for a in alphas:
        trace = seq_phragmen(two_party_profile(a, 1 - zeta - a, zeta), n_probe)
        out.append((a, Fraction(trace.seats[0], n_probe)))
    return out


def dhondt_share(alpha, beta, n: int) -> Fraction:
    return Fraction(dhondt([alpha, beta], n)[0], n)


def _dec(x) -> str:
    return format(float(x), ".12g")


def write_curve_csv(rows, path, exact_path=None) -> None:
    """Write ``alpha,value`` rows; optionally a sidecar with exact p/q values."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "value"])
        for a, v in rows:
            w.writerow([_dec(a), _dec(v)])
    if exact_path is not None:
        with open(exact_path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["alpha", "value"])
            for a, v in rows:
                w.writerow([str(Fraction(a)), str(Fraction(v))])


def curve_csv_text(rows) -> str:
    lines = ["alpha,value"]
    lines += [f"{_dec(a)},{_dec(v)}" for a, v in rows]
    return "\n".join(lines) + "\n"
