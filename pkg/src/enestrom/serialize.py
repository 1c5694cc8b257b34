"""JSON-ready trees for traces and reports.

Rationals become ``{"num": p, "den": q, "approx": 1.234567}``; only ``num``
and ``den`` are read back, the decimal is for people.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .method import AllocationTrace, EpConfig, Reduction, Status, StepRecord
from .profile import DROOP, HARE, BallotType, Candidate, Fixed, Profile, UpdatedPerStep

SCHEMA = "enestrom-trace/1"


def rat(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "approx": round(x.numerator / x.denominator, 6)}


def unrat(d) -> Fraction:
    if isinstance(d, dict):
        return Fraction(int(d["num"]), int(d["den"]))
    if isinstance(d, (int, str)):
        return Fraction(d)
    raise TypeError(f"not a serialized rational: {d!r}")


def format_rational(x: Fraction) -> str:
    """Human form: ``p/q (decimal)``; integers print bare."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator} ({x.numerator / x.denominator:.6f})"


def profile_tree(p: Profile) -> dict:
    return {
        "candidates": [
            {"label": c.label, "capacity": "unlimited" if c.capacity is None else c.capacity}
            for c in p.candidates
        ],
        "ballots": [
            {"approvals": p.label_set(b.approvals), "weight": rat(b.weight)} for b in p.ballots
        ],
    }


def profile_from_tree(d: dict) -> Profile:
    cands = []
    for pos, c in enumerate(d["candidates"]):
        cap = c["capacity"]
        cands.append(Candidate(pos, c["label"], None if cap == "unlimited" else int(cap)))
    index = {c.label: c.id for c in cands}
    ballots = [
        BallotType(frozenset(index[a] for a in b["approvals"]), unrat(b["weight"]))
        for b in d["ballots"]
    ]
    return Profile(cands, ballots)


def config_tree(cfg: EpConfig) -> dict:
    q = cfg.quota
    quota = {"rule": q.name}
    if isinstance(q, Fixed):
        quota["q"] = rat(q.q)
    return {
        "quota": quota,
        "reduction": cfg.reduction.value,
        "threshold": rat(cfg.threshold),
        "zero_empty": cfg.zero_empty,
    }


def config_from_tree(d: dict) -> EpConfig:
    rule = d["quota"]["rule"]
    quota = {
        "droop": DROOP,
        "hare": HARE,
        "updated": UpdatedPerStep(),
    }.get(rule)
    if rule == "fixed":
        quota = Fixed(unrat(d["quota"]["q"]))
    if quota is None:
        raise ValueError(f"unknown quota rule {rule!r}")
    return EpConfig(
        quota=quota,
        reduction=Reduction(d["reduction"]),
        threshold=unrat(d["threshold"]),
        zero_empty=bool(d["zero_empty"]),
    )


def trace_tree(trace: AllocationTrace) -> dict:
    p = trace.profile
    labels = p.labels
    steps = []
    for st in trace.steps:
        steps.append(
            {
                "s": st.s,
                "chosen": labels[st.chosen],
                "support_before": rat(st.support_before),
                "quota_used": rat(st.quota_used),
                "reduction_factor": rat(st.reduction_factor),
                "reduction_denominator": rat(st.reduction_denominator),
                "exhausted": st.exhausted,
                "tied": [labels[i] for i in st.tied],
                "eligible": [labels[i] for i in st.eligible],
                "supports": {labels[i]: rat(w) for i, w in enumerate(st.supports)},
                "residual_weights": [rat(w) for w in st.residual_weights],
            }
        )
    return {
        "schema": SCHEMA,
        "method": "ep",
        "profile": profile_tree(p),
        "n": trace.n,
        "config": config_tree(trace.config),
        "quota": rat(trace.quota),
        "status": trace.status.value,
        "status_step": trace.status_step,
        "elected": trace.elected_labels,
        "seats": {labels[i]: k for i, k in enumerate(trace.seats)},
        "final_weights": [rat(w) for w in trace.final_weights],
        "steps": steps,
    }


def trace_from_tree(d: dict) -> AllocationTrace:
    if d.get("schema") != SCHEMA or d.get("method") != "ep":
        raise ValueError("not an allocation trace")
    p = profile_from_tree(d["profile"])
    idx = p.index
    steps = [
        StepRecord(
            s=st["s"],
            chosen=idx(st["chosen"]),
            support_before=unrat(st["support_before"]),
            quota_used=unrat(st["quota_used"]),
            reduction_factor=unrat(st["reduction_factor"]),
            reduction_denominator=unrat(st["reduction_denominator"]),
            exhausted=st["exhausted"],
            supports=tuple(unrat(st["supports"][c.label]) for c in p.candidates),
            residual_weights=tuple(unrat(w) for w in st["residual_weights"]),
            tied=tuple(idx(x) for x in st["tied"]),
            eligible=tuple(idx(x) for x in st["eligible"]),
        )
        for st in d["steps"]
    ]
    return AllocationTrace(
        profile=p,
        n=d["n"],
        config=config_from_tree(d["config"]),
        quota=unrat(d["quota"]),
        steps=steps,
        seats=tuple(d["seats"][c.label] for c in p.candidates),
        status=Status(d["status"]),
        status_step=d["status_step"],
        final_weights=tuple(unrat(w) for w in d["final_weights"]),
    )


def rival_tree(trace) -> dict:
    p = trace.profile
    labels = p.labels
    return {
        "schema": SCHEMA,
        "method": trace.method,
        "profile": profile_tree(p),
        "n": trace.n,
        "sequence": [labels[i] for i in trace.sequence],
        "elected": trace.elected_labels,
        "seats": {labels[i]: k for i, k in enumerate(trace.seats)},
        "steps": [
            {
                "scores": {labels[i]: rat(v) for i, v in sc.items()},
                "tied": [labels[i] for i in tied],
            }
            for sc, tied in zip(trace.scores, trace.tied)
        ],
    }


def dumps(tree) -> str:
    return json.dumps(tree, indent=2, sort_keys=False)
