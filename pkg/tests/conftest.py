import string

from hypothesis import settings, strategies as st

from enestrom.method import check_feasible
from enestrom.errors import InsufficientCandidates
from enestrom.profile import aggregate

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

LABELS = string.ascii_lowercase


@st.composite
def profiles(draw, max_candidates=6, max_types=6, max_weight=30, capacities=(1, 2, None)):
    nc = draw(st.integers(1, max_candidates))
    cands = [(LABELS[i], draw(st.sampled_from(capacities))) for i in range(nc)]
    ids = st.frozensets(st.integers(0, nc - 1), min_size=1)
    raw = draw(st.lists(st.tuples(ids, st.integers(0, max_weight)), min_size=1, max_size=max_types))
    return aggregate([([LABELS[i] for i in sorted(a)], w) for a, w in raw], cands)


@st.composite
def instances(draw, max_seats=4, **kw):
    """(profile, n) pairs that meet the feasibility precondition."""
    p = draw(profiles(**kw))
    n = draw(st.integers(1, max_seats))
    try:
        check_feasible(p, n)
    except InsufficientCandidates:
        from hypothesis import assume
        assume(False)
    return p, n


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
