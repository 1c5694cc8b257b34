from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from enestrom import fixtures
from enestrom.errors import (
    DuplicateApproval,
    EmptyApprovalSet,
    ParseError,
    ProfileError,
    UnknownCandidate,
    ZeroSeats,
)
from enestrom.profile import (
    DROOP,
    HARE,
    UPDATED,
    Fixed,
    aggregate,
    approval_support,
    as_rational,
    exact_support,
    format_profile,
    joint_support,
    parse_profile,
    quota_value,
    star_closure,
)

from conftest import profiles


@pytest.fixture
def ex11():
    return fixtures.load("example1_1")


def test_aggregate_merges_duplicates():
    p = aggregate([("ab", 3), ("ab", 2), ("c", 1)])
    assert [(sorted(p.label_set(b.approvals)), b.weight) for b in p.ballots] == [
        (["a", "b"], 5), (["c"], 1)]


def test_aggregate_drops_zero_weight():
    assert aggregate([("a", 0)]).ballots == ()


def test_aggregate_errors():
    with pytest.raises(EmptyApprovalSet):
        aggregate([("", 1)])
    with pytest.raises(UnknownCandidate):
        aggregate([("q", 1)], ["a"])
    with pytest.raises(DuplicateApproval):
        aggregate([("aa", 1)], ["a"])
    with pytest.raises(ProfileError):
        aggregate([("a", -1)], ["a"])


def test_example_tallies(ex11):
    assert len(ex11.ballots) == 7
    assert ex11.total_votes == 100
    assert approval_support(ex11, "a") == 43
    assert approval_support(ex11, "u") == 34
    assert exact_support(ex11, "abx") == 21
    assert exact_support(ex11, "ab") == 0


def test_unapproved_candidate_has_no_support():
    p = aggregate([("a", 2)], ["a", "b"])
    assert approval_support(p, "b") == 0
    with pytest.raises(UnknownCandidate):
        approval_support(p, "z")


def test_joint_support_and_closure():
    r24 = fixtures.load("remark2_4")
    assert exact_support(r24, ["c1", "c3"]) == 1
    assert joint_support(r24, ["a", "b"]) == 42
    assert star_closure(r24, ["a", "b"]) == r24.ids(["a", "b", "c1", "c2"])
    r26 = fixtures.load("remark2_6")
    J = ["a2", "a3", "a4", "a5"]
    assert joint_support(r26, J) == 144
    assert star_closure(r26, J) == r26.ids(["a1", "a2", "a3", "a4", "a5"])


def test_closure_of_unsupported_set_is_empty(ex11):
    assert star_closure(ex11, ["y", "z"]) == frozenset()
    assert joint_support(ex11, []) == ex11.total_votes


def test_quota_values():
    assert quota_value(DROOP, 100, 3) == 25
    assert quota_value(DROOP, 230, 7) == Fraction(115, 4)
    assert quota_value(HARE, 100, 4) == 25
    assert quota_value(Fixed("2.5"), 100, 4) == Fraction(5, 2)
    assert quota_value(UPDATED, 100, 4, s=1, v_s=60) == 20
    with pytest.raises(ZeroSeats):
        quota_value(DROOP, 100, 0)
    with pytest.raises(ZeroSeats):
        quota_value(UPDATED, 100, 2, s=2, v_s=10)
    with pytest.raises(ValueError):
        Fixed(0)


def test_as_rational_refuses_float():
    assert as_rational("28.75") == Fraction(115, 4)
    assert as_rational("3/8") == Fraction(3, 8)
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_parse_capacities_and_decimals():
    p = parse_profile("# c\ncandidates: a b(2) C(*)\n28.75: a C\n1/3: b\n")
    assert [c.capacity for c in p.candidates] == [1, 2, None]
    assert p.ballots[0].weight == Fraction(115, 4)
    assert p.ballots[1].weight == Fraction(1, 3)


@pytest.mark.parametrize("text", [
    "candidates: a\n3 a\n",
    "candidates: a\nx: a\n",
    "candidates: a\n1: b\n",
    "candidates: a\n1:\n",
    "candidates: a\n-1: a\n",
    "candidates: a a\n",
    "candidates: a(0)\n",
    "candidates: a\ncandidates: b\n",
    "1: a\ncandidates: a\n",
    "candidates: a\n1: a a\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_profile(text)


@given(profiles())
def test_round_trip(p):
    assert parse_profile(format_profile(p)) == p


@given(profiles())
def test_support_bounds(p):
    v = p.total_votes
    for b in p.ballots:
        J = b.approvals
        assert 0 <= exact_support(p, J) <= joint_support(p, J) <= v


@given(profiles())
def test_double_counting(p):
    lhs = sum(approval_support(p, c.id) for c in p.candidates)
    assert lhs == sum(len(b.approvals) * b.weight for b in p.ballots)


@given(profiles(), st.data())
def test_closure_antitone(p, data):
    ids = list(range(len(p.candidates)))
    K = data.draw(st.frozensets(st.sampled_from(ids), min_size=1))
    J = data.draw(st.frozensets(st.sampled_from(sorted(K))))
    if joint_support(p, K) > 0:
        assert star_closure(p, K) <= star_closure(p, J)
        assert J <= star_closure(p, J)


@given(st.lists(st.tuples(st.sampled_from(["a", "ab", "bc", "c", "abc"]), st.integers(0, 9)),
                min_size=1), st.randoms())
def test_aggregation_order_insensitive(raw, rnd):
    shuffled = list(raw)
    rnd.shuffle(shuffled)
    p, q = aggregate(raw, "abc"), aggregate(shuffled, "abc")
    for J in ["a", "ab", "bc", "c", "abc"]:
        assert exact_support(p, J) == exact_support(q, J)
