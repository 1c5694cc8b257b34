import csv
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from enestrom.asymptotics import (
    TwoPartyState,
    curve_csv_text,
    dhondt_share,
    initial_state,
    leading_block_length,
    trajectory_violations,
    limit_curve,
    simulate_two_party,
    staircase_curve,
    two_party_limit,
    two_party_step,
    write_curve_csv,
)
from enestrom.errors import BadRange, BetaExceedsAlpha, DegenerateShares, StateExhausted
from enestrom.rivals import largest_remainders

ZETA = Fraction(376, 1000)


def run(vA, vB, vAB, n):
    return simulate_two_party(vA, vB, vAB, n).recipients


def test_tie_happens_once():
    assert run(3, 3, 4, 5) == "ABABA"


def test_no_overlap_alternates():
    assert run(5, 5, 0, 6) == "ABABAB"


def test_single_party():
    assert run(7, 0, 3, 4) == "AAAA"


def test_step_exhausted():
    st_ = initial_state(1, 1, 1, 1)
    st_, _ = two_party_step(st_)
    with pytest.raises(StateExhausted):
        two_party_step(st_)
    with pytest.raises(StateExhausted):
        two_party_step(TwoPartyState(Fraction(0), Fraction(0), Fraction(0), Fraction(1, 3), 0, 2))


def test_block_length_examples():
    assert leading_block_length(Fraction(1, 2), Fraction(1, 2), 0, 10) == 0
    assert leading_block_length(Fraction(3, 5), Fraction(2, 5), 0, 9) == 2
    with pytest.raises(BetaExceedsAlpha):
        leading_block_length(Fraction(1, 5), Fraction(2, 5), Fraction(2, 5), 9)


def test_limit_examples():
    assert two_party_limit(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)) == Fraction(1, 2)
    assert two_party_limit(Fraction(7, 10), Fraction(3, 10), 0) == Fraction(7, 10)
    with pytest.raises(DegenerateShares):
        two_party_limit(0, Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(BadRange):
        two_party_limit(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))


def test_limit_curve_shape():
    rows = limit_curve(ZETA, 9)
    assert rows[4] == ((1 - ZETA) / 2, Fraction(1, 2))
    assert all(a < b for (_, a), (_, b) in zip(rows, rows[1:]))
    assert all(a == v for a, v in limit_curve(0, 7))
    fine = limit_curve(ZETA, 999)
    assert fine[0][1] < Fraction(1, 100) and fine[-1][1] > Fraction(99, 100)
    with pytest.raises(BadRange):
        limit_curve(1, 5)
    with pytest.raises(BadRange):
        limit_curve(ZETA, 1)


def test_staircase_against_dhondt():
    for a, frac in staircase_curve(0, 9, 60):
        assert abs(frac - dhondt_share(a, 1 - a, 60)) <= Fraction(1, 60)
    mid = staircase_curve(ZETA, 9, 60)[4][1]
    assert abs(mid - Fraction(1, 2)) <= Fraction(1, 60)
    with pytest.raises(BadRange):
        staircase_curve(ZETA, 5, 0)


def test_csv_output(tmp_path):
    rows = limit_curve(ZETA, 3)
    out, exact = tmp_path / "c.csv", tmp_path / "c.exact.csv"
    write_curve_csv(rows, out, exact)
    text = out.read_text()
    assert text == curve_csv_text(rows)
    assert text.splitlines()[0] == "alpha,value"
    back = list(csv.DictReader(exact.open()))
    assert [Fraction(r["value"]) for r in back] == [v for _, v in rows]


@given(st.integers(1, 40), st.integers(0, 40), st.integers(1, 20))
def test_symmetric_split(v, vab, half):
    r = simulate_two_party(v, v, vab, 2 * half)
    assert r.seats_A == r.seats_B == half


@given(st.integers(0, 60), st.integers(0, 60), st.integers(1, 12))
def test_no_overlap_is_largest_remainders(vA, vB, n):
    if vA + vB == 0:
        return
    r = simulate_two_party(vA, vB, 0, n, verify=True)
    assert (r.seats_A, r.seats_B) in largest_remainders([vA, vB], n, Fraction(vA + vB, n + 1))


@given(st.integers(1, 60), st.integers(1, 60), st.integers(1, 60), st.integers(1, 40))
def test_trajectory_properties(vA, vB, vAB, n):
    r = simulate_two_party(vA, vB, vAB, n, verify=True)
    assert r.seats_A + r.seats_B == n
    assert trajectory_violations(r.trajectory) == []
    assert r.block_structure_ok()
    if r.first_crossing is not None and r.predicted_k is not None:
        assert abs(r.first_crossing - r.predicted_k) <= 1


@given(st.fractions(0, 1))
def test_limit_continuous_at_tie(z):
    if z == 1:
        return
    a = (1 - z) / 2
    assert two_party_limit(a, a, z) == Fraction(1, 2)
