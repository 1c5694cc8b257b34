from enestrom import fixtures
from enestrom.comparison import format_grid, profile_comparison, type_of


def test_type_labels():
    assert type_of("ep", cases=30)[0] == "Dr"
    assert type_of("seq-phragmen", cases=30)[0] == "D'H"


def test_profile_comparison_tenow():
    rows = {r["method"]: r for r in profile_comparison(fixtures.load("tenow_32"), 3)}
    assert rows["thiele-add"]["elected"] == ["a", "b", "c"]
    assert rows["thiele-add"]["thm1"] is False
    assert rows["ep"]["thm1"] is True and rows["ep"]["thm2"] is True
    assert sorted(rows["thiele-elim"]["elected"]) == ["b", "c", "k"]


def test_format_grid():
    text = format_grid(["x", "long"], [["abc", "1"], ["d", "22"]])
    lines = text.splitlines()
    assert lines[0] == "x   | long"
    assert lines[1] == "----+-----"
    assert lines[3] == "d   | 22"
