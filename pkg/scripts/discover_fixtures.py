"""Regenerate the searched-for fixtures under src/enestrom/fixtures/."""

import sys
from pathlib import Path

from enestrom.search import (
    NEGATIVE,
    closure_failure_for_elimination,
    find_hare_majority_failure,
    find_monotonicity_failure,
    fixture_text,
    sweep_monotonicity_failure,
)

OUT = Path(__file__).resolve().parent.parent / "src" / "enestrom" / "fixtures"

SEARCHES = {
    "found_hare_majority": lambda: find_hare_majority_failure(),
    "found_negative_monotonicity": lambda: find_monotonicity_failure(
        "ep", NEGATIVE, max_candidates=8, max_weight=30, max_types=8, max_seats=3, max_size=2
    ),
    "found_phragmen_party": lambda: find_monotonicity_failure(
        "seq-phragmen", party=True, capacities=(None,), max_candidates=3, max_weight=30,
        max_types=6, max_seats=5, max_size=2,
    ),
    "found_thiele_add_party": lambda: sweep_monotonicity_failure(
        "thiele-add", party=True, seed=13, capacities=(None,), max_candidates=3,
        max_weight=40, max_types=6, max_seats=7, max_size=2,
    ),
    "found_elimination_monotonicity": lambda: sweep_monotonicity_failure(
        "thiele-elim", seed=11, max_candidates=7, max_weight=40, max_types=9, max_seats=5,
        max_size=4,
    ),
    "found_elimination_closure": closure_failure_for_elimination,
}


def main(names):
    for name in names or SEARCHES:
        finding = SEARCHES[name]()
        if finding is None:
            print(f"{name}: nothing found", file=sys.stderr)
            continue
        (OUT / f"{name}.profile").write_text(fixture_text(finding))
        print(f"{name}: seats={finding.n} trial={finding.trial}")


if __name__ == "__main__":
    main(sys.argv[1:])
