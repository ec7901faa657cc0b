"""Recompute the harmonic column of an oracle results CSV and report the error.

    python3 scripts/reproduce_harmonic.py [tests/fixtures/oracle_results.csv]
"""

import csv
import sys
from pathlib import Path

from litvista.scoring import harmonic_mean

DEFAULT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "oracle_results.csv"


def main(path: Path) -> int:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    worst = 0.0
    print(f"{'model':<28}{'anchor_f1':>10}{'dep_f1':>10}{'published':>11}{'ours':>10}{'|err|':>10}")
    for r in rows:
        ours = harmonic_mean(float(r["anchor_f1"]), float(r["dep_f1"]))
        err = abs(ours - float(r["harmonic"]))
        worst = max(worst, err)
        print(f"{r['model']:<28}{r['anchor_f1']:>10}{r['dep_f1']:>10}{r['harmonic']:>11}{ours:>10.4f}{err:>10.1e}")
    print(f"\n{len(rows)} rows, max |error| {worst:.2e}")
    return 0 if worst <= 2e-3 else 1


if __name__ == "__main__":
    sys.exit(main(Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT))
