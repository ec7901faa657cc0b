"""Parse the model-output excerpts with the tolerant parser and score each
against the gold excerpt, printing parse diagnostics along the way.

    python3 scripts/excerpt_diagnostics.py [excerpt_dir]
"""

import json
import sys
from pathlib import Path

from litvista.dataset import graph_from_rows
from litvista.scoring import anchor_prf, dependency_prf, harmonic_mean
from litvista.tables import parse_model_output_tolerant
from litvista.topology import validate

DEFAULT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "excerpts"


def main(folder: Path) -> None:
    gold_rows, _ = parse_model_output_tolerant((folder / "gold.tex").read_text())
    # the source chapter is not bundled; blank text of sufficient length keeps spans in range
    length = max(r.span.end for r in gold_rows) + 1
    gold = graph_from_rows("excerpt", " " * length, gold_rows)
    print(f"gold: {len(gold_rows)} rows, relaxed-valid={validate(gold, 'relaxed').ok}")
    for path in sorted(folder.glob("*.tex")):
        if path.stem == "gold":
            continue
        rows, diag = parse_model_output_tolerant(path.read_text())
        a, d = anchor_prf(rows, gold), dependency_prf(rows, gold)
        print(f"\n{path.stem}: {len(rows)} rows; anchor tp={a.tp} F1={a.f1:.4f}; "
              f"dependency tp={d.tp} F1={d.f1:.4f}; harmonic={harmonic_mean(a.f1, d.f1):.4f}")
        print(json.dumps(diag.as_dict(), indent=2))


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT)
