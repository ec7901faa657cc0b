"""Five-column prediction tables and three-column candidate lists.

The prediction template is ``ID Category Offsets Word Head`` with offsets
written ``start,end``. Columns are tab- or whitespace-separated; a row that
contains a tab is split on tabs so words may carry inner spaces.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import DuplicateId, MalformedRow
from .topology import EVENT_ROLES, Role, Span

log = logging.getLogger(__name__)

HEADER = ("ID", "Category", "Offsets", "Word", "Head")


@dataclass(frozen=True)
class PredictionRow:
    id: int
    category: Role
    span: Span
    word: str
    head: int


@dataclass(frozen=True)
class CandidateList:
    entries: tuple[tuple[int, Span, str], ...] = ()

    def __post_init__(self):
        seen = set()
        last = None
        for anchor_id, span, _ in self.entries:
            if anchor_id in seen:
                raise DuplicateId(anchor_id)
            seen.add(anchor_id)
            if last is not None and span.start < last:
                raise ValueError("candidate spans must be non-decreasing by start")
            last = span.start

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass
class ParseDiagnostics:
    skipped_lines: int = 0
    skipped_samples: list[str] = field(default_factory=list)
    skip_reasons: Counter = field(default_factory=Counter)
    repaired_rows: int = 0
    repair_kinds: Counter = field(default_factory=Counter)
    flagged: Counter = field(default_factory=Counter)
    fatal: bool = False

    def skip(self, line: str, reason: str, keep: int = 5) -> None:
        self.skipped_lines += 1
        self.skip_reasons[reason] += 1
        if len(self.skipped_samples) < keep:
            self.skipped_samples.append(line[:120])

    def as_dict(self) -> dict:
        return {
            "skipped_lines": self.skipped_lines,
            "skipped_samples": list(self.skipped_samples),
            "skip_reasons": dict(sorted(self.skip_reasons.items())),
            "repaired_rows": self.repaired_rows,
            "repair_kinds": dict(sorted(self.repair_kinds.items())),
            "flagged": dict(sorted(self.flagged.items())),
            "fatal": self.fatal,
        }


def _split_columns(line: str) -> list[str]:
    if "\t" in line:
        return [c.strip() for c in line.strip().split("\t") if c.strip()]
    return line.split()


def _parse_offsets(text: str) -> Span:
    start, sep, end = text.partition(",")
    if not sep:
        raise ValueError("offsets must be 'start,end'")
    return Span(int(start), int(end))


def _is_header(cols: list[str]) -> bool:
    return bool(cols) and cols[0].lower() == "id"


def parse_prediction_table_strict(text: str) -> list[PredictionRow]:
    """Parse a clean five-column table; any bad data row raises MalformedRow."""
    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cols = _split_columns(line)
        if _is_header(cols):
            continue
        if len(cols) != 5:
            raise MalformedRow(line_no, f"expected 5 columns, got {len(cols)}", line)
        try:
            anchor_id = int(cols[0])
        except ValueError:
            raise MalformedRow(line_no, "non-integer id", line) from None
        try:
            category = Role.parse(cols[1])
        except ValueError:
            raise MalformedRow(line_no, f"unknown category {cols[1]!r}", line) from None
        if category not in EVENT_ROLES:
            raise MalformedRow(line_no, "NonEvent is not a prediction category", line)
        try:
            span = _parse_offsets(cols[2])
        except ValueError:
            raise MalformedRow(line_no, f"unparseable offsets {cols[2]!r}", line) from None
        try:
            head = int(cols[4])
        except ValueError:
            raise MalformedRow(line_no, "non-integer head", line) from None
        rows.append(PredictionRow(anchor_id, category, span, cols[3], head))
    return rows


def serialize_prediction_table(rows) -> str:
    lines = ["\t".join(HEADER)]
    for r in rows:
        lines.append(f"{r.id}\t{r.category.value}\t{r.span.start},{r.span.end}\t{r.word}\t{r.head}")
    return "\n".join(lines) + "\n"


# Tolerant parsing of raw model output.

_FENCE = re.compile(r"^\s*(```|~~~)")
_ELLIPSIS = re.compile(r"(\.\.\.|…|⋯|\\cdots|\\ldots|\\dots)")
_LATEX_CMD = re.compile(r"\\(?:textbf|textit|texttt|emph|textsc)\{([^{}]*)\}")
_MARKUP = re.compile(r"[*_`]+")
_ROW = re.compile(
    r"^\s*(?P<id>\d+)[.:)]?\s+"
    r"(?P<cat>[A-Za-z][A-Za-z_-]*)\s+"
    r"(?P<start>-?\d+)\s*(?P<sep>,|\s-\s|-|–|\s)\s*(?P<end>-?\d+)\s+"
    r"(?P<word>.+?)\s+"
    r"(?P<head>-?\d+|ROOT|root|None|none|-)\s*$"
)


def _clean_line(raw: str, kinds: Counter) -> str:
    line = raw.rstrip()
    if "&" in line:
        line = line.replace("&", " ")
        kinds["latex_row"] += 1
    if line.rstrip().endswith("\\\\"):
        line = line.rstrip()[:-2]
    stripped = line.strip()
    if stripped.startswith("|") or stripped.endswith("|"):
        line = line.replace("|", " ")
        kinds["markdown_row"] += 1
    if "\\" in line:
        line = _LATEX_CMD.sub(r"\1", line)
    if _MARKUP.search(line):
        line = _MARKUP.sub("", line)
    return line


def parse_model_output_tolerant(raw_text) -> tuple[list[PredictionRow], ParseDiagnostics]:
    """Recover prediction rows from arbitrary model output.

    Never raises on content. Prose, headers, fences and ellipsis rows are
    skipped and recorded; separator variants (LaTeX ``&``, markdown pipes,
    ``start, end`` offsets) are repaired and counted.
    """
    diag = ParseDiagnostics()
    if isinstance(raw_text, (bytes, bytearray)):
        raw_text = bytes(raw_text).decode("utf-8", errors="replace")
    if raw_text is None:
        raw_text = ""
    rows: list[PredictionRow] = []
    for raw in str(raw_text).splitlines():
        if not raw.strip():
            continue
        if _FENCE.match(raw):
            continue
        kinds: Counter = Counter()
        m = _ROW.match(raw)
        if m is None:
            line = _clean_line(raw, kinds)
            m = _ROW.match(line)
        if m is None:
            cols = line.split()
            if _is_header(cols):
                continue
            if _ELLIPSIS.search(raw):
                diag.skip(raw, "ellipsis")
                log.debug("dropped ellipsis row %r", raw)
            else:
                diag.skip(raw, "prose")
            continue
        try:
            category = Role.parse(m["cat"])
        except ValueError:
            diag.skip(raw, "category")
            continue
        if category not in EVENT_ROLES:
            diag.skip(raw, "category")
            continue
        if m["cat"] != category.value:
            kinds["category_case"] += 1
        if m["sep"] != ",":
            kinds["offset_separator"] += 1
        head_text = m["head"]
        try:
            if head_text.lstrip("-").isdigit():
                head = int(head_text)
            else:
                head = -1
                kinds["root_spelling"] += 1
            row = PredictionRow(int(m["id"]), category, Span(int(m["start"]), int(m["end"])),
                                m["word"].strip(), head)
        except ValueError:  # e.g. integers beyond the interpreter's digit limit
            diag.skip(raw, "number")
            continue
        if not row.span.is_valid():
            # kept as a prediction (counts against precision) but never matches gold
            diag.flagged["bad_offsets_unrepaired"] += 1
        rows.append(row)
        if kinds:
            diag.repaired_rows += 1
            diag.repair_kinds.update(kinds)
    diag.fatal = not rows
    return rows, diag


def format_candidate_line(anchor_id: int, span: Span, word: str) -> str:
    return f"{anchor_id}    {span.start},{span.end}    {word}"


def parse_candidate_list(text: str) -> CandidateList:
    entries = []
    seen: set[int] = set()
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cols = _split_columns(line)
        if _is_header(cols):
            continue
        if len(cols) != 3:
            raise MalformedRow(line_no, f"expected 3 columns, got {len(cols)}", line)
        try:
            anchor_id = int(cols[0])
            span = _parse_offsets(cols[1])
        except ValueError:
            raise MalformedRow(line_no, "bad id or offsets", line) from None
        if anchor_id in seen:
            raise DuplicateId(anchor_id, line_no)
        seen.add(anchor_id)
        entries.append((anchor_id, span, cols[2]))
    return CandidateList(tuple(entries))


def serialize_candidate_list(candidates: CandidateList) -> str:
    return "".join(format_candidate_line(*e) + "\n" for e in candidates)
