"""Canonical graph files, table/graph conversion, span checks and split loading.

A canonical graph file is UTF-8 JSON::

    {"doc_id": "...", "text": "...",
     "anchors": [{"id": 0, "start": 64, "end": 69, "word": "tired",
                  "role": "Impulse", "head": -1}, ...]}

Offsets count Unicode code points of ``text``, 0-based and end-exclusive.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import InvalidGoldGraph, MissingSplit
from .tables import CandidateList, PredictionRow
from .topology import Anchor, NarrativeGraph, Role, Span, validate

SPLITS = ("train", "val", "test")


def graph_to_dict(graph: NarrativeGraph) -> dict:
    return {
        "doc_id": graph.doc_id,
        "text": graph.text,
        "anchors": [
            {"id": a.id, "start": a.span.start, "end": a.span.end, "word": a.word,
             "role": a.role.value, "head": a.head}
            for a in graph.anchors
        ],
    }


def graph_from_dict(data: dict) -> NarrativeGraph:
    anchors = tuple(
        Anchor(int(a["id"]), Span(int(a["start"]), int(a["end"])), str(a["word"]),
               Role.parse(a["role"]), int(a.get("head", -1)))
        for a in data.get("anchors", ())
    )
    return NarrativeGraph(str(data["doc_id"]), data["text"], anchors)


def dumps_graph(graph: NarrativeGraph) -> str:
    return json.dumps(graph_to_dict(graph), ensure_ascii=False, indent=2) + "\n"


def read_graph(path) -> NarrativeGraph:
    return graph_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def write_graph(graph: NarrativeGraph, path) -> None:
    Path(path).write_text(dumps_graph(graph), encoding="utf-8")


def graph_from_rows(doc_id: str, text: str, rows: Iterable[PredictionRow]) -> NarrativeGraph:
    anchors = tuple(Anchor(r.id, r.span, r.word, r.category, r.head) for r in rows)
    return NarrativeGraph(doc_id, text, anchors)


def rows_from_graph(graph: NarrativeGraph) -> list[PredictionRow]:
    """Event anchors as prediction rows, in textual order."""
    return [PredictionRow(a.id, a.role, a.span, a.word, a.head) for a in graph.event_anchors]


def candidates_from_graph(graph: NarrativeGraph) -> CandidateList:
    """Oracle-mode candidates: (id, span, word) only; roles and heads withheld."""
    return CandidateList(tuple((a.id, a.span, a.word) for a in graph.event_anchors))


@dataclass(frozen=True)
class SpanMismatch:
    anchor_id: int
    span: Span
    word: str
    found: str


_TRIM = string.punctuation + string.whitespace + "‘’“”—–"


def _norm(s: str) -> str:
    return s.strip(_TRIM).casefold()


def verify_spans(items, text: str) -> list[SpanMismatch]:
    """Compare each anchor's word with the text under its span.

    ``items`` is a NarrativeGraph or an iterable of rows/anchors. Comparison
    is case-insensitive with surrounding punctuation trimmed.
    """
    if isinstance(items, NarrativeGraph):
        items = items.anchors
    out = []
    for item in items:
        span = item.span
        found = text[span.start:span.end] if span.is_valid(len(text)) else ""
        if not found or _norm(found) != _norm(item.word):
            out.append(SpanMismatch(item.id, span, item.word, found))
    return out


def load_split(directory) -> list[NarrativeGraph]:
    graphs = []
    for path in sorted(Path(directory).glob("*.json")):
        graph = read_graph(path)
        report = validate(graph, "relaxed")
        if not report.ok:
            raise InvalidGoldGraph(graph.doc_id, report.violations)
        graphs.append(graph)
    return graphs


def load_dataset(root, splits: Iterable[str] = SPLITS) -> dict[str, list[NarrativeGraph]]:
    """Load ``root/{train,val,test}/*.json``; every gold graph must be relaxed-valid."""
    root = Path(root)
    out = {}
    for name in splits:
        directory = root / name
        if not directory.is_dir():
            raise MissingSplit(f"split directory {directory} not found")
        out[name] = load_split(directory)
    return out
