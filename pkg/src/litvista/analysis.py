"""Corpus statistics, dependency-distance histograms, lexical role
preferences and story-shape exports."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .topology import (
    DeltaConfig,
    NarrativeGraph,
    Role,
    cross_dependency_count,
    require_valid,
    vista_coordinates,
)

DEFAULT_BUCKETS = (0, 10, 50, 100, 500, 1000, 5000)  # last bucket is open-ended


@dataclass(frozen=True)
class CorpusStats:
    documents: int
    avg_length_tokens: float
    avg_count_impulse: float
    avg_count_resonance: float
    avg_count_pause: float
    avg_cross_dep: float

    def as_row(self) -> dict:
        return {
            "documents": self.documents,
            "avg_length_tokens": self.avg_length_tokens,
            "avg_count_impulse": self.avg_count_impulse,
            "avg_count_resonance": self.avg_count_resonance,
            "avg_count_pause": self.avg_count_pause,
            "avg_cross_dep": self.avg_cross_dep,
        }


def corpus_stats(split: Sequence[NarrativeGraph], cross_definition: str = "crossing",
                 threshold: int | None = None) -> CorpusStats:
    """Per-document averages; length is a whitespace token count."""
    n = len(split)
    if n == 0:
        return CorpusStats(0, 0.0, 0.0, 0.0, 0.0, 0.0)
    lengths, imp, res, pau, cross = [], [], [], [], []
    for g in split:
        require_valid(g, "relaxed")
        lengths.append(len(g.text.split()))
        imp.append(g.count(Role.IMPULSE))
        res.append(g.count(Role.RESONANCE))
        pau.append(g.count(Role.PAUSE))
        cross.append(cross_dependency_count(g, cross_definition, threshold))
    mean = lambda xs: math.fsum(xs) / n  # noqa: E731
    return CorpusStats(n, mean(lengths), mean(imp), mean(res), mean(pau), mean(cross))


@dataclass(frozen=True)
class DistanceTable:
    bucket_edges: tuple[int, ...]
    rows: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]  # counts[row][bucket]

    @property
    def total(self) -> int:
        return sum(map(sum, self.counts))

    def bucket_labels(self) -> list[str]:
        edges = self.bucket_edges
        labels = [f"[{edges[i]},{edges[i + 1]})" for i in range(len(edges) - 1)]
        labels.append(f"[{edges[-1]},inf)")
        return labels

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["type"] + self.bucket_labels())
        for name, row in zip(self.rows, self.counts):
            w.writerow([name, *row])
        return buf.getvalue()


def _bucket(edges: Sequence[int], value: int) -> int:
    idx = 0
    for i, e in enumerate(edges):
        if value >= e:
            idx = i
    return idx


def distance_histogram(graphs: Iterable[NarrativeGraph], bucket_edges: Sequence[int] = DEFAULT_BUCKETS,
                       classify: str = "child_role") -> DistanceTable:
    """Count non-root edges by |child.start - head.start| and dependency type."""
    edges = tuple(bucket_edges)
    if not edges or edges[0] > 0 or any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValueError("bucket edges must be strictly increasing and start at or below 0")
    if classify not in ("child_role", "role_pair"):
        raise ValueError(f"unknown classification {classify!r}")
    cells: dict[str, list[int]] = defaultdict(lambda: [0] * len(edges))
    for g in graphs:
        for child, head in g.edges():
            if not (child.role.is_event and head.role.is_event):
                continue
            key = child.role.value if classify == "child_role" else f"{child.role.value}->{head.role.value}"
            cells[key][_bucket(edges, abs(child.span.start - head.span.start))] += 1
    order = {r.value: i for i, r in enumerate(Role)}

    def sort_key(name: str):
        return tuple(order.get(part, 99) for part in name.split("->"))

    names = tuple(sorted(cells, key=sort_key))
    return DistanceTable(edges, names, tuple(tuple(cells[n]) for n in names))


@dataclass(frozen=True)
class LexicalRoleStats:
    """Role counts for one lowercased word, with exact rational coordinates.

    x = (c_I - c_R) / total is the Impulse-Resonance preference and
    y = (c_P - c_R) / total the Pause-Resonance preference.
    """

    word: str
    c_impulse: int
    c_resonance: int
    c_pause: int

    @property
    def total(self) -> int:
        return self.c_impulse + self.c_resonance + self.c_pause

    @property
    def x(self) -> Fraction:
        return Fraction(self.c_impulse - self.c_resonance, self.total)

    @property
    def y(self) -> Fraction:
        return Fraction(self.c_pause - self.c_resonance, self.total)

    def majority(self) -> Role:
        # ties resolve toward the corpus-majority class first
        ranked = [(self.c_resonance, 2, Role.RESONANCE), (self.c_impulse, 1, Role.IMPULSE),
                  (self.c_pause, 0, Role.PAUSE)]
        return max(ranked)[2]


def lexical_role_space(graphs: Iterable[NarrativeGraph], min_freq: int = 1) -> dict[str, LexicalRoleStats]:
    if min_freq < 1:
        raise ValueError("min_freq must be >= 1")
    counts: dict[str, list[int]] = defaultdict(lambda: [0, 0, 0])
    slot = {Role.IMPULSE: 0, Role.RESONANCE: 1, Role.PAUSE: 2}
    for g in graphs:
        for a in g.event_anchors:
            counts[a.word.lower()][slot[a.role]] += 1
    return {w: LexicalRoleStats(w, *c) for w, c in sorted(counts.items()) if sum(c) >= min_freq}


def lexicon_to_json(lexicon: dict[str, LexicalRoleStats]) -> str:
    data = {w: [s.c_impulse, s.c_resonance, s.c_pause] for w, s in sorted(lexicon.items())}
    return json.dumps(data, ensure_ascii=False, indent=1) + "\n"


def load_lexicon(path) -> dict[str, LexicalRoleStats]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return {w: LexicalRoleStats(w, *map(int, c)) for w, c in data.items()}


def lexicon_csv(lexicon: dict[str, LexicalRoleStats]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["word", "c_impulse", "c_resonance", "c_pause", "total", "x", "y"])
    for word, s in sorted(lexicon.items()):
        w.writerow([word, s.c_impulse, s.c_resonance, s.c_pause, s.total,
                    f"{float(s.x):.4f}", f"{float(s.y):.4f}"])
    return buf.getvalue()


@dataclass(frozen=True)
class ShapeRecord:
    anchor_id: int
    word: str
    role: str
    x: int
    y: float
    z: int


def story_shape_export(graph: NarrativeGraph, cfg: DeltaConfig | None = None) -> list[ShapeRecord]:
    points = vista_coordinates(graph, cfg)
    by_id = graph.by_id()
    return [ShapeRecord(p.anchor_id, by_id[p.anchor_id].word, by_id[p.anchor_id].role.value, p.x, p.y, p.z)
            for p in points]


def shape_csv(records: Sequence[ShapeRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["anchor_id", "word", "role", "x", "y", "z"])
    for r in records:
        w.writerow([r.anchor_id, r.word, r.role, r.x, f"{r.y:.4f}", r.z])
    return buf.getvalue()


def stats_csv(stats: dict[str, CorpusStats]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["documents", "avg_length_tokens", "avg_count_impulse", "avg_count_resonance",
            "avg_count_pause", "avg_cross_dep"]
    w.writerow(["split"] + cols)
    for name, s in stats.items():
        row = s.as_row()
        w.writerow([name, row["documents"]] + [f"{row[c]:.4f}" for c in cols[1:]])
    return buf.getvalue()
