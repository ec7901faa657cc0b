"""Anchor and dependency precision/recall/F1, the harmonic aggregate, and
run-level pooling.

Matching is one-to-one: a maximum bipartite matching between predicted and
gold items under a compatibility predicate. In exact mode that reduces to
key equality, but the same matcher serves the word-window diagnostic mode.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .errors import DomainError
from .tables import PredictionRow
from .topology import ROOT, NarrativeGraph, Role, Span

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Prf:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> Prf:
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        return cls(p, r, f, tp, fp, fn)

    def as_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1,
                "tp": self.tp, "fp": self.fp, "fn": self.fn}


@dataclass(frozen=True)
class MatchConfig:
    span_match: str = "exact"  # "exact" or "word_window"
    window: int = 0
    role_required_for_anchor: bool = True
    dep_labeled: bool = False
    include_root_edges: bool = True
    include_backbone_edges: bool = True
    aggregation: str = "micro"  # "micro" or "macro"

    def __post_init__(self):
        if self.span_match not in ("exact", "word_window"):
            raise ValueError(f"unknown span_match {self.span_match!r}")
        if self.window < 0:
            raise ValueError("window must be >= 0")
        if self.aggregation not in ("micro", "macro"):
            raise ValueError(f"unknown aggregation {self.aggregation!r}")


@dataclass(frozen=True)
class EvalResult:
    anchor: Prf
    dependency: Prf
    harmonic: float
    per_doc: dict = field(default_factory=dict)  # doc_id -> (anchor Prf, dependency Prf)

    def as_dict(self) -> dict:
        return {
            "anchor": self.anchor.as_dict(),
            "dependency": self.dependency.as_dict(),
            "harmonic": self.harmonic,
            "per_doc": {doc: {"anchor": a.as_dict(), "dependency": d.as_dict()}
                        for doc, (a, d) in sorted(self.per_doc.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"


def harmonic_mean(a_f1: float, d_f1: float) -> float:
    for v in (a_f1, d_f1):
        if not (0.0 <= v <= 1.0):  # also rejects NaN
            raise DomainError(f"F1 values must lie in [0, 1], got {v}")
    if a_f1 + d_f1 == 0:
        return 0.0
    return 2 * a_f1 * d_f1 / (a_f1 + d_f1)


def max_matching(n_left: int, adj: Sequence[Sequence[int]]) -> int:
    """Size of a maximum bipartite matching (augmenting paths)."""
    owner: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in owner or augment(owner[v], seen):
                owner[v] = u
                return True
        return False

    return sum(1 for u in range(n_left) if augment(u, set()))


def _spans_match(cfg: MatchConfig) -> Callable[[Span, str, Span, str], bool]:
    if cfg.span_match == "exact":
        return lambda ps, pw, gs, gw: ps == gs
    k = cfg.window
    return lambda ps, pw, gs, gw: pw.casefold() == gw.casefold() and abs(ps.start - gs.start) <= k


def _dedupe(rows: Sequence[PredictionRow]) -> list[PredictionRow]:
    seen = set()
    out = []
    for r in rows:
        key = (r.span, r.category)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def anchor_prf(pred: Sequence[PredictionRow], gold: NarrativeGraph,
               cfg: MatchConfig | None = None) -> Prf:
    cfg = cfg or MatchConfig()
    same_span = _spans_match(cfg)
    unique = _dedupe(pred)
    gold_anchors = gold.event_anchors
    adj = []
    for p in unique:
        adj.append([j for j, g in enumerate(gold_anchors)
                    if same_span(p.span, p.word, g.span, g.word)
                    and (not cfg.role_required_for_anchor or p.category is g.role)])
    tp = max_matching(len(unique), adj)
    return Prf.from_counts(tp, len(pred) - tp, len(gold_anchors) - tp)


@dataclass(frozen=True)
class _End:
    """One end of a dependency edge; ``span is None`` is the virtual root."""

    span: Span | None
    word: str = ""
    role: Role | None = None


_ROOT_END = _End(None)


def _predicted_edges(rows, cfg: MatchConfig, notes: list | None):
    first: dict[int, PredictionRow] = {}
    for r in rows:
        first.setdefault(r.id, r)
    edges, dangling = [], 0
    for r in rows:
        child = _End(r.span, r.word, r.category)
        if r.head == ROOT:
            if cfg.include_root_edges:
                edges.append((child, _ROOT_END))
            continue
        head = first.get(r.head)
        if head is None:
            dangling += 1
            if notes is not None:
                notes.append(f"DanglingHead: row {r.id} points at missing id {r.head}")
            continue
        if (not cfg.include_backbone_edges and r.category is Role.IMPULSE
                and head.category is Role.IMPULSE):
            continue
        edges.append((child, _End(head.span, head.word, head.category)))
    return edges, dangling


def _gold_edges(gold: NarrativeGraph, cfg: MatchConfig):
    ids = gold.by_id()
    edges = []
    for a in gold.event_anchors:
        child = _End(a.span, a.word, a.role)
        if a.head == ROOT:
            if cfg.include_root_edges:
                edges.append((child, _ROOT_END))
            continue
        head = ids[a.head]
        if not cfg.include_backbone_edges and a.role is Role.IMPULSE and head.role is Role.IMPULSE:
            continue
        edges.append((child, _End(head.span, head.word, head.role)))
    return edges


def dependency_prf(pred: Sequence[PredictionRow], gold: NarrativeGraph,
                   cfg: MatchConfig | None = None, notes: list | None = None) -> Prf:
    """Directed (child span, head span) edge matching.

    Rows whose head id is absent from the table yield an unmatched predicted
    edge (a false positive) and, if ``notes`` is given, a diagnostic line.
    """
    cfg = cfg or MatchConfig()
    same_span = _spans_match(cfg)

    def end_match(p: _End, g: _End) -> bool:
        if p.span is None or g.span is None:
            return p.span is None and g.span is None
        return same_span(p.span, p.word, g.span, g.word)

    pred_edges, dangling = _predicted_edges(pred, cfg, notes)
    gold_edges = _gold_edges(gold, cfg)
    adj = []
    for pc, ph in pred_edges:
        adj.append([j for j, (gc, gh) in enumerate(gold_edges)
                    if end_match(pc, gc) and end_match(ph, gh)
                    and (not cfg.dep_labeled or (pc.role is gc.role and ph.role is gh.role))])
    tp = max_matching(len(pred_edges), adj)
    n_pred = len(pred_edges) + dangling
    return Prf.from_counts(tp, n_pred - tp, len(gold_edges) - tp)


def _pool(prfs: list[Prf], aggregation: str) -> Prf:
    tp = sum(p.tp for p in prfs)
    fp = sum(p.fp for p in prfs)
    fn = sum(p.fn for p in prfs)
    if aggregation == "micro" or not prfs:
        return Prf.from_counts(tp, fp, fn)
    n = len(prfs)
    return Prf(math.fsum(p.precision for p in prfs) / n, math.fsum(p.recall for p in prfs) / n,
               math.fsum(p.f1 for p in prfs) / n, tp, fp, fn)


def score_document(pred: Sequence[PredictionRow], gold: NarrativeGraph,
                   cfg: MatchConfig | None = None) -> tuple[Prf, Prf]:
    cfg = cfg or MatchConfig()
    return anchor_prf(pred, gold, cfg), dependency_prf(pred, gold, cfg)


def score_run(predictions: Mapping[str, Sequence[PredictionRow]], gold: Sequence[NarrativeGraph],
              cfg: MatchConfig | None = None) -> EvalResult:
    """Score every gold document; missing predictions count as empty."""
    cfg = cfg or MatchConfig()
    gold_ids = {g.doc_id for g in gold}
    for extra in sorted(set(predictions) - gold_ids):
        log.warning("ignoring predictions for unknown document %s", extra)
    per_doc = {}
    for g in gold:
        rows = predictions.get(g.doc_id)
        if rows is None:
            log.warning("no predictions for %s; scoring as empty", g.doc_id)
            rows = []
        per_doc[g.doc_id] = score_document(rows, g, cfg)
    anchor = _pool([a for a, _ in per_doc.values()], cfg.aggregation)
    dep = _pool([d for _, d in per_doc.values()], cfg.aggregation)
    return EvalResult(anchor, dep, harmonic_mean(anchor.f1, dep.f1), per_doc)


CSV_COLUMNS = ("model", "anchor_p", "anchor_r", "anchor_f1", "dep_p", "dep_r", "dep_f1", "harmonic")


def results_csv(results: Sequence[tuple[str, EvalResult]]) -> str:
    """One row per model: anchor P/R/F1, dependency P/R/F1, harmonic; four decimals."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for model, r in results:
        writer.writerow([model] + [f"{v:.4f}" for v in (
            r.anchor.precision, r.anchor.recall, r.anchor.f1,
            r.dependency.precision, r.dependency.recall, r.dependency.f1, r.harmonic)])
    return buf.getvalue()
