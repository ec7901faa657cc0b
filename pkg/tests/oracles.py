"""Independent, deliberately naive reference implementations."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from litvista.topology import ROOT, NarrativeGraph, Role


def crossings_brute(intervals) -> int:
    """O(E^2) count of pairs whose intervals properly interleave."""
    ivs = [iv for iv in intervals if iv[0] < iv[1]]
    total = 0
    for (a1, b1), (a2, b2) in combinations(ivs, 2):
        if a1 < a2 < b1 < b2 or a2 < a1 < b2 < b1:
            total += 1
    return total


def graph_intervals(graph: NarrativeGraph) -> list[tuple[int, int]]:
    start = {a.id: a.span.start for a in graph.anchors}
    roles = {a.id: a.role for a in graph.anchors}
    out = []
    for a in graph.anchors:
        if a.head == ROOT or a.head not in start or a.head == a.id:
            continue
        if a.role is Role.NON_EVENT or roles[a.head] is Role.NON_EVENT:
            continue
        out.append(tuple(sorted((a.span.start, start[a.head]))))
    return out


def brute_matching(n_left: int, n_right: int, compatible) -> int:
    """Exhaustive maximum bipartite matching over bitmasks (small inputs only)."""

    @lru_cache(maxsize=None)
    def best(i: int, used: int) -> int:
        if i == n_left:
            return 0
        result = best(i + 1, used)
        for j in range(n_right):
            if not used >> j & 1 and compatible(i, j):
                result = max(result, 1 + best(i + 1, used | 1 << j))
        return result

    return best(0, 0)


def prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = Fraction(tp, tp + fp) if tp + fp else Fraction(0)
    r = Fraction(tp, tp + fn) if tp + fn else Fraction(0)
    f = 2 * p * r / (p + r) if p + r else Fraction(0)
    return float(p), float(r), float(f)


def anchor_counts(rows, gold: NarrativeGraph, window: int | None = None, role: bool = True):
    """(tp, fp, fn); exact mode uses multiset intersection, window mode brute force."""
    kept, seen = [], set()
    for r in rows:
        if (r.span, r.category) not in seen:
            seen.add((r.span, r.category))
            kept.append(r)
    gold_a = [a for a in gold.anchors if a.role is not Role.NON_EVENT]
    if window is None:
        pk = Counter((r.span, r.category if role else None) for r in kept)
        gk = Counter((a.span, a.role if role else None) for a in gold_a)
        tp = sum((pk & gk).values())
    else:
        def ok(i, j):
            p, g = kept[i], gold_a[j]
            return (p.word.casefold() == g.word.casefold() and abs(p.span.start - g.span.start) <= window
                    and (not role or p.category is g.role))
        tp = brute_matching(len(kept), len(gold_a), ok)
    return tp, len(rows) - tp, len(gold_a) - tp


def dependency_counts(rows, gold: NarrativeGraph, root_edges: bool = True):
    """Unlabeled exact (child span, head span) edge counts."""
    first = {}
    for r in rows:
        first.setdefault(r.id, r)
    pred, n_pred = Counter(), 0
    for r in rows:
        if r.head == ROOT:
            if root_edges:
                pred[(r.span, None)] += 1
                n_pred += 1
            continue
        n_pred += 1
        if r.head in first:
            pred[(r.span, first[r.head].span)] += 1
    spans = {a.id: a.span for a in gold.anchors}
    gold_e = Counter()
    for a in gold.anchors:
        if a.role is Role.NON_EVENT:
            continue
        if a.head == ROOT:
            if root_edges:
                gold_e[(a.span, None)] += 1
        else:
            gold_e[(a.span, spans[a.head])] += 1
    tp = sum((pred & gold_e).values())
    return tp, n_pred - tp, sum(gold_e.values()) - tp


def governing_tau(graph: NarrativeGraph, anchor_id: int) -> int:
    impulses = [a.id for a in graph.anchors if a.role is Role.IMPULSE]
    by_id = {a.id: a for a in graph.anchors}
    cur = by_id[anchor_id]
    while cur.role is not Role.IMPULSE:
        if cur.head == ROOT:
            return 0
        cur = by_id[cur.head]
    return impulses.index(cur.id) + 1


def pause_descendants(graph: NarrativeGraph, anchor_id: int) -> int:
    return sum(1 for a in graph.anchors if a.role is Role.PAUSE and _has_ancestor(graph, a.id, anchor_id))


def _has_ancestor(graph: NarrativeGraph, child: int, target: int) -> bool:
    by_id = {a.id: a for a in graph.anchors}
    cur = by_id[child].head
    while cur != ROOT:
        if cur == target:
            return True
        cur = by_id[cur].head
    return False
