"""VISTA Space data model: anchors, narrative graphs, structural validation,
backbone indexing and coordinates.

Every type here is immutable. Graph construction is deliberately lenient
(duplicate ids, dangling or cyclic heads are representable) so that
:func:`validate` can report problems instead of the constructor raising.
"""

from __future__ import annotations

import bisect
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Literal

from .errors import DomainError, InvalidGraph

ROOT = -1

Mode = Literal["strict", "relaxed"]


class Role(str, Enum):
    IMPULSE = "Impulse"
    RESONANCE = "Resonance"
    PAUSE = "Pause"
    NON_EVENT = "NonEvent"

    @classmethod
    def parse(cls, text: str) -> Role:
        """Case-insensitive lookup; raises ValueError for unknown names."""
        key = text.strip().lower().replace("-", "").replace("_", "")
        try:
            return _ROLE_KEYS[key]
        except KeyError:
            raise ValueError(f"unknown role {text!r}") from None

    @property
    def is_event(self) -> bool:
        return self is not Role.NON_EVENT

    def __str__(self) -> str:
        return self.value


_ROLE_KEYS = {r.value.lower(): r for r in Role}
_ROLE_KEYS["nonevent"] = Role.NON_EVENT

EVENT_ROLES = (Role.IMPULSE, Role.RESONANCE, Role.PAUSE)


class TransitionKind(Enum):
    ADVANCE = "Advance"  # E_tau -> E_{tau+1}
    MICRO_SHIFT = "MicroShift"  # E_tau -> E_{tau+delta}
    FREEZE = "Freeze"  # E_tau -> E_tau
    NONE = "None"


_TRANSITIONS = {
    Role.IMPULSE: TransitionKind.ADVANCE,
    Role.RESONANCE: TransitionKind.MICRO_SHIFT,
    Role.PAUSE: TransitionKind.FREEZE,
    Role.NON_EVENT: TransitionKind.NONE,
}


def role_transition(role: Role) -> TransitionKind:
    """How an anchor of ``role`` acts on the narrative state."""
    return _TRANSITIONS[Role(role)]


@dataclass(frozen=True, order=True)
class Span:
    """Half-open character range ``[start, end)`` over the document text."""

    start: int
    end: int

    @property
    def length(self) -> int:
        return self.end - self.start

    def is_valid(self, text_length: int | None = None) -> bool:
        if self.start < 0 or self.start >= self.end:
            return False
        return text_length is None or self.end <= text_length

    def __str__(self) -> str:
        return f"{self.start},{self.end}"


@dataclass(frozen=True)
class Anchor:
    id: int
    span: Span
    word: str
    role: Role
    head: int = ROOT

    @property
    def is_root(self) -> bool:
        return self.head == ROOT


@dataclass(frozen=True)
class NarrativeGraph:
    doc_id: str
    text: str
    anchors: tuple[Anchor, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.anchors, key=lambda a: (a.span.start, a.span.end, a.id)))
        object.__setattr__(self, "anchors", ordered)

    def by_id(self) -> dict[int, Anchor]:
        """First anchor per id (duplicates are a validation concern)."""
        out: dict[int, Anchor] = {}
        for a in self.anchors:
            out.setdefault(a.id, a)
        return out

    @property
    def event_anchors(self) -> tuple[Anchor, ...]:
        return tuple(a for a in self.anchors if a.role.is_event)

    def edges(self) -> list[tuple[Anchor, Anchor]]:
        """(child, head) pairs for every non-root head that resolves."""
        ids = self.by_id()
        return [(a, ids[a.head]) for a in self.anchors
                if a.head != ROOT and a.head in ids and a.head != a.id]

    def children(self) -> dict[int, list[int]]:
        kids: dict[int, list[int]] = defaultdict(list)
        for child, head in self.edges():
            kids[head.id].append(child.id)
        return kids

    def count(self, role: Role) -> int:
        return sum(1 for a in self.anchors if a.role is role)


@dataclass(frozen=True)
class Violation:
    anchor_id: int
    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    mode: str
    violations: tuple[Violation, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


@dataclass(frozen=True)
class DeltaConfig:
    delta: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"delta must lie in (0, 1), got {self.delta}")


@dataclass(frozen=True)
class VistaPoint:
    anchor_id: int
    x: int
    y: float
    z: int


# Allowed head roles per child role. Impulse->Impulse backbone links are
# accepted in both modes; strict mode simply does not treat them as E edges.
_STRICT_HEADS = {
    Role.IMPULSE: {Role.IMPULSE},
    Role.RESONANCE: {Role.IMPULSE},
    Role.PAUSE: {Role.IMPULSE, Role.RESONANCE},
}
_RELAXED_HEADS = {
    Role.IMPULSE: {Role.IMPULSE},
    Role.RESONANCE: {Role.IMPULSE, Role.RESONANCE},
    Role.PAUSE: {Role.IMPULSE, Role.RESONANCE, Role.PAUSE},
}


def validate(graph: NarrativeGraph, mode: Mode = "strict") -> ValidationReport:
    """Check ``graph`` against the dependency layers; never raises on content."""
    if mode not in ("strict", "relaxed"):
        raise ValueError(f"mode must be 'strict' or 'relaxed', got {mode!r}")
    allowed = _STRICT_HEADS if mode == "strict" else _RELAXED_HEADS
    found: list[Violation] = []
    notes: list[str] = []
    text_len = len(graph.text)

    seen: set[int] = set()
    for a in graph.anchors:
        if a.id in seen:
            found.append(Violation(a.id, "DuplicateId", f"id {a.id} used more than once"))
        seen.add(a.id)
        if not a.span.is_valid(text_len):
            found.append(Violation(a.id, "BadSpan", f"span {a.span} invalid for text of length {text_len}"))
        if not a.word.strip():
            found.append(Violation(a.id, "EmptyWord", "anchor word is empty"))

    ids = graph.by_id()
    for a in graph.anchors:
        if a.head == ROOT:
            continue
        if a.head == a.id:
            found.append(Violation(a.id, "SelfLoop", f"anchor {a.id} heads itself"))
            continue
        head = ids.get(a.head)
        if head is None:
            found.append(Violation(a.id, "DanglingHead", f"head {a.head} does not exist"))
            continue
        if a.role is Role.NON_EVENT:
            found.append(Violation(a.id, "NonEventHead", "NonEvent anchors cannot carry a head"))
            continue
        if head.role is Role.NON_EVENT:
            found.append(Violation(a.id, "NonEventDependent", f"head {head.id} is a NonEvent"))
            continue
        if head.role not in allowed[a.role]:
            found.append(Violation(
                a.id, f"{a.role.value}Head{head.role.value}",
                f"{a.role.value} {a.id} -> {head.role.value} {head.id} not allowed in {mode} mode"))

    for anchor_id in _cycle_members(graph):
        found.append(Violation(anchor_id, "Cycle", f"anchor {anchor_id} lies on a head cycle"))

    roots = [a.id for a in graph.anchors if a.role.is_event and a.head == ROOT]
    if len(roots) > 1:
        notes.append(f"MultipleRoots: {len(roots)} root anchors ({', '.join(map(str, roots[:10]))})")
    return ValidationReport(mode, tuple(found), tuple(notes))


def _cycle_members(graph: NarrativeGraph) -> list[int]:
    ids = graph.by_id()
    state: dict[int, int] = {}  # 1 = on current path, 2 = finished
    members: list[int] = []
    for start in ids:
        path: list[int] = []
        cur = start
        while cur in ids and cur not in state:
            state[cur] = 1
            path.append(cur)
            nxt = ids[cur].head
            if nxt == cur:  # self loops are reported separately
                break
            cur = nxt
        if cur in ids and state.get(cur) == 1 and ids[cur].head != cur:
            members.extend(path[path.index(cur):])
        for node in path:
            state[node] = 2
    return sorted(members)


def require_valid(graph: NarrativeGraph, mode: Mode = "relaxed") -> None:
    report = validate(graph, mode)
    if not report.ok:
        raise InvalidGraph(graph.doc_id, report.violations)


def backbone(graph: NarrativeGraph) -> list[tuple[int, int]]:
    """Impulse anchors in textual order paired with tau = 1..k."""
    require_valid(graph, "relaxed")
    impulses = [a for a in graph.anchors if a.role is Role.IMPULSE]
    return [(a.id, tau) for tau, a in enumerate(impulses, start=1)]


def vista_coordinates(graph: NarrativeGraph, cfg: DeltaConfig | None = None) -> list[VistaPoint]:
    """One point per event anchor, in textual order.

    Impulses sit on the backbone at (tau, 0, 0). A Resonance takes its
    governing Impulse's tau and y = N * delta, N being the number of Pause
    anchors below it. A Pause inherits y from its nearest Resonance ancestor
    and has z = 1. Anchors with no Impulse above them get tau = 0.
    """
    cfg = cfg or DeltaConfig()
    taus = dict(backbone(graph))
    ids = graph.by_id()
    kids = graph.children()

    def governing_tau(a: Anchor) -> int:
        cur = a
        while cur.role is not Role.IMPULSE:
            if cur.head == ROOT:
                return 0
            cur = ids[cur.head]
        return taus[cur.id]

    def pauses_below(anchor_id: int) -> int:
        total, stack = 0, list(kids.get(anchor_id, ()))
        while stack:
            node = stack.pop()
            if ids[node].role is Role.PAUSE:
                total += 1
            stack.extend(kids.get(node, ()))
        return total

    def resonance_ancestor(a: Anchor) -> Anchor | None:
        cur = a
        while cur.head != ROOT:
            cur = ids[cur.head]
            if cur.role is Role.RESONANCE:
                return cur
            if cur.role is Role.IMPULSE:
                return None
        return None

    points = []
    for a in graph.anchors:
        if a.role is Role.IMPULSE:
            points.append(VistaPoint(a.id, taus[a.id], 0.0, 0))
        elif a.role is Role.RESONANCE:
            points.append(VistaPoint(a.id, governing_tau(a), pauses_below(a.id) * cfg.delta, 0))
        elif a.role is Role.PAUSE:
            parent = resonance_ancestor(a)
            y = pauses_below(parent.id) * cfg.delta if parent is not None else 0.0
            points.append(VistaPoint(a.id, governing_tau(a), y, 1))
    return points


def edge_intervals(graph: NarrativeGraph) -> list[tuple[int, int]]:
    """Linear extent (by span start) of every non-root event edge."""
    out = []
    for child, head in graph.edges():
        if child.role.is_event and head.role.is_event:
            lo, hi = sorted((child.span.start, head.span.start))
            out.append((lo, hi))
    return out


def count_crossings(intervals: Iterable[tuple[int, int]]) -> int:
    """Pairs (i, j) with a_i < a_j < b_i < b_j, in O(E log E)."""
    ivs = sorted(iv for iv in intervals if iv[0] < iv[1])
    if not ivs:
        return 0
    coords = sorted({v for iv in ivs for v in iv})
    tree = [0] * (len(coords) + 1)

    def add(pos: int) -> None:
        pos += 1
        while pos <= len(coords):
            tree[pos] += 1
            pos += pos & -pos

    def prefix(pos: int) -> int:  # count of inserted coords with index < pos
        total = 0
        while pos > 0:
            total += tree[pos]
            pos -= pos & -pos
        return total

    crossings = 0
    i = 0
    while i < len(ivs):
        j = i
        while j < len(ivs) and ivs[j][0] == ivs[i][0]:
            j += 1
        group = ivs[i:j]
        for a, b in group:
            lo = bisect.bisect_right(coords, a)
            hi = bisect.bisect_left(coords, b)
            crossings += prefix(hi) - prefix(lo)
        for _, b in group:
            add(bisect.bisect_left(coords, b))
        i = j
    return crossings


def cross_dependency_count(graph: NarrativeGraph, definition: str = "crossing",
                           threshold: int | None = None) -> int:
    """Count cross dependencies.

    ``crossing`` counts pairs of edges whose linear intervals properly cross;
    ``long_range`` counts edges whose start-to-start distance exceeds
    ``threshold`` characters.
    """
    require_valid(graph, "relaxed")
    intervals = edge_intervals(graph)
    if definition == "crossing":
        return count_crossings(intervals)
    if definition == "long_range":
        if threshold is None or threshold < 0:
            raise ValueError("long_range needs a non-negative threshold")
        return sum(1 for lo, hi in intervals if hi - lo > threshold)
    raise ValueError(f"unknown cross-dependency definition {definition!r}")

