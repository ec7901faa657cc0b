"""Hypothesis strategies for narrative graphs and prediction tables."""

from __future__ import annotations

from hypothesis import strategies as st

from litvista.tables import PredictionRow
from litvista.topology import ROOT, Anchor, NarrativeGraph, Role, Span

EVENT = (Role.IMPULSE, Role.RESONANCE, Role.PAUSE)

HEADS = {
    "strict": {Role.IMPULSE: {Role.IMPULSE}, Role.RESONANCE: {Role.IMPULSE},
               Role.PAUSE: {Role.IMPULSE, Role.RESONANCE}},
    "relaxed": {Role.IMPULSE: {Role.IMPULSE}, Role.RESONANCE: {Role.IMPULSE, Role.RESONANCE},
                Role.PAUSE: {Role.IMPULSE, Role.RESONANCE, Role.PAUSE}},
}

WORD_POOL = ("ran", "saw", "thought", "TOOK", "wept", "fear", "a", "it", "Said", "hurried", "dream",
             "x", "looked", "pop", "fall", "wonder", "began", "ly", "Oh", "see", "went", "tired", "peeped",
             "reading", "considering", "hear", "say", "occurred", "started", "flashed", "noticed", "took",
             "passed", "jumped", "sight", "turned", "found", "came", "fitted", "opened", "knelt", "longed",
             "wish", "think", "taste", "finding", "finished", "brightened", "waited", "nervous", "tried",
             "spoke", "talking", "hope", "sleepy", "saying", "dozing", "proceed", "lived", "called",
             "contended", "bestowed", "decreed", "DOWN")
words = st.text(alphabet="abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ", min_size=1, max_size=6)
GAPS = (" ", "  ", ", ", " and ", "; ", ".\n", " (", ") ")
gaps = st.sampled_from(GAPS)


def _layout(prefix: str, word_bytes: bytes, gap_bytes: bytes):
    parts, spans, pos = [prefix], [], len(prefix)
    for wb, gb in zip(word_bytes, gap_bytes):
        w, gap = WORD_POOL[wb % len(WORD_POOL)], GAPS[gb % len(GAPS)]
        spans.append(Span(pos, pos + len(w)))
        parts += [w, gap]
        pos += len(w) + len(gap)
    return "".join(parts), spans


@st.composite
def texts_with_tokens(draw, n: int):
    """Plain text with ``n`` letter-only tokens at known spans."""
    raw = draw(st.binary(min_size=2 * n, max_size=2 * n))
    return _layout(draw(st.sampled_from(["", "So ", "The "])), raw[:n], raw[n:])


@st.composite
def valid_graphs(draw, mode: str = "relaxed", min_anchors: int = 0, max_anchors: int = 12,
                 nonevent: bool = True):
    """Graphs that pass ``validate(mode)``; heads may point forward or backward.

    Heads are assigned along a random order so every head precedes its child
    in that order, which rules out cycles. All structure comes from a single
    byte-string draw, which keeps generation cheap for 50-anchor graphs.
    """
    n = draw(st.integers(min_anchors, max_anchors))
    raw = draw(st.binary(min_size=5 * n, max_size=5 * n))
    text, spans = _layout("", raw[:n], raw[n:2 * n])
    role_pool = EVENT + ((Role.NON_EVENT,) if nonevent else ())
    roles = [role_pool[b % len(role_pool)] for b in raw[2 * n:3 * n]]
    order = sorted(range(n), key=lambda i: (raw[3 * n + i], i))
    heads = [ROOT] * n
    placed: list[int] = []
    for i in order:
        pick = raw[4 * n + i]
        if roles[i] is not Role.NON_EVENT:
            options = [j for j in placed if roles[j] in HEADS[mode][roles[i]]]
            if options and pick % 5:  # one in five attaches to the root
                heads[i] = options[pick // 5 % len(options)]
        placed.append(i)
    anchors = tuple(Anchor(i, spans[i], text[spans[i].start:spans[i].end], roles[i], heads[i])
                    for i in range(n))
    return NarrativeGraph("g", text, anchors)


@st.composite
def arbitrary_graphs(draw, max_anchors: int = 12):
    """Graphs with unconstrained heads: self loops, dangling ids, cycles."""
    n = draw(st.integers(0, max_anchors))
    text, spans = draw(texts_with_tokens(n))
    anchors = []
    for i in range(n):
        role = draw(st.sampled_from(list(Role)))
        head = draw(st.integers(-1, n + 1))
        anchors.append(Anchor(i, spans[i], text[spans[i].start:spans[i].end], role, head))
    return NarrativeGraph("g", text, tuple(anchors))


@st.composite
def predictions_for(draw, gold: NarrativeGraph, max_extra: int = 4):
    """Noisy predictions: gold rows with random role, span, head and id
    corruptions, plus spurious and duplicated rows."""
    gold_rows = gold.event_anchors
    noise = draw(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(-2, 2), st.integers(-1, 15)),
                          min_size=len(gold_rows), max_size=len(gold_rows)))
    rows = []
    for a, (keep, flips, shift, other_head) in zip(gold_rows, noise):
        if keep == 0:
            continue
        role = EVENT[flips % 3] if flips >= 3 else a.role
        span = Span(a.span.start + shift, a.span.end) if flips == 1 else a.span
        head = other_head if flips == 2 or keep == 1 else a.head
        rows.append(PredictionRow(a.id, role, span, a.word, head))
    extras = draw(st.lists(st.tuples(st.integers(0, max(len(gold.text) - 1, 0)), st.integers(1, 4),
                                     st.sampled_from(EVENT), words, st.integers(-1, 15)), max_size=max_extra))
    for k, (start, width, role, word, head) in enumerate(extras):
        rows.append(PredictionRow(100 + k, role, Span(start, start + width), word, head))
    if rows and draw(st.booleans()):
        rows.append(rows[draw(st.integers(0, len(rows) - 1))])
    return draw(st.permutations(rows)) if draw(st.booleans()) else rows


table_words = st.text(
    alphabet=st.characters(blacklist_categories=("Cc", "Cs", "Zl", "Zp")), min_size=1, max_size=12,
).filter(lambda s: s == s.strip())

prediction_rows = st.builds(
    PredictionRow,
    id=st.integers(0, 10_000),
    category=st.sampled_from(EVENT),
    span=st.builds(Span, st.integers(0, 100_000), st.integers(0, 100_000)),
    word=table_words,
    head=st.integers(-1, 10_000),
)
