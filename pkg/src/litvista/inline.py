"""Inline role-tagged text.

Tag grammar (case-insensitive tag names)::

    tagged  := ( plain-text | tag )*
    tag     := "<" ROLE ">" token marker* "</" [ROLE] ">"
             | "<span style=\"color:" COLOR "\">" token marker* "</span>"
    ROLE    := Impulse | Resonance | Pause | NonEvent
    marker  := "@" n      register this anchor under index n (n >= 1)
             | "#" n      attach this anchor to the anchor registered as @n;
                          "#0" marks a root (head -1)

Colors map to roles through a hook (red/green/blue by default). Tags never
nest. Markers sit inside the tag, glued to the token: ``<Impulse>tired@1</Impulse>``.

Anchors without a ``#`` marker take a head from the recency rule: an Impulse
attaches to the previous Impulse, a Resonance to the nearest preceding
Impulse or Resonance, a Pause to the nearest preceding event anchor of any
role. When no such anchor exists the head is -1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .errors import InvalidGraph, MalformedTag, SpanNotOnToken, UnknownIndex
from .topology import ROOT, Anchor, NarrativeGraph, Role, Span, backbone, validate

DEFAULT_COLOR_ROLES: Mapping[str, Role] = {
    "red": Role.IMPULSE,
    "green": Role.RESONANCE,
    "blue": Role.PAUSE,
    "gray": Role.NON_EVENT,
    "grey": Role.NON_EVENT,
}

_ROLE_NAMES = "Impulse|Resonance|Pause|NonEvent"
_TAG = re.compile(
    rf"<(?:(?P<role>{_ROLE_NAMES})|span\s+style\s*=\s*\"(?P<style>[^\"]*)\"\s*)>"
    rf"(?P<body>[^<]*)"
    rf"</(?P<close>{_ROLE_NAMES}|span)?>",
    re.IGNORECASE,
)
_ANY_TAG = re.compile(rf"</?(?:{_ROLE_NAMES}|span)\b[^>]*>|</>", re.IGNORECASE)
_BODY = re.compile(r"^(?P<word>.*?)(?P<marks>(?:[@#]\d+)*)$", re.DOTALL)
_MARK = re.compile(r"([@#])(\d+)")
_COLOR = re.compile(r"color\s*:\s*([#\w]+)", re.IGNORECASE)


@dataclass(frozen=True)
class InlineDoc:
    plain_text: str
    graph: NarrativeGraph


def _role_of(m: re.Match, colors: Mapping[str, Role]) -> Role:
    if m["role"]:
        role = Role.parse(m["role"])
        if m["close"] and m["close"].lower() not in (m["role"].lower(),):
            raise MalformedTag(f"<{m['role']}> closed by </{m['close']}>")
        return role
    if m["close"] and m["close"].lower() != "span":
        raise MalformedTag(f"<span> closed by </{m['close']}>")
    color = _COLOR.search(m["style"])
    if color is None or color.group(1).lower() not in colors:
        raise MalformedTag(f"no role mapping for style {m['style']!r}")
    return colors[color.group(1).lower()]


def recency_head(roles: list[Role], ids: list[int], i: int) -> int:
    """Head implied for anchor ``i`` when it carries no ``#`` marker."""
    role = roles[i]
    if role is Role.IMPULSE:
        targets = (Role.IMPULSE,)
    elif role is Role.RESONANCE:
        targets = (Role.IMPULSE, Role.RESONANCE)
    elif role is Role.PAUSE:
        targets = (Role.IMPULSE, Role.RESONANCE, Role.PAUSE)
    else:
        return ROOT
    for j in range(i - 1, -1, -1):
        if roles[j] in targets:
            return ids[j]
    return ROOT


def parse_inline(tagged_text: str, doc_id: str = "inline",
                 color_roles: Mapping[str, Role] | None = None) -> InlineDoc:
    colors = {k.lower(): v for k, v in (color_roles or DEFAULT_COLOR_ROLES).items()}
    plain: list[str] = []
    pos = 0  # position in plain text
    last = 0  # position in tagged text
    found = []  # (span, role, registers, refers)
    for m in _TAG.finditer(tagged_text):
        gap = tagged_text[last:m.start()]
        if _ANY_TAG.search(gap):
            raise MalformedTag(f"unbalanced or nested tag near offset {last + _ANY_TAG.search(gap).start()}")
        plain.append(gap)
        pos += len(gap)
        role = _role_of(m, colors)
        body = _BODY.match(m["body"])
        word = body["word"]
        if not word:
            raise MalformedTag(f"empty anchor token in {m.group(0)!r}")
        registers = refers = None
        for kind, num in _MARK.findall(body["marks"]):
            if kind == "@":
                if registers is not None or int(num) == 0:
                    raise MalformedTag(f"bad @ marker in {m.group(0)!r}")
                registers = int(num)
            else:
                if refers is not None:
                    raise MalformedTag(f"two # markers in {m.group(0)!r}")
                refers = int(num)
        found.append((Span(pos, pos + len(word)), role, registers, refers))
        plain.append(word)
        pos += len(word)
        last = m.end()
    tail = tagged_text[last:]
    if _ANY_TAG.search(tail):
        raise MalformedTag("unbalanced or nested tag after the last anchor")
    plain.append(tail)
    text = "".join(plain)

    roles = [f[1] for f in found]
    ids = list(range(len(found)))
    registry: dict[int, list[int]] = {}
    for i, (_, _, reg, _) in enumerate(found):
        if reg is not None:
            registry.setdefault(reg, []).append(i)

    anchors = []
    for i, (span, role, _, ref) in enumerate(found):
        if ref is None:
            head = recency_head(roles, ids, i)
        elif ref == 0:
            head = ROOT
        else:
            owners = [j for j in registry.get(ref, ()) if j != i]
            if not owners:
                raise UnknownIndex(ref)
            before = [j for j in owners if j < i]
            head = before[-1] if before else owners[0]
        anchors.append(Anchor(i, span, text[span.start:span.end], role, head))
    return InlineDoc(text, NarrativeGraph(doc_id, text, tuple(anchors)))


def serialize_inline(graph: NarrativeGraph, index_policy: str = "all") -> str:
    """Re-insert role tags into ``graph.text``.

    ``all`` registers every Impulse under its backbone index and marks every
    direct dependent of an Impulse; ``minimal`` emits markers only where the
    recency rule would pick the wrong head. Either way parsing the result
    recovers the same spans, roles and heads.
    """
    if index_policy not in ("all", "minimal"):
        raise ValueError(f"index_policy must be 'all' or 'minimal', got {index_policy!r}")
    report = validate(graph, "relaxed")
    if not report.ok:
        raise InvalidGraph(graph.doc_id, report.violations)
    text = graph.text
    anchors = list(graph.anchors)
    prev_end = 0
    for a in anchors:
        token = text[a.span.start:a.span.end]
        if a.span.start < prev_end:
            raise SpanNotOnToken(f"anchor {a.id} overlaps the previous anchor")
        if any(c.isspace() for c in token) or "<" in token or ">" in token:
            raise SpanNotOnToken(f"anchor {a.id} span {a.span} covers {token!r}, not a single token")
        if _BODY.match(token)["marks"]:
            raise SpanNotOnToken(f"anchor {a.id} token {token!r} ends like an index marker")
        prev_end = a.span.end
    if _ANY_TAG.search(text):
        raise MalformedTag("document text already contains tag-like markup")

    roles = [a.role for a in anchors]
    ids = [a.id for a in anchors]
    by_id = {a.id: a for a in anchors}
    needs_ref = {}
    for i, a in enumerate(anchors):
        wrong = recency_head(roles, ids, i) != a.head
        direct = (index_policy == "all" and a.role in (Role.RESONANCE, Role.PAUSE)
                  and a.head != ROOT and by_id[a.head].role is Role.IMPULSE)
        if wrong or direct:
            needs_ref[a.id] = a.head

    labels: dict[int, int] = {}
    taus = dict(backbone(graph))
    if index_policy == "all":
        labels.update(taus)
    for head in needs_ref.values():
        if head != ROOT and head in taus:
            labels[head] = taus[head]
    fresh = len(taus) + 1
    for a in anchors:  # referenced non-Impulse heads get numbers past the backbone
        if a.id in needs_ref.values() and a.id not in labels:
            labels[a.id] = fresh
            fresh += 1

    out = []
    last = 0
    for a in anchors:
        token = text[a.span.start:a.span.end]
        marks = ""
        if a.id in labels:
            marks += f"@{labels[a.id]}"
        if a.id in needs_ref:
            head = needs_ref[a.id]
            marks += "#0" if head == ROOT else f"#{labels[head]}"
        name = a.role.value
        out.append(text[last:a.span.start])
        out.append(f"<{name}>{token}{marks}</{name}>")
        last = a.span.end
    out.append(text[last:])
    return "".join(out)
