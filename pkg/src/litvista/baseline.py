"""Deterministic no-network baseline.

Role: the lexicon's majority role for the lowercased word, else Resonance
(the most frequent class in the corpus). Head: an Impulse points at the
previous Impulse, anything else at the most recent Impulse; -1 when there is
none. Without candidates (end-to-end mode) no rows are produced.
"""

from __future__ import annotations

from typing import Mapping

from .analysis import LexicalRoleStats, load_lexicon
from .prompts import candidates_from_prompt
from .tables import CandidateList, PredictionRow, serialize_prediction_table
from .topology import ROOT, Role


def heuristic_baseline(doc_text: str, candidates: CandidateList | None,
                       lexicon: Mapping[str, LexicalRoleStats] | None = None) -> list[PredictionRow]:
    if candidates is None:
        return []
    lexicon = lexicon or {}
    rows = []
    last_impulse = ROOT
    for anchor_id, span, word in candidates:
        stats = lexicon.get(word.lower())
        role = stats.majority() if stats is not None and stats.total else Role.RESONANCE
        rows.append(PredictionRow(anchor_id, role, span, word, last_impulse))
        if role is Role.IMPULSE:
            last_impulse = anchor_id
    return rows


def baseline_response(prompt: str, lexicon_path: str | None = None) -> str:
    """Answer a built prompt the way a model would, as a serialized table."""
    lexicon = load_lexicon(lexicon_path) if lexicon_path else None
    return serialize_prediction_table(heuristic_baseline("", candidates_from_prompt(prompt), lexicon))
