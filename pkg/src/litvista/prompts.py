"""Oracle and end-to-end prompt builders.

Templates live in ``litvista/data`` as plain text and are pinned by SHA-256
so that any drift is caught by the test suite.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from importlib import resources

from .errors import EmptyCandidates, EmptyText
from .tables import CandidateList, format_candidate_line, parse_candidate_list, parse_prediction_table_strict
from .dataset import graph_from_rows
from .topology import NarrativeGraph

TEXT_SLOT = "[INSERT TEXT HERE]"
ANCHOR_SLOT = "[INSERT ANCHOR LIST HERE (Format: ID  Offsets  Word)]"
TASK_MARKER = "VI. Task"

TEMPLATE_SHA256 = {
    "oracle_prompt.txt": "3e3a428f7beb63c54af2d1144a1474e18c21e01074feddc710ad9b7d8bbe7c6c",
    "e2e_prompt.txt": "928af0212ba77f4554965e8ed89005d4564210c99e441a2afd0886b9301ad458",
    "oneshot_text.txt": "93c119837a6c683183da69f6802ef5573941d2122f48096e0a34a68d0635936a",
    "oneshot_output.txt": "4b7b48c1096ddf4fd54196f8143f867de74fd412f35ab1ac22a29f599c7de44c",
}


@lru_cache(maxsize=None)
def load_resource(name: str) -> str:
    return resources.files("litvista.data").joinpath(name).read_text(encoding="utf-8")


def resource_digest(name: str) -> str:
    return hashlib.sha256(load_resource(name).encode("utf-8")).hexdigest()


def oneshot_graph() -> NarrativeGraph:
    """The fully annotated demonstration embedded in both prompts."""
    rows = parse_prediction_table_strict(load_resource("oneshot_output.txt"))
    return graph_from_rows("alice-oneshot", load_resource("oneshot_text.txt"), rows)


def build_oracle_prompt(doc_text: str, candidates: CandidateList) -> str:
    if not len(candidates):
        raise EmptyCandidates("oracle prompts need at least one candidate anchor")
    template = load_resource("oracle_prompt.txt")
    head, rest = template.split(TEXT_SLOT)
    middle, tail = rest.split(ANCHOR_SLOT)
    block = "\n".join(format_candidate_line(*entry) for entry in candidates)
    return head + doc_text + middle.rstrip(" ") + "\n" + block + tail


def build_e2e_prompt(doc_text: str) -> str:
    if not doc_text or not doc_text.strip():
        raise EmptyText("end-to-end prompts need non-empty text")
    head, tail = load_resource("e2e_prompt.txt").split(TEXT_SLOT)
    return head + doc_text + tail


def candidates_from_prompt(prompt: str) -> CandidateList | None:
    """Recover the task's anchor block from an oracle prompt, or None for e2e prompts."""
    idx = prompt.rfind(TASK_MARKER)
    if idx < 0:
        return None
    task = prompt[idx:]
    marker = task.rfind("Input Anchors:")
    if marker < 0:
        return None
    return parse_candidate_list(task[marker + len("Input Anchors:"):])
