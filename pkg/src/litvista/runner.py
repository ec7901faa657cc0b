"""Drive a full oracle or end-to-end evaluation over one split."""

from __future__ import annotations

import json
import logging
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

import httpx

from .client import ModelConfig, ResponseCache, execute
from .dataset import candidates_from_graph
from .errors import VistaError
from .prompts import build_e2e_prompt, build_oracle_prompt
from .scoring import EvalResult, MatchConfig, score_run
from .tables import PredictionRow, parse_model_output_tolerant, serialize_prediction_table
from .topology import NarrativeGraph

log = logging.getLogger(__name__)

MODES = ("oracle", "e2e")


@dataclass
class DocStatus:
    status: str  # cached | fetched | failed
    rows: int = 0
    error: str | None = None
    diagnostics: dict = field(default_factory=dict)


@dataclass
class RunManifest:
    run_id: str
    mode: str
    split: str
    model: dict
    docs: dict = field(default_factory=dict)  # doc_id -> DocStatus
    started: str = ""
    finished: str = ""

    def counts(self) -> dict:
        out: dict[str, int] = {}
        for s in self.docs.values():
            out[s.status] = out.get(s.status, 0) + 1
        return out

    def to_json(self) -> str:
        data = asdict(self)
        data["docs"] = {k: asdict(v) for k, v in sorted(self.docs.items())}
        return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def build_prompt(graph: NarrativeGraph, mode: str) -> str:
    if mode == "oracle":
        return build_oracle_prompt(graph.text, candidates_from_graph(graph))
    if mode == "e2e":
        return build_e2e_prompt(graph.text)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _safe(name: str) -> str:
    return re.sub(r"[^\w.-]", "_", name)


def run_evaluation(graphs: Sequence[NarrativeGraph], cfg: ModelConfig, mode: str = "oracle",
                   match_cfg: MatchConfig | None = None, *, split: str = "test",
                   cache_dir=None, run_dir=None, run_id: str | None = None,
                   http: httpx.Client | None = None, sleep: Callable[[float], None] = time.sleep,
                   ) -> tuple[RunManifest, dict[str, list[PredictionRow]], EvalResult]:
    """Prompt, execute, parse and score every document.

    Documents are independent: a failure is recorded in the manifest and the
    document is scored as an empty prediction. The run always completes.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    started = _now()
    run_id = run_id or f"{_safe(cfg.name)}-{mode}-{split}-{started.replace(':', '')}"
    cache = ResponseCache(cache_dir) if cache_dir is not None else None
    own_http = http is None and cfg.backend == "http"
    if own_http:
        http = httpx.Client()

    def one(graph: NarrativeGraph) -> tuple[str, DocStatus, str, list[PredictionRow]]:
        try:
            prompt = build_prompt(graph, mode)
            raw, status = execute(cfg, prompt, cache=cache, http=http, sleep=sleep)
        except VistaError as exc:
            log.error("%s failed: %s", graph.doc_id, exc)
            return graph.doc_id, DocStatus("failed", error=f"{type(exc).__name__}: {exc}"), "", []
        rows, diag = parse_model_output_tolerant(raw)
        return graph.doc_id, DocStatus(status, len(rows), diagnostics=diag.as_dict()), raw, rows

    try:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            outcomes = list(pool.map(one, graphs))
    finally:
        if own_http:
            http.close()

    manifest = RunManifest(run_id, mode, split, cfg.snapshot(), started=started)
    predictions: dict[str, list[PredictionRow]] = {}
    raws: dict[str, str] = {}
    for doc_id, status, raw, rows in outcomes:
        manifest.docs[doc_id] = status
        predictions[doc_id] = rows
        raws[doc_id] = raw
    result = score_run(predictions, graphs, match_cfg or MatchConfig())
    manifest.finished = _now()

    if run_dir is not None:
        out = Path(run_dir) / run_id
        (out / "raw").mkdir(parents=True, exist_ok=True)
        (out / "predictions").mkdir(parents=True, exist_ok=True)
        for doc_id in sorted(predictions):
            (out / "raw" / f"{_safe(doc_id)}.txt").write_text(raws[doc_id], encoding="utf-8")
            (out / "predictions" / f"{_safe(doc_id)}.tsv").write_text(
                serialize_prediction_table(predictions[doc_id]), encoding="utf-8")
        (out / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
        (out / "result.json").write_text(result.to_json(), encoding="utf-8")
    return manifest, predictions, result
