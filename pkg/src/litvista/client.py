"""Chat-completion execution with a content-addressed response cache.

Backends:

``http``      one user message per request against a generic chat-completion
              endpoint (OpenAI-style body; Anthropic-style responses are
              also understood).
``baseline``  the deterministic heuristic baseline; no network.
``replay``    serve responses from the cache only; a miss is an error.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

import httpx

from .errors import HttpError, RequestError, RequestTimeout, RetriesExhausted

log = logging.getLogger(__name__)

RETRYABLE_STATUS = frozenset({408, 409, 429, 500, 502, 503, 504})


@dataclass(frozen=True)
class ModelConfig:
    name: str
    endpoint: str = ""
    api_key_env: str = ""
    temperature: float | None = 0.0
    max_output_tokens: int | None = None
    timeout: float = 120.0
    max_retries: int = 3
    parallelism: int = 1
    backend: str = "http"  # http | baseline | replay
    header_style: str = "bearer"  # bearer | x-api-key | api-key
    extra_headers: dict = field(default_factory=dict)
    lexicon_path: str | None = None  # baseline only
    backoff_base: float = 1.0
    backoff_cap: float = 30.0

    def __post_init__(self):
        if self.temperature is not None and self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.backend not in ("http", "baseline", "replay"):
            raise ValueError(f"unknown backend {self.backend!r}")

    @classmethod
    def from_file(cls, path) -> ModelConfig:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(**data)

    def snapshot(self) -> dict:
        """Config as recorded in run manifests (never includes the key itself)."""
        return asdict(self)


def cache_key(model: str, prompt: str) -> str:
    h = hashlib.sha256()
    h.update(model.encode("utf-8"))
    h.update(b"\x00")
    h.update(prompt.encode("utf-8"))
    return h.hexdigest()


@dataclass(frozen=True)
class CacheRecord:
    key: str
    response: str
    metadata: dict = field(default_factory=dict)


class ResponseCache:
    """One JSON file per (model, prompt) digest; writes are atomic."""

    def __init__(self, root):
        self.root = Path(root)

    def path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def get(self, key: str) -> CacheRecord | None:
        p = self.path(key)
        if not p.exists():
            return None
        data = json.loads(p.read_text(encoding="utf-8"))
        return CacheRecord(data["key"], data["response"], data.get("metadata", {}))

    def put(self, record: CacheRecord) -> None:
        p = self.path(record.key)
        p.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps({"key": record.key, "response": record.response,
                              "metadata": record.metadata}, ensure_ascii=False, sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


def _headers(cfg: ModelConfig) -> dict:
    headers = {"Content-Type": "application/json"}
    key = os.environ.get(cfg.api_key_env, "") if cfg.api_key_env else ""
    if key:
        if cfg.header_style == "bearer":
            headers["Authorization"] = f"Bearer {key}"
        elif cfg.header_style == "x-api-key":
            headers["x-api-key"] = key
        elif cfg.header_style == "api-key":
            headers["api-key"] = key
        else:
            raise ValueError(f"unknown header_style {cfg.header_style!r}")
    headers.update(cfg.extra_headers)
    return headers


def _body(cfg: ModelConfig, prompt: str, with_temperature: bool) -> dict:
    body: dict = {"model": cfg.name, "messages": [{"role": "user", "content": prompt}]}
    if with_temperature and cfg.temperature is not None:
        body["temperature"] = cfg.temperature
    if cfg.max_output_tokens:
        body["max_tokens"] = cfg.max_output_tokens
    return body


def extract_text(payload: dict) -> str:
    """Pull the assistant text out of an OpenAI- or Anthropic-shaped response."""
    if "choices" in payload:
        message = payload["choices"][0].get("message", {})
        content = message.get("content", "")
    elif "content" in payload:
        content = payload["content"]
    else:
        raise RequestError(f"unrecognised response shape: keys {sorted(payload)}")
    if isinstance(content, list):
        return "".join(part.get("text", "") for part in content if isinstance(part, dict))
    return content or ""


def _rejects_temperature(status: int, body: str) -> bool:
    return status in (400, 422) and "temperature" in body.lower()


def _post_with_retries(cfg: ModelConfig, prompt: str, http: httpx.Client,
                       sleep: Callable[[float], None]) -> tuple[str, dict]:
    with_temperature = True
    attempts = 0
    last: Exception | None = None
    timeouts_only = True
    retries_left = cfg.max_retries
    while True:
        attempts += 1
        try:
            resp = http.post(cfg.endpoint, json=_body(cfg, prompt, with_temperature),
                             headers=_headers(cfg), timeout=cfg.timeout)
        except httpx.TimeoutException as exc:
            last = exc
        except httpx.TransportError as exc:
            last, timeouts_only = exc, False
        else:
            if resp.status_code == 200:
                meta = {"status": 200, "attempts": attempts, "temperature_sent": with_temperature}
                return extract_text(resp.json()), meta
            body = resp.text
            if with_temperature and _rejects_temperature(resp.status_code, body):
                # keep provider defaults for models that refuse the parameter
                log.info("%s rejected temperature; retrying without it", cfg.name)
                with_temperature = False
                continue
            if resp.status_code not in RETRYABLE_STATUS:
                raise HttpError(resp.status_code, body)
            last, timeouts_only = HttpError(resp.status_code, body), False
        if retries_left == 0:
            if timeouts_only:
                raise RequestTimeout(attempts, last)
            raise RetriesExhausted(attempts, last)
        delay = min(cfg.backoff_base * 2 ** (cfg.max_retries - retries_left), cfg.backoff_cap)
        retries_left -= 1
        log.warning("%s attempt %d failed (%s); retrying in %.1fs", cfg.name, attempts, last, delay)
        sleep(delay)


def execute(cfg: ModelConfig, prompt: str, cache: ResponseCache | None = None,
            http: httpx.Client | None = None, sleep: Callable[[float], None] = time.sleep,
            ) -> tuple[str, str]:
    """Return ``(response_text, status)`` where status is ``cached`` or ``fetched``.

    A cache hit never touches the network. Transport errors, timeouts and
    retryable HTTP statuses are retried with exponential backoff.
    """
    key = cache_key(cfg.name, prompt)
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit.response, "cached"
    if cfg.backend == "replay":
        raise RequestError(f"replay backend has no cached response for key {key[:12]}")
    if cfg.backend == "baseline":
        from .baseline import baseline_response

        text, meta = baseline_response(prompt, cfg.lexicon_path), {"backend": "baseline"}
    else:
        if not cfg.endpoint:
            raise RequestError(f"model {cfg.name!r} has no endpoint configured")
        own = http is None
        http = http or httpx.Client()
        try:
            text, meta = _post_with_retries(cfg, prompt, http, sleep)
        finally:
            if own:
                http.close()
    if cache is not None:
        cache.put(CacheRecord(key, text, meta))
    return text, "fetched"
