"""Provider-agnostic transport to chat-completion endpoints.

Live providers speak the common chat-completions JSON shape (model,
messages, temperature, max_tokens; first choice's message content) so any
compatible endpoint is reachable through configuration alone. API keys
come from the environment variable named in the config and are never
stored, logged, or serialized.

Mock providers are first-class so the whole pipeline runs offline:

* ``echo-first-possible`` parses the candidate section of the prompt it
  receives and answers with the first listed label;
* ``scripted`` answers from a request-tag -> text map;
* ``oracle`` answers with the gold label for the request tag.
"""
from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import requests

from .errors import ConfigError, GatewayError, ProtocolError, TransportError
from .prompting import FULL_LIST_LINE_PREFIX, POSSIBLE_LINE_PREFIX

RETRYABLE_STATUS = frozenset({429, 500, 502, 503, 504})
_BODY_EXCERPT = 200
_TRACE_RESPONSE_LIMIT = 200


@dataclass(frozen=True)
class ChatRequest:
    model_id: str
    system_text: str
    user_text: str
    temperature: float = 0.0
    max_tokens: int = 64
    request_tag: str = ""

    def __post_init__(self):
        if not self.user_text:
            raise ValueError("chat request needs non-empty user text")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be >= 1, got {self.max_tokens}")


@dataclass(frozen=True)
class ChatResponse:
    text: str
    latency_ms: int
    attempt_count: int
    provider_id: str


@dataclass(frozen=True)
class ProviderConfig:
    provider_id: str
    endpoint_url: str = ""
    auth_env_var: str = ""
    model_id: str = ""
    temperature: float = 0.0
    max_tokens: int = 64
    timeout_ms: int = 30_000
    max_retries: int = 3
    backoff_base_ms: int = 250
    max_concurrent_requests: int = 4
    script_path: str = ""

    def __post_init__(self):
        if self.max_concurrent_requests < 1:
            raise ConfigError("max_concurrent_requests must be >= 1")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be >= 0")

    @classmethod
    def from_dict(cls, raw: dict) -> "ProviderConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown provider config keys: {sorted(unknown)}")
        if "provider_id" not in raw:
            raise ConfigError("provider config needs a provider_id")
        return cls(**raw)

    def snapshot(self) -> dict:
        """Config echo for reports; key names only, never key material."""
        return {
            "provider_id": self.provider_id,
            "endpoint_url": self.endpoint_url,
            "auth_env_var": self.auth_env_var,
            "model_id": self.model_id,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
            "script_path": self.script_path,
        }


def backoff_ms(attempt: int, base_ms: int, rng: random.Random) -> float:
    """Delay before retry `attempt` (1-based): exponential plus jitter.

    Jitter is bounded by base_ms, so delays are non-decreasing across
    attempts for a given request.
    """
    return base_ms * (2 ** (attempt - 1)) + rng.uniform(0, base_ms)


def default_transport(url: str, headers: dict, payload: dict,
                      timeout_s: float) -> tuple[int, str]:
    resp = requests.post(url, headers=headers, json=payload, timeout=timeout_s)
    return resp.status_code, resp.text


class HttpChatProvider:
    """Chat-completions client with bounded retries and backoff."""

    def __init__(self, config: ProviderConfig, transport=default_transport,
                 sleeper=time.sleep, rng: random.Random | None = None):
        if not config.endpoint_url:
            raise ConfigError(f"provider '{config.provider_id}' needs an endpoint_url")
        self.config = config
        self._transport = transport
        self._sleep = sleeper
        self._rng = rng or random.Random()

    def _auth_header(self) -> dict:
        if not self.config.auth_env_var:
            return {}
        key = os.environ.get(self.config.auth_env_var)
        if not key:
            raise ConfigError(
                f"environment variable '{self.config.auth_env_var}' is not set"
            )
        return {"Authorization": f"Bearer {key}"}

    def complete(self, req: ChatRequest) -> ChatResponse:
        cfg = self.config
        messages = []
        if req.system_text:
            messages.append({"role": "system", "content": req.system_text})
        messages.append({"role": "user", "content": req.user_text})
        payload = {
            "model": req.model_id or cfg.model_id,
            "messages": messages,
            "temperature": req.temperature,
            "max_tokens": req.max_tokens,
        }
        headers = {"Content-Type": "application/json", **self._auth_header()}
        started = time.monotonic()
        attempt = 0
        while True:
            attempt += 1
            failure: str | None = None
            try:
                status, body = self._transport(
                    cfg.endpoint_url, headers, payload, cfg.timeout_ms / 1000.0
                )
            except requests.RequestException as exc:
                failure = f"transport failure: {type(exc).__name__}"
            else:
                if status == 200:
                    text = self._extract_text(body, req.request_tag)
                    latency = int((time.monotonic() - started) * 1000)
                    return ChatResponse(
                        text=text,
                        latency_ms=latency,
                        attempt_count=attempt,
                        provider_id=cfg.provider_id,
                    )
                if status in RETRYABLE_STATUS:
                    failure = f"retryable status {status}"
                else:
                    raise TransportError(
                        f"non-retryable status {status} from '{cfg.provider_id}'",
                        request_tag=req.request_tag,
                    )
            if attempt > cfg.max_retries:
                raise TransportError(
                    f"exhausted {cfg.max_retries} retries against '{cfg.provider_id}'"
                    f" (last: {failure})",
                    request_tag=req.request_tag,
                )
            self._sleep(backoff_ms(attempt, cfg.backoff_base_ms, self._rng) / 1000.0)

    @staticmethod
    def _extract_text(body: str, tag: str) -> str:
        try:
            parsed = json.loads(body)
            content = parsed["choices"][0]["message"]["content"]
        except (json.JSONDecodeError, KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(
                f"malformed response body ({exc}): {body[:_BODY_EXCERPT]!r}",
                request_tag=tag,
            ) from exc
        if not isinstance(content, str):
            raise ProtocolError(
                f"response content is not text: {body[:_BODY_EXCERPT]!r}",
                request_tag=tag,
            )
        return content


class EchoFirstPossibleProvider:
    """Deterministic mock: answers with the first candidate label in the prompt."""

    def __init__(self, config: ProviderConfig):
        self.config = config

    def complete(self, req: ChatRequest) -> ChatResponse:
        for line in req.user_text.splitlines():
            for prefix in (POSSIBLE_LINE_PREFIX, FULL_LIST_LINE_PREFIX):
                if line.startswith(prefix):
                    first = line[len(prefix):].split(",", 1)[0].strip()
                    return ChatResponse(
                        text=first,
                        latency_ms=0,
                        attempt_count=1,
                        provider_id=self.config.provider_id,
                    )
        raise ProtocolError(
            "prompt has no candidate-list line the mock can parse",
            request_tag=req.request_tag,
        )


class ScriptedProvider:
    """Deterministic mock: request tag -> canned text; missing tags fail."""

    def __init__(self, config: ProviderConfig, script: dict[str, str]):
        self.config = config
        self.script = dict(script)

    def complete(self, req: ChatRequest) -> ChatResponse:
        if req.request_tag not in self.script:
            raise TransportError(
                f"no scripted response for tag '{req.request_tag}'",
                request_tag=req.request_tag,
            )
        return ChatResponse(
            text=self.script[req.request_tag],
            latency_ms=0,
            attempt_count=1,
            provider_id=self.config.provider_id,
        )


class OracleProvider:
    """Deterministic mock: answers with the gold label for the request tag."""

    def __init__(self, config: ProviderConfig, golds: dict[str, str]):
        self.config = config
        self.golds = dict(golds)

    def complete(self, req: ChatRequest) -> ChatResponse:
        if req.request_tag not in self.golds:
            raise TransportError(
                f"oracle has no gold for tag '{req.request_tag}'",
                request_tag=req.request_tag,
            )
        return ChatResponse(
            text=self.golds[req.request_tag],
            latency_ms=0,
            attempt_count=1,
            provider_id=self.config.provider_id,
        )


MOCK_PROVIDER_IDS = ("echo-first-possible", "scripted", "oracle")


def build_provider(config: ProviderConfig, oracle_golds: dict[str, str] | None = None):
    """Instantiate the provider named by the config."""
    if config.provider_id == "echo-first-possible":
        return EchoFirstPossibleProvider(config)
    if config.provider_id == "scripted":
        if not config.script_path:
            raise ConfigError("scripted provider needs script_path")
        with open(config.script_path, encoding="utf-8") as fh:
            script = json.load(fh)
        return ScriptedProvider(config, script)
    if config.provider_id == "oracle":
        if oracle_golds is None:
            raise ConfigError("oracle provider needs gold labels from the corpus")
        return OracleProvider(config, oracle_golds)
    return HttpChatProvider(config)


def complete_batch(provider, reqs: list[ChatRequest]) -> list[ChatResponse | GatewayError]:
    """Dispatch requests with bounded parallelism, preserving input order.

    Per-request failures come back in-place as GatewayError instances so
    one poisoned request never aborts the batch.
    """
    if not reqs:
        return []
    workers = min(provider.config.max_concurrent_requests, len(reqs))

    def run_one(req: ChatRequest):
        try:
            return provider.complete(req)
        except GatewayError as exc:
            return exc

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_one, reqs))


def trace_line(req: ChatRequest, result: ChatResponse | GatewayError) -> str:
    """One line-delimited JSON trace entry per request."""
    entry: dict = {"request_tag": req.request_tag}
    if isinstance(result, ChatResponse):
        entry.update(
            provider_id=result.provider_id,
            latency_ms=result.latency_ms,
            attempt_count=result.attempt_count,
            response=result.text[:_TRACE_RESPONSE_LIMIT],
        )
    else:
        entry["error"] = str(result)
    return json.dumps(entry, ensure_ascii=False)
