"""Chat-completion providers: a live OpenAI-compatible HTTP client and a
deterministic scripted mock with full request capture."""

from __future__ import annotations

import base64
import json
import os
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Protocol, Sequence, Tuple

import requests

from .errors import (
    InvalidInputError,
    ProviderUnavailableError,
    ScriptExhaustedError,
    ScriptFormatError,
)

PHASES = ("vision", "text")


@dataclass(frozen=True)
class ChatRequest:
    phase: str  # "vision" or "text"
    system_text: str
    user_text: str
    images: Tuple[Tuple[float, bytes], ...] = ()  # (timestamp_s, PNG bytes)
    temperature: float = 0.0
    max_output_tokens: int = 4096

    def __post_init__(self):
        if self.phase not in PHASES:
            raise InvalidInputError(f"unknown phase: {self.phase!r}")
        if self.phase == "text" and self.images:
            raise InvalidInputError("text-phase requests must not carry images")
        if self.temperature < 0:
            raise InvalidInputError("temperature must be >= 0")

    @property
    def prompt(self) -> str:
        """Full prompt text as seen by the model (system + user)."""
        return self.system_text + "\n\n" + self.user_text


@dataclass(frozen=True)
class ProviderConfig:
    endpoint_url: str = "https://api.openai.com/v1/chat/completions"
    model_name: str = "gpt-4.1"
    api_key_env_var_name: str = "OPENAI_API_KEY"
    timeout_s: float = 120.0
    max_retries: int = 3
    backoff_base_ms: float = 500.0

    def __post_init__(self):
        if self.max_retries < 0:
            raise InvalidInputError("max_retries must be >= 0")
        if self.timeout_s <= 0:
            raise InvalidInputError("timeout_s must be positive")


class ChatProvider(Protocol):
    def complete(self, request: ChatRequest) -> str: ...


@dataclass
class CapturedRequest:
    """Summary of one request seen by the mock (no image bytes retained)."""

    phase: str
    system_text: str
    user_text: str
    image_timestamps: Tuple[float, ...]

    @property
    def prompt(self) -> str:
        return self.system_text + "\n\n" + self.user_text


class MockProvider:
    """Deterministic scripted provider: per-phase FIFO response queues plus an
    append-only capture log of every request."""

    def __init__(self, script: Optional[Dict[str, Sequence[str]]] = None):
        script = script or {}
        unknown = set(script) - set(PHASES)
        if unknown:
            raise ScriptFormatError(f"unknown phases in script: {sorted(unknown)}")
        self._queues: Dict[str, List[str]] = {p: list(script.get(p, [])) for p in PHASES}
        self.captured_requests: List[CapturedRequest] = []
        self._lock = threading.Lock()

    def complete(self, request: ChatRequest) -> str:
        with self._lock:
            self.captured_requests.append(
                CapturedRequest(
                    phase=request.phase,
                    system_text=request.system_text,
                    user_text=request.user_text,
                    image_timestamps=tuple(ts for ts, _ in request.images),
                )
            )
            queue = self._queues[request.phase]
            if not queue:
                raise ScriptExhaustedError(request.phase)
            return queue.pop(0)

    def remaining(self, phase: str) -> int:
        with self._lock:
            return len(self._queues[phase])


def load_script(path: str | Path) -> MockProvider:
    """Load a mock script file: JSON {"vision": [...], "text": [...]}."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScriptFormatError(f"cannot read script {path}: {exc}") from exc
    if text.strip() == "":
        return MockProvider({})
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScriptFormatError(
            f"script {path} is not valid JSON at line {exc.lineno}, column {exc.colno}"
        ) from exc
    if not isinstance(data, dict):
        raise ScriptFormatError(f"script {path} must be a JSON object")
    for phase, responses in data.items():
        if phase not in PHASES:
            raise ScriptFormatError(f"script {path}: unknown phase {phase!r}")
        if not isinstance(responses, list) or not all(isinstance(r, str) for r in responses):
            raise ScriptFormatError(f"script {path}: phase {phase!r} must be a list of strings")
    return MockProvider(data)


class HttpProvider:
    """OpenAI-compatible chat-completions client with retry and backoff.

    The API key is read from the environment at call time and never stored on
    the instance, so logs and serialized configs cannot leak it.
    """

    RETRYABLE_STATUS = {429, 500, 502, 503, 504}

    def __init__(self, config: ProviderConfig, session: Optional[requests.Session] = None):
        self.config = config
        self._session = session or requests.Session()

    def __repr__(self):
        return f"HttpProvider(model={self.config.model_name!r}, endpoint={self.config.endpoint_url!r})"

    def complete(self, request: ChatRequest) -> str:
        payload = self._build_payload(request)
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.config.api_key_env_var_name, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        attempts = self.config.max_retries + 1
        last_error = "unknown error"
        for attempt in range(attempts):
            if attempt > 0:
                time.sleep(self.config.backoff_base_ms / 1000.0 * (2 ** (attempt - 1)))
            try:
                resp = self._session.post(
                    self.config.endpoint_url,
                    json=payload,
                    headers=headers,
                    timeout=self.config.timeout_s,
                )
            except requests.RequestException as exc:
                last_error = f"transport error: {exc.__class__.__name__}"
                continue
            if resp.status_code in self.RETRYABLE_STATUS:
                last_error = f"HTTP {resp.status_code}"
                continue
            if resp.status_code != 200:
                raise ProviderUnavailableError(f"HTTP {resp.status_code}", attempt + 1)
            body = resp.json()
            return body["choices"][0]["message"]["content"]
        raise ProviderUnavailableError(last_error, attempts)

    def _build_payload(self, request: ChatRequest) -> dict:
        if request.images:
            content: list = [{"type": "text", "text": request.user_text}]
            for _, png in request.images:
                b64 = base64.b64encode(png).decode("ascii")
                content.append(
                    {
                        "type": "image_url",
                        "image_url": {"url": f"data:image/png;base64,{b64}"},
                    }
                )
        else:
            content = request.user_text
        return {
            "model": self.config.model_name,
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
            "messages": [
                {"role": "system", "content": request.system_text},
                {"role": "user", "content": content},
            ],
        }
