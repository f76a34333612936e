"""Tolerant extraction of JSON objects from model responses.

Models wrap JSON in prose or triple-backtick fences; we locate and decode the
first JSON object in the text. A single automatic re-ask is issued when no
JSON can be found at all.
"""

from __future__ import annotations

import json
import re
from dataclasses import replace
from typing import Any, Callable, TypeVar

from .errors import ResponseParseError, ResponseSchemaError
from .providers import ChatProvider, ChatRequest

T = TypeVar("T")

_FENCE_RE = re.compile(r"```(?:json)?\s*(.*?)```", re.DOTALL)

REASK_SUFFIX = "Respond with JSON only."


def extract_json_object(raw: str) -> Any:
    """Return the first JSON object found in `raw`, tolerating fences and prose."""
    candidates = [raw]
    candidates.extend(m.group(1) for m in _FENCE_RE.finditer(raw))
    decoder = json.JSONDecoder()
    for text in candidates:
        stripped = text.strip()
        if stripped.startswith("{"):
            try:
                value, _ = decoder.raw_decode(stripped)
                return value
            except json.JSONDecodeError:
                pass
    # Fall back to scanning for any embedded object.
    for text in candidates:
        for match in re.finditer(r"\{", text):
            try:
                value, _ = decoder.raw_decode(text[match.start() :])
            except json.JSONDecodeError:
                continue
            if isinstance(value, dict):
                return value
    raise ResponseParseError("no JSON object found in response", raw)


def complete_and_parse(
    provider: ChatProvider, request: ChatRequest, parse: Callable[[str], T]
) -> T:
    """Call the provider and parse its reply, with one automatic re-ask.

    If the first reply cannot be parsed, the same prompt is re-issued with a
    "Respond with JSON only." nudge appended; a second failure propagates the
    parse/schema error.
    """
    raw = provider.complete(request)
    try:
        return parse(raw)
    except (ResponseParseError, ResponseSchemaError):
        retry = replace(request, user_text=request.user_text + "\n\n" + REASK_SUFFIX)
        return parse(provider.complete(retry))
