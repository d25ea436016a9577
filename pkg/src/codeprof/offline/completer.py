"""Pluggable text completers for the offline phase.

The stub completer replays canned responses keyed by prompt hash, which makes
the whole offline pipeline reproducible in tests and demos. The HTTP client
talks to any OpenAI-style chat endpoint; it is never used in tests.
"""

from __future__ import annotations

import hashlib
import json
import os
import urllib.request
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class GenerationLimits:
    max_tokens: int = 1024
    temperature: float = 0.0  # deterministic by default


class CompleterError(RuntimeError):
    pass


def prompt_key(prompt: str) -> str:
    """Stable fixture key for a rendered prompt."""
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:16]


class StubCompleter:
    """Deterministic completer: responses live at <fixture_dir>/<key>.txt."""

    def __init__(self, fixture_dir: str | Path):
        self.fixture_dir = Path(fixture_dir)

    def complete(self, prompt: str, limits: GenerationLimits | None = None) -> str:
        path = self.fixture_dir / f"{prompt_key(prompt)}.txt"
        if not path.is_file():
            raise CompleterError(
                f"stub completer has no canned response for prompt key "
                f"{prompt_key(prompt)} in {self.fixture_dir}"
            )
        return path.read_text("utf-8")

    def record(self, prompt: str, response: str) -> Path:
        """Store a canned response for ``prompt`` (test/fixture helper)."""
        self.fixture_dir.mkdir(parents=True, exist_ok=True)
        path = self.fixture_dir / f"{prompt_key(prompt)}.txt"
        path.write_text(response, "utf-8")
        return path


class HttpCompleter:
    """Minimal client for a chat-completions endpoint.

    Configured via LLM_ENDPOINT / LLM_API_KEY / LLM_MODEL unless given
    explicitly.
    """

    def __init__(
        self,
        endpoint: str | None = None,
        api_key: str | None = None,
        model: str | None = None,
        timeout: float = 120.0,
    ):
        self.endpoint = endpoint or os.environ.get("LLM_ENDPOINT", "")
        self.api_key = api_key or os.environ.get("LLM_API_KEY", "")
        self.model = model or os.environ.get("LLM_MODEL", "")
        self.timeout = timeout
        if not self.endpoint:
            raise CompleterError("no endpoint configured (set LLM_ENDPOINT)")

    def complete(self, prompt: str, limits: GenerationLimits | None = None) -> str:
        limits = limits or GenerationLimits()
        body = json.dumps(
            {
                "model": self.model,
                "messages": [{"role": "user", "content": prompt}],
                "max_tokens": limits.max_tokens,
                "temperature": limits.temperature,
            }
        ).encode("utf-8")
        request = urllib.request.Request(
            self.endpoint,
            data=body,
            headers={
                "Content-Type": "application/json",
                **({"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}),
            },
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                payload = json.loads(response.read().decode("utf-8"))
        except Exception as err:  # noqa: BLE001
            raise CompleterError(f"completion request failed: {err}") from err
        try:
            return payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as err:
            raise CompleterError(f"unexpected response shape: {payload!r}") from err


def completer_from_spec(spec: str):
    """Build a completer from a CLI spec: ``stub:<fixture-dir>`` or ``http``."""
    if spec.startswith("stub:"):
        return StubCompleter(spec[len("stub:"):])
    if spec == "http":
        return HttpCompleter()
    raise CompleterError(f"unknown completer spec {spec!r} (use stub:<dir> or http)")
