"""Live chat/completions client with capped-backoff retries.

The request body follows the common chat-completions wire format:
POST {endpoint} with {model, messages, max_tokens, temperature}. The API
key comes from the environment variable named by ``credentials_ref`` and
is never echoed into errors or logs.
"""

from __future__ import annotations

import os
import time

import httpx

from modelvote.backends.base import (
    BackendSpec,
    BackendUnavailableError,
    CredentialError,
    GenerationResult,
)
from modelvote.prompts import RenderedPrompt

MAX_ATTEMPTS = 3
BACKOFF_BASE = 0.5
BACKOFF_CAP = 4.0
RETRYABLE_STATUS = (408, 429, 500, 502, 503, 504)


def request_body(spec: BackendSpec, prompt: RenderedPrompt) -> dict:
    return {
        "model": spec.backend_id,
        "messages": [{"role": "user", "content": prompt.text}],
        "max_tokens": spec.max_tokens,
        "temperature": spec.temperature,
    }


def _completion_text(payload: dict) -> str:
    choice = payload["choices"][0]
    if "message" in choice:
        return choice["message"].get("content") or ""
    return choice.get("text") or ""


def generate_live(
    spec: BackendSpec,
    prompt: RenderedPrompt,
    *,
    client: httpx.Client | None = None,
    sleeper=time.sleep,
) -> GenerationResult:
    headers = {"Content-Type": "application/json"}
    if spec.credentials_ref:
        secret = os.environ.get(spec.credentials_ref)
        if not secret:
            raise CredentialError(
                f"environment variable {spec.credentials_ref!r} is not set"
            )
        headers["Authorization"] = f"Bearer {secret}"

    own_client = client is None
    if own_client:
        client = httpx.Client(timeout=spec.timeout)

    started = time.perf_counter()
    last_error = "no attempt made"
    try:
        for attempt in range(1, MAX_ATTEMPTS + 1):
            try:
                response = client.post(
                    spec.endpoint, json=request_body(spec, prompt), headers=headers
                )
            except httpx.HTTPError as exc:
                last_error = f"transport error: {type(exc).__name__}"
            else:
                if response.status_code in (401, 403):
                    raise CredentialError(
                        f"backend {spec.backend_id!r} rejected the credential "
                        f"(HTTP {response.status_code})"
                    )
                if response.status_code == 200:
                    try:
                        text = _completion_text(response.json())
                    except (KeyError, IndexError, ValueError) as exc:
                        raise BackendUnavailableError(
                            f"backend {spec.backend_id!r} returned an "
                            f"unexpected payload: {type(exc).__name__}"
                        ) from None
                    return GenerationResult(
                        backend_id=spec.backend_id,
                        prompt_hash=prompt.content_hash,
                        raw_text=text,
                        latency=time.perf_counter() - started,
                        attempt_count=attempt,
                    )
                if response.status_code not in RETRYABLE_STATUS:
                    raise BackendUnavailableError(
                        f"backend {spec.backend_id!r} failed with "
                        f"HTTP {response.status_code}"
                    )
                last_error = f"HTTP {response.status_code}"
            if attempt < MAX_ATTEMPTS:
                sleeper(min(BACKOFF_CAP, BACKOFF_BASE * 2 ** (attempt - 1)))
        raise BackendUnavailableError(
            f"backend {spec.backend_id!r} unavailable after "
            f"{MAX_ATTEMPTS} attempts ({last_error})"
        )
    finally:
        if own_client:
            client.close()
