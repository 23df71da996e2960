"""Uniform generation interface over live, mock, and replay backends."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from modelvote.errors import InputError, ModelVoteError
from modelvote.prompts import RenderedPrompt

if TYPE_CHECKING:
    from modelvote.backends.mock import MockScript


class BackendUnavailableError(ModelVoteError):
    """Transport kept failing after the retry budget was spent."""


class CredentialError(ModelVoteError):
    """Authentication failed or the credential env var is unset."""


@dataclass(frozen=True)
class BackendSpec:
    """One model behind the generation interface.

    ``prompt_family`` binds the backend to its prompt template;
    ``script`` configures mock behavior and ``archive_path`` the replay
    source. Live backends read their API key from the environment
    variable named by ``credentials_ref``.
    """

    backend_id: str
    kind: str = "mock"                       # live | mock | replay
    endpoint: str = ""
    max_tokens: int = 1024
    temperature: float = 0.0
    credentials_ref: str = ""
    prompt_family: str = "alpaca-style"
    script: "MockScript | None" = None
    archive_path: str = ""
    timeout: float = 60.0

    def __post_init__(self):
        if self.kind not in ("live", "mock", "replay"):
            raise InputError(f"unknown backend kind {self.kind!r}")
        if self.max_tokens < 1:
            raise InputError("max_tokens must be >= 1")
        if self.temperature < 0:
            raise InputError("temperature must be >= 0")
        if self.kind == "live" and not self.endpoint:
            raise InputError(f"live backend {self.backend_id!r} needs an endpoint")
        if self.kind != "live" and self.endpoint:
            raise InputError(f"{self.kind} backend {self.backend_id!r} takes no endpoint")
        if self.kind == "replay" and not self.archive_path:
            raise InputError(f"replay backend {self.backend_id!r} needs archive_path")


@dataclass(frozen=True)
class GenerationResult:
    backend_id: str
    prompt_hash: str
    raw_text: str
    latency: float = 0.0
    attempt_count: int = 1


def generate(spec: BackendSpec, prompt: RenderedPrompt, *, sample_index: int = 0,
             **live_kwargs) -> GenerationResult:
    """Produce raw model text for one prompt.

    ``sample_index`` salts mock sampling so self-consistency draws differ;
    live and replay backends ignore it.
    """
    if spec.kind == "mock":
        from modelvote.backends.mock import generate_mock

        return generate_mock(spec, prompt, sample_index=sample_index)
    if spec.kind == "replay":
        from modelvote.backends.replay import generate_replay

        return generate_replay(spec, prompt)
    from modelvote.backends.live import generate_live

    return generate_live(spec, prompt, **live_kwargs)


@dataclass(frozen=True)
class BatchItem:
    backend_id: str
    prompt_hash: str
    sample_index: int = 0
    result: GenerationResult | None = None
    error: str | None = None

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.backend_id, self.prompt_hash, self.sample_index)


def generate_batch(
    specs: Sequence[BackendSpec],
    prompts: Sequence[RenderedPrompt],
    parallelism: int = 4,
    *,
    samples_per_prompt: int = 1,
) -> list[BatchItem]:
    """Answer every (spec, prompt) pair; per-pair failures do not abort.

    Results are keyed by (backend_id, prompt_hash, sample_index) and
    returned in canonical key order, so scheduling cannot influence the
    output.
    """
    if parallelism < 1:
        raise InputError("parallelism must be >= 1")

    jobs = [
        (spec, prompt, s)
        for spec in specs
        for prompt in prompts
        for s in range(samples_per_prompt)
    ]

    def run(job) -> BatchItem:
        spec, prompt, s = job
        try:
            result = generate(spec, prompt, sample_index=s)
            return BatchItem(spec.backend_id, prompt.content_hash, s, result=result)
        except ModelVoteError as exc:
            return BatchItem(spec.backend_id, prompt.content_hash, s, error=str(exc))

    if parallelism == 1 or len(jobs) <= 1:
        items = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            items = list(pool.map(run, jobs))
    return sorted(items, key=lambda item: item.key)
