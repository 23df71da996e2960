"""Record/replay archives: capture live or mock runs, replay them bit-exactly.

Archive format is line-delimited JSON records of
``{"prompt_hash": ..., "backend_id": ..., "raw_text": ...}``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from modelvote.backends.base import BackendSpec, GenerationResult, generate
from modelvote.errors import ModelVoteError
from modelvote.prompts import RenderedPrompt


class ArchiveCollisionError(ModelVoteError):
    """Two different texts were recorded under the same prompt hash."""


class ReplayMissError(ModelVoteError):
    """The archive has no entry for a requested prompt hash."""


@dataclass(frozen=True)
class ReplayArchive:
    backend_id: str
    entries: dict[str, str]  # prompt_hash -> raw_text

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, prompt_hash: str) -> str:
        try:
            return self.entries[prompt_hash]
        except KeyError:
            raise ReplayMissError(
                f"archive for {self.backend_id!r} has no entry "
                f"{prompt_hash[:12]}"
            ) from None

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for prompt_hash in sorted(self.entries):
                fh.write(json.dumps({
                    "prompt_hash": prompt_hash,
                    "backend_id": self.backend_id,
                    "raw_text": self.entries[prompt_hash],
                }) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "ReplayArchive":
        entries: dict[str, str] = {}
        backend_id = ""
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                record = json.loads(line)
                prompt_hash = record["prompt_hash"]
                text = record["raw_text"]
                backend_id = record.get("backend_id", backend_id)
                if prompt_hash in entries and entries[prompt_hash] != text:
                    raise ArchiveCollisionError(
                        f"conflicting texts recorded for {prompt_hash[:12]}"
                    )
                entries[prompt_hash] = text
        return cls(backend_id=backend_id, entries=entries)


def record_replay_capture(
    spec: BackendSpec, prompts: Sequence[RenderedPrompt], out: str | Path
) -> ReplayArchive:
    """Generate every prompt through ``spec`` and persist the transcript."""
    entries: dict[str, str] = {}
    for prompt in prompts:
        result = generate(spec, prompt)
        existing = entries.get(prompt.content_hash)
        if existing is not None and existing != result.raw_text:
            raise ArchiveCollisionError(
                f"conflicting texts generated for {prompt.content_hash[:12]}"
            )
        entries[prompt.content_hash] = result.raw_text
    archive = ReplayArchive(backend_id=spec.backend_id, entries=entries)
    archive.save(out)
    return archive


_cache: dict[tuple[str, int], ReplayArchive] = {}


def _load_cached(path: str) -> ReplayArchive:
    try:
        key = (os.path.abspath(path), os.stat(path).st_mtime_ns)
        if key not in _cache:
            _cache.clear()
            _cache[key] = ReplayArchive.load(path)
        return _cache[key]
    except OSError as exc:
        raise ReplayMissError(f"replay archive unreadable: {exc}") from exc


def generate_replay(spec: BackendSpec, prompt: RenderedPrompt) -> GenerationResult:
    archive = _load_cached(spec.archive_path)
    return GenerationResult(
        backend_id=spec.backend_id,
        prompt_hash=prompt.content_hash,
        raw_text=archive.lookup(prompt.content_hash),
        latency=0.0,
        attempt_count=1,
    )
