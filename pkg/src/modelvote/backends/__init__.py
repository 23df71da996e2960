"""Generation backends: live HTTP, scripted mocks, and replay archives."""

from modelvote.backends.base import (
    BackendSpec,
    BackendUnavailableError,
    BatchItem,
    CredentialError,
    GenerationResult,
    generate,
    generate_batch,
)
from modelvote.backends.mock import MockScript
from modelvote.backends.replay import (
    ArchiveCollisionError,
    ReplayArchive,
    ReplayMissError,
    record_replay_capture,
)

__all__ = [
    "BackendSpec",
    "BackendUnavailableError",
    "BatchItem",
    "CredentialError",
    "GenerationResult",
    "generate",
    "generate_batch",
    "MockScript",
    "ArchiveCollisionError",
    "ReplayArchive",
    "ReplayMissError",
    "record_replay_capture",
]
