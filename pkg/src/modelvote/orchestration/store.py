"""Append-only run log and the state folded from it.

Every pipeline event (config, window, prompt, generation, extraction,
annotation task, human label, verdict) is one JSON line keyed by stable
identifiers, so replaying the log rebuilds the run state exactly, a
truncated trailing line is ignored, and resuming never double-counts.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterator, Mapping

from modelvote.errors import InputError, ModelVoteError


class UnknownRunError(InputError):
    """No run log exists under the requested run id."""


class TaskConflictError(ModelVoteError):
    """The task was already labeled; first writer wins."""


class TaskNotFoundError(InputError):
    """No annotation task with that id."""


WindowRef = tuple[str, str, int]
GenKey = tuple[str, str, int]          # (backend_id, prompt_hash, sample_index)


def ref_to_dict(ref: WindowRef) -> dict:
    return {"doc_id": ref[0], "disease_id": ref[1], "window_words": ref[2]}


def ref_from_dict(raw: Mapping) -> WindowRef:
    return (raw["doc_id"], raw["disease_id"], int(raw["window_words"]))


def ref_str(ref: WindowRef) -> str:
    return f"{ref[0]}::{ref[1]}::{ref[2]}"


@dataclass(frozen=True)
class AnnotationTask:
    task_id: str
    backend_id: str
    prompt_hash: str
    sample_index: int
    window_ref: WindowRef
    raw_text: str
    status: str = "pending"            # pending | labeled
    identification: str | None = None
    disease: str | None = None
    annotator_id: str | None = None
    labeled_at: str | None = None

    @property
    def gen_key(self) -> GenKey:
        return (self.backend_id, self.prompt_hash, self.sample_index)


@dataclass
class RunState:
    """Everything the log says about a run, folded in event order."""

    run_id: str
    config: dict | None = None
    windows: dict[WindowRef, dict] = field(default_factory=dict)
    # One prompt per (backend, window). Short documents can render the same
    # text for several window sizes, so one generation (keyed by hash) may
    # serve several windows.
    prompts: dict[tuple[str, WindowRef], dict] = field(default_factory=dict)
    generations: dict[GenKey, dict] = field(default_factory=dict)
    generation_errors: dict[GenKey, str] = field(default_factory=dict)
    extractions: dict[GenKey, dict] = field(default_factory=dict)
    tasks: dict[str, AnnotationTask] = field(default_factory=dict)
    verdicts: dict[WindowRef, dict] = field(default_factory=dict)
    # lazy prompt index; folding mutates prompts, so built only on first use
    _by_ref: dict[WindowRef, list[tuple[str, str]]] | None = field(
        default=None, repr=False, compare=False
    )

    def vote_for(self, key: GenKey) -> tuple[str, str, str] | None:
        """(identification, disease, source) for one generation, if resolved."""
        extraction = self.extractions.get(key)
        if extraction and extraction["status"] != "non-compliant":
            return (extraction["identification"], extraction["disease"], "auto")
        task = self.tasks.get(task_id_for(self.run_id, key))
        if task and task.status == "labeled":
            return (task.identification, task.disease, "human")
        return None

    def members(self) -> tuple[str, ...]:
        if not self.config:
            raise InputError("run log has no config event")
        return tuple(self.config["members"])

    def _prompts_by_ref(self) -> dict[WindowRef, list[tuple[str, str]]]:
        if self._by_ref is None:
            by_ref: dict[WindowRef, list[tuple[str, str]]] = {}
            for (backend_id, prompt_ref), record in self.prompts.items():
                by_ref.setdefault(prompt_ref, []).append(
                    (backend_id, record["prompt_hash"])
                )
            self._by_ref = by_ref
        return self._by_ref

    def gen_keys_for(self, ref: WindowRef) -> list[tuple[str, GenKey]]:
        """(member_id, generation key) pairs expected for one sample."""
        if not self.config:
            raise InputError("run log has no config event")
        matching = self._prompts_by_ref().get(ref, [])
        out: list[tuple[str, GenKey]] = []
        if self.config["mode"] == "self-consistency":
            for backend_id, prompt_hash in matching:
                for i in range(int(self.config["sc_samples"])):
                    out.append((f"sample-{i}", (backend_id, prompt_hash, i)))
        else:
            for backend_id, prompt_hash in matching:
                out.append((backend_id, (backend_id, prompt_hash, 0)))
        return sorted(out)


def task_id_for(run_id: str, key: GenKey) -> str:
    import hashlib

    payload = f"{run_id}:{key[0]}:{key[1]}:{key[2]}"
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


class RunStore:
    """Serialized append access plus state folding for one run directory."""

    def __init__(self, root: str | Path, run_id: str, create: bool = False):
        self.root = Path(root)
        self.run_id = run_id
        self.run_dir = self.root / run_id
        self.events_path = self.run_dir / "events.jsonl"
        if create:
            self.run_dir.mkdir(parents=True, exist_ok=True)
        elif not self.events_path.exists():
            raise UnknownRunError(f"no run log for {run_id!r} under {self.root}")
        self._lock = threading.Lock()
        self._repair_tail()

    def _repair_tail(self) -> None:
        """Drop a torn final line (crash mid-write) so appends stay valid."""
        if not self.events_path.exists():
            return
        data = self.events_path.read_bytes()
        if data and not data.endswith(b"\n"):
            keep = data.rfind(b"\n") + 1
            with open(self.events_path, "r+b") as fh:
                fh.truncate(keep)

    @classmethod
    def list_runs(cls, root: str | Path) -> list[str]:
        root = Path(root)
        if not root.exists():
            return []
        return sorted(
            p.name for p in root.iterdir() if (p / "events.jsonl").exists()
        )

    def append(self, event: dict) -> None:
        """Durably append one event; the write is visible before return."""
        with self._lock:
            self._write(event)

    def append_guarded(self, event: dict, guard) -> None:
        """Atomically re-check the folded state, then append.

        ``guard(state)`` raises to veto the write; concurrent writers are
        serialized, so exactly one of two racing label submissions wins.
        """
        with self._lock:
            guard(self.state())
            self._write(event)

    def _write(self, event: dict) -> None:
        line = json.dumps({"ts": time.time(), **event}, ensure_ascii=False)
        with open(self.events_path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def events(self) -> Iterator[dict]:
        """Parsed events; a truncated trailing line is skipped, a malformed
        line elsewhere is a corruption error."""
        if not self.events_path.exists():
            return
        with open(self.events_path, encoding="utf-8") as fh:
            lines = fh.readlines()
        for i, line in enumerate(lines):
            stripped = line.strip()
            if not stripped:
                continue
            try:
                yield json.loads(stripped)
            except json.JSONDecodeError:
                if i == len(lines) - 1:
                    return  # torn final write from a crash
                raise InputError(f"corrupt run log at line {i + 1}")

    def state(self) -> RunState:
        state = RunState(run_id=self.run_id)
        for event in self.events():
            kind = event.get("type")
            if kind == "run_config":
                state.config = {k: v for k, v in event.items() if k not in ("type", "ts")}
            elif kind == "window":
                state.windows[ref_from_dict(event["window"])] = {
                    "text": event["text"],
                    "gold_identification": event.get("gold_identification"),
                    "gold_disease": event.get("gold_disease"),
                }
            elif kind == "prompt":
                state.prompts[(event["backend_id"], ref_from_dict(event["window"]))] = {
                    "prompt_hash": event["prompt_hash"],
                    "text": event["text"],
                    "template_id": event["template_id"],
                }
            elif kind == "generation":
                key = (event["backend_id"], event["prompt_hash"], int(event["sample_index"]))
                state.generations[key] = {
                    "raw_text": event["raw_text"],
                    "attempts": event.get("attempts", 1),
                }
            elif kind == "generation_error":
                key = (event["backend_id"], event["prompt_hash"], int(event["sample_index"]))
                state.generation_errors[key] = event["error"]
            elif kind == "extraction":
                key = (event["backend_id"], event["prompt_hash"], int(event["sample_index"]))
                state.extractions[key] = {
                    "status": event["status"],
                    "identification": event.get("identification"),
                    "disease": event.get("disease"),
                    "span": event.get("span"),
                }
            elif kind == "task":
                task = AnnotationTask(
                    task_id=event["task_id"],
                    backend_id=event["backend_id"],
                    prompt_hash=event["prompt_hash"],
                    sample_index=int(event["sample_index"]),
                    window_ref=ref_from_dict(event["window"]),
                    raw_text=event["raw_text"],
                )
                state.tasks.setdefault(task.task_id, task)
            elif kind == "label":
                task = state.tasks.get(event["task_id"])
                if task is not None and task.status == "pending":
                    state.tasks[event["task_id"]] = replace(
                        task,
                        status="labeled",
                        identification=event["identification"],
                        disease=event["disease"],
                        annotator_id=event.get("annotator_id"),
                        labeled_at=event.get("labeled_at"),
                    )
            elif kind == "verdict":
                state.verdicts[ref_from_dict(event["window"])] = {
                    k: v for k, v in event.items() if k not in ("type", "ts", "window")
                }
        return state


@dataclass(frozen=True)
class RunRecord:
    """Canonical, timestamp-free view of a run used for comparisons and export."""

    run_id: str
    entries: tuple[dict, ...]
    verdicts: tuple[dict, ...]
    coverage: dict

    def canonical_dict(self) -> dict:
        return {
            "run_id": self.run_id,
            "entries": list(self.entries),
            "verdicts": list(self.verdicts),
            "coverage": self.coverage,
        }

    def canonical_bytes(self) -> bytes:
        return json.dumps(self.canonical_dict(), sort_keys=True).encode("utf-8")
