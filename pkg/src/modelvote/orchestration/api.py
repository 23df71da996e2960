"""HTTP review service for the human annotation queue.

Read endpoints page through tasks; the label endpoint appends durably to
the run log before acknowledging. Conflicting submissions get 409 and the
loser re-fetches; malformed input gets a machine-readable 4xx.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from modelvote.errors import InputError
from modelvote.labels import OTHER
from modelvote.orchestration.annotation import submit_label
from modelvote.orchestration.reporting import run_report
from modelvote.orchestration.store import (
    AnnotationTask,
    RunStore,
    TaskConflictError,
    TaskNotFoundError,
    ref_to_dict,
)


class LabelBody(BaseModel):
    identification: str
    disease: str
    annotator_id: str = "anonymous"


def _task_view(task: AnnotationTask, store: RunStore, window_text: str | None) -> dict:
    label = None
    if task.status == "labeled":
        label = {
            "identification": task.identification,
            "disease": task.disease,
            "annotator_id": task.annotator_id,
            "labeled_at": task.labeled_at,
        }
    return {
        "task_id": task.task_id,
        "backend_id": task.backend_id,
        "context_size": task.window_ref[2],
        "window": ref_to_dict(task.window_ref),
        "window_text": window_text,
        "raw_text": task.raw_text,
        "status": task.status,
        "label": label,
    }


def create_app(store: RunStore) -> FastAPI:
    app = FastAPI(title="annotation review", version="1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def window_text_of(state, task: AnnotationTask) -> str | None:
        window = state.windows.get(task.window_ref)
        return window["text"] if window else None

    @app.get("/tasks")
    def list_tasks(
        status: str = Query("pending"),
        backend: str | None = None,
        context: int | None = None,
        page: int = Query(1, ge=1),
        page_size: int = Query(20, ge=1, le=500),
    ):
        state = store.state()
        tasks = sorted(
            (
                task
                for task in state.tasks.values()
                if (status in ("all", task.status))
                and (backend is None or task.backend_id == backend)
                and (context is None or task.window_ref[2] == context)
            ),
            key=lambda t: (t.window_ref, t.backend_id, t.sample_index),
        )
        total = len(tasks)
        start = (page - 1) * page_size
        chunk = tasks[start : start + page_size]
        return {
            "tasks": [_task_view(t, store, window_text_of(state, t)) for t in chunk],
            "total": total,
            "page": page,
            "page_size": page_size,
        }

    @app.get("/tasks/{task_id}")
    def get_task(task_id: str):
        state = store.state()
        task = state.tasks.get(task_id)
        if task is None:
            raise HTTPException(status_code=404, detail=f"no task {task_id!r}")
        return _task_view(task, store, window_text_of(state, task))

    @app.post("/tasks/{task_id}/label")
    def label_task(task_id: str, body: LabelBody):
        try:
            task = submit_label(
                store, task_id, body.identification, body.disease, body.annotator_id
            )
        except TaskNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except TaskConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except InputError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        state = store.state()
        return _task_view(task, store, window_text_of(state, task))

    @app.get("/stats")
    def stats():
        state = store.state()
        report = run_report(store)
        pending = sum(1 for t in state.tasks.values() if t.status == "pending")
        labeled = sum(1 for t in state.tasks.values() if t.status == "labeled")
        return {
            "run_id": store.run_id,
            "compliance": [
                {
                    "backend_id": r.backend_id,
                    "total": r.total,
                    "failures": r.failures,
                    "compliance_rate": r.compliance_rate,
                }
                for r in report.compliance
            ],
            "overall": (
                None
                if report.compliance_overall is None
                else {
                    "backend_id": "overall",
                    "total": report.compliance_overall.total,
                    "failures": report.compliance_overall.failures,
                    "compliance_rate": report.compliance_overall.compliance_rate,
                }
            ),
            "queue": {"pending": pending, "labeled": labeled},
            "coverage": report.coverage,
        }

    @app.get("/meta")
    def meta():
        state = store.state()
        if not state.config:
            raise HTTPException(status_code=404, detail="run has no config yet")
        classes = state.config.get("classes_detail", [])
        return {
            "run_id": store.run_id,
            "classes": classes,
            "label_space": [*state.config["classes"], OTHER],
        }

    return app


def serve_review_api(store: RunStore, host: str = "127.0.0.1", port: int = 8400):
    """Blocking server entry point used by the CLI."""
    import uvicorn

    uvicorn.run(create_app(store), host=host, port=port, log_level="info")
