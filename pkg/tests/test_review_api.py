from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from modelvote.backends import BackendSpec, MockScript
from modelvote.orchestration import RunConfig, RunStore, SyntheticSpec, run_experiment
from modelvote.orchestration.api import create_app
from modelvote.orchestration.reporting import run_report

CLASSES = ("B", "GCA", "GVHD", "COP")


@pytest.fixture
def served_run(tmp_path):
    backends = (
        BackendSpec(backend_id="good1", kind="mock", script=MockScript()),
        BackendSpec(backend_id="good2", kind="mock", script=MockScript()),
        BackendSpec(backend_id="good3", kind="mock", script=MockScript()),
        BackendSpec(
            backend_id="messy",
            kind="mock",
            script=MockScript(behavior="non-compliant-rate", non_compliant_rate=1.0),
        ),
    )
    cfg = RunConfig(
        run_id="review",
        classes=CLASSES,
        context_sizes=(16,),
        backends=backends,
        synthetic=SyntheticSpec(n_docs=8, positive_rate=0.5),
        seed=5,
    )
    run_experiment(cfg, tmp_path)
    store = RunStore(tmp_path, "review")
    return store, TestClient(create_app(store))


class TestTaskListing:
    def test_pending_queue_lists_all_failures(self, served_run):
        _, client = served_run
        payload = client.get("/tasks").json()
        assert payload["total"] == 8
        assert all(t["status"] == "pending" for t in payload["tasks"])
        assert all(t["backend_id"] == "messy" for t in payload["tasks"])

    def test_pagination(self, served_run):
        _, client = served_run
        page1 = client.get("/tasks", params={"page": 1, "page_size": 3}).json()
        page2 = client.get("/tasks", params={"page": 2, "page_size": 3}).json()
        page3 = client.get("/tasks", params={"page": 3, "page_size": 3}).json()
        ids = [t["task_id"] for p in (page1, page2, page3) for t in p["tasks"]]
        assert len(ids) == 8
        assert len(set(ids)) == 8
        assert page1["total"] == 8

    def test_backend_filter(self, served_run):
        _, client = served_run
        none = client.get("/tasks", params={"backend": "good1"}).json()
        assert none["total"] == 0
        some = client.get("/tasks", params={"backend": "messy"}).json()
        assert some["total"] == 8

    def test_context_filter(self, served_run):
        _, client = served_run
        hit = client.get("/tasks", params={"context": 16}).json()
        miss = client.get("/tasks", params={"context": 64}).json()
        assert hit["total"] == 8 and miss["total"] == 0

    def test_empty_queue_when_no_failures(self, tmp_path):
        cfg = RunConfig(
            run_id="clean",
            classes=CLASSES,
            context_sizes=(16,),
            backends=tuple(
                BackendSpec(backend_id=f"m{i}", kind="mock", script=MockScript())
                for i in range(4)
            ),
            synthetic=SyntheticSpec(n_docs=4, positive_rate=0.5),
            seed=6,
        )
        run_experiment(cfg, tmp_path)
        client = TestClient(create_app(RunStore(tmp_path, "clean")))
        payload = client.get("/tasks").json()
        assert payload == {"tasks": [], "total": 0, "page": 1, "page_size": 20}


class TestTaskDetail:
    def test_fetch_one_task_with_window_and_generation(self, served_run):
        _, client = served_run
        task = client.get("/tasks").json()["tasks"][0]
        detail = client.get(f"/tasks/{task['task_id']}").json()
        assert detail["task_id"] == task["task_id"]
        assert detail["window_text"]
        assert detail["raw_text"]
        assert detail["window"]["window_words"] == 16

    def test_unknown_task_404(self, served_run):
        _, client = served_run
        assert client.get("/tasks/doesnotexist").status_code == 404


class TestLabeling:
    def test_post_label_then_get_shows_labeled(self, served_run):
        _, client = served_run
        task_id = client.get("/tasks").json()["tasks"][0]["task_id"]
        response = client.post(
            f"/tasks/{task_id}/label",
            json={"identification": "no", "disease": "Other", "annotator_id": "ann1"},
        )
        assert response.status_code == 200
        assert response.json()["status"] == "labeled"

        detail = client.get(f"/tasks/{task_id}").json()
        assert detail["status"] == "labeled"
        assert detail["label"]["identification"] == "no"
        assert detail["label"]["annotator_id"] == "ann1"

        pending = client.get("/tasks").json()
        assert pending["total"] == 7

    def test_double_submit_one_success_one_conflict(self, served_run):
        _, client = served_run
        task_id = client.get("/tasks").json()["tasks"][0]["task_id"]
        body = {"identification": "yes", "disease": "B", "annotator_id": "first"}
        first = client.post(f"/tasks/{task_id}/label", json=body)
        second = client.post(
            f"/tasks/{task_id}/label",
            json={"identification": "no", "disease": "Other", "annotator_id": "second"},
        )
        assert first.status_code == 200
        assert second.status_code == 409
        assert client.get(f"/tasks/{task_id}").json()["label"]["annotator_id"] == "first"

    def test_invalid_label_rejected_422(self, served_run):
        _, client = served_run
        task_id = client.get("/tasks").json()["tasks"][0]["task_id"]
        bad_disease = client.post(
            f"/tasks/{task_id}/label",
            json={"identification": "yes", "disease": "Lupus", "annotator_id": "x"},
        )
        assert bad_disease.status_code == 422
        bad_identification = client.post(
            f"/tasks/{task_id}/label",
            json={"identification": "perhaps", "disease": "B", "annotator_id": "x"},
        )
        assert bad_identification.status_code == 422

    def test_label_completes_ballot_and_changes_report(self, served_run):
        store, client = served_run
        before = run_report(store)
        assert before.coverage["identification@16"]["complete"] == 0

        for task in client.get("/tasks", params={"page_size": 100}).json()["tasks"]:
            response = client.post(
                f"/tasks/{task['task_id']}/label",
                json={"identification": "no", "disease": "Other", "annotator_id": "a"},
            )
            assert response.status_code == 200

        after = run_report(store)
        assert after.coverage["identification@16"]["complete"] == 8
        assert after.pending_tasks == 0


class TestStatsAndMeta:
    def test_stats_match_compliance_report_exactly(self, served_run):
        store, client = served_run
        stats = client.get("/stats").json()
        report = run_report(store)
        by_backend = {r["backend_id"]: r for r in stats["compliance"]}
        for record in report.compliance:
            assert by_backend[record.backend_id]["failures"] == record.failures
            assert by_backend[record.backend_id]["total"] == record.total
        assert stats["overall"]["failures"] == report.compliance_overall.failures
        assert stats["queue"] == {"pending": 8, "labeled": 0}

    def test_meta_exposes_label_space_and_synonyms(self, served_run):
        _, client = served_run
        meta = client.get("/meta").json()
        assert meta["label_space"] == ["B", "GCA", "GVHD", "COP", "Other"]
        by_id = {c["disease_id"]: c for c in meta["classes"]}
        assert by_id["GCA"]["label"] == "Giant Cell Arteritis"
        assert "temporal arteritis" in by_id["GCA"]["synonyms"]
