from __future__ import annotations

import json

import httpx
import pytest

from modelvote.backends import (
    ArchiveCollisionError,
    BackendSpec,
    BackendUnavailableError,
    CredentialError,
    MockScript,
    ReplayArchive,
    ReplayMissError,
    generate,
    generate_batch,
    record_replay_capture,
)
from modelvote.backends.live import generate_live
from modelvote.errors import InputError
from modelvote.prompts import RenderedPrompt


def mkprompt(text: str, doc: str = "doc-1", disease: str = "B") -> RenderedPrompt:
    return RenderedPrompt(
        text=text,
        template_id="custom:000000000000",
        window_ref=(doc, disease, 32),
        content_hash=RenderedPrompt.hash_text(text),
    )


GOLD = {"doc-1": (True, "Babesiosis"), "doc-2": (False, "Giant Cell Arteritis")}


def mock_spec(backend_id="m1", **script_kw) -> BackendSpec:
    script_kw.setdefault("gold_source", GOLD)
    return BackendSpec(backend_id=backend_id, kind="mock", script=MockScript(**script_kw))


class TestMockBackend:
    def test_always_correct_repeats_gold(self):
        result = generate(mock_spec(), mkprompt("p1"))
        assert json.loads(result.raw_text) == {"answer": "yes", "disease": "Babesiosis"}

    def test_always_correct_negative_gold(self):
        result = generate(mock_spec(), mkprompt("p2", doc="doc-2"))
        assert json.loads(result.raw_text) == {
            "answer": "no",
            "disease": "Giant Cell Arteritis",
        }

    def test_always_wrong_flips_and_mislabels(self):
        result = generate(mock_spec(behavior="always-wrong"), mkprompt("p1"))
        parsed = json.loads(result.raw_text)
        assert parsed["answer"] == "no"
        assert parsed["disease"] != "Babesiosis"

    def test_accuracy_draws_are_seed_deterministic(self):
        spec_a = mock_spec(behavior="accuracy", accuracy=0.5, seed=3)
        spec_b = mock_spec(behavior="accuracy", accuracy=0.5, seed=3)
        prompts = [mkprompt(f"p{i}") for i in range(40)]
        texts_a = [generate(spec_a, p).raw_text for p in prompts]
        texts_b = [generate(spec_b, p).raw_text for p in reversed(prompts)]
        assert texts_a == list(reversed(texts_b))

    def test_accuracy_rate_is_roughly_honored(self):
        spec = mock_spec(behavior="accuracy", accuracy=0.8, seed=1)
        prompts = [mkprompt(f"p{i}") for i in range(500)]
        correct = sum(
            json.loads(generate(spec, p).raw_text)["answer"] == "yes" for p in prompts
        )
        assert 350 <= correct <= 450  # 0.8 +/- wide slack on 500 draws

    def test_sample_index_changes_the_draw(self):
        spec = mock_spec(behavior="accuracy", accuracy=0.5, seed=7)
        prompt = mkprompt("same prompt")
        texts = {generate(spec, prompt, sample_index=i).raw_text for i in range(32)}
        assert len(texts) > 1

    def test_non_compliant_rate_emits_prose(self):
        spec = mock_spec(behavior="non-compliant-rate", non_compliant_rate=1.0)
        result = generate(spec, mkprompt("p1"))
        assert "{" not in result.raw_text
        assert "B" in result.raw_text

    def test_canned_map_exact_lookup(self):
        prompt = mkprompt("hello")
        spec = BackendSpec(
            backend_id="c",
            kind="mock",
            script=MockScript(behavior="canned", canned={prompt.content_hash: "scripted"}),
        )
        assert generate(spec, prompt).raw_text == "scripted"
        with pytest.raises(InputError):
            generate(spec, mkprompt("other"))

    def test_unknown_behavior_rejected(self):
        with pytest.raises(InputError):
            MockScript(behavior="chaotic")


class TestBackendSpecValidation:
    def test_live_requires_endpoint(self):
        with pytest.raises(InputError):
            BackendSpec(backend_id="x", kind="live")

    def test_mock_refuses_endpoint(self):
        with pytest.raises(InputError):
            BackendSpec(backend_id="x", kind="mock", endpoint="http://h")

    def test_max_tokens_positive(self):
        with pytest.raises(InputError):
            BackendSpec(backend_id="x", max_tokens=0)


class TestGenerateBatch:
    def test_cardinality_and_distinct_keys(self):
        specs = [mock_spec(backend_id=f"m{i}") for i in range(4)]
        prompts = [mkprompt("a"), mkprompt("b")]
        items = generate_batch(specs, prompts, parallelism=3)
        assert len(items) == 8
        assert len({item.key for item in items}) == 8
        assert all(item.result is not None for item in items)

    def test_parallelism_does_not_change_results(self):
        specs = [
            mock_spec(backend_id=f"m{i}", behavior="accuracy", accuracy=0.6, seed=i)
            for i in range(4)
        ]
        prompts = [mkprompt(f"p{i}") for i in range(10)]
        serial = generate_batch(specs, prompts, parallelism=1)
        wide = generate_batch(specs, prompts, parallelism=8)
        assert serial == wide

    def test_partial_failure_is_per_pair(self):
        broken = BackendSpec(
            backend_id="broken",
            kind="mock",
            script=MockScript(behavior="canned", canned={}),
        )
        specs = [mock_spec(backend_id=f"m{i}") for i in range(3)] + [broken]
        prompts = [mkprompt("a"), mkprompt("b")]
        items = generate_batch(specs, prompts, parallelism=4)
        failures = [item for item in items if item.error]
        successes = [item for item in items if item.result]
        assert len(failures) == 2
        assert len(successes) == 6
        assert all(item.backend_id == "broken" for item in failures)


class TestReplay:
    def test_capture_then_replay_round_trip(self, tmp_path):
        prompts = [mkprompt(f"p{i}") for i in range(5)]
        source = mock_spec(backend_id="src")
        archive_path = tmp_path / "run.jsonl"
        archive = record_replay_capture(source, prompts, archive_path)
        assert len(archive) == 5

        replay_spec = BackendSpec(
            backend_id="src", kind="replay", archive_path=str(archive_path)
        )
        for prompt in prompts:
            live = generate(source, prompt)
            replayed = generate(replay_spec, prompt)
            assert replayed.raw_text == live.raw_text
            assert replayed.prompt_hash == live.prompt_hash

    def test_missing_entry_errors(self, tmp_path):
        archive_path = tmp_path / "run.jsonl"
        record_replay_capture(mock_spec(), [mkprompt("known")], archive_path)
        replay_spec = BackendSpec(
            backend_id="m1", kind="replay", archive_path=str(archive_path)
        )
        with pytest.raises(ReplayMissError):
            generate(replay_spec, mkprompt("unknown"))

    def test_collision_detected_on_load(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            json.dumps({"prompt_hash": "h", "backend_id": "b", "raw_text": "one"})
            + "\n"
            + json.dumps({"prompt_hash": "h", "backend_id": "b", "raw_text": "two"})
            + "\n",
            encoding="utf-8",
        )
        with pytest.raises(ArchiveCollisionError):
            ReplayArchive.load(path)

    def test_archive_round_trips_through_disk(self, tmp_path):
        prompts = [mkprompt(f"p{i}") for i in range(3)]
        path = tmp_path / "a.jsonl"
        archive = record_replay_capture(mock_spec(), prompts, path)
        assert ReplayArchive.load(path).entries == archive.entries


def live_spec(**kw) -> BackendSpec:
    kw.setdefault("endpoint", "https://models.example/v1/chat/completions")
    kw.setdefault("credentials_ref", "")
    return BackendSpec(backend_id="llama-2-13b", kind="live", **kw)


def chat_payload(text="ok"):
    return {"choices": [{"message": {"role": "assistant", "content": text}}]}


class TestLiveBackend:
    def test_request_carries_max_tokens_1024_and_temperature_0_by_default(self):
        seen = {}

        def handler(request: httpx.Request) -> httpx.Response:
            seen.update(json.loads(request.content))
            return httpx.Response(200, json=chat_payload("hi"))

        client = httpx.Client(transport=httpx.MockTransport(handler))
        result = generate_live(live_spec(), mkprompt("question"), client=client)
        assert seen["max_tokens"] == 1024
        assert seen["temperature"] == 0.0
        assert seen["model"] == "llama-2-13b"
        assert seen["messages"] == [{"role": "user", "content": "question"}]
        assert result.raw_text == "hi"
        assert result.attempt_count == 1

    def test_retries_transient_failures_then_succeeds(self):
        calls = []

        def handler(request: httpx.Request) -> httpx.Response:
            calls.append(1)
            if len(calls) < 3:
                return httpx.Response(503)
            return httpx.Response(200, json=chat_payload("eventually"))

        client = httpx.Client(transport=httpx.MockTransport(handler))
        naps = []
        result = generate_live(
            live_spec(), mkprompt("q"), client=client, sleeper=naps.append
        )
        assert result.raw_text == "eventually"
        assert result.attempt_count == 3
        assert naps == [0.5, 1.0]

    def test_gives_up_after_retry_budget(self):
        client = httpx.Client(
            transport=httpx.MockTransport(lambda r: httpx.Response(503))
        )
        with pytest.raises(BackendUnavailableError, match="3 attempts"):
            generate_live(live_spec(), mkprompt("q"), client=client, sleeper=lambda s: None)

    def test_auth_failure_is_credential_error_without_secret(self, monkeypatch):
        monkeypatch.setenv("MODEL_KEY", "hunter2-very-secret")
        client = httpx.Client(
            transport=httpx.MockTransport(lambda r: httpx.Response(401))
        )
        with pytest.raises(CredentialError) as excinfo:
            generate_live(
                live_spec(credentials_ref="MODEL_KEY"),
                mkprompt("q"),
                client=client,
            )
        assert "hunter2" not in str(excinfo.value)

    def test_missing_credential_env_var(self, monkeypatch):
        monkeypatch.delenv("MODEL_KEY", raising=False)
        with pytest.raises(CredentialError, match="MODEL_KEY"):
            generate_live(live_spec(credentials_ref="MODEL_KEY"), mkprompt("q"))

    def test_secret_sent_as_bearer_but_never_surfaced(self, monkeypatch):
        monkeypatch.setenv("MODEL_KEY", "s3cr3t-token")
        seen_auth = []

        def handler(request: httpx.Request) -> httpx.Response:
            seen_auth.append(request.headers.get("authorization"))
            return httpx.Response(400)

        client = httpx.Client(transport=httpx.MockTransport(handler))
        with pytest.raises(BackendUnavailableError) as excinfo:
            generate_live(
                live_spec(credentials_ref="MODEL_KEY"), mkprompt("q"), client=client
            )
        assert seen_auth == ["Bearer s3cr3t-token"]
        assert "s3cr3t" not in str(excinfo.value)

    def test_legacy_completions_payload_supported(self):
        client = httpx.Client(
            transport=httpx.MockTransport(
                lambda r: httpx.Response(200, json={"choices": [{"text": "plain"}]})
            )
        )
        result = generate_live(live_spec(), mkprompt("q"), client=client)
        assert result.raw_text == "plain"
