"""Command-line entry points for the pipeline stages."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from modelvote.backends import record_replay_capture
from modelvote.corpus import (
    FilterConfig,
    InvertedIndex,
    apply_weak_supervision_filters,
    build_inverted_index,
    extract_context_windows,
    generate_synthetic_corpus,
    load_corpus,
    load_term_list,
    select_top_diseases,
    synthetic_term_list,
    write_corpus,
    write_term_list,
)
from modelvote.errors import ModelVoteError
from modelvote.labels import ClassCatalog, default_term_entries
from modelvote.orchestration import (
    RunStore,
    load_run_config,
    run_ablation,
    run_experiment,
    run_report,
    run_ttest,
)
from modelvote.orchestration.api import serve_review_api
from modelvote.orchestration.reporting import ENSEMBLE
from modelvote.parsing import extract_json
from modelvote.prompts import builtin_templates, render_prompt


@click.group()
def main():
    """Ensemble majority-vote prompting pipeline."""


def _fail(exc: Exception):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def _terms(term_path: str | None):
    return load_term_list(term_path) if term_path else default_term_entries()


# ---------------------------------------------------------------- index


@main.group()
def index():
    """Build and filter the inverted index."""


@index.command("build")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--terms", "term_path", type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--workers", default=None, type=int)
@click.option("--kernel", type=click.Choice(["compiled", "python"]), default=None)
def index_build(corpus_path, term_path, out_path, workers, kernel):
    """Match every term against every document and write the index."""
    try:
        corpus = load_corpus(corpus_path)
        terms = _terms(term_path)
        built = build_inverted_index(corpus, terms, workers=workers, kernel=kernel)
    except ModelVoteError as exc:
        _fail(exc)
    built.save(out_path)
    click.echo(f"indexed {built.corpus_size} documents, {len(built.postings)} terms")


@index.command("filter")
@click.option("--index", "index_path", required=True, type=click.Path(exists=True))
@click.option("--min-chars", default=4, show_default=True)
@click.option("--max-df", default=0.005, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def index_filter(index_path, min_chars, max_df, out_path):
    """Apply the term-length and prevalence weak-supervision rules."""
    try:
        built = InvertedIndex.load(index_path)
        cfg = FilterConfig(min_term_chars=min_chars, max_doc_frequency=max_df)
        filtered = apply_weak_supervision_filters(built, cfg)
    except ModelVoteError as exc:
        _fail(exc)
    filtered.save(out_path)
    removed = len(built.postings) - len(filtered.postings)
    click.echo(f"kept {len(filtered.postings)} terms, removed {removed}")


@index.command("top")
@click.option("--index", "index_path", required=True, type=click.Path(exists=True))
@click.option("--terms", "term_path", type=click.Path(exists=True))
@click.option("-k", default=4, show_default=True)
def index_top(index_path, term_path, k):
    """Rank diseases by matched-document count."""
    try:
        built = InvertedIndex.load(index_path)
        ranked = select_top_diseases(built, _terms(term_path), k)
    except ModelVoteError as exc:
        _fail(exc)
    for disease_id in ranked:
        click.echo(disease_id)


# ---------------------------------------------------------------- windows


@main.group()
def windows():
    """Extract fixed-word context windows."""


@windows.command("extract")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--terms", "term_path", type=click.Path(exists=True))
@click.option("--diseases", required=True, help="comma-separated disease ids")
@click.option("--sizes", default="32,64,128,256", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def windows_extract(corpus_path, term_path, diseases, sizes, out_path):
    """One window per (document, disease, size), centered on the mention."""
    try:
        corpus = load_corpus(corpus_path)
        terms = _terms(term_path)
        built = build_inverted_index(corpus, terms)
        wins = extract_context_windows(
            corpus,
            built,
            terms,
            [d.strip() for d in diseases.split(",") if d.strip()],
            [int(s) for s in sizes.split(",")],
        )
    except ModelVoteError as exc:
        _fail(exc)
    with open(out_path, "w", encoding="utf-8") as fh:
        for win in wins:
            fh.write(json.dumps({
                "doc_id": win.doc_id,
                "disease_id": win.disease_id,
                "window_words": win.window_words,
                "text": win.text,
                "gold_identification": win.gold_identification,
                "gold_disease": win.gold_disease,
            }) + "\n")
    click.echo(f"wrote {len(wins)} windows")


# ---------------------------------------------------------------- synth


@main.group()
def synth():
    """Generate seeded synthetic fixtures."""


@synth.command("corpus")
@click.option("--seed", default=0, show_default=True)
@click.option("--docs", "n_docs", default=100, show_default=True)
@click.option("--terms", "term_path", type=click.Path(exists=True))
@click.option("--positive-rate", default=0.5, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--gold-out", "gold_path", type=click.Path())
def synth_corpus(seed, n_docs, term_path, positive_rate, out_path, gold_path):
    """Deterministic synthetic notes with one disease mention each."""
    try:
        terms = _terms(term_path)
        docs, gold = generate_synthetic_corpus(seed, n_docs, terms, positive_rate)
    except ModelVoteError as exc:
        _fail(exc)
    write_corpus(docs, out_path)
    if gold_path:
        with open(gold_path, "w", encoding="utf-8") as fh:
            for doc_id, label in gold.items():
                fh.write(json.dumps({
                    "doc_id": doc_id,
                    "identification": label.identification,
                    "disease": label.disease_id,
                }) + "\n")
    click.echo(f"wrote {len(docs)} documents")


@synth.command("terms")
@click.option("--count", default=50, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def synth_terms(count, seed, out_path):
    """Invented disease term list for index stress tests."""
    write_term_list(synthetic_term_list(count, seed), out_path)
    click.echo(f"wrote {count} terms")


# ---------------------------------------------------------------- prompt


@main.group()
def prompt():
    """Render prompts from templates."""


@prompt.command("render")
@click.option("--family", default="alpaca-style", show_default=True)
@click.option("--windows", "windows_path", required=True, type=click.Path(exists=True))
@click.option("--window", "window_index", default=0, show_default=True,
              help="index of the window record to render")
def prompt_render(family, windows_path, window_index):
    """Render one window through a builtin template family."""
    from modelvote.corpus.windows import ContextWindow

    try:
        records = [
            json.loads(line)
            for line in Path(windows_path).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        record = records[window_index]
        win = ContextWindow(
            doc_id=record["doc_id"],
            disease_id=record["disease_id"],
            window_words=record["window_words"],
            text=record["text"],
        )
        templates = builtin_templates()
        if family not in templates:
            raise ModelVoteError(f"unknown family {family!r}")
        rendered = render_prompt(templates[family], win)
    except (ModelVoteError, IndexError, KeyError) as exc:
        _fail(exc)
    click.echo(rendered.text)
    click.echo(f"# content_hash: {rendered.content_hash}", err=True)


# ---------------------------------------------------------------- parse


@main.group()
def parse():
    """Extract structured answers from generations."""


@parse.command("extract")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--terms", "term_path", type=click.Path(exists=True))
def parse_extract(in_path, term_path):
    """Classify each generation line and print extraction records."""
    try:
        catalog = ClassCatalog.from_terms(_terms(term_path))
    except ModelVoteError as exc:
        _fail(exc)
    with open(in_path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            result = extract_json(record["raw_text"], catalog)
            out = {"status": result.status}
            if result.answer:
                out["identification"] = result.answer.identification
                out["disease"] = result.answer.disease_label
            for key in ("backend_id", "prompt_hash"):
                if key in record:
                    out[key] = record[key]
            click.echo(json.dumps(out))


# ---------------------------------------------------------------- run / serve


@main.command("run")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--store", "store_root", default="runs", show_default=True,
              type=click.Path())
def run_cmd(config_path, store_root):
    """Run (or resume) an experiment from a config file."""
    try:
        cfg = load_run_config(config_path)
        record = run_experiment(cfg, store_root)
    except ModelVoteError as exc:
        _fail(exc)
    click.echo(
        f"run {record.run_id}: {len(record.entries)} generations, "
        f"coverage {record.coverage['complete']}/{record.coverage['total']}"
    )


@main.group()
def annotate():
    """Human annotation queue."""


@annotate.command("serve")
@click.option("--store", "store_root", default="runs", show_default=True,
              type=click.Path(exists=True))
@click.option("--run", "run_id", required=True)
@click.option("--addr", default="127.0.0.1:8400", show_default=True)
def annotate_serve(store_root, run_id, addr):
    """Serve the review API for a run."""
    try:
        store = RunStore(store_root, run_id)
    except ModelVoteError as exc:
        _fail(exc)
    host, _, port = addr.partition(":")
    serve_review_api(store, host=host or "127.0.0.1", port=int(port or 8400))


@annotate.command("export")
@click.option("--store", "store_root", default="runs", show_default=True,
              type=click.Path(exists=True))
@click.option("--run", "run_id", required=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--status", type=click.Choice(["labeled", "pending", "all"]),
              default="labeled", show_default=True)
def annotate_export(store_root, run_id, out_path, status):
    """Dump annotation tasks as line-delimited JSON (for offline agreement)."""
    try:
        state = RunStore(store_root, run_id).state()
    except ModelVoteError as exc:
        _fail(exc)
    tasks = sorted(
        (t for t in state.tasks.values() if status in ("all", t.status)),
        key=lambda t: (t.window_ref, t.backend_id, t.sample_index),
    )
    with open(out_path, "w", encoding="utf-8") as fh:
        for task in tasks:
            fh.write(json.dumps({
                "task_id": task.task_id,
                "backend_id": task.backend_id,
                "doc_id": task.window_ref[0],
                "disease_id": task.window_ref[1],
                "window_words": task.window_ref[2],
                "status": task.status,
                "identification": task.identification,
                "disease": task.disease,
                "annotator_id": task.annotator_id,
            }) + "\n")
    click.echo(f"exported {len(tasks)} task(s)")


# ---------------------------------------------------------------- eval


@main.group(name="eval")
def eval_group():
    """Reports, ablations, significance tests."""


@eval_group.command("report")
@click.option("--store", "store_root", default="runs", show_default=True,
              type=click.Path(exists=True))
@click.option("--run", "run_id", required=True)
@click.option("--json", "as_json", is_flag=True, help="emit line-delimited JSON rows")
def eval_report(store_root, run_id, as_json):
    """APRF per model and for the ensemble, plus compliance and coverage."""
    from modelvote.evaluation.tables import format_table, rows_to_jsonl

    try:
        report = run_report(RunStore(store_root, run_id))
    except ModelVoteError as exc:
        _fail(exc)
    if as_json:
        if report.rows:
            click.echo(rows_to_jsonl(report.rows), nl=False)
        return
    if report.rows:
        click.echo(format_table(report.rows), nl=False)
    click.echo("")
    for record in report.compliance:
        click.echo(
            f"compliance {record.backend_id}: {record.failures}/{record.total} "
            f"failures ({record.percent:.1f}% compliant)"
        )
    if report.compliance_overall is not None:
        overall = report.compliance_overall
        click.echo(
            f"compliance overall: {overall.failures}/{overall.total} failures "
            f"({overall.percent:.1f}% compliant)"
        )
    for slot, cov in report.coverage.items():
        click.echo(f"coverage {slot}: {cov['complete']}/{cov['total']}")
    click.echo(f"pending annotation tasks: {report.pending_tasks}")


@eval_group.command("ablate")
@click.option("--store", "store_root", default="runs", show_default=True,
              type=click.Path(exists=True))
@click.option("--run", "run_id", required=True)
@click.option("--task", type=click.Choice(["identification", "classification"]),
              default="identification", show_default=True)
@click.option("--context", "context_size", required=True, type=int)
def eval_ablate(store_root, run_id, task, context_size):
    """Leave-one-out ablation of the ensemble."""
    try:
        report = run_ablation(RunStore(store_root, run_id), task, context_size)
    except ModelVoteError as exc:
        _fail(exc)
    base = report.baseline
    click.echo(f"{'(none removed)':<18} " + " ".join(f"{v:.3f}" for v in base.as_tuple()))
    for member, scores in sorted(report.rows.items()):
        click.echo(f"-{member:<17} " + " ".join(f"{v:.3f}" for v in scores.as_tuple()))


@eval_group.command("kappa")
@click.option("--a", "path_a", required=True, type=click.Path(exists=True),
              help="first annotator's labels, one per line (or JSONL)")
@click.option("--b", "path_b", required=True, type=click.Path(exists=True))
@click.option("--field", default=None,
              help="for JSONL inputs, which field holds the label")
def eval_kappa(path_a, path_b, field):
    """Inter-annotator agreement on two exported label files, paired by line."""
    from modelvote.evaluation import cohens_kappa

    def read_labels(path):
        labels = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            if field is not None:
                record = json.loads(line)
                labels.append(str(record[field]))
            else:
                labels.append(line)
        return labels

    try:
        result = cohens_kappa(read_labels(path_a), read_labels(path_b))
    except (ModelVoteError, KeyError, json.JSONDecodeError) as exc:
        _fail(exc)
    click.echo(
        f"p_o = {result.p_o:.6g}, p_e = {result.p_e:.6g}, kappa = {result.kappa:.6g}"
    )


@eval_group.command("ttest")
@click.option("--store", "store_root", default="runs", show_default=True,
              type=click.Path(exists=True))
@click.option("--a", "run_a", required=True, help="run id, optionally run:member")
@click.option("--b", "run_b", required=True, help="run id, optionally run:member")
@click.option("--task", type=click.Choice(["identification", "classification"]),
              default="identification", show_default=True)
@click.option("--context", "context_size", required=True, type=int)
def eval_ttest(store_root, run_a, run_b, task, context_size):
    """Paired t-test between two scored output streams."""
    def split(spec: str):
        run_id, _, member = spec.partition(":")
        return run_id, member or ENSEMBLE

    try:
        id_a, member_a = split(run_a)
        id_b, member_b = split(run_b)
        result = run_ttest(
            RunStore(store_root, id_a),
            RunStore(store_root, id_b),
            task,
            context_size,
            member_a=member_a,
            member_b=member_b,
        )
    except ModelVoteError as exc:
        _fail(exc)
    click.echo(
        f"t = {result.t_statistic:.6g}, df = {result.degrees_of_freedom}, "
        f"p = {result.p_value:.6g}"
    )
    click.echo(
        "significant at 0.05" if result.p_value < 0.05 else "not significant at 0.05"
    )


# ---------------------------------------------------------------- capture


@main.command("capture")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--store", "store_root", default="runs", show_default=True,
              type=click.Path(exists=True))
@click.option("--backend", "backend_id", required=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def capture(config_path, store_root, backend_id, out_path):
    """Record one backend's answers for a run's prompts into a replay archive."""
    try:
        cfg = load_run_config(config_path)
        store = RunStore(store_root, cfg.run_id)
        state = store.state()
        spec = next(b for b in cfg.backends if b.backend_id == backend_id)

        # scripted mocks need the same gold wiring the runner applies
        from modelvote.labels import ClassCatalog
        from modelvote.orchestration.experiment import _load_inputs, _wire_mock

        _corpus, class_terms, gold = _load_inputs(cfg)
        spec = _wire_mock(spec, gold, ClassCatalog.from_terms(class_terms))
        from modelvote.prompts import RenderedPrompt

        prompts = [
            RenderedPrompt(
                text=record["text"],
                template_id=record["template_id"],
                window_ref=ref,
                content_hash=record["prompt_hash"],
            )
            for (bid, ref), record in sorted(state.prompts.items())
            if bid == backend_id
        ]
        archive = record_replay_capture(spec, prompts, out_path)
    except (ModelVoteError, StopIteration) as exc:
        _fail(exc if not isinstance(exc, StopIteration) else
              ModelVoteError(f"unknown backend {backend_id!r}"))
    click.echo(f"captured {len(archive)} prompts to {out_path}")


if __name__ == "__main__":
    main()
