from __future__ import annotations

import pytest

from modelvote.corpus import Document, TermEntry, load_corpus, load_term_list
from modelvote.corpus.documents import CorpusFormatError, DuplicateIdError


def write(tmp_path, name, content):
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    return path


class TestLoadCorpus:
    def test_empty_file_gives_empty_corpus(self, tmp_path):
        assert load_corpus(write(tmp_path, "c.jsonl", "")) == []

    def test_three_records_in_input_order(self, tmp_path):
        path = write(
            tmp_path,
            "c.jsonl",
            '{"doc_id": "a", "text": "first note"}\n'
            '{"doc_id": "b", "text": "second note"}\n'
            '{"doc_id": "c", "text": "third note"}\n',
        )
        docs = load_corpus(path)
        assert [d.doc_id for d in docs] == ["a", "b", "c"]
        assert docs[1].text == "second note"

    def test_missing_text_field_names_line(self, tmp_path):
        path = write(
            tmp_path,
            "c.jsonl",
            '{"doc_id": "a", "text": "ok"}\n{"doc_id": "b"}\n',
        )
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_corpus(path)

    def test_invalid_json_names_line(self, tmp_path):
        path = write(tmp_path, "c.jsonl", "not json\n")
        with pytest.raises(CorpusFormatError, match="line 1"):
            load_corpus(path)

    def test_duplicate_doc_id_rejected(self, tmp_path):
        path = write(
            tmp_path,
            "c.jsonl",
            '{"doc_id": "a", "text": "x"}\n{"doc_id": "a", "text": "y"}\n',
        )
        with pytest.raises(DuplicateIdError):
            load_corpus(path)

    def test_empty_text_rejected(self, tmp_path):
        path = write(tmp_path, "c.jsonl", '{"doc_id": "a", "text": ""}\n')
        with pytest.raises(CorpusFormatError):
            load_corpus(path)


class TestLoadTermList:
    def test_row_with_synonyms(self, tmp_path):
        path = write(tmp_path, "t.tsv", "B\tBabesiosis\tbabesiosis|babesia infection\n")
        entries = load_term_list(path)
        assert entries == [
            TermEntry("B", "Babesiosis", ("babesiosis", "babesia infection"))
        ]
        assert len(entries[0].synonyms) == 2

    def test_empty_file(self, tmp_path):
        assert load_term_list(write(tmp_path, "t.tsv", "")) == []

    def test_duplicate_disease_id_rejected(self, tmp_path):
        path = write(tmp_path, "t.tsv", "B\tBabesiosis\nB\tBabesia\n")
        with pytest.raises(DuplicateIdError):
            load_term_list(path)

    def test_empty_label_rejected(self, tmp_path):
        path = write(tmp_path, "t.tsv", "B\t\t\n")
        with pytest.raises(CorpusFormatError, match="line 1"):
            load_term_list(path)

    def test_duplicate_synonyms_after_casefold_rejected(self):
        with pytest.raises(Exception):
            TermEntry("B", "Babesiosis", ("Babesia", "babesia"))


def test_document_invariants():
    with pytest.raises(Exception):
        Document(doc_id="", text="x")
    with pytest.raises(Exception):
        Document(doc_id="a", text="")


def test_all_terms_dedupes_case_insensitively():
    entry = TermEntry("B", "Babesiosis", ("BABESIOSIS", "babesia infection"))
    assert entry.all_terms() == ("Babesiosis", "babesia infection")
