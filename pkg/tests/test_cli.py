import json
from pathlib import Path

import pytest

from polyrec.cli import main
from polyrec.synth import SynthParams, generate, write_collection


@pytest.fixture(scope="module")
def collection_dir(tmp_path_factory):
    directory = tmp_path_factory.mktemp("collection")
    params = SynthParams(topic_count=6, docs_per_topic=5, distractor_docs=12, seed=9)
    documents, topics, qrels = generate(params)
    write_collection(documents, topics, qrels, directory)
    return directory


def run_cli(capsys, args):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSynthCommand:
    def test_deterministic_across_invocations(self, tmp_path, capsys):
        args = ["synth", "--topic-count", "3", "--docs-per-topic", "3",
                "--distractor-docs", "4", "--seed", "42"]
        code_a, _, _ = run_cli(capsys, args + ["--out", str(tmp_path / "a")])
        code_b, _, _ = run_cli(capsys, args + ["--out", str(tmp_path / "b")])
        assert code_a == 0 and code_b == 0
        for name in ("corpus.jsonl", "topics.tsv", "qrels.txt"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_zero_topics_writes_empty_files(self, tmp_path, capsys):
        code, _, _ = run_cli(capsys, [
            "synth", "--topic-count", "0", "--out", str(tmp_path / "empty")])
        assert code == 0
        for name in ("corpus.jsonl", "topics.tsv", "qrels.txt"):
            assert (tmp_path / "empty" / name).read_text() == ""

    def test_invalid_probability_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            main(["synth", "--term-noise", "1.5", "--out", str(tmp_path)])
        assert excinfo.value.code == 2


class TestSuggestCommand:
    def test_topical_authors_rank_first(self, collection_dir, capsys):
        topic_line = (collection_dir / "topics.tsv").read_text().splitlines()[0]
        _tid, query = topic_line.split("\t")
        code, out, _ = run_cli(capsys, [
            "suggest", "--corpus", str(collection_dir / "corpus.jsonl"),
            "--query", query, "--kind", "author"])
        assert code == 0
        first_entity, kind, score = out.splitlines()[0].split("\t")
        assert kind == "author"
        assert first_entity.startswith("surname000")
        assert float(score) > 0

    def test_n_caps_output(self, collection_dir, capsys):
        code, out, _ = run_cli(capsys, [
            "suggest", "--corpus", str(collection_dir / "corpus.jsonl"),
            "--query", "topic000term00", "--kind", "controlled_term", "--n", "1"])
        assert code == 0
        assert len(out.splitlines()) == 1

    def test_stopword_only_query_fails(self, collection_dir, capsys):
        code, _, err = run_cli(capsys, [
            "suggest", "--corpus", str(collection_dir / "corpus.jsonl"),
            "--query", "the and of"])
        assert code == 1
        assert "empty" in err

    def test_score_has_six_decimals(self, collection_dir, capsys):
        _, out, _ = run_cli(capsys, [
            "suggest", "--corpus", str(collection_dir / "corpus.jsonl"),
            "--query", "topic000term00", "--kind", "author"])
        score = out.splitlines()[0].split("\t")[2]
        assert len(score.split(".")[1]) == 6


class TestSearchCommand:
    def test_single_doc_single_result(self, tmp_path, capsys):
        corpus = tmp_path / "one.jsonl"
        corpus.write_text(json.dumps({
            "doc_id": "d1", "title": "retirement", "abstract": "",
            "controlled_terms": [], "authors": []}) + "\n", encoding="utf-8")
        code, out, _ = run_cli(capsys, [
            "search", "--corpus", str(corpus), "--query", "retirement", "--config", "b"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "TI/AB = (retirement)"
        assert lines[1].startswith("1\td1\t")

    def test_full_config_prints_three_group_lines(self, collection_dir, capsys):
        code, out, _ = run_cli(capsys, [
            "search", "--corpus", str(collection_dir / "corpus.jsonl"),
            "--query", "topic000term00 topic000term01", "--config", "b+te+ae"])
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("TI/AB = (")
        assert lines[1].startswith("OR CT = (")
        assert lines[2].startswith("OR AU = (")

    def test_k_caps_results(self, collection_dir, capsys):
        code, out, _ = run_cli(capsys, [
            "search", "--corpus", str(collection_dir / "corpus.jsonl"),
            "--query", "topic000term00", "--config", "b", "--k", "5"])
        assert code == 0
        result_lines = [l for l in out.splitlines() if "\t" in l]
        assert len(result_lines) <= 5


class TestIndexCommand:
    def test_reports_statistics(self, collection_dir, capsys):
        code, out, _ = run_cli(capsys, [
            "index", "--corpus", str(collection_dir / "corpus.jsonl")])
        assert code == 0
        assert out.splitlines()[0] == "documents: 42"
        assert any(line.startswith("field TI:") for line in out.splitlines())


class TestExperimentCommand:
    def test_full_experiment_outputs(self, collection_dir, tmp_path, capsys):
        out_dir = tmp_path / "exp"
        code, out, _ = run_cli(capsys, [
            "experiment",
            "--corpus", str(collection_dir / "corpus.jsonl"),
            "--topics", str(collection_dir / "topics.tsv"),
            "--qrels", str(collection_dir / "qrels.txt"),
            "--out", str(out_dir), "--k", "100"])
        assert code == 0
        for tag in ("b", "b+te", "b+ae", "b+te+ae"):
            assert (out_dir / f"{tag}.run").exists()
        table = (out_dir / "table.txt").read_text()
        assert table.splitlines()[0].split() == [
            "run", "MAP", "rPrecision", "P@10", "P@20", "P@100"]
        assert len([l for l in table.splitlines() if l and not l.startswith("baseline")]) == 5
        assert out.rstrip("\n") + "\n" == table
        metadata = json.loads((out_dir / "metadata.json").read_text())
        assert metadata["stoplist"] == "builtin:english"
        assert metadata["baseline"] == "b"

    def test_single_config_table(self, collection_dir, tmp_path, capsys):
        out_dir = tmp_path / "solo"
        code, _, _ = run_cli(capsys, [
            "experiment",
            "--corpus", str(collection_dir / "corpus.jsonl"),
            "--topics", str(collection_dir / "topics.tsv"),
            "--qrels", str(collection_dir / "qrels.txt"),
            "--out", str(out_dir), "--config", "b", "--k", "50"])
        assert code == 0
        tsv = (out_dir / "table.tsv").read_text()
        rows = [line for line in tsv.splitlines()[1:] if line]
        assert all(line.startswith("b\t") for line in rows)
        assert "*" not in (out_dir / "table.txt").read_text().splitlines()[1]

    def test_missing_qrels_path_fails_with_message(self, collection_dir, tmp_path, capsys):
        missing = tmp_path / "nope.qrels"
        code, _, err = run_cli(capsys, [
            "experiment",
            "--corpus", str(collection_dir / "corpus.jsonl"),
            "--topics", str(collection_dir / "topics.tsv"),
            "--qrels", str(missing),
            "--out", str(tmp_path / "x")])
        assert code == 1
        assert str(missing) in err

    def test_run_files_reload_to_same_metrics(self, collection_dir, tmp_path, capsys):
        from polyrec.corpus import load_qrels
        from polyrec.evaluation import evaluate_run, read_run_file

        out_dir = tmp_path / "roundtrip"
        code, _, _ = run_cli(capsys, [
            "experiment",
            "--corpus", str(collection_dir / "corpus.jsonl"),
            "--topics", str(collection_dir / "topics.tsv"),
            "--qrels", str(collection_dir / "qrels.txt"),
            "--out", str(out_dir), "--k", "100"])
        assert code == 0
        with open(collection_dir / "qrels.txt", encoding="utf-8") as fp:
            qrels = load_qrels(fp)
        report = evaluate_run(read_run_file(out_dir / "b+te.run"), qrels)
        tsv = (out_dir / "table.tsv").read_text()
        expected = f"b+te\tMAP\t{report.aggregate['MAP']:.6f}"
        assert expected in tsv


class TestBadInputs:
    def test_corrupt_corpus_line_number_in_error(self, tmp_path, capsys):
        corpus = tmp_path / "bad.jsonl"
        corpus.write_text('{"doc_id": "d1"}\n{broken\n', encoding="utf-8")
        code, _, err = run_cli(capsys, ["index", "--corpus", str(corpus)])
        assert code == 1
        assert "line 2" in err

    def test_unknown_config_fails(self, collection_dir, capsys):
        code, _, err = run_cli(capsys, [
            "search", "--corpus", str(collection_dir / "corpus.jsonl"),
            "--query", "topic000term00", "--config", "b+x"])
        assert code == 1
        assert "unknown run configuration" in err
