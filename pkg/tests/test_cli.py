import json
import sys
from pathlib import Path

import pytest

from usageq.cli import main
from usageq.synthetic import write_demo_corpus

REPO = Path(__file__).parent.parent
DATASET = REPO / "data" / "usage_questions.tsv"
ECHO = REPO / "scripts" / "echo_adapter.py"


@pytest.fixture(scope="module")
def demo_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    reviews = root / "reviews.jsonl"
    meta = root / "meta.jsonl"
    write_demo_corpus(reviews, meta, n_reviews=600, sentences_per_review=3, seed=11,
                      candidate_rate=0.35)
    return reviews, meta


@pytest.fixture(scope="module")
def pipeline_dir(demo_corpus, tmp_path_factory):
    """Run ingest -> mine-aspects -> select -> sample once for the module."""
    reviews, meta = demo_corpus
    out = tmp_path_factory.mktemp("pipeline")
    joined = out / "joined.jsonl"
    assert main(["ingest", "--reviews", str(reviews), "--meta", str(meta),
                 "--out", str(joined)]) == 0
    lexicons = out / "lexicons"
    assert main(["mine-aspects", "--in", str(joined), "--out-dir", str(lexicons),
                 "--min-support", "2"]) == 0
    candidates = out / "candidates.jsonl"
    assert main(["select", "--in", str(joined), "--lexicons", str(lexicons),
                 "--out", str(candidates)]) == 0
    sampled = out / "sampled.jsonl"
    assert main(["sample", "--in", str(candidates), "--out", str(sampled),
                 "--n", "20", "--seed", "5"]) == 0
    return out


class TestPipelineCommands:
    def test_ingest_wrote_joined_rows_and_manifest(self, pipeline_dir):
        joined = pipeline_dir / "joined.jsonl"
        assert joined.stat().st_size > 0
        manifest = json.loads((pipeline_dir / "joined.jsonl.manifest.json").read_text())
        assert manifest["command"] == "ingest"
        assert manifest["config_hash"]
        assert len(manifest["inputs"]) == 2

    def test_select_found_candidates(self, pipeline_dir):
        rows = [json.loads(l) for l in
                (pipeline_dir / "candidates.jsonl").read_text().splitlines()]
        assert rows
        for row in rows:
            assert set(row) == {"category", "review_id", "sentence_index", "text",
                                "clause_texts"}
            assert row["clause_texts"]

    def test_select_is_deterministic(self, pipeline_dir, tmp_path):
        joined = pipeline_dir / "joined.jsonl"
        lexicons = pipeline_dir / "lexicons"
        again = tmp_path / "candidates2.jsonl"
        assert main(["select", "--in", str(joined), "--lexicons", str(lexicons),
                     "--out", str(again)]) == 0
        assert again.read_bytes() == (pipeline_dir / "candidates.jsonl").read_bytes()

    def test_sample_respects_seed(self, pipeline_dir, tmp_path):
        candidates = pipeline_dir / "candidates.jsonl"
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        for out in (a, b):
            assert main(["sample", "--in", str(candidates), "--out", str(out),
                         "--n", "20", "--seed", "5"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_generate_template_engine(self, pipeline_dir, tmp_path):
        out = tmp_path / "questions.jsonl"
        assert main(["generate", "--in", str(pipeline_dir / "sampled.jsonl"),
                     "--engine", "template", "--out", str(out), "--seed", "3"]) == 0
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert rows
        for row in rows:
            assert row["label"] == "N/A" or row["label"].endswith("?")

    def test_generate_adapter_engine(self, pipeline_dir, tmp_path):
        out = tmp_path / "adapter_questions.jsonl"
        assert main(["generate", "--in", str(pipeline_dir / "sampled.jsonl"),
                     "--engine", "adapter", "--out", str(out),
                     "--adapter-cmd", sys.executable, str(ECHO), "simple"]) == 0
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert rows and all("error" not in r for r in rows)

    def test_index_and_query(self, pipeline_dir, tmp_path, capsys):
        questions = tmp_path / "questions.jsonl"
        assert main(["generate", "--in", str(pipeline_dir / "sampled.jsonl"),
                     "--engine", "template", "--out", str(questions)]) == 0
        index = tmp_path / "questions.idx"
        assert main(["index", "--questions", str(questions), "--out", str(index)]) == 0
        capsys.readouterr()
        assert main(["query", "--index", str(index), "--text", "commuting to work",
                     "--k", "3"]) == 0
        out = capsys.readouterr().out
        assert out.strip()


class TestDatasetCommands:
    def test_dataset_stats_prints_published_counts(self, capsys):
        assert main(["dataset-stats", "--in", str(DATASET)]) == 0
        out = capsys.readouterr().out
        assert "1115" in out and "838" in out and "277" in out
        assert "Birdhouses" in out

    def test_reduce_q3(self, tmp_path, capsys):
        out = tmp_path / "q3.tsv"
        assert main(["reduce", "--in", str(DATASET), "--out", str(out),
                     "--mode", "q3"]) == 0
        printed = capsys.readouterr().out
        assert f"{838 * 3} questions" in printed

    def test_evaluate_replay(self, tmp_path, capsys):
        from usageq.dataset import load_dataset
        from usageq.harness import save_predictions

        records, _ = load_dataset(DATASET)
        preds = {r.record_id: ("N/A" if r.is_na else r.questions[0]) for r in records}
        pred_path = tmp_path / "preds.tsv"
        save_predictions(preds, pred_path)
        report_path = tmp_path / "report.json"
        assert main(["evaluate", "--references", str(DATASET),
                     "--predictions", str(pred_path), "--out", str(report_path)]) == 0
        report = json.loads(report_path.read_text())
        assert report["accuracy"] == 1.0
        assert report["bleu4"] == pytest.approx(1.0)
        out = capsys.readouterr().out
        assert "Accuracy" in out

    def test_compare_renders_table(self, tmp_path, capsys):
        from usageq.dataset import load_dataset
        from usageq.harness import save_predictions

        records, _ = load_dataset(DATASET)
        preds = {r.record_id: ("N/A" if r.is_na else r.questions[0]) for r in records}
        path = tmp_path / "preds.tsv"
        save_predictions(preds, path)
        assert main(["compare", "--references", str(DATASET),
                     "--run", f"replay={path}"]) == 0
        out = capsys.readouterr().out
        assert "BLEU-4" in out and "replay" in out


class TestExitCodes:
    def test_usage_error_is_1(self):
        with pytest.raises(SystemExit) as exc:
            main(["select", "--not-a-flag"])
        assert exc.value.code == 1

    def test_unknown_command_is_1(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 1

    def test_data_error_is_2(self, tmp_path):
        missing = tmp_path / "nope.tsv"
        assert main(["dataset-stats", "--in", str(missing)]) == 2

    def test_adapter_error_is_3(self, pipeline_dir, tmp_path):
        out = tmp_path / "questions.jsonl"
        code = main(["generate", "--in", str(pipeline_dir / "sampled.jsonl"),
                     "--engine", "adapter", "--out", str(out),
                     "--adapter-cmd", "/nonexistent/adapter"])
        assert code == 3

    def test_adapter_engine_without_adapter_is_3(self, pipeline_dir, tmp_path):
        code = main(["generate", "--in", str(pipeline_dir / "sampled.jsonl"),
                     "--engine", "adapter", "--out", str(tmp_path / "x.jsonl")])
        assert code == 3


class TestConfig:
    def test_config_roundtrip_and_overrides(self, tmp_path):
        from usageq.config import PipelineConfig

        cfg = PipelineConfig(min_support=2, seed=99)
        path = tmp_path / "config.json"
        cfg.save(path)
        loaded = PipelineConfig.load(path)
        assert loaded == cfg
        assert loaded.hash() == cfg.hash()
        other = PipelineConfig(min_support=3, seed=99)
        assert other.hash() != cfg.hash()

    def test_unknown_field_rejected(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"bogus_field": 1}')
        from usageq.config import PipelineConfig

        with pytest.raises(ValueError, match="bogus_field"):
            PipelineConfig.load(path)
