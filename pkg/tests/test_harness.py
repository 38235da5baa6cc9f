import pytest

from usageq.dataset import QuestionRecord
from usageq.harness import (
    EvalError,
    ReductionConfig,
    SplitConfig,
    accuracy,
    comparison_table,
    evaluate,
    load_predictions,
    reduce_train,
    save_predictions,
    split,
)


def make_records(n, na_every=4):
    out = []
    for i in range(n):
        if na_every and i % na_every == 0:
            out.append(QuestionRecord(f"r{i:04d}", "Bikes", f"Sentence {i}."))
        else:
            out.append(
                QuestionRecord(
                    f"r{i:04d}", "Bikes", f"Great for riding trail {i}.",
                    tuple(f"Question {i}-{j}?" for j in range(5)),
                )
            )
    return out


class TestSplit:
    def test_published_size_arithmetic(self):
        records = make_records(1115)
        train, test = split(records, SplitConfig(0.8, seed=1))
        assert len(train) == 892 and len(test) == 223

    def test_deterministic(self):
        records = make_records(50)
        a = split(records, SplitConfig(0.8, seed=3))
        b = split(records, SplitConfig(0.8, seed=3))
        assert [r.record_id for r in a[0]] == [r.record_id for r in b[0]]

    def test_disjoint_and_exhaustive(self):
        records = make_records(101)
        train, test = split(records, SplitConfig(0.8, seed=2))
        train_ids = {r.record_id for r in train}
        test_ids = {r.record_id for r in test}
        assert not (train_ids & test_ids)
        assert len(train_ids | test_ids) == 101

    def test_tiny_dataset_rejected(self):
        with pytest.raises(EvalError, match="empty test side"):
            split(make_records(2), SplitConfig(0.8, seed=1))

    def test_single_record_rejected(self):
        with pytest.raises(EvalError):
            split(make_records(1), SplitConfig(0.5, seed=1))

    def test_bad_fraction(self):
        with pytest.raises(EvalError):
            SplitConfig(1.0, seed=1)


class TestReduce:
    def test_question_set_trims(self):
        records = make_records(8, na_every=0)
        for which, size in (("Q1", 1), ("Q3", 3), ("Q5", 5)):
            reduced = reduce_train(records, ReductionConfig.for_question_set(which))
            assert len(reduced) == len(records)
            assert all(len(r.questions) == size for r in reduced)

    def test_q1_keeps_first_generated(self):
        records = make_records(4, na_every=0)
        reduced = reduce_train(records, ReductionConfig.for_question_set("Q1"))
        assert reduced[0].questions == (records[0].questions[0],)

    def test_na_record_untouched(self):
        na = QuestionRecord("r1", "Bikes", "Too generic.")
        (got,) = reduce_train([na], ReductionConfig.for_question_set("Q1"))
        assert got == na

    def test_fraction_arithmetic(self):
        records = make_records(800)
        reduced = reduce_train(records, ReductionConfig.sentence_fraction(0.25, seed=1))
        assert len(reduced) == 200

    def test_fraction_keeps_all_questions(self):
        records = make_records(40, na_every=0)
        reduced = reduce_train(records, ReductionConfig.sentence_fraction(0.5, seed=1))
        assert all(len(r.questions) == 5 for r in reduced)

    def test_fraction_deterministic(self):
        records = make_records(100)
        a = reduce_train(records, ReductionConfig.sentence_fraction(0.5, seed=9))
        b = reduce_train(records, ReductionConfig.sentence_fraction(0.5, seed=9))
        assert [r.record_id for r in a] == [r.record_id for r in b]

    def test_bad_configs(self):
        with pytest.raises(EvalError):
            ReductionConfig.sentence_fraction(0.0)
        with pytest.raises(EvalError):
            ReductionConfig.for_question_set("Q2")
        with pytest.raises(EvalError):
            ReductionConfig(mode="bogus")


class TestAccuracy:
    def test_all_match(self):
        records = make_records(8)
        preds = {r.record_id: ("N/A" if r.is_na else "Some question?") for r in records}
        assert accuracy(preds, records) == 1.0

    def test_three_of_four(self):
        records = make_records(4, na_every=0)
        preds = {r.record_id: "Some question?" for r in records}
        preds[records[0].record_id] = "N/A"
        assert accuracy(preds, records) == 0.75

    def test_text_disagreement_still_correct(self):
        records = make_records(4, na_every=0)
        preds = {r.record_id: "A totally different question?" for r in records}
        assert accuracy(preds, records) == 1.0

    def test_id_mismatch(self):
        records = make_records(4)
        preds = {r.record_id: "Q?" for r in records[:-1]}
        with pytest.raises(EvalError, match="missing"):
            accuracy(preds, records)
        preds = {r.record_id: "Q?" for r in records} | {"ghost": "Q?"}
        with pytest.raises(EvalError, match="unknown"):
            accuracy(preds, records)


class TestEvaluate:
    def test_self_consistency_is_perfect(self):
        records = make_records(20)
        preds = {
            r.record_id: ("N/A" if r.is_na else r.questions[0]) for r in records
        }
        report = evaluate(preds, records)
        assert report.accuracy == 1.0
        assert report.bleu4 == pytest.approx(1.0, abs=1e-12)
        assert report.rouge_l == pytest.approx(1.0, abs=1e-12)
        assert report.n_scored_pairs == sum(1 for r in records if not r.is_na)

    def test_all_na_predictions(self):
        records = make_records(20)
        preds = {r.record_id: "N/A" for r in records}
        report = evaluate(preds, records)
        n_na = sum(1 for r in records if r.is_na)
        assert report.accuracy == pytest.approx(n_na / len(records))
        assert report.n_scored_pairs == 0
        assert report.bleu4 == 0.0 and report.rouge_l == 0.0
        assert report.warnings

    def test_report_shape(self):
        records = make_records(12)
        preds = {
            r.record_id: ("N/A" if r.is_na else "Do you ride trails?") for r in records
        }
        report = evaluate(preds, records)
        assert report.n_test == 12
        assert 0.0 <= report.bleu4 <= 1.0
        assert 0.0 <= report.rouge_l <= 1.0
        d = report.to_dict()
        assert set(d) >= {"accuracy", "bleu4", "rouge_l", "n_test", "n_na_ref",
                          "n_scored_pairs"}
        assert "Accuracy" in report.to_text()

    def test_permutation_invariance(self):
        records = make_records(16)
        preds = {
            r.record_id: ("N/A" if r.is_na else "Do you ride trails often?")
            for r in records
        }
        a = evaluate(preds, records)
        b = evaluate(preds, list(reversed(records)))
        assert a.bleu4 == pytest.approx(b.bleu4, abs=1e-12)
        assert a.rouge_l == pytest.approx(b.rouge_l, abs=1e-12)
        assert a.accuracy == b.accuracy


class TestPredictionFiles:
    def test_roundtrip(self, tmp_path):
        preds = {"r0001": "N/A", "r0002": "Would you like one?"}
        path = tmp_path / "preds.tsv"
        save_predictions(preds, path)
        assert load_predictions(path) == preds

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("just-one-field\n")
        with pytest.raises(EvalError):
            load_predictions(path)


class TestComparisonTable:
    def test_renders_rows_and_columns(self):
        records = make_records(12)
        preds = {
            r.record_id: ("N/A" if r.is_na else r.questions[0]) for r in records
        }
        report = evaluate(preds, records)
        table = comparison_table([("Q1", report), ("Q5", report)])
        assert "Accuracy" in table and "BLEU-4" in table and "ROUGE-L" in table
        assert "Q1" in table and "Q5" in table
