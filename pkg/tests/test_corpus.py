import gzip
import json

import pytest

from usageq.corpus import (
    IngestCounters,
    build_product_index,
    load_joined,
    load_reviews,
    save_joined,
)


def write_jsonl(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")


@pytest.fixture()
def meta_file(tmp_path):
    path = tmp_path / "meta.jsonl"
    write_jsonl(
        path,
        [
            {"asin": "B001", "title": "Trail bike",
             "category": ["Sports and Outdoors", "Outdoor Recreation", "Bikes"]},
            {"asin": "B002", "title": "City bike", "category": ["Bikes"]},
            {"asin": "B003", "title": "Food processor", "category": ["Home", "Blenders"]},
            {"asin": "B004", "title": "Mystery", "category": []},
            {"asin": "B001", "title": "Duplicate bike", "category": ["Tents"]},
        ],
    )
    return path


class TestProductIndex:
    def test_category_anywhere_in_path(self, meta_file):
        index = build_product_index(meta_file, {"Bikes"})
        assert index == {"B001": "Bikes", "B002": "Bikes"}

    def test_empty_category_path_skipped(self, meta_file):
        index = build_product_index(meta_file, {"Bikes", "Blenders", "Tents"})
        assert "B004" not in index

    def test_duplicate_keeps_first(self, meta_file, caplog):
        import logging

        with caplog.at_level(logging.WARNING):
            index = build_product_index(meta_file, {"Bikes", "Tents"})
        assert index["B001"] == "Bikes"
        assert any("duplicate" in r.message for r in caplog.records)


class TestLoadReviews:
    def _reviews(self, tmp_path, rows, gz=False):
        path = tmp_path / ("reviews.jsonl.gz" if gz else "reviews.jsonl")
        if gz:
            with gzip.open(path, "wt", encoding="utf-8") as fh:
                for row in rows:
                    fh.write(json.dumps(row) + "\n")
        else:
            write_jsonl(path, rows)
        return path

    def test_category_filter(self, tmp_path, meta_file):
        path = self._reviews(
            tmp_path,
            [
                {"reviewerID": "U1", "asin": "B001", "overall": 5,
                 "reviewText": "Great for commuting to work."},
                {"reviewerID": "U2", "asin": "B003", "overall": 4,
                 "reviewText": "Blends everything."},
                {"reviewerID": "U3", "asin": "B002", "overall": 3,
                 "reviewText": "Decent bike."},
            ],
        )
        index = build_product_index(meta_file, {"Bikes"})
        counters = IngestCounters()
        got = list(load_reviews(path, index, counters))
        assert len(got) == 2
        assert {cat for _, cat in got} == {"Bikes"}
        assert counters.emitted == 2
        assert counters.skipped["unknown_product"] == 1

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        counters = IngestCounters()
        assert list(load_reviews(path, {}, counters)) == []
        assert counters.total_skipped == 0

    def test_malformed_lines_counted(self, tmp_path, meta_file):
        rows = [
            {"reviewerID": f"U{i}", "asin": "B001", "overall": 5,
             "reviewText": f"Review number {i}."}
            for i in range(93)
        ]
        path = tmp_path / "reviews.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            for i, row in enumerate(rows):
                fh.write(json.dumps(row) + "\n")
                if i < 7:
                    fh.write("{this is not json}\n")
        index = build_product_index(meta_file, {"Bikes"})
        counters = IngestCounters()
        got = list(load_reviews(path, index, counters))
        assert len(got) == 93
        assert counters.skipped["malformed"] == 7

    def test_blank_text_is_malformed(self, tmp_path, meta_file):
        path = self._reviews(
            tmp_path,
            [{"reviewerID": "U1", "asin": "B001", "overall": 5, "reviewText": "   "}],
        )
        index = build_product_index(meta_file, {"Bikes"})
        counters = IngestCounters()
        assert list(load_reviews(path, index, counters)) == []
        assert counters.skipped["malformed"] == 1

    def test_gzip_detected_by_magic(self, tmp_path, meta_file):
        path = self._reviews(
            tmp_path,
            [{"reviewerID": "U1", "asin": "B002", "overall": 5,
              "reviewText": "Nice bike for the money."}],
            gz=True,
        )
        index = build_product_index(meta_file, {"Bikes"})
        got = list(load_reviews(path, index, IngestCounters()))
        assert len(got) == 1
        assert got[0][0].rating == 5

    def test_partition_emitted_plus_skipped(self, tmp_path, meta_file):
        rows = []
        for i in range(40):
            if i % 5 == 0:
                rows.append({"nonsense": True})
            elif i % 5 == 1:
                rows.append({"reviewerID": f"U{i}", "asin": "B999", "overall": 1,
                             "reviewText": "Unknown product."})
            else:
                rows.append({"reviewerID": f"U{i}", "asin": "B001", "overall": 4,
                             "reviewText": f"Fine number {i}."})
        path = self._reviews(tmp_path, rows)
        index = build_product_index(meta_file, {"Bikes"})
        counters = IngestCounters()
        emitted = len(list(load_reviews(path, index, counters)))
        assert emitted + counters.total_skipped == 40

    def test_deterministic_and_joined_roundtrip(self, tmp_path, meta_file):
        path = self._reviews(
            tmp_path,
            [
                {"reviewerID": "U1", "asin": "B001", "overall": 5,
                 "reviewText": "Great for commuting to work."},
                {"reviewerID": "U2", "asin": "B002", "overall": 2,
                 "reviewText": "Squeaks a lot."},
            ],
        )
        index = build_product_index(meta_file, {"Bikes"})
        out1 = tmp_path / "joined1.jsonl"
        out2 = tmp_path / "joined2.jsonl"
        save_joined(load_reviews(path, index, IngestCounters()), out1)
        save_joined(load_reviews(path, index, IngestCounters()), out2)
        assert out1.read_bytes() == out2.read_bytes()
        back = list(load_joined(out1))
        assert [(r.text, cat) for r, cat in back] == [
            ("Great for commuting to work.", "Bikes"),
            ("Squeaks a lot.", "Bikes"),
        ]
