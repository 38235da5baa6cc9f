import json
import random
import threading
import urllib.request

import pytest

from usageq.questions import ElicitationQuestion
from usageq.store import build_index, load_index, query, save_index


def q(text, category="Bikes", rid="r1", idx=0, flags=()):
    return ElicitationQuestion(
        text=text, category=category, source=(rid, idx), usage_clause="",
        provenance="template", flags=frozenset(flags),
    )


FIXTURE = [
    q("Would you like a bike that is great for commuting to work?", rid="r0"),
    q("Are you looking for a bike with fat tires?", rid="r1"),
    q("Do you want a bike for climbing steep hills?", rid="r2"),
    q("Would you like a tent for camping in the rain?", "Tents", rid="r3"),
    q("Are you interested in a tent for family camping?", "Tents", rid="r4"),
    q("Do you need a blender for crushing ice?", "Blenders", rid="r5"),
    q("Would you like a blender for making smoothies?", "Blenders", rid="r6"),
    q("Do you want a vacuum for cleaning pet hair?", "Vacuums", rid="r7"),
    q("Would you like a jacket for skiing in cold weather?", "Jackets", rid="r8"),
    q("Are you looking for a grill for searing steaks?", "Grills", rid="r9"),
]


class TestBuildIndex:
    def test_generic_flagged_excluded_by_default(self):
        questions = list(FIXTURE)
        questions += [
            q("Do you want a thing for doing the job?", rid=f"g{i}", flags={"generic"})
            for i in range(3)
        ]
        assert len(build_index(questions).entries) == len(FIXTURE)
        assert len(build_index(questions, include_generic=True).entries) == len(FIXTURE) + 3

    def test_duplicates_both_indexed(self):
        questions = [q("Same text?", rid="a"), q("Same text?", rid="b")]
        idx = build_index(questions)
        assert len(idx.entries) == 2
        assert idx.entries[0].entry_id != idx.entries[1].entry_id

    def test_rebuild_is_identical(self):
        a = build_index(FIXTURE)
        b = build_index(FIXTURE)
        assert a.vocabulary == b.vocabulary
        assert a.vectors == b.vectors

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            build_index([])
        with pytest.raises(ValueError):
            build_index([q("Only generic?", flags={"generic"})])


class TestQuery:
    def test_commuting_question_ranks_first(self):
        idx = build_index(FIXTURE)
        got = query(idx, "commuting bike", category="Bikes", k=3)
        assert got
        assert got[0][0].entry_id.startswith("r0")

    def test_brute_force_equWivalence(self):
        idx = build_index(FIXTURE)
        import math
        from usageq.textproc import word_tokens
        from collections import Counter

        def brute(text, category, k):
            qv = Counter(word_tokens(text))
            scored = []
            for entry, vec in zip(idx.entries, idx.vectors):
                if category and entry.category != category:
                    continue
                score = 0.0
                for term, qc in qv.items():
                    df = idx.vocabulary.get(term, 0)
                    if df and term in vec:
                        w = math.log(len(idx.entries) / df)
                        score += qc * w * vec[term] * w
                if score > 0:
                    scored.append((entry, score))
            scored.sort(key=lambda es: (-es[1], es[0].entry_id))
            return scored[:k]

        rng = random.Random(3)
        words = ["bike", "tent", "camping", "commuting", "ice", "pet", "hair",
                 "skiing", "grill", "smoothies", "rain", "question"]
        for _ in range(200):
            text = " ".join(rng.choice(words) for _ in range(rng.randint(1, 4)))
            category = rng.choice([None, "Bikes", "Tents", "Blenders"])
            fast = query(idx, text, category, k=5)
            slow = brute(text, category, 5)
            assert [(e.entry_id, pytest.approx(s)) for e, s in slow] == [
                (e.entry_id, s) for e, s in fast
            ]

    def test_no_overlap_empty(self):
        idx = build_index(FIXTURE)
        assert query(idx, "zzz qqq xyzzy") == []

    def test_k_larger_than_collection(self):
        idx = build_index(FIXTURE)
        got = query(idx, "bike tent blender vacuum jacket grill", k=50)
        assert 0 < len(got) <= len(FIXTURE)

    def test_unknown_category_notice(self, caplog):
        import logging

        idx = build_index(FIXTURE)
        with caplog.at_level(logging.WARNING):
            assert query(idx, "bike", category="Canoes") == []
        assert any("Canoes" in r.message for r in caplog.records)

    def test_bad_k(self):
        idx = build_index(FIXTURE)
        with pytest.raises(ValueError):
            query(idx, "bike", k=0)

    def test_scores_non_increasing_and_tiebreak(self):
        idx = build_index([q("Same words here?", rid=f"r{i}") for i in range(5)])
        got = query(idx, "same words", k=5)
        scores = [s for _, s in got]
        assert scores == sorted(scores, reverse=True)
        ids = [e.entry_id for e, _ in got]
        assert ids == sorted(ids)

    def test_appending_unrelated_entry_keeps_order(self):
        idx = build_index(FIXTURE)
        before = [e.entry_id for e, _ in query(idx, "camping tent rain", k=5)]
        extended = build_index(FIXTURE + [q("Totally unrelated zebra query?", rid="zz")])
        after = [e.entry_id for e, _ in query(extended, "camping tent rain", k=5)]
        assert before == after


class TestPersistence:
    def test_roundtrip(self, tmp_path):
        idx = build_index(FIXTURE)
        path = tmp_path / "questions.idx"
        save_index(idx, path)
        loaded = load_index(path)
        assert loaded.vocabulary == idx.vocabulary
        assert loaded.vectors == idx.vectors
        assert [e.entry_id for e in loaded.entries] == [e.entry_id for e in idx.entries]
        a = query(idx, "bike commuting", k=4)
        b = query(loaded, "bike commuting", k=4)
        assert [(e.entry_id, s) for e, s in a] == [(e.entry_id, s) for e, s in b]

    def test_version_check(self, tmp_path):
        path = tmp_path / "bogus.idx"
        path.write_text(json.dumps({"format": "something-else"}) + "\n")
        with pytest.raises(ValueError):
            load_index(path)


class TestHttpServing:
    def test_query_endpoint(self):
        from usageq.serving import make_store_server, serve_forever_in_thread

        server = make_store_server(build_index(FIXTURE), port=0)
        serve_forever_in_thread(server)
        port = server.server_address[1]
        try:
            body = json.dumps({"text": "commuting bike", "category": "Bikes", "k": 2})
            req = urllib.request.Request(
                f"http://127.0.0.1:{port}/query",
                data=body.encode(),
                headers={"Content-Type": "application/json"},
            )
            with urllib.request.urlopen(req, timeout=5) as resp:
                payload = json.loads(resp.read())
            assert payload["results"]
            assert payload["results"][0]["question"].endswith("?")
            top = payload["results"][0]
            assert "commuting" in top["question"]
            with urllib.request.urlopen(
                f"http://127.0.0.1:{port}/query?text=crushing+ice&k=1", timeout=5
            ) as resp:
                payload = json.loads(resp.read())
            assert payload["results"][0]["category"] == "Blenders"
        finally:
            server.shutdown()
