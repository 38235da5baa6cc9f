import random

import pytest

from oracles import bf_extract_pairs
from usageq.aspects import (
    ADJ_NOUN,
    NOUN_COPULA_ADJ,
    AspectLexicon,
    extract_pairs,
    mine_aspect_lexicon,
    singularize,
)
from usageq.textproc import ADJ_TAGS, analyze

MINING_FIXTURE = [
    "The fat tires are great.",
    "Those wide tires look good.",
    "Nice knobby tires on this one.",
    "The tires are sturdy.",
    "I love the color.",
    "My kids ride it daily.",
    "The spare tire fits in the trunk.",
    "Shipping was slow.",
    "It is heavy.",
    "Solid frame and smooth brakes.",
]


def _analyzed(texts):
    return [analyze(t, f"r{i}")[0] for i, t in enumerate(texts)]


class TestSingularize:
    @pytest.mark.parametrize(
        "plural,singular",
        [("tires", "tire"), ("straps", "strap"), ("batteries", "battery"),
         ("boxes", "box"), ("glass", "glass"), ("status", "status"),
         ("basis", "basis"), ("gas", "gas"), ("seat", "seat")],
    )
    def test_examples(self, plural, singular):
        assert singularize(plural) == singular


class TestMineLexicon:
    def test_support_counts(self):
        lex = mine_aspect_lexicon(_analyzed(MINING_FIXTURE), "Bikes", min_support=3)
        assert lex.aspects.get("tire") == 4

    def test_min_support_one_single_sentence(self):
        lex = mine_aspect_lexicon(
            _analyzed(["The fat tires are perfect"]), "Bikes", min_support=1
        )
        assert "tires" in lex and lex.support("tires") == 1
        assert "tire" in lex.aspects

    def test_no_nouns_no_lexicon(self):
        lex = mine_aspect_lexicon(
            _analyzed(["I ride daily.", "They are great."]), "Bikes", min_support=1
        )
        assert lex.aspects == {}

    def test_min_support_monotonic(self):
        sents = _analyzed(MINING_FIXTURE * 3)
        previous = None
        for support in (1, 2, 3, 5, 8):
            lex = mine_aspect_lexicon(sents, "Bikes", support)
            keys = set(lex.aspects)
            if previous is not None:
                assert keys <= previous
            previous = keys

    def test_stopword_nouns_excluded(self):
        lex = mine_aspect_lexicon(
            _analyzed(["A great thing here.", "Another great thing.", "One more great thing."]),
            "Bikes",
            min_support=1,
        )
        assert "thing" not in lex.aspects

    def test_bad_min_support(self):
        with pytest.raises(ValueError):
            mine_aspect_lexicon([], "Bikes", 0)

    def test_save_load_roundtrip(self, tmp_path):
        lex = mine_aspect_lexicon(_analyzed(MINING_FIXTURE), "Bikes", 1)
        path = tmp_path / "aspects_bikes.tsv"
        lex.save(path)
        lines = path.read_text().splitlines()
        supports = [int(line.split("\t")[1]) for line in lines]
        assert supports == sorted(supports, reverse=True)
        again = AspectLexicon.load(path, "Bikes")
        assert again.aspects == lex.aspects


class TestExtractPairs:
    @pytest.fixture()
    def bike_lexicon(self):
        return AspectLexicon("Bikes", {"tire": 4, "seat": 3})

    def test_adjective_noun(self, bike_lexicon):
        sent = analyze("The fat tires are perfect for conquering tough terrain.", "r1")[0]
        pairs = extract_pairs(sent, bike_lexicon)
        assert [(p.aspect, p.value, p.pattern) for p in pairs] == [
            ("tire", "fat", ADJ_NOUN)
        ]
        assert pairs[0].sentence_ref == ("r1", 0)

    def test_noun_copula_adjective(self, bike_lexicon):
        sent = analyze("The seat is comfortable.", "r2")[0]
        pairs = extract_pairs(sent, bike_lexicon)
        assert [(p.aspect, p.value, p.pattern) for p in pairs] == [
            ("seat", "comfortable", NOUN_COPULA_ADJ)
        ]

    def test_copula_window_allows_adverb(self, bike_lexicon):
        sent = analyze("The seat is really comfortable.", "r2")[0]
        pairs = extract_pairs(sent, bike_lexicon)
        assert [(p.aspect, p.value) for p in pairs] == [("seat", "comfortable")]

    def test_no_match(self, bike_lexicon):
        assert extract_pairs(analyze("I ride daily.", "r3")[0], bike_lexicon) == []

    def test_soundness_on_planted_corpus(self, planted_sentences):
        lex = mine_aspect_lexicon(planted_sentences, "Planted", 3)
        for sent in planted_sentences:
            for pair in extract_pairs(sent, lex):
                assert pair.aspect in lex.aspects
                value_tags = {
                    t.pos for t in sent.tokens if t.lower == pair.value
                }
                assert value_tags & ADJ_TAGS


class TestBruteForceEquivalence:
    def test_matches_quadratic_scan_on_random_sentences(self):
        rng = random.Random(1234)
        adjectives = ["fat", "wide", "sturdy", "comfortable", "great", "heavy"]
        nouns = ["tires", "tire", "seat", "frame", "motor", "blades", "glass"]
        verbs = ["is", "are", "was", "were", "rides", "works", "looks"]
        others = ["the", "a", "really", "very", "for", "and", "it", "on"]
        lexicon = AspectLexicon("X", {"tire": 5, "seat": 5, "frame": 5, "motor": 5,
                                      "blade": 5, "glass": 5})
        pool = adjectives + nouns + verbs + others
        for _ in range(1000):
            words = [rng.choice(pool) for _ in range(rng.randint(1, 12))]
            sent = analyze(" ".join(words) + ".", "rx")[0]
            fast = [(p.aspect, p.value, p.pattern) for p in extract_pairs(sent, lexicon)]
            slow = [
                (singularize(sent.tokens[i].lower), value, pattern)
                for i, value, pattern in bf_extract_pairs(
                    list(sent.tokens), lambda n: n in lexicon
                )
            ]
            assert fast == slow, f"mismatch for {sent.text!r}"
