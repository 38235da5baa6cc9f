"""Deterministic synthetic data: a bundled reference dataset with the
published collection's shape (1,115 sentences over 12 categories, 277 N/A,
five questions per applicable sentence), and demo review corpora for running
the pipeline without the real dump.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .dataset import QuestionRecord
from .questions import DEFAULT_TEMPLATES, category_noun, fill_template

DATASET_SEED = 20210927

# (rows, n/a rows) per category; applicable fractions range from 52% to 84%.
CATEGORY_PLAN = {
    "Backpacking Packs": (100, 16),
    "Tents": (100, 20),
    "Bikes": (100, 18),
    "Jackets": (100, 25),
    "Vacuums": (100, 28),
    "Blenders": (100, 22),
    "Espresso Machines": (100, 48),
    "Grills": (100, 30),
    "Walk-Behind Lawn Mowers": (100, 26),
    "Birdhouses": (15, 4),
    "Feeders": (100, 21),
    "Snow Shovels": (100, 19),
}

# aspect noun -> (verb agreement "is"/"are", adjectives that suit it)
ASPECTS = {
    "Backpacking Packs": {
        "straps": ("are", ["padded", "adjustable", "wide", "comfortable"]),
        "frame": ("is", ["light", "sturdy", "internal", "rigid"]),
        "pockets": ("are", ["roomy", "deep", "handy", "spacious"]),
        "hip belt": ("is", ["padded", "comfortable", "snug", "supportive"]),
        "zippers": ("are", ["smooth", "sturdy", "waterproof", "chunky"]),
    },
    "Tents": {
        "poles": ("are", ["light", "sturdy", "flexible", "strong"]),
        "rainfly": ("is", ["waterproof", "full", "generous", "tough"]),
        "floor": ("is", ["thick", "waterproof", "durable", "rugged"]),
        "zippers": ("are", ["smooth", "sturdy", "snag-free", "solid"]),
        "vestibule": ("is", ["roomy", "spacious", "handy", "big"]),
    },
    "Bikes": {
        "tires": ("are", ["fat", "wide", "grippy", "knobby"]),
        "seat": ("is", ["comfortable", "wide", "cushioned", "adjustable"]),
        "frame": ("is", ["light", "sturdy", "stiff", "solid"]),
        "gears": ("are", ["smooth", "responsive", "crisp", "reliable"]),
        "brakes": ("are", ["strong", "responsive", "smooth", "reliable"]),
    },
    "Jackets": {
        "hood": ("is", ["warm", "adjustable", "roomy", "snug"]),
        "lining": ("is", ["soft", "warm", "fleece", "cozy"]),
        "pockets": ("are", ["deep", "zippered", "warm", "handy"]),
        "shell": ("is", ["waterproof", "windproof", "breathable", "tough"]),
        "cuffs": ("are", ["snug", "adjustable", "elastic", "tight"]),
    },
    "Vacuums": {
        "suction": ("is", ["strong", "powerful", "impressive", "consistent"]),
        "cord": ("is", ["long", "retractable", "generous", "sturdy"]),
        "filter": ("is", ["washable", "effective", "easy", "cheap"]),
        "brush": ("is", ["stiff", "spinning", "wide", "gentle"]),
        "canister": ("is", ["big", "clear", "easy", "compact"]),
    },
    "Blenders": {
        "blades": ("are", ["sharp", "strong", "sturdy", "powerful"]),
        "motor": ("is", ["powerful", "quiet", "strong", "fast"]),
        "pitcher": ("is", ["big", "sturdy", "clear", "heavy"]),
        "lid": ("is", ["tight", "secure", "snug", "solid"]),
        "base": ("is", ["heavy", "stable", "solid", "wide"]),
    },
    "Espresso Machines": {
        "steam wand": ("is", ["powerful", "quick", "adjustable", "strong"]),
        "portafilter": ("is", ["heavy", "solid", "commercial", "sturdy"]),
        "boiler": ("is", ["fast", "big", "quick", "reliable"]),
        "pump": ("is", ["quiet", "strong", "consistent", "reliable"]),
        "tray": ("is", ["removable", "wide", "deep", "handy"]),
    },
    "Grills": {
        "grates": ("are", ["heavy", "cast-iron", "wide", "solid"]),
        "burners": ("are", ["powerful", "even", "reliable", "strong"]),
        "lid": ("is", ["heavy", "tight", "solid", "insulated"]),
        "thermometer": ("is", ["accurate", "handy", "big", "reliable"]),
        "firebox": ("is", ["deep", "thick", "sturdy", "large"]),
    },
    "Walk-Behind Lawn Mowers": {
        "blades": ("are", ["sharp", "wide", "strong", "durable"]),
        "wheels": ("are", ["big", "rugged", "adjustable", "wide"]),
        "bag": ("is", ["big", "easy", "roomy", "sturdy"]),
        "handle": ("is", ["adjustable", "comfortable", "foldable", "padded"]),
        "engine": ("is", ["powerful", "quiet", "reliable", "strong"]),
    },
    "Birdhouses": {
        "roof": ("is", ["sloped", "wide", "sturdy", "waterproof"]),
        "perch": ("is", ["small", "smooth", "sturdy", "short"]),
        "entrance hole": ("is", ["small", "round", "perfect", "snug"]),
        "walls": ("are", ["thick", "solid", "cedar", "sturdy"]),
    },
    "Feeders": {
        "ports": ("are", ["wide", "numerous", "adjustable", "small"]),
        "perches": ("are", ["sturdy", "comfortable", "metal", "wide"]),
        "tube": ("is", ["clear", "big", "sturdy", "long"]),
        "baffle": ("is", ["effective", "wide", "slick", "sturdy"]),
        "lid": ("is", ["tight", "secure", "easy", "heavy"]),
    },
    "Snow Shovels": {
        "blade": ("is", ["wide", "curved", "tough", "big"]),
        "handle": ("is", ["long", "ergonomic", "comfortable", "sturdy"]),
        "grip": ("is", ["comfortable", "wide", "soft", "solid"]),
        "edge": ("is", ["sharp", "metal", "tough", "reinforced"]),
        "shaft": ("is", ["light", "strong", "aluminum", "solid"]),
    },
}

ACTIVITIES = {
    "Backpacking Packs": [
        "hiking the high country", "carrying heavy loads on long trips",
        "trekking through the mountains", "traveling overseas",
        "packing for weekend trips", "hauling gear to base camp",
        "backpacking across europe", "carrying camera gear on day hikes",
    ],
    "Tents": [
        "camping in the rain", "backpacking in the mountains",
        "camping with the whole family", "sheltering from strong wind",
        "camping at the beach", "staying dry in spring storms",
        "camping on rocky ground",
    ],
    "Bikes": [
        "commuting to work", "conquering tough terrain",
        "riding around town", "cycling on gravel roads",
        "climbing steep hills", "touring on long weekends",
        "riding trails with the kids", "commuting in city traffic",
    ],
    "Jackets": [
        "skiing in cold weather", "running in the rain",
        "hiking in the fall", "walking the dog in winter",
        "layering on cold days", "hunting in late autumn",
        "biking to work in the wind",
    ],
    "Vacuums": [
        "cleaning pet hair off the couch", "vacuuming hardwood floors",
        "reaching under furniture", "cleaning the stairs",
        "picking up cereal and crumbs", "vacuuming the car",
        "cleaning thick carpet",
    ],
    "Blenders": [
        "making smoothies with frozen fruit", "crushing ice",
        "blending soups until silky", "mixing protein shakes",
        "making salsa in big batches", "grinding nuts and seeds",
        "blending frozen margaritas",
    ],
    "Espresso Machines": [
        "pulling double shots", "steaming milk for lattes",
        "making cappuccinos at home", "brewing a quick shot before work",
        "frothing milk for guests", "making americanos all day",
    ],
    "Grills": [
        "grilling burgers for a crowd", "smoking ribs low and slow",
        "searing steaks", "cooking for large groups",
        "grilling vegetables on skewers", "roasting a whole chicken",
    ],
    "Walk-Behind Lawn Mowers": [
        "mowing thick grass", "mulching leaves in the fall",
        "cutting tall weeds", "trimming along fences",
        "mowing a half-acre yard", "bagging clippings in spring",
    ],
    "Birdhouses": [
        "attracting bluebirds", "watching birds from the porch",
        "housing small songbirds", "keeping sparrows out of the garden",
        "attracting wrens to the yard",
    ],
    "Feeders": [
        "feeding finches in winter", "attracting hummingbirds",
        "keeping squirrels away from the seed", "holding a full bag of seed",
        "feeding cardinals year round", "drawing songbirds to the window",
    ],
    "Snow Shovels": [
        "clearing the driveway after a storm", "shoveling wet snow",
        "scraping ice off the walkway", "digging out the car",
        "clearing the deck in winter", "shoveling the sidewalk every morning",
    ],
}

EVALUATIVES = ["great", "perfect", "excellent", "ideal", "wonderful", "fantastic"]

# Applicable-sentence frames; the activity clause always ends the sentence so
# generated questions read cleanly.
_FRAMES = [
    "The {adj} {aspect} {verb} {eval} for {activity}.",
    "{Eval} for {activity}.",
    "This {noun} is {eval} for {activity}.",
    "The {aspect} {verb} {adj} and the {noun} is {eval} for {activity}.",
    "With the {adj} {aspect} it is {eval} for {activity}.",
    "The {adj} {aspect} makes it {eval} for {activity}.",
    "My wife loves it for {activity}.",
    "We use ours every week for {activity}.",
]

# Activities whose content words all sit in the generic stoplist.
_GENERIC_ACTIVITIES = [
    "doing the job",
    "doing things",
    "doing its job",
    "using this product",
    "doing the work",
    "making things work",
    "working with stuff",
]

# Activities that read generic to a human but carry off-stoplist words.
_BROAD_ACTIVITIES = [
    "working around the house",
    "making things easier",
    "using it every day",
    "getting the most out of it",
    "doing what you expect",
]

_NA_FRAMES = [
    "This product is {eval} for {activity}.",
    "Works great for {activity}.",
    "{Eval} for {activity}.",
    "Honestly it is {eval} for {activity}.",
]

# Sentences whose -ing word after "for" is a gerund-exception noun: the raw
# bigram is present but taggers call the word a noun. Kept under 1% of rows.
EXCEPTION_SENTENCES = {
    "Tents": "Good for spring camping trips.",
    "Blenders": "Great for morning smoothies.",
    "Grills": "Great for evening grilling on the patio.",
    "Jackets": "Perfect for morning jogging in the cold.",
    "Feeders": "Nice for spring birdwatching.",
    "Walk-Behind Lawn Mowers": "Handy for string trimming around the yard.",
    "Birdhouses": "Good for spring nesting season.",
    "Snow Shovels": "Good for morning snow removal.",
}

SHOWCASE_ROWS = {
    "Blenders": (
        "Great for making smoothies with frozen fruit.",
        "great for making smoothies with frozen fruit",
        "for making smoothies with frozen fruit",
    ),
    "Snow Shovels": "This product is excellent for doing the job.",
}


def _questions_for(noun: str, predicate: str, clause: str) -> list[str]:
    return [fill_template(t, noun, predicate, clause) for t in DEFAULT_TEMPLATES]


def _clause_of(activity: str) -> str:
    return f"for {activity}"


def _applicable_sentence(rng: random.Random, category: str, noun: str) -> tuple[str, str, str]:
    """(sentence, predicate, clause) for one applicable row."""
    aspects = ASPECTS[category]
    aspect = rng.choice(sorted(aspects))
    verb, adjs = aspects[aspect]
    adj = rng.choice(adjs)
    ev = rng.choice(EVALUATIVES)
    activity = rng.choice(ACTIVITIES[category])
    frame = rng.choice(_FRAMES)
    sentence = frame.format(
        adj=adj, aspect=aspect, verb=verb, eval=ev, Eval=ev.capitalize(),
        noun=noun, activity=activity,
    )
    clause = _clause_of(activity)
    if frame.startswith(("My", "We")):
        predicate = "good " + clause
    else:
        predicate = f"{ev} {clause}"
    return sentence, predicate, clause


def _na_sentence(rng: random.Random) -> str:
    ev = rng.choice(EVALUATIVES)
    pool = _GENERIC_ACTIVITIES if rng.random() < 0.6 else _BROAD_ACTIVITIES
    activity = rng.choice(pool)
    frame = rng.choice(_NA_FRAMES)
    return frame.format(eval=ev, Eval=ev.capitalize(), activity=activity)


def build_reference_records(seed: int = DATASET_SEED) -> list[QuestionRecord]:
    """The full 1,115-record reference dataset, stable under the seed."""
    rng = random.Random(seed)
    records: list[QuestionRecord] = []
    counter = 0

    def add(category: str, sentence: str, questions: tuple[str, ...] = ()):
        nonlocal counter
        records.append(QuestionRecord(f"r{counter:04d}", category, sentence, questions))
        counter += 1

    for category, (total, n_na) in CATEGORY_PLAN.items():
        noun = category_noun(category)
        rows: list[tuple[str, tuple[str, ...]]] = []

        if category == "Blenders":
            sentence, predicate, clause = SHOWCASE_ROWS[category]
            rows.append((sentence, tuple(_questions_for(noun, predicate, clause))))
        if category in EXCEPTION_SENTENCES:
            sentence = EXCEPTION_SENTENCES[category]
            head, _, tail = sentence.rstrip(".").partition(" for ")
            clause = "for " + tail
            predicate = f"{head.lower()} {clause}"
            rows.append((sentence, tuple(_questions_for(noun, predicate, clause))))

        while len(rows) < total - n_na:
            sentence, predicate, clause = _applicable_sentence(rng, category, noun)
            rows.append((sentence, tuple(_questions_for(noun, predicate, clause))))

        na_rows: list[tuple[str, tuple[str, ...]]] = []
        if category == "Snow Shovels":
            na_rows.append((SHOWCASE_ROWS[category], ()))
        while len(na_rows) < n_na:
            na_rows.append((_na_sentence(rng), ()))

        combined = rows + na_rows
        rng.shuffle(combined)
        for sentence, questions in combined:
            add(category, sentence, questions)

    return records


# ---------------------------------------------------------------- corpora


def write_demo_corpus(
    reviews_path: str | Path,
    meta_path: str | Path,
    n_reviews: int = 1000,
    sentences_per_review: int = 3,
    seed: int = 7,
    candidate_rate: float = 0.2,
) -> int:
    """Synthetic review + metadata files in the ingest format; returns the
    number of sentences written."""
    rng = random.Random(seed)
    categories = sorted(CATEGORY_PLAN)
    products = []
    with open(meta_path, "w", encoding="utf-8") as fh:
        for i, category in enumerate(categories):
            for j in range(max(2, n_reviews // (len(categories) * 10))):
                asin = f"B{i:02d}{j:05d}"
                products.append((asin, category))
                fh.write(
                    json.dumps(
                        {
                            "asin": asin,
                            "title": f"{category} model {j}",
                            "category": ["Sports and Outdoors", category],
                        }
                    )
                    + "\n"
                )

    fillers = [
        "I bought this last month.",
        "Shipping was quick and the box arrived intact.",
        "My kids love the color.",
        "It looks nice on the shelf.",
        "Customer service was helpful when I called.",
        "The price was reasonable for what you get.",
        "I would buy it again without hesitation.",
        "Assembly took about twenty minutes.",
        "The manual could be clearer.",
        "It feels solid out of the box.",
    ]
    n_sentences = 0
    with open(reviews_path, "w", encoding="utf-8") as fh:
        for i in range(n_reviews):
            asin, category = products[rng.randrange(len(products))]
            noun = category_noun(category)
            sentences = []
            for _ in range(sentences_per_review):
                if rng.random() < candidate_rate:
                    sentence, _, _ = _applicable_sentence(rng, category, noun)
                    sentences.append(sentence)
                else:
                    sentences.append(rng.choice(fillers))
            n_sentences += len(sentences)
            fh.write(
                json.dumps(
                    {
                        "reviewerID": f"U{i:07d}",
                        "asin": asin,
                        "unixReviewTime": 1500000000 + i,
                        "overall": rng.randint(1, 5),
                        "reviewText": " ".join(sentences),
                    }
                )
                + "\n"
            )
    return n_sentences
