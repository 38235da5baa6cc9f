"""Streaming review/metadata ingestion with category filtering.

Input files are gzip or plain line-delimited JSON using the public Amazon
dump field names: reviews carry `reviewText`, `asin`, `overall`; metadata
carries `asin`, `title`, `category` (a path of category names). A product
belongs to a configured category when that name appears anywhere in its
category path.
"""

from __future__ import annotations

import gzip
import io
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

log = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Review:
    review_id: str
    product_id: str
    text: str
    rating: int | None = None


@dataclass(frozen=True, slots=True)
class Product:
    product_id: str
    title: str
    category_path: tuple[str, ...]


@dataclass
class IngestCounters:
    emitted: int = 0
    skipped: Counter = field(default_factory=Counter)

    def skip(self, reason: str) -> None:
        self.skipped[reason] += 1

    @property
    def total_skipped(self) -> int:
        return sum(self.skipped.values())

    def summary(self) -> dict:
        return {"emitted": self.emitted, "skipped": dict(self.skipped)}


def open_maybe_gzip(path: str | Path) -> io.TextIOBase:
    path = Path(path)
    raw = open(path, "rb")
    magic = raw.read(2)
    raw.seek(0)
    if magic == b"\x1f\x8b":
        return io.TextIOWrapper(gzip.GzipFile(fileobj=raw), encoding="utf-8")
    return io.TextIOWrapper(raw, encoding="utf-8")


def build_product_index(
    path: str | Path, categories: Iterable[str]
) -> dict[str, str]:
    """Map product_id -> configured category; first record wins on duplicates."""
    wanted = set(categories)
    index: dict[str, str] = {}
    with open_maybe_gzip(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                log.warning("%s:%d: unparseable metadata line skipped", path, lineno)
                continue
            product_id = rec.get("asin") or rec.get("product_id")
            cat_path = rec.get("category") or rec.get("categories") or []
            if isinstance(cat_path, str):
                cat_path = [cat_path]
            if not product_id or not cat_path:
                continue
            hit = next((c for c in cat_path if c in wanted), None)
            if hit is None:
                continue
            if product_id in index:
                log.warning("duplicate product %s; keeping first category", product_id)
                continue
            index[product_id] = hit
    return index


def _parse_review(rec: dict) -> Review | None:
    review_id = rec.get("review_id") or rec.get("reviewID")
    product_id = rec.get("asin") or rec.get("product_id")
    text = rec.get("reviewText") or rec.get("text") or ""
    if review_id is None:
        # The public dump has no single review id; derive a stable one.
        reviewer = rec.get("reviewerID", "")
        stamp = rec.get("unixReviewTime", "")
        if reviewer and product_id:
            review_id = f"{reviewer}:{product_id}:{stamp}"
    rating = rec.get("overall", rec.get("rating"))
    try:
        rating = int(rating) if rating is not None else None
    except (TypeError, ValueError):
        rating = None
    if not review_id or not product_id or not text.strip():
        return None
    return Review(str(review_id), str(product_id), text, rating)


def load_reviews(
    path: str | Path,
    products: dict[str, str],
    counters: IngestCounters | None = None,
) -> Iterator[tuple[Review, str]]:
    """Stream (review, category) for reviews resolving to an indexed product.

    Bounded memory regardless of file size; malformed lines and reviews of
    unknown products are counted and skipped.
    """
    counters = counters if counters is not None else IngestCounters()
    with open_maybe_gzip(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError:
                counters.skip("malformed")
                continue
            review = _parse_review(rec)
            if review is None:
                counters.skip("malformed")
                continue
            category = products.get(review.product_id)
            if category is None:
                counters.skip("unknown_product")
                continue
            counters.emitted += 1
            yield review, category


def save_joined(
    rows: Iterable[tuple[Review, str]], path: str | Path
) -> int:
    """Write ingested (review, category) rows as line-delimited JSON."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for review, category in rows:
            fh.write(
                json.dumps(
                    {
                        "review_id": review.review_id,
                        "product_id": review.product_id,
                        "category": category,
                        "text": review.text,
                        "rating": review.rating,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
            n += 1
    return n


def load_joined(path: str | Path) -> Iterator[tuple[Review, str]]:
    """Stream rows written by save_joined."""
    with open_maybe_gzip(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            yield (
                Review(rec["review_id"], rec["product_id"], rec["text"], rec.get("rating")),
                rec["category"],
            )
