"""One declarative config for the whole pipeline; flags override fields."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

DEFAULT_CATEGORIES = (
    "Backpacking Packs",
    "Tents",
    "Bikes",
    "Jackets",
    "Vacuums",
    "Blenders",
    "Espresso Machines",
    "Grills",
    "Walk-Behind Lawn Mowers",
    "Birdhouses",
    "Feeders",
    "Snow Shovels",
)


@dataclass
class PipelineConfig:
    categories: list[str] = field(default_factory=lambda: list(DEFAULT_CATEGORIES))
    category_nouns: dict[str, str] = field(default_factory=dict)
    min_support: int = 3
    require_aspect: bool = True
    sample_size: int = 100
    seed: int = 13
    templates: list[str] = field(default_factory=list)  # empty -> built-in five
    generic_stoplist: list[str] = field(default_factory=list)  # empty -> built-in
    train_fraction: float = 0.8
    rouge_mode: str = "f1"
    adapter_command: list[str] = field(default_factory=list)
    adapter_url: str = ""
    adapter_timeout: float = 10.0
    adapter_max_inflight: int = 4
    question_port: int = 8764
    annotation_port: int = 8765
    lease_seconds: float = 300.0
    include_generic_in_index: bool = False

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f for f in cls.__dataclass_fields__}
        unknown = data.keys() - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(asdict(self), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def hash(self) -> str:
        canonical = json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
