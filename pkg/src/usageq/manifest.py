"""Run manifests: every file-producing command records what made its output."""

from __future__ import annotations

import hashlib
import json
import platform
import time
from pathlib import Path

from . import __version__
from .config import PipelineConfig


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(
    output: str | Path,
    command: str,
    inputs: list[str | Path],
    config: PipelineConfig,
    seed: int | None = None,
    extra: dict | None = None,
) -> Path:
    """Write `<output>.manifest.json` next to the output file."""
    output = Path(output)
    manifest = {
        "command": command,
        "output": output.name,
        "inputs": [
            {"path": str(p), "sha256": _sha256(Path(p)), "bytes": Path(p).stat().st_size}
            for p in inputs
            if Path(p).is_file()
        ],
        "config_hash": config.hash(),
        "seed": seed,
        "versions": {
            "usageq": __version__,
            "python": platform.python_version(),
        },
        "created_at": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    if extra:
        manifest.update(extra)
    path = output.with_name(output.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path
