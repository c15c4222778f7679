"""Reproducibility manifests written next to every CLI output."""

from __future__ import annotations

import datetime
import hashlib
import json
from pathlib import Path


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(
    path: str | Path,
    command: str,
    inputs: list[str | Path],
    outputs: list[str | Path],
    seed: int | None = None,
    config_path: str | Path | None = None,
    extra: dict | None = None,
) -> dict:
    """Record command, content digests, seed and tool version for one run.

    The manifest carries the wall-clock timestamp, so it is excluded from
    byte-identity comparisons; the artifacts themselves are deterministic.
    """
    from . import __version__

    doc = {
        "command": command,
        "config_sha256": sha256_file(config_path) if config_path else None,
        "inputs": {str(p): sha256_file(p) for p in inputs},
        "outputs": {str(p): sha256_file(p) for p in outputs},
        "seed": seed,
        "tool_version": __version__,
        "timestamp_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if extra:
        doc.update(extra)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return doc
