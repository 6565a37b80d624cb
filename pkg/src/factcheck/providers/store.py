"""Run persistence: metadata, artifacts, and checksum manifests.

A run directory holds the resolved config snapshot, run metadata, and any
JSON Lines artifacts the pipeline produced. A manifest of SHA-256 checksums
makes partial writes and corruption detectable on load.
"""
from __future__ import annotations

import dataclasses
import hashlib
import json
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional


class ChecksumError(IOError):
    def __init__(self, filename: str):
        super().__init__(f"checksum mismatch for {filename!r}")
        self.filename = filename


@dataclass
class RunMetadata:
    """Provenance for one pipeline or annotation run.

    Mutable by design: counters and degradation notes accumulate while the
    run executes. An identical config_hash under mock providers implies
    reproducible outputs.
    """

    run_id: str = field(default_factory=lambda: uuid.uuid4().hex[:12])
    provider_ids: dict[str, str] = field(default_factory=dict)
    prompt_versions: dict[str, str] = field(default_factory=dict)
    config_hash: str = ""
    started_at: Optional[float] = None
    finished_at: Optional[float] = None
    cache_hits: int = 0
    degraded_paths: list[str] = field(default_factory=list)

    def start(self) -> "RunMetadata":
        self.started_at = time.time()
        return self

    def finish(self) -> "RunMetadata":
        self.finished_at = time.time()
        return self

    def record_degraded(self, note: str) -> None:
        self.degraded_paths.append(note)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def config_hash(config: dict) -> str:
    """Digest of a fully-resolved configuration mapping."""
    canonical = json.dumps(config, sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


MANIFEST_NAME = "manifest.json"
METADATA_NAME = "run_metadata.json"


def persist_run(meta: RunMetadata, artifacts: dict[str, str],
                data_dir: str | Path) -> Path:
    """Write artifacts plus metadata under `data_dir/<run_id>`; returns the dir.

    `artifacts` maps filename to UTF-8 content (the config snapshot and any
    input/output JSON Lines files). The manifest checksums every file so
    load_run can detect partial writes.
    """
    run_dir = Path(data_dir) / meta.run_id
    run_dir.mkdir(parents=True, exist_ok=True)
    for name, content in artifacts.items():
        (run_dir / name).write_text(content, encoding="utf-8")
    (run_dir / METADATA_NAME).write_text(
        json.dumps(meta.as_dict(), indent=2, ensure_ascii=False), encoding="utf-8")
    manifest = {name: _sha256_file(run_dir / name) for name in artifacts}
    manifest[METADATA_NAME] = _sha256_file(run_dir / METADATA_NAME)
    (run_dir / MANIFEST_NAME).write_text(
        json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8")
    return run_dir


def load_run(run_dir: str | Path) -> dict[str, str]:
    """Load artifacts back, verifying every checksum in the manifest."""
    run_dir = Path(run_dir)
    manifest = json.loads((run_dir / MANIFEST_NAME).read_text(encoding="utf-8"))
    artifacts: dict[str, str] = {}
    for name, expected in manifest.items():
        path = run_dir / name
        if not path.exists() or _sha256_file(path) != expected:
            raise ChecksumError(name)
        artifacts[name] = path.read_text(encoding="utf-8")
    return artifacts
