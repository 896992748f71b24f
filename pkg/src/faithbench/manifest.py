"""Run manifests: a config hash plus versions, stamped into every artifact.

Artifacts are written deterministically (sorted keys, no timestamps) so a
re-run with the same manifest reproduces byte-identical outputs.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import platform
from pathlib import Path

from . import __version__


def build_manifest(command: str, config: dict, seed: int | None = None) -> dict:
    canonical = json.dumps(
        {"command": command, "config": config, "seed": seed}, sort_keys=True
    )
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
    import numpy
    import scipy

    return {
        "hash": digest,
        "command": command,
        "seed": seed,
        "config": config,
        "versions": {
            "faithbench": __version__,
            "python": platform.python_version(),
            "numpy": numpy.__version__,
            "scipy": scipy.__version__,
        },
    }


def write_manifest(out_dir, manifest: dict) -> Path:
    path = Path(out_dir) / f"manifest-{manifest['hash']}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return path


def write_json_artifact(path, payload: dict, manifest: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = {"manifest_hash": manifest["hash"], **payload}
    path.write_text(json.dumps(body, sort_keys=True, indent=2) + "\n")


def write_csv_artifact(path, header, rows, manifest: dict) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    path.write_text(f"# manifest: {manifest['hash']}\n" + buffer.getvalue())
