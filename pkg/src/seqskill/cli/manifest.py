"""Run manifests: one JSON record per completed stage, written atomically."""

import json
import os
import subprocess
import time
from dataclasses import asdict, dataclass, field


def revision_string() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return "unknown"


@dataclass
class RunManifest:
    command: str
    config_hash: str
    seed: int
    started: float
    finished: float = 0.0
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    revision: str = field(default_factory=revision_string)

    def write(self, path) -> None:
        self.finished = time.time()
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
        os.replace(tmp, path)


def read_manifest(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
