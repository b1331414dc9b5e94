"""Content-addressed on-disk cache for command outputs."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from . import __version__

ENV_VAR = "AFFINE_BGG_CACHE_DIR"

log = logging.getLogger(__name__)


def config_key(config: dict, version: str = __version__) -> str:
    blob = json.dumps({"config": config, "version": version}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class Cache:
    def __init__(self, directory, version: str = __version__):
        self.directory = Path(directory)
        self.version = version

    @classmethod
    def from_env(cls, directory=None) -> Cache | None:
        directory = directory or os.environ.get(ENV_VAR)
        return cls(directory) if directory else None

    def _path(self, config: dict) -> Path:
        return self.directory / f"{config_key(config, self.version)}.json"

    def get(self, config: dict):
        path = self._path(config)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
            if entry["version"] != self.version or entry["config"] != config:
                return None
            return entry["payload"]
        except (OSError, ValueError, KeyError, TypeError):
            log.warning("ignoring corrupt cache entry %s", path)
            return None

    def put(self, config: dict, payload):
        self.directory.mkdir(parents=True, exist_ok=True)
        entry = json.dumps({"version": self.version, "config": config, "payload": payload}, sort_keys=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(entry)
            os.replace(tmp, self._path(config))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return payload

    def get_or_compute(self, config: dict, compute):
        hit = self.get(config)
        if hit is not None:
            return hit
        return self.put(config, compute())
