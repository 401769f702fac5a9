"""SolveCache: local JSON cache for Toda solutions.

One JSON envelope per key under ``directory/``; the key is slugified from a
digest of the resolved problem document, so identical problems hit the
same entry regardless of how they were written.
"""

import hashlib
import json
from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Optional

from logorator import Logger
from slugify import slugify

from .config import SolverDefaults


def problem_key(document: Any, prefix: str = "toda") -> str:
    """Cache key for a JSON-ready problem document."""
    digest = hashlib.sha256(json.dumps(document, sort_keys=True, default=str).encode("utf-8")).hexdigest()[:24]
    return slugify(f"{prefix}-{digest}")


class SolveCache:
    """Persistent cache of solution payloads.

    With ``cache=False`` every method is a no-op and ``load`` returns None.
    """

    def __init__(
        self,
        key: str,
        directory: Optional[str] = None,
        ttl: Optional[int] = None,
        cache: bool = True,
        logging: bool = SolverDefaults.LOGGING,
    ):
        self._key = slugify(key)
        self._directory = SolverDefaults.CACHE_DIRECTORY if directory is None else directory
        self._ttl = SolverDefaults.CACHE_TTL if ttl is None else ttl
        self._cache = cache
        self._logging = logging

    @property
    def key(self) -> str:
        return self._key

    def _local_path(self) -> Path:
        return Path(self._directory) / f"{self._key}.json"

    def _read_envelope(self) -> Optional[dict]:
        path = self._local_path()
        if not path.exists():
            return None
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, OSError):
            return None
        saved_at = raw.get("_saved_at")
        ttl_days = raw.get("_ttl_days", self._ttl)
        if saved_at:
            try:
                if datetime.now() - datetime.fromisoformat(saved_at) > timedelta(days=ttl_days):
                    return None
            except (ValueError, TypeError):
                pass
        return raw

    def save(self, data: dict) -> None:
        if not self._cache:
            return
        path = self._local_path()
        path.parent.mkdir(parents=True, exist_ok=True)
        payload = {"_saved_at": datetime.now().isoformat(), "_ttl_days": self._ttl, "data": data}
        path.write_text(json.dumps(payload, indent=4, default=str), encoding="utf-8")
        if self._logging:
            Logger.note(f"💾 Cached {self._key}")

    def load(self) -> Optional[dict]:
        """Cached data, or None if missing, unreadable or expired."""
        if not self._cache:
            return None
        raw = self._read_envelope()
        if raw is None:
            return None
        if self._logging:
            Logger.note(f"📂 Cache hit {self._key}")
        return raw.get("data")

    def exists(self) -> bool:
        return self._cache and self._read_envelope() is not None

    def delete(self) -> None:
        if not self._cache:
            return
        path = self._local_path()
        if path.exists():
            path.unlink()

    def list_keys(self, limit: int = 100) -> dict:
        if not self._cache:
            return {"keys": []}
        directory = Path(self._directory)
        if not directory.exists():
            return {"keys": []}
        return {"keys": sorted(p.stem for p in directory.glob("*.json"))[:limit]}
