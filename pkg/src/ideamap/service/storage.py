"""Durable flow persistence.

One JSON file per flow, written tmp-then-rename with an fsync in between,
so a crash at any point leaves the previous consistent document readable.
Crash points are injectable for the fault tests.
"""
from __future__ import annotations

import json
import os
import time
from pathlib import Path
from typing import Callable, Protocol
from urllib.parse import quote, unquote

from ..errors import CorruptDocument


class FlowStorage(Protocol):
    def save(self, flow_id: str, document: dict) -> None: ...
    def load_all(self) -> dict[str, dict]: ...
    def delete(self, flow_id: str) -> None: ...


class MemoryFlowStorage:
    def __init__(self):
        self._entries: dict[str, dict] = {}

    def save(self, flow_id: str, document: dict) -> None:
        self._entries[flow_id] = json.loads(json.dumps(document))

    def load_all(self) -> dict[str, dict]:
        return {fid: json.loads(json.dumps(doc)) for fid, doc in self._entries.items()}

    def delete(self, flow_id: str) -> None:
        self._entries.pop(flow_id, None)


class FileFlowStorage:
    """File-per-flow storage with atomic replace semantics."""

    def __init__(
        self,
        root: str | Path,
        clock: Callable[[], float] = time.time,
        crash_hook: Callable[[str], None] | None = None,
    ):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.clock = clock
        self.crash_hook = crash_hook
        self._created: dict[str, float] = {}

    def _hook(self, stage: str) -> None:
        if self.crash_hook is not None:
            self.crash_hook(stage)

    def _path(self, flow_id: str) -> Path:
        return self.root / f"{quote(flow_id, safe='')}.json"

    def save(self, flow_id: str, document: dict) -> None:
        path = self._path(flow_id)
        created = self._created.setdefault(flow_id, self.clock())
        entry = {
            "meta": {"owner": None, "created_at": created, "updated_at": self.clock()},
            "document": document,
        }
        payload = json.dumps(entry, sort_keys=True, separators=(",", ":")).encode("utf-8")
        tmp = path.with_name(path.name + ".tmp")
        half = len(payload) // 2
        with open(tmp, "wb") as handle:
            handle.write(payload[:half])
            self._hook("mid_write")
            handle.write(payload[half:])
            handle.flush()
            os.fsync(handle.fileno())
        self._hook("before_replace")
        os.replace(tmp, path)
        self._hook("after_replace")

    def load_all(self) -> dict[str, dict]:
        entries: dict[str, dict] = {}
        for path in sorted(self.root.glob("*.json")):
            if path.name.endswith(".json.tmp"):
                continue
            flow_id = unquote(path.name[: -len(".json")])
            try:
                entry = json.loads(path.read_text(encoding="utf-8"))
            except (json.JSONDecodeError, UnicodeDecodeError) as exc:
                raise CorruptDocument(f"stored flow file {path.name} is unreadable: {exc}") from exc
            if not isinstance(entry, dict) or "document" not in entry:
                raise CorruptDocument(f"stored flow file {path.name} has no document")
            meta = entry.get("meta") or {}
            if isinstance(meta.get("created_at"), (int, float)):
                self._created[flow_id] = float(meta["created_at"])
            entries[flow_id] = entry["document"]
        return entries

    def delete(self, flow_id: str) -> None:
        path = self._path(flow_id)
        path.unlink(missing_ok=True)
        path.with_name(path.name + ".tmp").unlink(missing_ok=True)
        self._created.pop(flow_id, None)
