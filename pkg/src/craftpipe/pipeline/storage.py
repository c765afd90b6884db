"""Content-addressed blob storage and the append-only event log.

Blob layout: ``blobs/<sha256>/data`` plus a ``manifest.json`` index at the
store root. Identical bytes are stored once; digests are stable across
stores. The event log is one JSON-lines file per day; records are strictly
ordered per session by a monotonic sequence number.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from collections import defaultdict
from pathlib import Path


class BlobStore:
    def __init__(self, root):
        self.root = Path(root)
        (self.root / "blobs").mkdir(parents=True, exist_ok=True)
        self._manifest_path = self.root / "manifest.json"
        self._lock = threading.Lock()
        if self._manifest_path.exists():
            self._manifest = json.loads(self._manifest_path.read_text("utf-8"))
        else:
            self._manifest = {}

    def put(self, data: bytes, media_type: str = "application/octet-stream") -> str:
        digest = hashlib.sha256(data).hexdigest()
        blob_dir = self.root / "blobs" / digest
        with self._lock:
            if digest not in self._manifest:
                blob_dir.mkdir(parents=True, exist_ok=True)
                tmp = blob_dir / "data.tmp"
                tmp.write_bytes(data)
                os.replace(tmp, blob_dir / "data")
                self._manifest[digest] = {
                    "size": len(data),
                    "media_type": media_type,
                }
                self._write_manifest()
        return digest

    def get(self, digest: str) -> bytes:
        path = self.root / "blobs" / digest / "data"
        if not path.exists():
            raise KeyError(f"no blob {digest}")
        return path.read_bytes()

    def exists(self, digest: str) -> bool:
        return (self.root / "blobs" / digest / "data").exists()

    def media_type(self, digest: str) -> str:
        entry = self._manifest.get(digest)
        return entry["media_type"] if entry else "application/octet-stream"

    def _write_manifest(self):
        tmp = self._manifest_path.with_suffix(".tmp")
        tmp.write_text(
            json.dumps(self._manifest, indent=2, sort_keys=True), encoding="utf-8"
        )
        os.replace(tmp, self._manifest_path)


class EventLog:
    """Append-only JSONL event records, one file per UTC day."""

    def __init__(self, root, clock=time.time):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.clock = clock
        self._lock = threading.Lock()
        self._next_seq = defaultdict(int)
        for record in self.read_all():
            sid = record.get("session_id", "")
            self._next_seq[sid] = max(self._next_seq[sid], record.get("seq", -1) + 1)

    def append(self, session_id: str, kind: str, at: float | None = None, **payload) -> dict:
        ts = self.clock() if at is None else at
        with self._lock:
            record = {
                "ts": ts,
                "session_id": session_id,
                "kind": kind,
                "seq": self._next_seq[session_id],
                **payload,
            }
            self._next_seq[session_id] += 1
            day = time.strftime("%Y%m%d", time.gmtime(ts))
            path = self.root / f"events-{day}.jsonl"
            with path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
        return record

    def read_all(self) -> list:
        records = []
        for path in sorted(self.root.glob("events-*.jsonl")):
            with path.open("r", encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        records.append(json.loads(line))
        return records


def digest_of(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_of_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()
