"""In-process mock of the platform upload API, for tests and the mock stack.

Serves the documented wire format on an ephemeral port, validates bearer
tokens against a configured list, enforces the platform profile, honors the
idempotency header, and persists received GLBs for inspection.
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field
from email.parser import BytesParser
from email.policy import default as _email_policy
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from ..asset_core.glb import parse_glb
from ..errors import CraftError
from ..mesh_budget import PlatformProfile, measure


@dataclass
class MockPlatformConfig:
    valid_tokens: tuple = ("test-token",)
    profile: PlatformProfile = field(default_factory=PlatformProfile)
    storage_dir: str | None = None
    host: str = "127.0.0.1"
    port: int = 0  # ephemeral


class _Handler(BaseHTTPRequestHandler):
    def log_message(self, fmt, *args):  # keep test output quiet
        pass

    def _json(self, status: int, body: dict):
        payload = json.dumps(body).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def _bytes(self, status: int, body: bytes, media="application/octet-stream"):
        self.send_response(status)
        self.send_header("Content-Type", media)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):
        server = self.server
        if self.path != "/v1/items":
            self._json(404, {"error": "not found"})
            return

        auth = self.headers.get("Authorization", "")
        token = auth[len("Bearer "):] if auth.startswith("Bearer ") else ""
        if token not in server.config.valid_tokens:
            self._json(401, {"error": "invalid token"})
            return

        length = int(self.headers.get("Content-Length", "0"))
        body = self.rfile.read(length)
        content_type = self.headers.get("Content-Type", "")
        if "multipart" not in content_type:
            self._json(400, {"error": "expected multipart/form-data"})
            return
        try:
            msg = BytesParser(policy=_email_policy).parsebytes(
                f"Content-Type: {content_type}\r\n\r\n".encode("ascii") + body
            )
            parts = {}
            for part in msg.iter_parts():
                field_name = part.get_param("name", header="content-disposition")
                parts[field_name] = part.get_payload(decode=True)
        except Exception:
            self._json(400, {"error": "malformed multipart body"})
            return
        if "file" not in parts or "name" not in parts:
            self._json(400, {"error": "missing file or name field"})
            return

        glb = parts["file"]
        name = parts["name"].decode("utf-8", errors="replace")
        if not 1 <= len(name) <= 64:
            self._json(422, {"error": "invalid name"})
            return

        profile = server.config.profile
        if len(glb) > profile.max_file_bytes:
            self._json(413, {"error": "file too large"})
            return
        try:
            doc = parse_glb(glb)
            triangles, _ = measure(doc)
        except (CraftError, ValueError) as exc:
            self._json(422, {"error": f"invalid glb: {exc}"})
            return
        if triangles > profile.max_triangles:
            self._json(422, {"error": "too many triangles"})
            return

        script = parts.get("script")
        idem_key = self.headers.get("X-Idempotency-Key")
        with server.state_lock:
            if idem_key and idem_key in server.idempotency:
                item_id = server.idempotency[idem_key]
            else:
                item_id = f"item-{next(server.counter):06d}"
                server.items[item_id] = glb
                if script is not None:
                    server.scripts[item_id] = script.decode("utf-8", errors="replace")
                if idem_key:
                    server.idempotency[idem_key] = item_id
                if server.storage_dir:
                    (server.storage_dir / f"{item_id}.glb").write_bytes(glb)
                    if script is not None:
                        (server.storage_dir / f"{item_id}.script.txt").write_bytes(script)
        self._json(
            201,
            {
                "item_id": item_id,
                "item_url": f"{server.external_url}/v1/items/{item_id}",
            },
        )

    def do_GET(self):
        server = self.server
        prefix = "/v1/items/"
        if self.path.startswith(prefix) and self.path.endswith("/data"):
            item_id = self.path[len(prefix):-len("/data")]
            with server.state_lock:
                blob = server.items.get(item_id)
            if blob is None:
                self._json(404, {"error": "no such item"})
                return
            self._bytes(200, blob, "model/gltf-binary")
            return
        self._json(404, {"error": "not found"})


class _Server(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, config: MockPlatformConfig):
        super().__init__(address, _Handler)
        self.config = config
        self.items = {}
        self.scripts = {}
        self.idempotency = {}
        self.counter = itertools.count(1)
        self.state_lock = threading.Lock()
        self.storage_dir = Path(config.storage_dir) if config.storage_dir else None
        if self.storage_dir:
            self.storage_dir.mkdir(parents=True, exist_ok=True)
        self.external_url = f"http://{address[0]}:{self.server_address[1]}"


class MockPlatformServer:
    """Handle for a running mock platform; use as a context manager in tests."""

    def __init__(self, config: MockPlatformConfig | None = None):
        self.config = config or MockPlatformConfig()
        self._server = _Server((self.config.host, self.config.port), self.config)
        self._thread = threading.Thread(
            target=self._server.serve_forever, name="mock-platform", daemon=True
        )
        self._thread.start()

    @property
    def base_url(self) -> str:
        return self._server.external_url

    @property
    def items(self) -> dict:
        with self._server.state_lock:
            return dict(self._server.items)

    def stored_bytes(self, item_id: str) -> bytes:
        with self._server.state_lock:
            return self._server.items[item_id]

    def stored_script(self, item_id: str) -> str | None:
        with self._server.state_lock:
            return self._server.scripts.get(item_id)

    def stop(self):
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5)

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.stop()
