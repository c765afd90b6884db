"""Regenerate docs/openapi.json from the live app definition."""

import json
import tempfile
from pathlib import Path

from craftpipe.service_api.app import create_app
from craftpipe.service_api.config import ApiConfig, ServiceStack

ROOT = Path(__file__).resolve().parents[1]


def main():
    with tempfile.TemporaryDirectory() as tmp:
        stack = ServiceStack(
            ApiConfig(blob_store_path=f"{tmp}/blobs", log_path=f"{tmp}/logs")
        )
        try:
            schema = create_app(stack.engine).openapi()
        finally:
            stack.close()
    out = ROOT / "docs" / "openapi.json"
    out.write_text(json.dumps(schema, indent=2, sort_keys=True) + "\n", "utf-8")
    print(f"wrote {out} ({len(schema['paths'])} paths)")


if __name__ == "__main__":
    main()
