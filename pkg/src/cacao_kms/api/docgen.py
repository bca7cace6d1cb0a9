"""Route documentation generator (OpenAPI JSON plus a readable route table)."""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI
from fastapi.routing import APIRoute

from cacao_kms.api.errors import CODE_TO_STATUS


def write_docs(app: FastAPI, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    openapi_path = out_dir / "openapi.json"
    openapi_path.write_text(json.dumps(app.openapi(), indent=2) + "\n", encoding="utf-8")
    routes_path = out_dir / "routes.md"
    routes_path.write_text(_routes_markdown(app), encoding="utf-8")
    return [openapi_path, routes_path]


def _routes_markdown(app: FastAPI) -> str:
    lines = [
        "# HTTP routes",
        "",
        "| Method | Path |",
        "| --- | --- |",
    ]
    seen = set()
    for route in app.routes:
        if not isinstance(route, APIRoute):
            continue
        for method in sorted(route.methods - {"HEAD", "OPTIONS"}):
            row = (method, route.path)
            if row not in seen:
                seen.add(row)
                lines.append(f"| {method} | {route.path} |")
    lines += [
        "",
        "# Error codes",
        "",
        "| Code | HTTP status |",
        "| --- | --- |",
    ]
    for code, status in sorted(CODE_TO_STATUS.items(), key=lambda kv: (kv[1], kv[0])):
        lines.append(f"| {code} | {status} |")
    lines.append("")
    return "\n".join(lines)
