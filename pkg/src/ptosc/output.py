"""CSV/JSON serialization of result tables."""

from __future__ import annotations

import io
import json

from . import __version__

SCHEMA_VERSION = 1


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


def _jsonable(value):
    if isinstance(value, float):
        # 17 significant digits, round-tripped so JSON carries the CSV value
        return float(format(value, ".17g"))
    return value


def render(command: str, config: dict, columns: list[str], rows: list[dict], fmt_name: str) -> str:
    if fmt_name == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "tool": f"ptosc {__version__}",
            "command": command,
            "config": config,
            "columns": columns,
            "rows": [{k: _jsonable(r.get(k)) for k in columns} for r in rows],
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    meta = json.dumps(config, sort_keys=True, separators=(",", ":"))
    buf.write(f"# ptosc {__version__} schema={SCHEMA_VERSION} command={command} config={meta}\n")
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(fmt(r.get(k)) for k in columns) + "\n")
    return buf.getvalue()
