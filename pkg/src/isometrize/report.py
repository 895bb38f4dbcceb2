"""JSON-ready conversion of verdicts, sets and gauges; report emission."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .dyadic import INF, format_value
from .verdict import Verdict


def plain(obj: Any) -> Any:
    """Convert nested results into JSON-compatible values with exact value strings."""
    if isinstance(obj, Verdict):
        return verdict_dict(obj)
    if hasattr(obj, "as_dict"):
        return plain(obj.as_dict())
    if isinstance(obj, (frozenset, set)):
        try:
            return sorted(plain(x) for x in obj)
        except TypeError:
            return sorted((plain(x) for x in obj), key=repr)
    if isinstance(obj, (list, tuple)):
        return [plain(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, Fraction):
        return format_value(obj)
    if isinstance(obj, float) and obj == INF:
        return "inf"
    if hasattr(obj, "value") and hasattr(obj, "name"):  # enums
        return obj.value
    return obj


def verdict_dict(v: Verdict) -> dict:
    out = {"status": v.status.value}
    if v.witness is not None:
        out["witness"] = plain(v.witness)
    if v.qualified:
        out["qualified"] = True
    if v.note:
        out["note"] = v.note
    if v.details:
        out["details"] = plain(v.details)
    return out


def emit_report(report: dict, fmt: str = "machine") -> bytes:
    data = plain(report)
    if fmt == "machine":
        return (json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt != "human":
        raise ValueError(f"unknown format {fmt!r}")
    lines: list = []
    _human(data, lines, 0)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _human(data, lines, depth):
    pad = "  " * depth
    if isinstance(data, dict):
        if "status" in data and isinstance(data["status"], str):
            extra = ""
            if "witness" in data:
                extra = f"  witness={json.dumps(data['witness'], sort_keys=True)}"
            if data.get("qualified"):
                extra += "  (qualified)"
            if data.get("note"):
                extra += f"  [{data['note']}]"
            lines.append(f"{pad}{data['status']}{extra}")
            return
        width = max((len(k) for k in data), default=0)
        for k in sorted(data):
            v = data[k]
            if isinstance(v, dict) and "status" in v and isinstance(v["status"], str):
                holder: list = []
                _human(v, holder, 0)
                lines.append(f"{pad}{k.ljust(width)}  {holder[0]}")
            elif isinstance(v, (dict,)) or (isinstance(v, list) and v and isinstance(v[0], (dict, list))):
                lines.append(f"{pad}{k}:")
                _human(v, lines, depth + 1)
            else:
                lines.append(f"{pad}{k.ljust(width)}  {json.dumps(v, sort_keys=True)}")
    elif isinstance(data, list):
        for row in data:
            if isinstance(row, list) and all(not isinstance(c, (list, dict)) for c in row):
                lines.append(pad + "  ".join(str(c).rjust(7) for c in row))
            elif isinstance(row, list) and not any(isinstance(c, dict) for c in row):
                lines.append(pad + json.dumps(row))
            else:
                _human(row, lines, depth)
    else:
        lines.append(f"{pad}{data}")
