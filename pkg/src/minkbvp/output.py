"""Deterministic result emission: provenance-stamped CSV and JSON files.

Bit-stable by construction: fixed column order, 17-significant-digit float
formatting (full round trip), LF endings, sorted rows, no timestamps.  Every
file starts with a one-line JSON provenance comment; a sidecar manifest
carries the same data plus the run parameters.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

from . import __version__ as _pkg_version
from .problems import ProblemSpec


def format_value(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.17g}"
    return str(x)


def problem_hash(spec: ProblemSpec) -> str:
    blob = json.dumps(spec.describe(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def provenance(spec: ProblemSpec, tolerances: dict, extra: dict | None = None) -> dict:
    prov = {
        "problem_sha256": problem_hash(spec),
        "tolerances": tolerances,
        "version": _pkg_version,
    }
    if extra:
        prov.update(extra)
    return prov


def write_csv(path, header, rows, prov: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["# " + json.dumps(prov, sort_keys=True, separators=(",", ":"))]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(format_value(x) for x in row))
    path.write_text("\n".join(lines) + "\n", newline="\n")
    return path


def write_json(path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(payload, sort_keys=True, indent=2, allow_nan=True) + "\n",
        newline="\n",
    )
    return path


def write_manifest(out_dir, prov: dict, files: list, params: dict) -> Path:
    payload = {"provenance": prov, "files": sorted(str(f) for f in files), "parameters": params}
    return write_json(Path(out_dir) / "manifest.json", payload)
