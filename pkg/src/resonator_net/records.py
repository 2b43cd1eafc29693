"""Output files: atomic writes, CSV tables and run manifests."""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile

from .network import Network, network_to_dict


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        v = float(v)
        if math.isnan(v):
            return "nan"
        return f"{v:.17e}"
    return str(v)


def sweep_to_csv(result) -> str:
    """Header row of column names, then one row per grid point."""
    names = list(result.columns)
    lines = [",".join(names)]
    for row in result.rows():
        lines.append(",".join(format_value(row[k]) for k in names))
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _jsonable(obj.tolist())
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def to_json(doc) -> str:
    return json.dumps(_jsonable(doc), indent=2) + "\n"


def scenario_hash(net: Network) -> str:
    canon = json.dumps(network_to_dict(net), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def write_manifest(out_path: str, command: str, net: Network | None, seed: int | None, wall_time: float,
                   extra: dict | None = None) -> str:
    from . import __version__

    manifest = {
        "command": command,
        "scenario_hash": scenario_hash(net) if net is not None else None,
        "seed": seed,
        "tool_version": __version__,
        "wall_time_s": wall_time,
        "outputs": [os.path.abspath(out_path)],
    }
    if extra:
        manifest.update(extra)
    path = out_path + ".manifest.json"
    atomic_write_text(path, to_json(manifest))
    return path
