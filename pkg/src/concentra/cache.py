"""Run records and the append-only results cache.

Every CLI invocation writes a RunRecord (JSON) keyed by a content hash of
(command, canonical inputs, seed); long searches additionally go through an
append-only JSON-lines cache so identical configurations are answered
without recomputation.  All numeric output is serialized at 15 significant
digits, which round-trips losslessly at that precision.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import time
from pathlib import Path

import numpy as np

SIG = 15


def to_jsonable(obj):
    """Recursively convert dataclasses / numpy values to JSON-able data.

    Spectra serialize as plain integer arrays and coefficient polynomials
    as arrays of [re, im] pairs (the wire formats the CLI documents).
    """
    from .trigpoly import CoeffPoly, Spectrum
    if isinstance(obj, Spectrum):
        return [int(h) for h in obj.freqs]
    if isinstance(obj, CoeffPoly):
        return [[float(z.real), float(z.imag)] for z in obj.coeffs]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [[float(z.real), float(z.imag)] for z in obj]
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def round_floats(obj):
    """Normalize every float to 15 significant digits."""
    if isinstance(obj, float):
        return float(f"{obj:.{SIG}g}")
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [round_floats(v) for v in obj]
    return obj


def canonical_json(obj) -> str:
    return json.dumps(round_floats(to_jsonable(obj)), sort_keys=True,
                      separators=(",", ":"))


def config_hash(command: str, inputs, seed) -> str:
    blob = canonical_json({"command": command, "inputs": inputs, "seed": seed})
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def default_cache_dir() -> Path:
    env = os.environ.get("CONCENTRA_CACHE")
    if env:
        return Path(env)
    return Path(".concentra-cache")


class ResultsCache:
    """Append-only JSON-lines store keyed by config hash."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.path = self.root / "searches.jsonl"

    def get(self, key: str):
        if not self.path.exists():
            return None
        hit = None
        with self.path.open() as fh:
            for line in fh:
                try:
                    row = json.loads(line)
                except json.JSONDecodeError:
                    continue
                if row.get("key") == key:
                    hit = row.get("payload")
        return hit

    def put(self, key: str, payload):
        self.root.mkdir(parents=True, exist_ok=True)
        with self.path.open("a") as fh:
            fh.write(json.dumps({"key": key,
                                 "payload": round_floats(to_jsonable(payload))})
                     + "\n")


def write_record(root: Path, command: str, inputs, outputs, wall_time: float,
                 seed) -> Path:
    root = Path(root)
    rec_dir = root / "records"
    rec_dir.mkdir(parents=True, exist_ok=True)
    h = config_hash(command, inputs, seed)
    record = {
        "command": command,
        "config_hash": h,
        "inputs": round_floats(to_jsonable(inputs)),
        "outputs": round_floats(to_jsonable(outputs)),
        "wall_time": wall_time,
        "seed": seed,
    }
    path = rec_dir / f"{command}-{h}.json"
    path.write_text(json.dumps(record, indent=2, sort_keys=True))
    return path


def load_record(path) -> dict:
    return json.loads(Path(path).read_text())
