"""JSON documents for states, patches and reports.

Rationals are written as "p/q" strings and group coordinates as integers; counts
that can exceed 2^53 are decimal strings. Keys are sorted so equal inputs give
byte-identical files.
"""

from __future__ import annotations

import dataclasses
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .alphabet import STAR
from .config import RunConfig, config_from_dict
from .construction import ConstructionState
from .errors import ConfigError
from .lattice import Window
from .patch import Patch

SCHEMA = "mdimshift/1"
STAR_LIST_CAP = 4096


def frac(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def value_out(v):
    if v is STAR:
        return "*"
    return [frac(c) for c in v]


def value_in(v):
    if v == "*":
        return STAR
    return tuple(Fraction(c) for c in v)


def window_out(w: Window) -> dict:
    return {"lo": list(w.lo), "hi": list(w.hi)}


def window_in(d: dict) -> Window:
    return Window(tuple(int(x) for x in d["lo"]), tuple(int(x) for x in d["hi"]))


def to_jsonable(obj):
    """Generic conversion for report dataclasses."""
    if obj is STAR:
        return "*"
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj if abs(obj) < 1 << 53 else str(obj)
    if isinstance(obj, Fraction):
        return frac(obj)
    if isinstance(obj, Window):
        return window_out(obj)
    if isinstance(obj, Patch):
        return patch_doc(obj)
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return str(obj)


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_doc(path, kind: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if doc.get("schema") != SCHEMA or doc.get("kind") != kind:
        raise ConfigError(f"{path} is not a {SCHEMA} {kind} document")
    return doc


# --- patches -----------------------------------------------------------------------


def patch_doc(patch: Patch) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "patch",
        "window": window_out(patch.window),
        "cells": [
            {"position": list(g), "value": value_out(patch.cells[g])} for g in patch.window
        ],
    }


def patch_from_doc(doc: dict) -> Patch:
    window = window_in(doc["window"])
    cells = {tuple(int(x) for x in c["position"]): value_in(c["value"]) for c in doc["cells"]}
    return Patch(window, cells)


def save_patch(patch: Patch, path) -> None:
    write_atomic(path, dumps(patch_doc(patch)))


def load_patch(path) -> Patch:
    return patch_from_doc(read_doc(path, "patch"))


# --- states ------------------------------------------------------------------------


def _star_positions(tmpl, count: int):
    if count > STAR_LIST_CAP:
        return None
    return [list(o) for o in tmpl.star_offsets()]


def state_doc(state: ConstructionState, config: RunConfig) -> dict:
    steps = []
    for rec in state.steps:
        entry = {
            "k": rec.k,
            "n": rec.level,
            "side": str(rec.side),
            "stars": str(rec.stars),
            "star_positions": _star_positions(rec.template, rec.stars),
        }
        if rec.support is not None:
            sup = rec.support
            entry.update(
                {
                    "l": sup.level,
                    "support_side": str(sup.side),
                    "R_size": str(sup.size),
                    "h": [str(x) for x in sup.h],
                    "c": [[0] * state.dim],
                    "net_size": len(sup.net),
                    "copy_stars": str(rec.copy_stars),
                    "kept_stars": str(rec.keep),
                }
            )
        steps.append(entry)
    return {
        "schema": SCHEMA,
        "kind": "state",
        "config": config.as_dict(),
        "mode": state.mode,
        "t": frac(state.t),
        "alphabet": state.alphabet.describe(),
        "depth": state.depth,
        "steps": steps,
    }


def save_state(state: ConstructionState, config: RunConfig, path) -> None:
    write_atomic(path, dumps(state_doc(state, config)))


def load_state(path) -> tuple[ConstructionState, RunConfig]:
    """Rebuild the state from its recorded configuration and check the records match."""
    doc = read_doc(path, "state")
    config = config_from_dict(doc["config"])
    state = config.build()
    again = state_doc(state, config)
    if again["steps"] != doc["steps"]:
        raise ConfigError(f"{path}: step records do not match a rebuild of its configuration")
    return state, config


def report_doc(name: str, payload) -> dict:
    return {"schema": SCHEMA, "kind": "report", "report": name, "data": to_jsonable(payload)}
