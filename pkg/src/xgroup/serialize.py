"""Group description documents and provenance sidecars (JSON on disk).

A group document is either {"degree": n, "generators": [[images...], ...]}
(rebuilt breadth-first, so element order round-trips bit-exactly) or
{"table": [[...]]} with row i, column j holding the index of g_i * g_j and
element 0 the identity.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .engine import Group, ORDER_CAP
from .errors import InvalidPermutation, ParseError

FORMAT_TAG = "xgroup-group-v1"
PROVENANCE_TAG = "xgroup-provenance-v1"


def group_to_doc(group: Group) -> dict:
    if group.bfs_parent is not None:
        return {
            "format": FORMAT_TAG,
            "degree": group.degree,
            "generators": [
                [int(x) for x in group.perms[g]]
                for g in group.generator_indices
            ],
        }
    return {
        "format": FORMAT_TAG,
        "table": [[int(group.mul(i, j)) for j in range(group.order)]
                  for i in range(group.order)],
    }


def group_from_doc(doc: dict, cap: int = ORDER_CAP) -> Group:
    if not isinstance(doc, dict):
        raise ParseError("group document must be a JSON object")
    if doc.get("format") not in (FORMAT_TAG, None):
        raise ParseError(f"unknown format tag {doc.get('format')!r}")
    if "generators" in doc:
        degree = doc.get("degree")
        gens = doc.get("generators")
        if not isinstance(degree, int) or degree < 1:
            raise ParseError("degree must be a positive integer")
        if not isinstance(gens, list) or not all(
                isinstance(g, list) for g in gens):
            raise ParseError("generators must be a list of image lists")
        try:
            return Group.from_generators(degree, gens, cap=cap, source_doc=doc)
        except InvalidPermutation as exc:
            raise ParseError(str(exc)) from exc
    if "table" in doc:
        table = doc["table"]
        if not isinstance(table, list) or not table:
            raise ParseError("table must be a nonempty list of rows")
        try:
            return Group.from_table(table, source_doc=doc)
        except InvalidPermutation as exc:
            raise ParseError(str(exc)) from exc
    raise ParseError("document has neither generators nor table")


def write_group(group: Group, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps_doc(group_to_doc(group)), encoding="utf-8")


def read_group(path: Union[str, Path], cap: int = ORDER_CAP) -> Group:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read group document: {exc}") from exc
    return group_from_doc(doc, cap=cap)


def provenance_doc(record) -> dict:
    return {
        "format": PROVENANCE_TAG,
        "family": record.family,
        "parameters": {k: v for k, v in sorted(record.parameters.items())},
        "intended_case": record.intended_case,
        "order": record.group.order,
    }


def dumps_doc(doc: dict) -> str:
    """Deterministic rendering: fixed field order, two-space indent."""
    return json.dumps(doc, indent=2) + "\n"
