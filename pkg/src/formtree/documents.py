"""Reading and writing the JSON documents the tools exchange.

Loaders are strict: structural defects raise :class:`ParseError` with
the JSON path of the offense (prefixed with the file path when the
document came from disk). Writers emit canonical JSON (sorted keys,
two-space indent, trailing newline) so identical inputs produce
identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .geometry import BoundingBox
from .model import (
    CONTROL_KINDS,
    Field,
    Layout,
    ParseError,
    QueryTree,
    parse_tree,
    serialize_tree,
)


def dumps_json(doc: object) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_json(path: Path, doc: object) -> None:
    Path(path).write_text(dumps_json(doc), encoding="utf-8")


def read_json(path: Path) -> object:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON: {exc}") from exc


def _require_str(doc: dict, key: str, path: str) -> str:
    value = doc.get(key)
    if not isinstance(value, str) or not value:
        raise ParseError(f"{path}.{key}: must be a nonempty string")
    return value


def _optional_str(doc: dict, key: str, path: str) -> str | None:
    value = doc.get(key)
    if value is None:
        return None
    if not isinstance(value, str):
        raise ParseError(f"{path}.{key}: must be a string")
    return value


def load_layout_doc(doc: object) -> Layout:
    """Parse a layout document.

    Grammar: ``{"name": str, "domain"?: str, "source"?: str, "fields":
    [{"id": str, "label"?: str, "kind": str, "bbox": {"x","y","w","h"},
    "order_index"?: int}, ...]}``.
    """
    if not isinstance(doc, dict):
        raise ParseError("$: layout document must be an object")
    name = _require_str(doc, "name", "$")
    raw_fields = doc.get("fields")
    if not isinstance(raw_fields, list) or not raw_fields:
        raise ParseError("$.fields: must be a nonempty array")
    fields = []
    for i, raw in enumerate(raw_fields):
        path = f"$.fields[{i}]"
        if not isinstance(raw, dict):
            raise ParseError(f"{path}: must be an object")
        fid = _require_str(raw, "id", path)
        kind = _require_str(raw, "kind", path)
        if kind not in CONTROL_KINDS:
            raise ParseError(
                f"{path}.kind: unknown control kind {kind!r}, expected one of "
                + ", ".join(sorted(CONTROL_KINDS))
            )
        raw_bbox = raw.get("bbox")
        if not isinstance(raw_bbox, dict):
            raise ParseError(f"{path}.bbox: must be an object")
        values = {}
        for key in ("x", "y", "w", "h"):
            v = raw_bbox.get(key)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"{path}.bbox.{key}: must be a number")
            values[key] = float(v)
        try:
            bbox = BoundingBox(**values)
        except ValueError as exc:
            raise ParseError(f"{path}.bbox: {exc}") from exc
        order_index = raw.get("order_index")
        if order_index is not None and (
            isinstance(order_index, bool) or not isinstance(order_index, int) or order_index < 0
        ):
            raise ParseError(f"{path}.order_index: must be a nonnegative integer")
        label = _optional_str(raw, "label", path)
        fields.append(Field(id=fid, bbox=bbox, label=label, kind=kind, order_index=order_index))
    domain = _optional_str(doc, "domain", "$")
    source = _optional_str(doc, "source", "$")
    try:
        return Layout(name=name, fields=tuple(fields), domain=domain, source=source)
    except ValueError as exc:
        raise ParseError(f"$.fields: {exc}") from exc


def layout_to_doc(layout: Layout) -> dict:
    doc: dict = {"name": layout.name, "fields": []}
    if layout.domain is not None:
        doc["domain"] = layout.domain
    if layout.source is not None:
        doc["source"] = layout.source
    for f in layout.fields:
        entry: dict = {
            "id": f.id,
            "kind": f.kind,
            "bbox": {"x": f.bbox.x, "y": f.bbox.y, "w": f.bbox.w, "h": f.bbox.h},
        }
        if f.label is not None:
            entry["label"] = f.label
        if f.order_index is not None:
            entry["order_index"] = f.order_index
        doc["fields"].append(entry)
    return doc


def read_layout(path: Path) -> Layout:
    doc = read_json(path)
    try:
        return load_layout_doc(doc)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def write_layout(path: Path, layout: Layout) -> None:
    write_json(path, layout_to_doc(layout))


def read_tree(path: Path) -> QueryTree:
    doc = read_json(path)
    try:
        return parse_tree(doc)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def write_tree(path: Path, tree: QueryTree) -> None:
    write_json(path, serialize_tree(tree))


@dataclass(frozen=True)
class ManifestEntry:
    """One corpus case: where its layout and gold tree live."""

    name: str
    layout_path: Path
    gold_path: Path
    domain: str = "unknown"
    normalize_gold_order: bool = False


def read_manifest(path: Path) -> list[ManifestEntry]:
    """Load a corpus manifest; relative case paths resolve against the manifest's directory.

    Accepts either ``{"cases": [...]}`` or a bare array of case entries.
    """
    doc = read_json(path)
    if isinstance(doc, dict):
        raw_cases = doc.get("cases")
        if not isinstance(raw_cases, list):
            raise ParseError(f"{path}: $.cases: must be an array")
    elif isinstance(doc, list):
        raw_cases = doc
    else:
        raise ParseError(f"{path}: $: manifest must be an object or an array")
    base = Path(path).parent
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for i, raw in enumerate(raw_cases):
        entry_path = f"$.cases[{i}]"
        if not isinstance(raw, dict):
            raise ParseError(f"{path}: {entry_path}: must be an object")
        try:
            name = _require_str(raw, "name", entry_path)
            layout_rel = _require_str(raw, "layout_path", entry_path)
            gold_rel = _require_str(raw, "gold_path", entry_path)
        except ParseError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        if name in seen:
            raise ParseError(f"{path}: {entry_path}.name: duplicate case name {name!r}")
        seen.add(name)
        domain = raw.get("domain", "unknown")
        if not isinstance(domain, str) or not domain:
            raise ParseError(f"{path}: {entry_path}.domain: must be a nonempty string")
        normalize = raw.get("normalize_gold_order", False)
        if not isinstance(normalize, bool):
            raise ParseError(f"{path}: {entry_path}.normalize_gold_order: must be a boolean")
        layout_path = Path(layout_rel)
        gold_path = Path(gold_rel)
        entries.append(
            ManifestEntry(
                name=name,
                layout_path=layout_path if layout_path.is_absolute() else base / layout_path,
                gold_path=gold_path if gold_path.is_absolute() else base / gold_path,
                domain=domain,
                normalize_gold_order=normalize,
            )
        )
    return entries
