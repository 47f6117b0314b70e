"""Form fields, layouts, and the ordered grouping tree built over them.

A layout is the flat record of one search form: every interactive
control with its box. The tree puts those controls back into their
visual hierarchy: leaves are fields, inner nodes are groups, and the
children of every node are ordered the way a reader scans the form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .geometry import DEFAULT_GEOMETRY, BoundingBox, GeometryConfig

CONTROL_KINDS = frozenset(
    {"text", "select", "radio", "checkbox", "button", "textarea", "other"}
)


class ParseError(ValueError):
    """A document breaks the interchange grammar; the message names the offending path."""


@dataclass(frozen=True)
class Field:
    """One interactive control of a form."""

    id: str
    bbox: BoundingBox
    label: str | None = None
    kind: str = "other"
    order_index: int | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("field id must be nonempty")
        if self.kind not in CONTROL_KINDS:
            raise ValueError(f"unknown control kind {self.kind!r}")
        if self.order_index is not None and self.order_index < 0:
            raise ValueError(f"order_index must be nonnegative, got {self.order_index}")


@dataclass(frozen=True)
class Layout:
    """One query interface: a named collection of fields with unique ids."""

    name: str
    fields: tuple[Field, ...]
    domain: str | None = None
    source: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "fields", tuple(self.fields))
        if not self.fields:
            raise ValueError("layout needs at least one field")
        seen: set[str] = set()
        for f in self.fields:
            if f.id in seen:
                raise ValueError(f"duplicate field id {f.id!r}")
            seen.add(f.id)

    def field_ids(self) -> set[str]:
        return {f.id for f in self.fields}


@dataclass(frozen=True)
class Leaf:
    """Tree leaf: one field, referenced by id."""

    field_id: str


@dataclass(frozen=True)
class Group:
    """Inner tree node: an ordered run of sub-nodes that form one visual unit.

    Arity is not enforced at construction so that malformed trees can be
    described by :func:`validate_tree`; a well-formed group has at least
    two children.
    """

    children: tuple["QueryNode", ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


QueryNode = Union[Leaf, Group]


@dataclass(frozen=True)
class QueryTree:
    """The grouping hierarchy of one layout."""

    root: QueryNode
    layout_name: str = ""


def iter_leaves(node: QueryNode) -> Iterator[Leaf]:
    """All leaves under the node, left to right."""
    if isinstance(node, Leaf):
        yield node
    else:
        for child in node.children:
            yield from iter_leaves(child)


def leaf_ids(node: QueryNode) -> list[str]:
    """Field ids of all leaves under the node, in tree order."""
    return [leaf.field_id for leaf in iter_leaves(node)]


def reading_order(
    fields: Iterable[Field],
    cfg: GeometryConfig = DEFAULT_GEOMETRY,
) -> list[Field]:
    """Fields in the order a reader scans them.

    When every field carries an explicit ``order_index`` that wins.
    Otherwise fields are banded into rows (top edges within
    ``cfg.align_tolerance`` of the band anchor share a row), bands run
    top to bottom, and each band runs left to right. Ties fall back to
    the field id so the result is a deterministic total order.
    """
    items = list(fields)
    if items and all(f.order_index is not None for f in items):
        return sorted(items, key=lambda f: (f.order_index, f.id))
    by_top = sorted(items, key=lambda f: (f.bbox.top, f.bbox.left, f.id))
    bands: list[list[Field]] = []
    band_top = 0.0
    for f in by_top:
        if not bands or f.bbox.top - band_top > cfg.align_tolerance:
            bands.append([])
            band_top = f.bbox.top
        bands[-1].append(f)
    ordered: list[Field] = []
    for band in bands:
        ordered.extend(sorted(band, key=lambda f: (f.bbox.left, f.id)))
    return ordered


UNKNOWN_LEAF = "unknown_leaf"
MISSING_FIELD = "missing_field"
DUPLICATE_LEAF = "duplicate_leaf"
UNDERSIZED_GROUP = "undersized_group"


@dataclass(frozen=True)
class Violation:
    """One way a tree fails to describe a layout."""

    kind: str
    path: str
    message: str


def validate_tree(tree: QueryTree, layout: Layout) -> list[Violation]:
    """Check that the tree's leaves partition the layout's fields.

    Returns one violation per breach, an empty list when the tree is
    sound: every layout field appears exactly once as a leaf, no leaf
    names an unknown field, and every group has at least two children.
    """
    violations: list[Violation] = []
    known = layout.field_ids()
    counts: dict[str, int] = {}

    def walk(node: QueryNode, path: str) -> None:
        if isinstance(node, Leaf):
            counts[node.field_id] = counts.get(node.field_id, 0) + 1
            if node.field_id not in known:
                violations.append(
                    Violation(
                        UNKNOWN_LEAF,
                        path,
                        f"leaf {node.field_id!r} is not a field of layout {layout.name!r}",
                    )
                )
        else:
            if len(node.children) < 2:
                violations.append(
                    Violation(UNDERSIZED_GROUP, path, "group needs at least two children")
                )
            for i, child in enumerate(node.children):
                walk(child, f"{path}[{i}]")

    walk(tree.root, "root")
    for fid in sorted(known):
        if counts.get(fid, 0) == 0:
            violations.append(
                Violation(MISSING_FIELD, "root", f"field {fid!r} never appears as a leaf")
            )
    for fid in sorted(counts):
        if fid in known and counts[fid] > 1:
            violations.append(
                Violation(
                    DUPLICATE_LEAF, "root", f"field {fid!r} appears {counts[fid]} times"
                )
            )
    return violations


def tree_equals(a: QueryTree, b: QueryTree) -> bool:
    """Exact ordered structural equality.

    Leaves are equal when they reference the same field, groups when
    their children match pairwise in order. Inner nodes carry no labels
    to compare, and layout names are deliberately ignored.
    """
    return a.root == b.root


def serialize_tree(tree: QueryTree) -> dict:
    """Tree document: ``{"layout": name, "root": node}``.

    Node grammar: ``{"leaf": field_id}`` or ``{"group": [node, ...]}``.
    """
    return {"layout": tree.layout_name, "root": _node_to_doc(tree.root)}


def _node_to_doc(node: QueryNode) -> dict:
    if isinstance(node, Leaf):
        return {"leaf": node.field_id}
    return {"group": [_node_to_doc(child) for child in node.children]}


def parse_tree(doc: object) -> QueryTree:
    """Parse a tree document produced by :func:`serialize_tree`.

    Unknown keys (a gold file may annotate groups with labels) are
    ignored. Structural defects raise :class:`ParseError` naming the
    JSON path of the offending node.
    """
    if not isinstance(doc, dict):
        raise ParseError("$: tree document must be an object")
    if "root" not in doc:
        raise ParseError("$: missing 'root'")
    layout_name = doc.get("layout", "")
    if not isinstance(layout_name, str):
        raise ParseError("$.layout: must be a string")
    return QueryTree(_node_from_doc(doc["root"], "$.root"), layout_name)


def _node_from_doc(doc: object, path: str) -> QueryNode:
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: node must be an object")
    has_leaf = "leaf" in doc
    has_group = "group" in doc
    if has_leaf and has_group:
        raise ParseError(f"{path}: node cannot be both a leaf and a group")
    if has_leaf:
        field_id = doc["leaf"]
        if not isinstance(field_id, str) or not field_id:
            raise ParseError(f"{path}.leaf: must be a nonempty string")
        return Leaf(field_id)
    if has_group:
        children = doc["group"]
        if not isinstance(children, list):
            raise ParseError(f"{path}.group: must be an array")
        if len(children) < 2:
            raise ParseError(f"{path}.group: a group needs at least two children")
        return Group(
            tuple(
                _node_from_doc(child, f"{path}.group[{i}]")
                for i, child in enumerate(children)
            )
        )
    raise ParseError(f"{path}: node needs either 'leaf' or 'group'")
