"""Seeded generator of synthetic form layouts with known grouping trees.

Fields of one group sit on a shared baseline with uniform spacing;
sibling blocks stack vertically, horizontally staggered so no two
block edges line up, with gaps wide enough that the grouping is
unambiguous by at least the requested ratio. With ``jitter`` zero the
construction is exact: adjacent siblings of a block are equidistant,
so extraction recovers the planted tree. Jitter perturbs every box
edge independently and is the intended way to degrade a corpus.

Output is a pure function of the spec. The random source is numpy's
``default_rng`` (the PCG64 generator); the seed therefore pins the
generated documents byte for byte, and the generator identity is part
of the file-format contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .geometry import (
    DEFAULT_GEOMETRY,
    BoundingBox,
    GeometryConfig,
    alignment_score,
    pair_distance,
    rect_min_distance,
    union_bbox,
)
from .model import Field, Group, Layout, Leaf, QueryNode, QueryTree

_FIELD_KINDS = ("text", "select", "radio", "checkbox")
_MAX_ATTEMPTS = 20


class GenerationError(RuntimeError):
    """Placement could not satisfy the separation constraints."""


class _RetryError(Exception):
    """Internal: this attempt failed a constraint; redraw and try again."""


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for one synthetic layout.

    Ranges are inclusive integer bounds. ``nesting_depth`` is the number
    of group levels below the root: 1 plants flat groups of fields, 2
    plants groups of groups. ``gap_ratio`` is the minimum factor by
    which distances across sibling blocks must exceed distances inside
    them; ``jitter`` is the maximum perturbation applied to each box
    edge after placement.
    """

    seed: int = 0
    n_groups: tuple[int, int] = (2, 4)
    fields_per_group: tuple[int, int] = (2, 4)
    intra_gap: tuple[int, int] = (4, 12)
    gap_ratio: float = 3.0
    jitter: float = 0.0
    nesting_depth: int = 1
    field_size: tuple[int, int] = (16, 64)

    def __post_init__(self) -> None:
        for name in ("n_groups", "fields_per_group", "intra_gap", "field_size"):
            lo, hi = getattr(self, name)
            if lo < 1 or hi < lo:
                raise ValueError(f"{name} must be a nonempty range of positive bounds")
        if not math.isfinite(self.gap_ratio) or self.gap_ratio <= 1:
            raise ValueError("gap_ratio must be > 1")
        if not math.isfinite(self.jitter) or self.jitter < 0:
            raise ValueError("jitter must be >= 0")
        if self.nesting_depth < 1:
            raise ValueError("nesting_depth must be >= 1")


@dataclass(frozen=True)
class SeparationCertificate:
    """Realized worst-case separation of the planted grouping.

    Taken at the tree node where the ratio of the smallest
    across-sibling distance to the largest within-sibling distance is
    tightest. ``max_intra_distance`` is zero (and the ratio infinite)
    when every sibling is a single field.
    """

    min_inter_distance: float
    max_intra_distance: float

    @property
    def ratio(self) -> float:
        if self.max_intra_distance == 0:
            return math.inf
        return self.min_inter_distance / self.max_intra_distance


class _Row:
    """A placed leaf group: one baseline of equally spaced, equal-size fields."""

    __slots__ = ("ids", "kinds", "boxes")

    def __init__(self, ids: list[str], kinds: list[str], boxes: list[list[float]]):
        self.ids = ids
        self.kinds = kinds
        self.boxes = boxes

    def all_boxes(self) -> Iterator[list[float]]:
        yield from self.boxes

    def translate(self, dx: float, dy: float) -> None:
        for box in self.boxes:
            box[0] += dx
            box[1] += dy

    def bbox(self) -> BoundingBox:
        return union_bbox(BoundingBox(*box) for box in self.boxes)


class _Stack:
    """A placed inner group: children stacked top to bottom."""

    __slots__ = ("children",)

    def __init__(self, children: list["_Block"]):
        self.children = children

    def all_boxes(self) -> Iterator[list[float]]:
        for child in self.children:
            yield from child.all_boxes()

    def translate(self, dx: float, dy: float) -> None:
        for child in self.children:
            child.translate(dx, dy)

    def bbox(self) -> BoundingBox:
        return union_bbox(BoundingBox(*box) for box in self.all_boxes())


_Block = _Row | _Stack


def _draw(rng: np.random.Generator, bounds: tuple[int, int]) -> int:
    lo, hi = bounds
    return int(rng.integers(lo, hi + 1))


def _plan(
    rng: np.random.Generator,
    spec: SynthSpec,
    depth: int,
    counters: dict[str, int],
    step: int,
) -> _Block:
    if depth == spec.nesting_depth:
        m = _draw(rng, spec.fields_per_group)
        w = _draw(rng, spec.field_size)
        h = _draw(rng, spec.field_size)
        gap = _draw(rng, spec.intra_gap)
        # stagger each row's anchor so left edges never collide across rows
        x0 = float(step * counters["row"])
        counters["row"] += 1
        ids, kinds, boxes = [], [], []
        for j in range(m):
            ids.append(f"f{counters['field']:02d}")
            counters["field"] += 1
            kinds.append(_FIELD_KINDS[int(rng.integers(0, len(_FIELD_KINDS)))])
            boxes.append([x0 + j * (w + gap), 0.0, float(w), float(h)])
        return _Row(ids, kinds, boxes)
    count = _draw(rng, spec.n_groups)
    return _Stack([_plan(rng, spec, depth + 1, counters, step) for _ in range(count)])


def _nodes_at_depth(block: _Block, depth: int) -> list[_Block]:
    if depth == 0:
        return [block]
    if isinstance(block, _Row):
        return []
    found: list[_Block] = []
    for child in block.children:
        found.extend(_nodes_at_depth(child, depth - 1))
    return found


def _max_intra_euclid(block: _Block) -> float:
    boxes = [BoundingBox(*b) for b in block.all_boxes()]
    if len(boxes) < 2:
        return 0.0
    return max(rect_min_distance(a, b) for a, b in combinations(boxes, 2))


def _stack_children(stack: _Stack, gap: int, geometry: GeometryConfig, step: int) -> None:
    cursor: float | None = None
    for child in stack.children:
        top = child.bbox().top
        if cursor is None:
            cursor = top
        else:
            child.translate(0.0, cursor - top)
        cursor = child.bbox().bottom + gap
    # Sibling blocks must not share left or right edges, or their mutual
    # distances stop being plain vertical gaps. Left edges sit on the
    # stagger lattice already; push later children right until their
    # right edges clear every earlier sibling too.
    tol = geometry.align_tolerance
    placed = [stack.children[0].bbox()]
    for child in stack.children[1:]:
        guard = 0
        while True:
            bb = child.bbox()
            if all(
                abs(bb.left - other.left) > tol and abs(bb.right - other.right) > tol
                for other in placed
            ):
                break
            guard += 1
            if guard > 1000:
                raise _RetryError("sibling edge separation stalled")
            child.translate(float(step), 0.0)
        placed.append(child.bbox())


def _place(root: _Stack, spec: SynthSpec, geometry: GeometryConfig, step: int) -> dict[int, int]:
    """Assign vertical positions bottom-up; returns the gap used per depth.

    The gap at each level is sized so that even in the worst case the
    smallest across-sibling distance stays at least ``gap_ratio`` times
    the largest within-sibling distance: across siblings at most two
    edges can align (divisor 2) while the gap itself shrinks by at most
    two jitters, and within a sibling the distance is at most twice the
    Euclidean span plus jitter growth (divisor floor 0.5).
    """
    gaps: dict[int, int] = {}
    for depth in range(spec.nesting_depth - 1, -1, -1):
        stacks = [b for b in _nodes_at_depth(root, depth) if isinstance(b, _Stack)]
        if not stacks:
            continue
        children = [child for stack in stacks for child in stack.children]
        span = max(_max_intra_euclid(child) for child in children)
        gap = max(
            int(math.ceil(4.0 * spec.gap_ratio * (span + 3.0 * spec.jitter) + 2.0 * spec.jitter)),
            step,
            5,
        )
        gaps[depth] = gap
        for stack in stacks:
            _stack_children(stack, gap, geometry, step)
    return gaps


def _verify_exact(root: _Stack, gaps: dict[int, int], geometry: GeometryConfig) -> None:
    """Jitter-free layouts must tie all adjacent siblings of a block exactly.

    Extraction merges a block's children in a single round only when
    their chain of adjacent distances is one value, so any accidental
    alignment or lost horizontal overlap is grounds for a redraw.
    """
    for depth, gap in gaps.items():
        target = 2.0 * gap
        for stack in _nodes_at_depth(root, depth):
            assert isinstance(stack, _Stack)
            boxes = [child.bbox() for child in stack.children]
            for a, b in zip(boxes, boxes[1:]):
                if alignment_score(a, b, geometry) != 0:
                    raise _RetryError("adjacent siblings aligned")
                d = pair_distance(a, b, geometry)
                if abs(d - target) > 1e-9 * target:
                    raise _RetryError("adjacent sibling distances not tied")


def _rows(block: _Block) -> Iterator[_Row]:
    if isinstance(block, _Row):
        yield block
    else:
        for child in block.children:
            yield from _rows(child)


def _apply_jitter(root: _Stack, rng: np.random.Generator, jitter: float) -> None:
    for row in _rows(root):
        for box in row.boxes:
            d = rng.uniform(-jitter, jitter, size=4)
            left = box[0] + d[0]
            right = box[0] + box[2] + d[1]
            top = box[1] + d[2]
            bottom = box[1] + box[3] + d[3]
            box[0] = left
            box[1] = top
            box[2] = max(right - left, 1.0)
            box[3] = max(bottom - top, 1.0)


def _gold_node(block: _Block) -> QueryNode:
    if isinstance(block, _Row):
        leaves: list[QueryNode] = [Leaf(fid) for fid in block.ids]
        return leaves[0] if len(leaves) == 1 else Group(tuple(leaves))
    children = [_gold_node(child) for child in block.children]
    return children[0] if len(children) == 1 else Group(tuple(children))


def _emit(root: _Stack, spec: SynthSpec) -> tuple[Layout, QueryTree]:
    fields = []
    for row in _rows(root):
        for fid, kind, box in zip(row.ids, row.kinds, row.boxes):
            fields.append(Field(id=fid, bbox=BoundingBox(*box), kind=kind))
    name = f"synth-{spec.seed}"
    layout = Layout(name=name, fields=tuple(fields), source="synthetic")
    return layout, QueryTree(_gold_node(root), name)


def _granules(node: QueryNode, box_of: dict[str, BoundingBox]) -> list[BoundingBox]:
    boxes = [box_of[leaf.field_id] for leaf in _leaves(node)]
    if len(boxes) > 1:
        return boxes + [union_bbox(boxes)]
    return boxes


def _leaves(node: QueryNode) -> Iterator[Leaf]:
    if isinstance(node, Leaf):
        yield node
    else:
        for child in node.children:
            yield from _leaves(child)


def _max_intra_distance(node: QueryNode, box_of, geometry: GeometryConfig) -> float:
    boxes = [box_of[leaf.field_id] for leaf in _leaves(node)]
    if len(boxes) < 2:
        return 0.0
    return max(pair_distance(a, b, geometry) for a, b in combinations(boxes, 2))


def _certificate(
    gold: QueryTree, box_of: dict[str, BoundingBox], geometry: GeometryConfig, gap_ratio: float
) -> SeparationCertificate:
    """Measure realized separation at every tree node; fail the attempt
    when any node's ratio drops below the spec."""
    binding = SeparationCertificate(math.inf, 0.0)

    def visit(node: QueryNode) -> None:
        nonlocal binding
        if isinstance(node, Leaf):
            return
        max_intra = max(_max_intra_distance(c, box_of, geometry) for c in node.children)
        min_inter = min(
            (
                pair_distance(ga, gb, geometry)
                for a, b in combinations(node.children, 2)
                for ga in _granules(a, box_of)
                for gb in _granules(b, box_of)
            ),
            default=math.inf,
        )
        if max_intra > 0 and min_inter < gap_ratio * max_intra:
            raise _RetryError("separation ratio below gap_ratio")
        node_ratio = math.inf if max_intra == 0 else min_inter / max_intra
        if node_ratio < binding.ratio or (
            binding.max_intra_distance == 0 and min_inter < binding.min_inter_distance
        ):
            binding = SeparationCertificate(min_inter, max_intra)
        for child in node.children:
            visit(child)

    visit(gold.root)
    return binding


def generate_with_certificate(
    spec: SynthSpec, geometry: GeometryConfig = DEFAULT_GEOMETRY
) -> tuple[Layout, QueryTree, SeparationCertificate]:
    """Generate one layout, its planted tree, and the realized separation.

    Deterministic per spec. Raises :class:`GenerationError` when no
    placement satisfies the constraints within the attempt budget,
    naming the constraint that kept failing.
    """
    rng = np.random.default_rng(spec.seed)
    step = int(math.ceil(2 * geometry.align_tolerance)) + 1
    last_failure = "placement"
    for _ in range(_MAX_ATTEMPTS):
        counters = {"field": 0, "row": 0}
        root = _plan(rng, spec, 0, counters, step)
        assert isinstance(root, _Stack)
        try:
            gaps = _place(root, spec, geometry, step)
            if spec.jitter == 0:
                _verify_exact(root, gaps, geometry)
            else:
                _apply_jitter(root, rng, spec.jitter)
            layout, gold = _emit(root, spec)
            box_of = {f.id: f.bbox for f in layout.fields}
            certificate = _certificate(gold, box_of, geometry, spec.gap_ratio)
        except _RetryError as failure:
            last_failure = str(failure)
            continue
        return layout, gold, certificate
    raise GenerationError(f"gave up after {_MAX_ATTEMPTS} attempts: {last_failure}")


def generate(
    spec: SynthSpec, geometry: GeometryConfig = DEFAULT_GEOMETRY
) -> tuple[Layout, QueryTree]:
    """Generate one layout and the tree extraction should reproduce."""
    layout, gold, _ = generate_with_certificate(spec, geometry)
    return layout, gold
