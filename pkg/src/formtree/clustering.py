"""Recursive density grouping of fields and groups of fields.

Each pass recomputes one adaptive radius: the smallest pairwise
distance among the elements currently on the table. Everything chained
within that radius collapses into a new group element; loners carry
over untouched. Passes repeat on the coarser element set until a
single root element remains, which makes the nesting depth of the
result a property of the layout rather than a parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .geometry import (
    DEFAULT_GEOMETRY,
    BoundingBox,
    GeometryConfig,
    pair_distance,
    union_bbox,
)
from .model import Group, Layout, Leaf, QueryNode, QueryTree, leaf_ids, reading_order


class ExtractionError(RuntimeError):
    """The merge loop failed to reach a single root within its round budget."""


@dataclass(frozen=True)
class ClusterConfig:
    """Knobs for the merge loop.

    ``epsilon_slack`` is the relative tolerance applied when comparing a
    distance against the round radius, so ties produced by equivalent
    float expressions still land in one component. ``max_rounds`` is a
    safety bound only; ``None`` means ten times the field count.
    """

    geometry: GeometryConfig = DEFAULT_GEOMETRY
    epsilon_slack: float = 1e-9
    max_rounds: int | None = None

    def __post_init__(self) -> None:
        if self.epsilon_slack < 0:
            raise ValueError("epsilon_slack must be >= 0")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError("max_rounds must be a positive integer")


DEFAULT_CLUSTER = ClusterConfig()


@dataclass(frozen=True)
class Element:
    """A current top-level unit: a bare field or an already-built group.

    ``rank`` is the element's reading-order position, inherited from the
    smallest rank of its members so sibling order stays stable across
    merges.
    """

    node: QueryNode
    bbox: BoundingBox
    rank: int


@dataclass(frozen=True)
class RoundTrace:
    """Diagnostics for one merge pass."""

    members: tuple[tuple[str, ...], ...]
    matrix: tuple[tuple[float, ...], ...]
    epsilon: float
    merged: tuple[tuple[str, ...], ...]


def distance_matrix(
    elements: Sequence[Element], cfg: ClusterConfig = DEFAULT_CLUSTER
) -> list[list[float]]:
    """Symmetric pairwise distances between element boxes, zero diagonal."""
    n = len(elements)
    matrix = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = pair_distance(elements[i].bbox, elements[j].bbox, cfg.geometry)
            matrix[i][j] = d
            matrix[j][i] = d
    return matrix


def compute_epsilon(matrix: Sequence[Sequence[float]]) -> float:
    """Smallest off-diagonal entry; the merge radius for this round."""
    n = len(matrix)
    if n < 2:
        raise ValueError("epsilon needs at least two elements")
    return min(matrix[i][j] for i in range(n) for j in range(i + 1, n))


def density_components(
    matrix: Sequence[Sequence[float]],
    epsilon: float,
    cfg: ClusterConfig = DEFAULT_CLUSTER,
) -> list[list[int]]:
    """Connected components of the graph joining pairs within the radius.

    A pair is joined when its distance is at most
    ``epsilon * (1 + cfg.epsilon_slack)``; reachability is transitive,
    so a chain of close neighbours lands in one component even when its
    endpoints are far apart. Components come out ordered by smallest
    member index, members ascending.
    """
    n = len(matrix)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    threshold = epsilon * (1.0 + cfg.epsilon_slack)
    for i in range(n):
        for j in range(i + 1, n):
            if matrix[i][j] <= threshold:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    components: dict[int, list[int]] = {}
    for i in range(n):
        components.setdefault(find(i), []).append(i)
    return sorted(components.values(), key=lambda members: members[0])


def _run_round(
    elements: Sequence[Element], cfg: ClusterConfig
) -> tuple[list[Element], RoundTrace]:
    ordered = sorted(elements, key=lambda e: e.rank)
    matrix = distance_matrix(ordered, cfg)
    epsilon = compute_epsilon(matrix)
    merged_ids: list[tuple[str, ...]] = []
    result: list[Element] = []
    for component in density_components(matrix, epsilon, cfg):
        if len(component) == 1:
            result.append(ordered[component[0]])
            continue
        members = [ordered[i] for i in component]
        group = Element(
            node=Group(tuple(m.node for m in members)),
            bbox=union_bbox(m.bbox for m in members),
            rank=members[0].rank,
        )
        result.append(group)
        merged_ids.append(tuple(leaf_ids(group.node)))
    trace = RoundTrace(
        members=tuple(tuple(leaf_ids(e.node)) for e in ordered),
        matrix=tuple(tuple(row) for row in matrix),
        epsilon=epsilon,
        merged=tuple(merged_ids),
    )
    return result, trace


def cluster_round(
    elements: Sequence[Element], cfg: ClusterConfig = DEFAULT_CLUSTER
) -> list[Element]:
    """One merge pass over at least two elements.

    Components of size two or more fold into new group elements whose
    box is the union of their members and whose children keep reading
    order; singleton components pass through unchanged. The radius is
    attained by some pair, so every round strictly shrinks the element
    list.
    """
    if len(elements) < 2:
        raise ValueError("cluster_round needs at least two elements")
    result, _ = _run_round(elements, cfg)
    return result


def extract_tree_with_trace(
    layout: Layout, cfg: ClusterConfig = DEFAULT_CLUSTER
) -> tuple[QueryTree, list[RoundTrace]]:
    """Extract the grouping tree and keep per-round diagnostics."""
    ordered = reading_order(layout.fields, cfg.geometry)
    elements = [Element(Leaf(f.id), f.bbox, i) for i, f in enumerate(ordered)]
    budget = cfg.max_rounds if cfg.max_rounds is not None else 10 * len(elements)
    trace: list[RoundTrace] = []
    rounds = 0
    while len(elements) > 1:
        rounds += 1
        if rounds > budget:
            raise ExtractionError(
                f"no single root after {budget} rounds, {len(elements)} elements left"
            )
        elements, round_trace = _run_round(elements, cfg)
        trace.append(round_trace)
    return QueryTree(elements[0].node, layout.name), trace


def extract_tree(layout: Layout, cfg: ClusterConfig = DEFAULT_CLUSTER) -> QueryTree:
    """Rebuild the grouping tree of a layout.

    A single-field layout yields a bare leaf root; anything larger ends
    in a root group after at most ``n - 1`` rounds.
    """
    tree, _ = extract_tree_with_trace(layout, cfg)
    return tree
