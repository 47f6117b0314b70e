"""Distance and alignment primitives for axis-aligned rectangles.

All geometry lives in page coordinates: the origin is the top-left
corner of the page and y grows downward, the way browsers report
element boxes. The distance between two boxes combines their minimum
Euclidean separation with a weighted count of coinciding edges, so
fields sitting on one line read as much closer than the raw gap
suggests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable


class AlignmentAxis(Enum):
    """One of the four edge types two boxes can share."""

    LEFT = "left"
    RIGHT = "right"
    TOP = "top"
    BOTTOM = "bottom"


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned rectangle: left edge ``x``, top edge ``y``, extent ``w`` by ``h``.

    Boxes are closed sets; two boxes that merely touch have distance zero.
    """

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "w", "h"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"bounding box {name} must be a finite number, got {value!r}")
        if self.w <= 0 or self.h <= 0:
            raise ValueError(f"bounding box needs positive extent, got w={self.w} h={self.h}")

    @property
    def left(self) -> float:
        return self.x

    @property
    def right(self) -> float:
        return self.x + self.w

    @property
    def top(self) -> float:
        return self.y

    @property
    def bottom(self) -> float:
        return self.y + self.h

    def edge(self, axis: AlignmentAxis) -> float:
        """Coordinate of the given edge."""
        if axis is AlignmentAxis.LEFT:
            return self.left
        if axis is AlignmentAxis.RIGHT:
            return self.right
        if axis is AlignmentAxis.TOP:
            return self.top
        return self.bottom

    def translate(self, dx: float, dy: float) -> "BoundingBox":
        """The same box shifted by (dx, dy)."""
        return BoundingBox(self.x + dx, self.y + dy, self.w, self.h)


@dataclass(frozen=True)
class GeometryConfig:
    """Tunables for edge alignment and the distance denominator.

    Attributes
    ----------
    align_tolerance:
        How far apart two edge coordinates may sit while still counting
        as aligned. Rendered layouts are rarely pixel-exact.
    align_floor:
        Lower clamp for the alignment divisor, so boxes with no aligned
        edges still get a finite (merely penalised) distance.
    """

    align_tolerance: float = 2.0
    align_floor: float = 0.5

    def __post_init__(self) -> None:
        if not math.isfinite(self.align_tolerance) or self.align_tolerance < 0:
            raise ValueError(f"align_tolerance must be >= 0, got {self.align_tolerance!r}")
        if not math.isfinite(self.align_floor) or self.align_floor <= 0:
            raise ValueError(f"align_floor must be > 0, got {self.align_floor!r}")


DEFAULT_GEOMETRY = GeometryConfig()


def rect_min_distance(a: BoundingBox, b: BoundingBox) -> float:
    """Minimum Euclidean distance between two rectangles.

    Zero exactly when the closed rectangles overlap or touch. The
    minimum over all point pairs is attained on the facing edges, so
    the per-axis gaps give it in closed form.
    """
    gx = max(0.0, max(a.x, b.x) - min(a.right, b.right))
    gy = max(0.0, max(a.y, b.y) - min(a.bottom, b.bottom))
    return math.hypot(gx, gy)


def aligned(
    a: BoundingBox,
    b: BoundingBox,
    axis: AlignmentAxis,
    cfg: GeometryConfig = DEFAULT_GEOMETRY,
) -> bool:
    """Whether the two boxes share the given edge, up to the tolerance."""
    return abs(a.edge(axis) - b.edge(axis)) <= cfg.align_tolerance


def alignment_score(a: BoundingBox, b: BoundingBox, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> int:
    """Weighted count of coinciding edges, an integer in 0..5.

    Bottom alignment counts double: controls that share a baseline are
    very likely one visual group, more so than for any other edge.
    """
    score = 0
    score += aligned(a, b, AlignmentAxis.LEFT, cfg)
    score += aligned(a, b, AlignmentAxis.RIGHT, cfg)
    score += aligned(a, b, AlignmentAxis.TOP, cfg)
    score += 2 * aligned(a, b, AlignmentAxis.BOTTOM, cfg)
    return score


def pair_distance(a: BoundingBox, b: BoundingBox, cfg: GeometryConfig = DEFAULT_GEOMETRY) -> float:
    """Alignment-discounted separation between two boxes.

    The Euclidean gap divided by the alignment score; the divisor is
    clamped below by ``cfg.align_floor`` so fully unaligned boxes keep
    a finite distance. Strong alignment shrinks the effective distance,
    which is what lets a labelled row of fields cohere before it joins
    anything above or below it.
    """
    return rect_min_distance(a, b) / max(alignment_score(a, b, cfg), cfg.align_floor)


def union_bbox(boxes: Iterable[BoundingBox]) -> BoundingBox:
    """Tightest box containing every input box. Needs at least one box."""
    boxes = list(boxes)
    if not boxes:
        raise ValueError("union_bbox needs at least one box")
    left = min(b.left for b in boxes)
    top = min(b.top for b in boxes)
    right = max(b.right for b in boxes)
    bottom = max(b.bottom for b in boxes)
    return BoundingBox(left, top, right - left, bottom - top)
