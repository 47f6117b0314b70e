"""Recover the visual grouping hierarchy of a form from field bounding boxes.

The package exposes three layers:

* geometry and tree primitives (:class:`BoundingBox`, :class:`Field`,
  :class:`Layout`, :class:`Leaf`, :class:`Group`, :class:`QueryTree`),
* the recursive clustering itself, both as plain functions
  (:func:`extract_tree`) and as the scikit-learn style
  :class:`QueryTreeExtractor`,
* an evaluation harness and a synthetic corpus generator used to
  exercise it end to end.
"""

from .clustering import (
    ClusterConfig,
    ExtractionError,
    RoundTrace,
    cluster_round,
    compute_epsilon,
    density_components,
    distance_matrix,
    extract_tree,
    extract_tree_with_trace,
)
from .documents import (
    ManifestEntry,
    layout_to_doc,
    load_layout_doc,
    read_layout,
    read_manifest,
    read_tree,
    write_layout,
    write_tree,
)
from .estimator import QueryTreeExtractor
from .evaluation import (
    CaseVerdict,
    DomainRow,
    EvalCase,
    EvalReport,
    build_report,
    evaluate_case,
    evaluate_corpus,
    first_mismatch_path,
    normalize_sibling_order,
)
from .geometry import (
    DEFAULT_GEOMETRY,
    AlignmentAxis,
    BoundingBox,
    GeometryConfig,
    aligned,
    alignment_score,
    pair_distance,
    rect_min_distance,
    union_bbox,
)
from .model import (
    Field,
    Group,
    Layout,
    Leaf,
    ParseError,
    QueryTree,
    Violation,
    iter_leaves,
    leaf_ids,
    parse_tree,
    reading_order,
    serialize_tree,
    tree_equals,
    validate_tree,
)
from .synth import (
    GenerationError,
    SeparationCertificate,
    SynthSpec,
    generate,
    generate_with_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentAxis",
    "BoundingBox",
    "CaseVerdict",
    "ClusterConfig",
    "DEFAULT_GEOMETRY",
    "DomainRow",
    "EvalCase",
    "EvalReport",
    "ExtractionError",
    "Field",
    "GenerationError",
    "GeometryConfig",
    "Group",
    "Layout",
    "Leaf",
    "ManifestEntry",
    "ParseError",
    "QueryTree",
    "QueryTreeExtractor",
    "RoundTrace",
    "SeparationCertificate",
    "SynthSpec",
    "Violation",
    "aligned",
    "alignment_score",
    "build_report",
    "cluster_round",
    "compute_epsilon",
    "density_components",
    "distance_matrix",
    "evaluate_case",
    "evaluate_corpus",
    "extract_tree",
    "extract_tree_with_trace",
    "first_mismatch_path",
    "generate",
    "generate_with_certificate",
    "iter_leaves",
    "layout_to_doc",
    "leaf_ids",
    "load_layout_doc",
    "normalize_sibling_order",
    "pair_distance",
    "parse_tree",
    "read_layout",
    "read_manifest",
    "read_tree",
    "reading_order",
    "rect_min_distance",
    "serialize_tree",
    "tree_equals",
    "union_bbox",
    "validate_tree",
    "write_layout",
    "write_tree",
]
