"""Corpus scoring: run extraction against hand-made gold trees.

A case counts as correct only when the extracted tree equals the gold
tree exactly, order included; anything else, including an extraction
crash, is an error. The report aggregates per domain plus one overall
row, so different interface families can be compared side by side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .clustering import DEFAULT_CLUSTER, ClusterConfig, extract_tree
from .geometry import GeometryConfig
from .model import (
    Group,
    Layout,
    Leaf,
    QueryNode,
    QueryTree,
    leaf_ids,
    reading_order,
    serialize_tree,
    tree_equals,
)


@dataclass(frozen=True)
class EvalCase:
    """One scored unit: a layout plus the tree it should produce."""

    name: str
    layout: Layout
    gold: QueryTree
    domain: str = "unknown"
    normalize_gold_order: bool = False


@dataclass(frozen=True)
class CaseVerdict:
    name: str
    domain: str
    matched: bool
    errored: bool = False
    error: str | None = None
    extracted_doc: dict | None = None
    gold_doc: dict | None = None
    first_mismatch: str | None = None


@dataclass(frozen=True)
class DomainRow:
    """Counts for one domain; errors and precision are derived, so the
    identities total = correct + errors and precision = correct / total
    hold by construction."""

    domain: str
    total: int
    correct: int

    @property
    def errors(self) -> int:
        return self.total - self.correct

    @property
    def precision(self) -> float:
        return self.correct / self.total

    def to_doc(self) -> dict:
        return {
            "domain": self.domain,
            "total": self.total,
            "correct": self.correct,
            "errors": self.errors,
            "precision": self.precision,
        }


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[DomainRow, ...]
    overall: DomainRow
    cases: tuple[CaseVerdict, ...]

    def to_doc(self) -> dict:
        return {
            "rows": [row.to_doc() for row in self.rows],
            "overall": self.overall.to_doc(),
            "cases": [
                {"name": v.name, "matched": v.matched, "errored": v.errored}
                for v in self.cases
            ],
        }

    def format_table(self) -> str:
        """Fixed four-row text table, one column per domain plus overall."""
        columns = list(self.rows) + [self.overall]
        labels = ["total", "correct", "errors", "precision"]
        cells = [[str(c.total) for c in columns]]
        cells.append([str(c.correct) for c in columns])
        cells.append([str(c.errors) for c in columns])
        cells.append([f"{c.precision:.2f}" for c in columns])
        label_width = max(len(s) for s in labels)
        widths = [
            max(len(columns[i].domain), max(len(row[i]) for row in cells))
            for i in range(len(columns))
        ]
        lines = [
            " " * label_width
            + "  "
            + "  ".join(c.domain.rjust(widths[i]) for i, c in enumerate(columns))
        ]
        for label, row in zip(labels, cells):
            lines.append(
                label.ljust(label_width)
                + "  "
                + "  ".join(cell.rjust(widths[i]) for i, cell in enumerate(row))
            )
        return "\n".join(lines)


def normalize_sibling_order(
    tree: QueryTree, layout: Layout, geometry: GeometryConfig
) -> QueryTree:
    """Reorder every group's children by the reading order of their fields.

    Useful for gold files whose authors did not care about sibling
    order: with normalization applied to the gold tree, comparisons
    test structure only.
    """
    rank = {f.id: i for i, f in enumerate(reading_order(layout.fields, geometry))}
    fallback = len(rank)

    def node_key(node: QueryNode) -> int:
        return min((rank.get(i, fallback) for i in leaf_ids(node)), default=fallback)

    def rebuild(node: QueryNode) -> QueryNode:
        if isinstance(node, Leaf):
            return node
        return Group(tuple(sorted((rebuild(c) for c in node.children), key=node_key)))

    return QueryTree(rebuild(tree.root), tree.layout_name)


def first_mismatch_path(a: QueryNode, b: QueryNode, path: str = "root") -> str | None:
    """Path of the first node where the two trees disagree, for debugging."""
    if isinstance(a, Leaf) != isinstance(b, Leaf):
        return path
    if isinstance(a, Leaf):
        return path if a.field_id != b.field_id else None  # type: ignore[union-attr]
    assert isinstance(b, Group)
    if len(a.children) != len(b.children):
        return path
    for i, (ca, cb) in enumerate(zip(a.children, b.children)):
        sub = first_mismatch_path(ca, cb, f"{path}[{i}]")
        if sub is not None:
            return sub
    return None


def evaluate_case(case: EvalCase, cfg: ClusterConfig = DEFAULT_CLUSTER) -> CaseVerdict:
    """Extract, compare, and report one case.

    Extraction failures never abort a run; they come back as an errored
    verdict that counts against precision like any mismatch.
    """
    gold = case.gold
    if case.normalize_gold_order:
        gold = normalize_sibling_order(gold, case.layout, cfg.geometry)
    try:
        extracted = extract_tree(case.layout, cfg)
    except Exception as exc:
        return CaseVerdict(
            name=case.name,
            domain=case.domain,
            matched=False,
            errored=True,
            error=str(exc),
            gold_doc=serialize_tree(gold),
        )
    matched = tree_equals(extracted, gold)
    return CaseVerdict(
        name=case.name,
        domain=case.domain,
        matched=matched,
        extracted_doc=serialize_tree(extracted),
        gold_doc=serialize_tree(gold),
        first_mismatch=None if matched else first_mismatch_path(extracted.root, gold.root),
    )


def build_report(verdicts: Iterable[CaseVerdict]) -> EvalReport:
    """Aggregate verdicts into per-domain rows plus an overall row.

    Rows are sorted by domain and verdicts by case name, so the report
    does not depend on the order cases were run in.
    """
    ordered = sorted(verdicts, key=lambda v: v.name)
    if not ordered:
        raise ValueError("report needs at least one case")
    by_domain: dict[str, list[CaseVerdict]] = {}
    for verdict in ordered:
        by_domain.setdefault(verdict.domain, []).append(verdict)
    rows = tuple(
        DomainRow(domain, len(vs), sum(1 for v in vs if v.matched))
        for domain, vs in sorted(by_domain.items())
    )
    overall = DomainRow(
        "overall", sum(r.total for r in rows), sum(r.correct for r in rows)
    )
    return EvalReport(rows=rows, overall=overall, cases=tuple(ordered))


def evaluate_corpus(
    cases: Iterable[EvalCase], cfg: ClusterConfig = DEFAULT_CLUSTER
) -> EvalReport:
    """Evaluate every case and aggregate. The case list must be nonempty."""
    cases = list(cases)
    if not cases:
        raise ValueError("corpus evaluation needs at least one case")
    return build_report(evaluate_case(case, cfg) for case in cases)
