"""Generator determinism, planted-tree validity, and recovery by extraction."""

import json
import math

import pytest

from formtree import (
    GenerationError,
    Leaf,
    SynthSpec,
    extract_tree,
    generate,
    generate_with_certificate,
    layout_to_doc,
    serialize_tree,
    tree_equals,
    validate_tree,
)
from formtree import synth


def dumps(layout, gold):
    return json.dumps([layout_to_doc(layout), serialize_tree(gold)], sort_keys=True)


class TestSpecValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(gap_ratio=1.0),
            dict(gap_ratio=math.inf),
            dict(jitter=-0.5),
            dict(nesting_depth=0),
            dict(n_groups=(0, 3)),
            dict(fields_per_group=(4, 2)),
            dict(intra_gap=(-1, 5)),
        ],
    )
    def test_rejected(self, kwargs):
        with pytest.raises(ValueError):
            SynthSpec(**kwargs)


class TestDeterminism:
    def test_same_seed_same_bytes(self):
        spec = SynthSpec(seed=7)
        assert dumps(*generate(spec)) == dumps(*generate(spec))

    def test_jittered_runs_also_deterministic(self):
        spec = SynthSpec(seed=7, jitter=2.0, gap_ratio=2.0)
        assert dumps(*generate(spec)) == dumps(*generate(spec))

    def test_different_seeds_differ(self):
        assert dumps(*generate(SynthSpec(seed=0))) != dumps(*generate(SynthSpec(seed=1)))


class TestGeneratedShape:
    def test_gold_validates_against_layout(self):
        for seed in range(25):
            layout, gold = generate(SynthSpec(seed=seed))
            assert validate_tree(gold, layout) == []

    def test_names_and_metadata(self):
        layout, gold = generate(SynthSpec(seed=11))
        assert layout.name == "synth-11"
        assert gold.layout_name == "synth-11"
        assert layout.source == "synthetic"
        assert all(f.kind in {"text", "select", "radio", "checkbox"} for f in layout.fields)

    def test_group_sizes_respect_ranges(self):
        spec = SynthSpec(seed=3, n_groups=(3, 3), fields_per_group=(2, 2))
        layout, gold = generate(spec)
        assert len(layout.fields) == 6
        assert len(gold.root.children) == 3
        assert all(len(g.children) == 2 for g in gold.root.children)

    def test_single_field_collapses_to_leaf(self):
        layout, gold = generate(SynthSpec(seed=0, n_groups=(1, 1), fields_per_group=(1, 1)))
        assert len(layout.fields) == 1
        assert isinstance(gold.root, Leaf)

    def test_nested_depth_two(self):
        spec = SynthSpec(seed=5, nesting_depth=2, n_groups=(2, 2), fields_per_group=(2, 2))
        layout, gold = generate(spec)
        assert len(layout.fields) == 8
        for stack in gold.root.children:
            for row in stack.children:
                assert all(isinstance(leaf, Leaf) for leaf in row.children)


class TestCertificate:
    def test_ratio_meets_spec(self):
        for seed in range(10):
            spec = SynthSpec(seed=seed, gap_ratio=3.0)
            _, _, cert = generate_with_certificate(spec)
            assert cert.ratio >= 3.0
            assert cert.min_inter_distance > 0

    def test_all_leaf_children_give_infinite_ratio(self):
        spec = SynthSpec(seed=1, n_groups=(2, 2), fields_per_group=(1, 1))
        _, _, cert = generate_with_certificate(spec)
        assert cert.max_intra_distance == 0.0
        assert cert.ratio == math.inf

    def test_budget_exhaustion_raises(self, monkeypatch):
        monkeypatch.setattr(synth, "_MAX_ATTEMPTS", 0)
        with pytest.raises(GenerationError, match="gave up"):
            generate(SynthSpec(seed=0))


class TestRecovery:
    def test_clean_flat_corpus_recovers_exactly(self):
        for seed in range(40):
            layout, gold = generate(SynthSpec(seed=seed))
            assert tree_equals(extract_tree(layout), gold), f"seed {seed}"

    def test_clean_nested_corpus_recovers_exactly(self):
        spec_kwargs = dict(nesting_depth=2, n_groups=(2, 3), fields_per_group=(2, 3))
        for seed in range(15):
            layout, gold = generate(SynthSpec(seed=seed, **spec_kwargs))
            assert tree_equals(extract_tree(layout), gold), f"seed {seed}"

    def test_degraded_corpus_loses_cases(self):
        matched = 0
        total = 40
        for seed in range(total):
            layout, gold = generate(SynthSpec(seed=seed, gap_ratio=1.05, jitter=3.0))
            matched += tree_equals(extract_tree(layout), gold)
        assert matched < total

    def test_jitter_moves_boxes(self):
        clean, _ = generate(SynthSpec(seed=9))
        noisy, _ = generate(SynthSpec(seed=9, jitter=2.0, gap_ratio=2.0))
        assert [f.bbox for f in clean.fields] != [f.bbox for f in noisy.fields]
