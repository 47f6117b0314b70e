"""Fields, layouts, reading order, tree validation, and the tree grammar."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from formtree import (
    BoundingBox,
    Field,
    GeometryConfig,
    Group,
    Layout,
    Leaf,
    ParseError,
    QueryTree,
    iter_leaves,
    leaf_ids,
    parse_tree,
    reading_order,
    serialize_tree,
    tree_equals,
    validate_tree,
)
from formtree.model import (
    DUPLICATE_LEAF,
    MISSING_FIELD,
    UNDERSIZED_GROUP,
    UNKNOWN_LEAF,
)


def field(fid, x, y, w=10, h=10, order_index=None):
    return Field(id=fid, bbox=BoundingBox(x, y, w, h), order_index=order_index)


class TestFieldAndLayout:
    def test_rejects_empty_id(self):
        with pytest.raises(ValueError):
            Field(id="", bbox=BoundingBox(0, 0, 1, 1))

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            Field(id="a", bbox=BoundingBox(0, 0, 1, 1), kind="slider")

    def test_rejects_negative_order_index(self):
        with pytest.raises(ValueError):
            Field(id="a", bbox=BoundingBox(0, 0, 1, 1), order_index=-1)

    def test_layout_rejects_duplicate_ids(self):
        with pytest.raises(ValueError):
            Layout(name="x", fields=(field("a", 0, 0), field("a", 20, 0)))

    def test_layout_rejects_empty(self):
        with pytest.raises(ValueError):
            Layout(name="x", fields=())

    def test_field_ids(self):
        layout = Layout(name="x", fields=(field("a", 0, 0), field("b", 20, 0)))
        assert layout.field_ids() == {"a", "b"}


class TestReadingOrder:
    def test_same_row_left_first(self):
        out = reading_order([field("right", 50, 0), field("left", 0, 0)])
        assert [f.id for f in out] == ["left", "right"]

    def test_rows_top_down(self):
        out = reading_order([field("lower", 0, 40), field("upper", 0, 0)])
        assert [f.id for f in out] == ["upper", "lower"]

    def test_band_anchored_at_first_top(self):
        # tops 0 and 2 join the band anchored at 0; top 4 starts a new band
        out = reading_order([field("a", 50, 0), field("b", 0, 2), field("c", 10, 4)])
        assert [f.id for f in out] == ["b", "a", "c"]

    def test_explicit_order_wins(self):
        out = reading_order(
            [field("geo-first", 0, 0, order_index=1), field("geo-second", 50, 0, order_index=0)]
        )
        assert [f.id for f in out] == ["geo-second", "geo-first"]

    def test_partial_order_index_falls_back_to_geometry(self):
        out = reading_order([field("a", 50, 0, order_index=0), field("b", 0, 0)])
        assert [f.id for f in out] == ["b", "a"]

    def test_coincident_boxes_tie_break_by_id(self):
        out = reading_order([field("b", 0, 0), field("a", 0, 0)])
        assert [f.id for f in out] == ["a", "b"]

    @given(
        st.lists(
            st.tuples(st.integers(-200, 200), st.integers(-200, 200)),
            min_size=1,
            max_size=8,
            unique=True,
        ),
        st.integers(-300, 300),
        st.integers(-300, 300),
    )
    def test_permutation_deterministic_translation_invariant(self, points, dx, dy):
        fields = [field(f"f{i}", float(x), float(y)) for i, (x, y) in enumerate(points)]
        out = reading_order(fields)
        assert sorted(f.id for f in out) == sorted(f.id for f in fields)
        assert [f.id for f in reading_order(fields)] == [f.id for f in out]
        shifted = [
            Field(id=f.id, bbox=f.bbox.translate(dx, dy), kind=f.kind) for f in fields
        ]
        assert [f.id for f in reading_order(shifted)] == [f.id for f in out]


LAYOUT = Layout(name="demo", fields=(field("a", 0, 0), field("b", 20, 0), field("c", 40, 0)))


class TestValidateTree:
    def test_well_formed(self):
        tree = QueryTree(Group((Leaf("a"), Leaf("b"), Leaf("c"))), "demo")
        assert validate_tree(tree, LAYOUT) == []

    def test_missing_field(self):
        tree = QueryTree(Group((Leaf("a"), Leaf("b"))), "demo")
        kinds = [v.kind for v in validate_tree(tree, LAYOUT)]
        assert kinds == [MISSING_FIELD]

    def test_unknown_leaf(self):
        tree = QueryTree(Group((Leaf("a"), Leaf("b"), Leaf("c"), Leaf("zz"))), "demo")
        violations = validate_tree(tree, LAYOUT)
        assert [v.kind for v in violations] == [UNKNOWN_LEAF]
        assert violations[0].path == "root[3]"

    def test_duplicate_leaf(self):
        tree = QueryTree(Group((Leaf("a"), Leaf("b"), Leaf("c"), Leaf("a"))), "demo")
        assert [v.kind for v in validate_tree(tree, LAYOUT)] == [DUPLICATE_LEAF]

    def test_undersized_group(self):
        tree = QueryTree(Group((Leaf("a"), Group((Leaf("b"),)), Leaf("c"))), "demo")
        violations = validate_tree(tree, LAYOUT)
        assert [v.kind for v in violations] == [UNDERSIZED_GROUP]
        assert violations[0].path == "root[1]"

    def test_empty_group(self):
        tree = QueryTree(Group((Group(()), Leaf("a"), Leaf("b"), Leaf("c"))), "demo")
        assert UNDERSIZED_GROUP in [v.kind for v in validate_tree(tree, LAYOUT)]

    def test_several_violations_reported_together(self):
        tree = QueryTree(Group((Leaf("a"), Leaf("a"), Leaf("zz"))), "demo")
        kinds = {v.kind for v in validate_tree(tree, LAYOUT)}
        assert kinds == {UNKNOWN_LEAF, MISSING_FIELD, DUPLICATE_LEAF}


class TestTreeEquality:
    def test_identical(self):
        a = QueryTree(Group((Leaf("x"), Leaf("y"))), "one")
        b = QueryTree(Group((Leaf("x"), Leaf("y"))), "two")
        assert tree_equals(a, b)  # layout names are not compared

    def test_swapped_children_differ(self):
        a = QueryTree(Group((Leaf("x"), Leaf("y"))))
        b = QueryTree(Group((Leaf("y"), Leaf("x"))))
        assert not tree_equals(a, b)

    def test_leaf_id_differs(self):
        a = QueryTree(Group((Leaf("x"), Leaf("y"))))
        b = QueryTree(Group((Leaf("x"), Leaf("z"))))
        assert not tree_equals(a, b)

    def test_leaf_vs_group(self):
        a = QueryTree(Group((Leaf("x"), Group((Leaf("y"), Leaf("z"))))))
        b = QueryTree(Group((Leaf("x"), Leaf("y"))))
        assert not tree_equals(a, b)


ids = st.text(alphabet="abcdefgh", min_size=1, max_size=3)
nodes = st.recursive(
    st.builds(Leaf, ids),
    lambda children: st.builds(Group, st.tuples(children, children))
    | st.builds(Group, st.tuples(children, children, children)),
    max_leaves=12,
)
trees = st.builds(QueryTree, nodes, ids)


class TestSerialization:
    def test_leaf_doc(self):
        assert serialize_tree(QueryTree(Leaf("from"), "flight")) == {
            "layout": "flight",
            "root": {"leaf": "from"},
        }

    def test_group_doc(self):
        doc = serialize_tree(QueryTree(Group((Leaf("a"), Leaf("b"))), "x"))
        assert doc["root"] == {"group": [{"leaf": "a"}, {"leaf": "b"}]}

    def test_parse_rejects_singleton_group(self):
        with pytest.raises(ParseError, match=r"\$\.root\.group"):
            parse_tree({"layout": "x", "root": {"group": [{"leaf": "a"}]}})

    def test_parse_rejects_leaf_and_group(self):
        with pytest.raises(ParseError, match="both"):
            parse_tree({"root": {"leaf": "a", "group": []}})

    def test_parse_rejects_missing_root(self):
        with pytest.raises(ParseError, match="root"):
            parse_tree({"layout": "x"})

    def test_parse_rejects_non_object_node(self):
        with pytest.raises(ParseError, match=r"\$\.root\.group\[1\]"):
            parse_tree({"root": {"group": [{"leaf": "a"}, "b"]}})

    def test_parse_rejects_empty_leaf_id(self):
        with pytest.raises(ParseError, match="nonempty"):
            parse_tree({"root": {"leaf": ""}})

    def test_parse_rejects_keyless_node(self):
        with pytest.raises(ParseError, match="either"):
            parse_tree({"root": {}})

    def test_unknown_keys_ignored(self):
        doc = {
            "layout": "x",
            "annotator": "someone",
            "root": {"group": [{"leaf": "a", "label": "A"}, {"leaf": "b"}], "label": "row"},
        }
        tree = parse_tree(doc)
        assert tree.root == Group((Leaf("a"), Leaf("b")))

    def test_missing_layout_name_defaults_empty(self):
        assert parse_tree({"root": {"leaf": "a"}}).layout_name == ""

    @given(trees)
    def test_round_trip(self, tree):
        doc = json.loads(json.dumps(serialize_tree(tree)))
        back = parse_tree(doc)
        assert tree_equals(back, tree)
        assert back.root == tree.root
        assert back.layout_name == tree.layout_name

    @given(trees, trees)
    def test_equality_is_consistent_with_docs(self, a, b):
        same_doc = serialize_tree(a)["root"] == serialize_tree(b)["root"]
        assert tree_equals(a, b) == same_doc


class TestLeafIteration:
    def test_leaf_order(self):
        tree = Group((Group((Leaf("b"), Leaf("a"))), Leaf("c")))
        assert leaf_ids(tree) == ["b", "a", "c"]
        assert [l.field_id for l in iter_leaves(tree)] == ["b", "a", "c"]

    def test_single_leaf(self):
        assert leaf_ids(Leaf("only")) == ["only"]
