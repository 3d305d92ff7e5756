from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import trees
from treepart.catalog import seven_node_tree
from treepart.errors import InputError, PreconditionError
from treepart.instance import Tree, is_lifted_multicut, labeling_to_lifted
from treepart.oracle import enumerate_lifted
from treepart.polytopes import (
    check_membership,
    extended_path_system,
    family_rows,
    pair_labels,
    separate,
    square_system,
    theta0_system,
    theta1_system,
    theta_path_system,
    theta_path_system_for_tree,
)


@pytest.mark.parametrize(
    "tree, path_rows, cut_rows, box_rows",
    [(Tree.path(2), 1, 2, 6), (Tree.path(3), 3, 7, 12), (Tree.star(3), 3, 6, 12)],
)
def test_theta0_row_counts(tree, path_rows, cut_rows, box_rows):
    s = theta0_system(tree)
    assert (s.count("path"), s.count("cut"), s.count("box")) == (path_rows, cut_rows, box_rows)


def test_theta1_on_short_path_deduplicates():
    s = theta1_system(Tree.path(2), boxes=False)
    # (0, 2) and (2, 0) give the same path row but distinct cut rows
    assert s.count("canonical-path") == 1 and s.count("canonical-cut") == 2


@pytest.mark.parametrize("n, rows", [(2, 4), (3, 8), (4, 13)])
def test_path_system_sizes(n, rows):
    assert len(theta_path_system(n)) == rows


def test_square_row_on_seven_node_tree():
    tree = seven_node_tree()
    labels = pair_labels(tree)
    row = next(r for r in square_system(tree).rows if r.nodes == (4, 5))
    assert row.describe(labels) == "x2_3 - x2_4 - x3_5 + x4_5 <= 0"


def test_square_rows_only_at_distance_three():
    tree = Tree.path(3)
    rows = square_system(tree).rows
    assert [r.nodes for r in rows] == [(0, 3)]
    assert rows[0].describe(pair_labels(tree)) == "- x0_2 + x0_3 + x1_2 - x1_3 <= 0"


def test_extended_system_shape():
    ext = extended_path_system(2)
    assert ext.space.size == 9
    assert len(ext.equalities) == 6 and len(ext.inequalities) == 6
    ext4 = extended_path_system(4)
    labels = ext4.space.labels
    row = next(r for r in ext4.inequalities.rows if r.nodes == (-1, 5))
    assert row.describe(labels) == "x0_4 + x-inf_+inf <= 2"
    with pytest.raises(PreconditionError):
        extended_path_system(1)


@given(trees(max_nodes=8))
@settings(max_examples=40, deadline=None)
def test_every_lifted_multicut_satisfies_every_system(tree):
    systems = [theta0_system(tree), theta1_system(tree), square_system(tree)]
    for x in enumerate_lifted(tree):
        for s in systems:
            assert s.satisfied_by(x)
        assert check_membership(tree, x)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_lifted_multicuts_satisfy_path_and_extended_systems(n):
    tree = Tree.path(n)
    tp = theta_path_system(n)
    ext = extended_path_system(n)
    for x in enumerate_lifted(tree):
        assert tp.satisfied_by(x)
        full = ext.space.extend(x)
        assert all(r.satisfied_by(full) for r in ext.all_rows)


@given(trees(max_nodes=6), st.data())
@settings(max_examples=60, deadline=None)
def test_membership_matches_encoding_check(tree, data):
    x = tuple(data.draw(st.lists(st.integers(0, 1), min_size=tree.m, max_size=tree.m)))
    assert check_membership(tree, x) == is_lifted_multicut(tree, x)


def test_membership_rejects_fractional_points():
    assert not check_membership(Tree.path(1), (Fraction(1, 2),))


def test_relabelled_path_system():
    tree = Tree(4, [(2, 0), (0, 3), (3, 1)])
    mapped = theta_path_system_for_tree(tree)
    for k in range(8):
        y = tuple((k >> i) & 1 for i in range(3))
        assert mapped.satisfied_by(labeling_to_lifted(tree, y))
    with pytest.raises(PreconditionError):
        theta_path_system_for_tree(Tree.star(3))


def test_separation_order_is_deterministic():
    tree = Tree.path(2)
    # x02 = 1 with both edges joined violates the path row by 1
    x = (Fraction(0), Fraction(1), Fraction(0))
    hits = separate(x, family_rows(tree, "theta0"))
    assert [r.family for r, _ in hits] == ["path"]
    assert hits[0][1] == 1
    x = (Fraction(1), Fraction(0), Fraction(1, 2))
    hits = separate(x, family_rows(tree, "theta0"))
    assert [(r.family, v) for r, v in hits] == [("cut", 1), ("cut", Fraction(1, 2))]


def test_unknown_family():
    with pytest.raises(InputError):
        family_rows(Tree.path(2), "nope")
