from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import path_instances
from treepart.catalog import five_node_example
from treepart.errors import PreconditionError
from treepart.instance import Instance, Tree
from treepart.oracle import solve_bruteforce, subtree_cost
from treepart.pathdp import interval_costs, solve_path


@given(path_instances(max_edges=8))
@settings(max_examples=50, deadline=None)
def test_interval_costs_are_block_sums(inst):
    table = interval_costs(inst)
    order = table.order
    for i in range(len(order)):
        for l in range(i, len(order)):
            block = order[i:l + 1]
            expected = subtree_cost(inst, block) if len(block) > 1 else Fraction(0)
            assert table[i][l] == expected


@given(path_instances(max_edges=10))
@settings(max_examples=60, deadline=None)
def test_dp_matches_bruteforce(inst):
    part, value = solve_path(inst)
    assert value == solve_bruteforce(inst)[1]
    assert sum((subtree_cost(inst, c) for c in part.components), Fraction(0)) == value


def test_relabelled_path():
    # the path 3-0-2-1 with a strong pull between its two ends
    tree = Tree(4, [(3, 0), (0, 2), (2, 1)])
    inst = Instance(tree, {(1, 3): -5, (0, 3): 1, (1, 2): 1, (0, 2): 1})
    part, value = solve_path(inst)
    assert value == solve_bruteforce(inst)[1] == -2
    assert part.components == ((0, 1, 2, 3),)


def test_ties_prefer_the_longest_last_block():
    part, value = solve_path(Instance(Tree.path(3)))
    assert value == 0
    assert part.components == ((0, 1, 2, 3),)


def test_non_path_is_refused():
    with pytest.raises(PreconditionError):
        solve_path(five_node_example())
