"""Small named trees and instances used in docs and tests."""
from .instance import Instance, Tree


def five_node_example() -> Instance:
    """Five-node tree whose optimum cuts the single edge {2, 3} at value -3.

    Node 2 is the hub with leaves 0 and 1; the chain 2-3-4 hangs off it.
    """
    tree = Tree(5, [(0, 2), (1, 2), (2, 3), (3, 4)])
    costs = {
        (0, 2): 2, (1, 2): -1, (2, 3): -2, (3, 4): -1,
        (0, 1): -3, (1, 3): 1, (0, 3): 1, (0, 4): 2, (1, 4): -2, (2, 4): 3,
    }
    return Instance(tree, costs)


def seven_node_tree() -> Tree:
    return Tree(7, [(0, 1), (1, 2), (1, 3), (3, 4), (2, 5), (2, 6)])


def three_leaf_star() -> Tree:
    return Tree.star(3)
