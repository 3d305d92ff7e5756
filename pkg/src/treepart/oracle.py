"""Exhaustive ground truth for every other module.

Everything here enumerates: all 2^n edge labelings, all connected subtrees,
all decompositions. Nothing is clever, so nothing here shares a code path with
the DP, the LP relaxations or branch-and-cut.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable

import numpy as np

from .errors import PreconditionError, SizeLimitError
from .instance import (
    EdgeLabeling,
    Instance,
    LiftedLabeling,
    Partition,
    Tree,
    labeling_to_lifted,
    mask_labeling,
    partition_from_labeling,
)

MAX_BRUTEFORCE_EDGES = 25
MAX_LIFTED_EDGES = 20
MAX_PARTITION_EDGES = 16
MAX_SUBTREES = 10**6

_CHUNK = 1 << 16


@dataclass(frozen=True)
class Subtree:
    nodes: frozenset[int]
    edges: tuple[int, ...]


def solve_bruteforce(inst: Instance, max_edges: int = MAX_BRUTEFORCE_EDGES) -> tuple[EdgeLabeling, Fraction]:
    """Minimize the objective over all 2^n labelings.

    Ties go to the smallest labeling read as an integer with edge 0 as the
    least significant bit. Costs are scaled to a common integer denominator so
    the sweep can run vectorized in exact integer arithmetic.
    """
    tree = inst.tree
    n = tree.n
    if n > max_edges:
        raise SizeLimitError(f"brute force capped at {max_edges} edges, tree has {n}")
    terms = [(tree.pair_masks[tree.pair_index(u, v)], c) for (u, v), c in inst.costs.items() if c]
    if not terms:
        return mask_labeling(0, n), Fraction(0)
    scale = lcm(*(c.denominator for _, c in terms))
    ints = [int(c * scale) for _, c in terms]
    bound = sum(abs(k) for k in ints)
    dtype = np.int64 if bound < 2**62 else object

    best_val, best_mask = None, 0
    total = 1 << n
    for start in range(0, total, _CHUNK):
        ys = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        vals = np.zeros(len(ys), dtype=dtype)
        for (mask, _), k in zip(terms, ints):
            vals += np.where((ys & mask) == mask, k, 0).astype(dtype)
        i = int(np.argmin(vals))
        if best_val is None or vals[i] < best_val:
            best_val, best_mask = vals[i], start + i
    return mask_labeling(best_mask, n), Fraction(int(best_val), scale)


def enumerate_lifted(tree: Tree, max_edges: int = MAX_LIFTED_EDGES) -> list[LiftedLabeling]:
    """The lifted image of every labeling, in labeling-integer order."""
    if tree.n > max_edges:
        raise SizeLimitError(f"lifted enumeration capped at {max_edges} edges")
    return [labeling_to_lifted(tree, mask_labeling(k, tree.n)) for k in range(1 << tree.n)]


def _rooted_children(tree: Tree) -> list[list[int]]:
    children: list[list[int]] = [[] for _ in range(tree.node_count)]
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in tree.neighbors(u):
            if w not in seen:
                seen.add(w)
                children[u].append(w)
                stack.append(w)
    return children


def count_subtrees(tree: Tree) -> int:
    """Number of connected subtrees, by the product recursion over a rooting."""
    children = _rooted_children(tree)
    memo: dict[int, int] = {}

    def topped(u):
        if u not in memo:
            prod = 1
            for c in children[u]:
                prod *= 1 + topped(c)
            memo[u] = prod
        return memo[u]

    return sum(topped(u) for u in range(tree.node_count))


def enumerate_subtrees(tree: Tree, limit: int = MAX_SUBTREES) -> list[Subtree]:
    """All nonempty connected subtrees, grown from their topmost node.

    A subtree whose node closest to the root (node 0) is ``r`` consists of
    ``r`` plus, for each child, either nothing or a subtree topped at that
    child. Results are sorted by size, then by node tuple.
    """
    if count_subtrees(tree) > limit:
        raise SizeLimitError(f"more than {limit} subtrees")
    children = _rooted_children(tree)
    memo: dict[int, list[frozenset[int]]] = {}

    def topped(u):
        if u in memo:
            return memo[u]
        acc = [frozenset([u])]
        for c in children[u]:
            acc = [s | t for s in acc for t in [frozenset()] + topped(c)]
        memo[u] = acc
        return acc

    out = []
    for r in range(tree.node_count):
        for nodes in topped(r):
            edges = tuple(i for i, (a, b) in enumerate(tree.edges) if a in nodes and b in nodes)
            out.append(Subtree(nodes, edges))
    out.sort(key=lambda s: (len(s.nodes), tuple(sorted(s.nodes))))
    return out


def subtree_cost(inst: Instance, nodes: Iterable[int]) -> Fraction:
    """Total cost of all pairs inside a connected node set."""
    tree = inst.tree
    S = sorted(set(nodes))
    if not S:
        raise PreconditionError("empty node set")
    members = set(S)
    inner = sum(1 for a, b in tree.edges if a in members and b in members)
    if inner != len(S) - 1:
        raise PreconditionError(f"node set {S} is not connected in the tree")
    total = Fraction(0)
    for i, u in enumerate(S):
        for v in S[i + 1:]:
            total += inst.cost(u, v)
    return total


def solve_set_partitioning_bruteforce(
    inst: Instance, max_edges: int = MAX_PARTITION_EDGES
) -> tuple[Partition, Fraction]:
    """Minimize the sum of subtree costs over all decompositions.

    Decompositions are enumerated through their edge labelings (a bijection);
    each is priced component by component. Ties keep the first decomposition
    in labeling-integer order, so all-zero costs yield all singletons.
    """
    tree = inst.tree
    if tree.n > max_edges:
        raise SizeLimitError(f"partition enumeration capped at {max_edges} edges")
    best = None
    for k in range(1 << tree.n):
        part = partition_from_labeling(tree, mask_labeling(k, tree.n))
        value = sum((subtree_cost(inst, comp) for comp in part.components), Fraction(0))
        if best is None or value < best[1]:
            best = (part, value)
    return best
