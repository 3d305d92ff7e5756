"""Reproducible random instances.

The generator is numpy's PCG64 seeded with the integer ``seed``
(``numpy.random.Generator(numpy.random.PCG64(seed))``), whose stream is fixed
across platforms. Draws happen in a fixed order: for ``kind="tree"`` first
``nodes - 2`` Prüfer entries via ``integers(0, nodes)``, then one cost per
pair in lexicographic pair order via ``integers(lo, hi + 1)``.
"""
from __future__ import annotations

import networkx as nx
import numpy as np

from .errors import InputError
from .instance import Instance, Tree

KINDS = ("path", "star", "tree")


def parse_cost_range(text: str) -> tuple[int, int]:
    """``"a,b"`` with integers a <= b."""
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"cost range must look like 'a,b', got {text!r}")
    try:
        lo, hi = (int(p.strip()) for p in parts)
    except ValueError as exc:
        raise InputError(f"cost range bounds must be integers: {text!r}") from exc
    if lo > hi:
        raise InputError(f"empty cost range {lo},{hi}")
    return lo, hi


def random_tree(nodes: int, rng: np.random.Generator) -> Tree:
    """Uniform labeled tree from a random Prüfer sequence."""
    seq = [int(v) for v in rng.integers(0, nodes, size=nodes - 2)]
    g = nx.from_prufer_sequence(seq)
    return Tree(nodes, sorted(tuple(sorted(e)) for e in g.edges()))


def generate_instance(kind: str, nodes: int, seed: int, cost_range: tuple[int, int] = (-10, 10)) -> Instance:
    if kind not in KINDS:
        raise InputError(f"unknown tree type {kind!r}; expected one of {KINDS}")
    if isinstance(nodes, bool) or not isinstance(nodes, int) or nodes < 2:
        raise InputError("nodes must be an integer >= 2")
    lo, hi = cost_range
    if lo > hi:
        raise InputError(f"empty cost range {lo},{hi}")
    rng = np.random.Generator(np.random.PCG64(seed))
    if kind == "path":
        tree = Tree.path(nodes - 1)
    elif kind == "star":
        tree = Tree.star(nodes - 1)
    else:
        tree = random_tree(nodes, rng)
    draws = rng.integers(lo, hi + 1, size=tree.m)
    return Instance(tree, {p: int(c) for p, c in zip(tree.pairs, draws)})
