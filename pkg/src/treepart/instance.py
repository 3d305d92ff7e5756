"""Trees, pairwise costs and the two solution encodings.

Node ids are dense integers ``0..N-1``. Unordered node pairs ``{u, v}`` with
``u < v`` are indexed lexicographically, which fixes the coordinate order of
every lifted vector and every constraint matrix in the package.

An *edge labeling* ``y`` assigns 1 to edges whose endpoints stay in the same
component and 0 to cut edges. The *lifted labeling* ``x`` uses the reverse
encoding on all pairs: ``x_uv = 1`` iff ``u`` and ``v`` end up in different
components.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicatePairError,
    InfeasibleEncodingError,
    InputError,
    MalformedInstanceError,
    NodeRangeError,
    NonTreeError,
    PreconditionError,
)

EdgeLabeling = tuple[int, ...]
LiftedLabeling = tuple[int, ...]
Pair = tuple[int, int]


def as_fraction(value) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to an exact rational.

    Floats are rejected; they would silently lose exactness.
    """
    if isinstance(value, bool):
        raise InputError(f"boolean is not a cost: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            num, _, den = text.partition("/")
            if den:
                return Fraction(int(num), int(den))
            return Fraction(int(num))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {value!r}") from exc
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise InputError(f"not an exact rational: {value!r}")


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def pair_count(node_count: int) -> int:
    return node_count * (node_count - 1) // 2


class Tree:
    """An immutable tree on nodes ``0..node_count-1``.

    The edge index of an edge is its position in ``edges``. Path queries use
    parent/depth arrays from a BFS rooted at node 0 and climb to the lowest
    common ancestor, so a query costs O(dist(u, v)).
    """

    def __init__(self, node_count: int, edges: Iterable[Sequence[int]]):
        if isinstance(node_count, bool) or not isinstance(node_count, int) or node_count < 1:
            raise InputError(f"node_count must be a positive integer, got {node_count!r}")
        norm = []
        for e in edges:
            if len(e) != 2:
                raise NonTreeError(f"edge {e!r} is not a pair")
            u, v = int(e[0]), int(e[1])
            for w in (u, v):
                if not 0 <= w < node_count:
                    raise NodeRangeError(f"node {w} outside 0..{node_count - 1}")
            if u == v:
                raise NonTreeError(f"self-loop at node {u}")
            norm.append((min(u, v), max(u, v)))
        if len(norm) != node_count - 1:
            raise NonTreeError(f"a tree on {node_count} nodes has {node_count - 1} edges, got {len(norm)}")
        index = {}
        for i, e in enumerate(norm):
            if e in index:
                raise NonTreeError(f"duplicate edge {e}")
            index[e] = i
        adj: list[list[int]] = [[] for _ in range(node_count)]
        for u, v in norm:
            adj[u].append(v)
            adj[v].append(u)

        parent = [-1] * node_count
        parent_edge = [-1] * node_count
        depth = [-1] * node_count
        depth[0] = 0
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in sorted(adj[u]):
                if depth[w] < 0:
                    depth[w] = depth[u] + 1
                    parent[w] = u
                    parent_edge[w] = index[(min(u, w), max(u, w))]
                    queue.append(w)
        if min(depth) < 0:
            raise NonTreeError("edge set is not connected (it contains a cycle)")

        self.node_count = node_count
        self.edges: tuple[Pair, ...] = tuple(norm)
        self._edge_index = index
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._parent = tuple(parent)
        self._parent_edge = tuple(parent_edge)
        self._depth = tuple(depth)

    @classmethod
    def path(cls, n_edges: int) -> "Tree":
        return cls(n_edges + 1, [(i, i + 1) for i in range(n_edges)])

    @classmethod
    def star(cls, leaves: int) -> "Tree":
        return cls(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    def __repr__(self):
        return f"Tree({self.node_count}, {list(self.edges)})"

    def __eq__(self, other):
        return isinstance(other, Tree) and (self.node_count, self.edges) == (other.node_count, other.edges)

    def __hash__(self):
        return hash((self.node_count, self.edges))

    # -- basic structure -------------------------------------------------

    @property
    def n(self) -> int:
        """Number of edges."""
        return self.node_count - 1

    @property
    def m(self) -> int:
        """Number of unordered node pairs."""
        return pair_count(self.node_count)

    def neighbors(self, u: int) -> tuple[int, ...]:
        self._check_node(u)
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self.neighbors(u))

    def is_leaf(self, u: int) -> bool:
        return self.degree(u) == 1

    def edge_index(self, u: int, v: int) -> int:
        try:
            return self._edge_index[(min(u, v), max(u, v))]
        except KeyError:
            raise InputError(f"{{{u}, {v}}} is not an edge") from None

    def _check_node(self, u):
        if isinstance(u, bool) or not isinstance(u, int) or not 0 <= u < self.node_count:
            raise InputError(f"unknown node {u!r}")

    # -- pair indexing ---------------------------------------------------

    def pair_index(self, u: int, v: int) -> int:
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise InputError("a pair needs two distinct nodes")
        if u > v:
            u, v = v, u
        return u * (2 * self.node_count - u - 1) // 2 + (v - u - 1)

    @cached_property
    def pairs(self) -> tuple[Pair, ...]:
        """All pairs ``(u, v)``, ``u < v``, in pair-index order."""
        return tuple(combinations(range(self.node_count), 2))

    @cached_property
    def edge_pair_indices(self) -> tuple[int, ...]:
        """Pair index of every tree edge, in edge-index order."""
        return tuple(self.pair_index(u, v) for u, v in self.edges)

    # -- path queries ----------------------------------------------------

    def path_nodes(self, u: int, v: int) -> list[int]:
        """Nodes of the unique u-v path, from ``u`` to ``v``."""
        self._check_node(u)
        self._check_node(v)
        left, right = [u], [v]
        a, b = u, v
        while self._depth[a] > self._depth[b]:
            a = self._parent[a]
            left.append(a)
        while self._depth[b] > self._depth[a]:
            b = self._parent[b]
            right.append(b)
        while a != b:
            a, b = self._parent[a], self._parent[b]
            left.append(a)
            right.append(b)
        right.pop()
        return left + right[::-1]

    def path_edges(self, u: int, v: int) -> list[int]:
        """Edge indices along the u-v path, in order from ``u``."""
        nodes = self.path_nodes(u, v)
        return [self._edge_index[(min(a, b), max(a, b))] for a, b in zip(nodes, nodes[1:])]

    def distance(self, u: int, v: int) -> int:
        return len(self.path_nodes(u, v)) - 1

    def first_step(self, u: int, v: int) -> int:
        """The neighbour of ``u`` on the u-v path; requires dist(u, v) >= 2."""
        nodes = self.path_nodes(u, v)
        if len(nodes) < 3:
            raise PreconditionError(f"first_step needs dist({u}, {v}) >= 2")
        return nodes[1]

    @cached_property
    def pair_paths(self) -> tuple[tuple[int, ...], ...]:
        """Edge indices of P_uv for every pair, by pair index."""
        return tuple(tuple(self.path_edges(u, v)) for u, v in self.pairs)

    @cached_property
    def pair_masks(self) -> tuple[int, ...]:
        """Bit mask (edge i -> bit i) of P_uv for every pair."""
        return tuple(sum(1 << e for e in p) for p in self.pair_paths)

    @cached_property
    def pair_distances(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.pair_paths)

    # -- shape tests -----------------------------------------------------

    def is_path(self) -> bool:
        return all(len(a) <= 2 for a in self._adj)

    def path_order(self) -> list[int]:
        """Nodes in order along a path tree, starting at the smaller endpoint."""
        if not self.is_path():
            raise PreconditionError("tree is not a path")
        if self.node_count == 1:
            return [0]
        start = min(u for u in range(self.node_count) if len(self._adj[u]) == 1)
        order, prev = [start], -1
        while len(order) < self.node_count:
            cur = order[-1]
            nxt = [w for w in self._adj[cur] if w != prev]
            prev = cur
            order.append(nxt[0])
        return order

    def star_center(self) -> int | None:
        """Center of a star (every edge touches it), or None for non-stars."""
        if self.node_count <= 2:
            return 0
        centers = [u for u in range(self.node_count) if len(self._adj[u]) == self.n]
        return centers[0] if centers else None


class Instance:
    """A tree together with exact rational costs on node pairs.

    Pairs absent from ``costs`` have cost 0. Explicit zero entries are kept so
    that a loaded file saves back byte for byte.
    """

    def __init__(self, tree: Tree, costs: Mapping[Pair, object] | None = None):
        self.tree = tree
        table: dict[Pair, Fraction] = {}
        for key, value in (costs or {}).items():
            u, v = key
            for w in (u, v):
                if isinstance(w, bool) or not isinstance(w, int) or not 0 <= w < tree.node_count:
                    raise NodeRangeError(f"cost on unknown node {w!r}")
            if u == v:
                raise InputError(f"cost on degenerate pair ({u}, {v})")
            pair = (min(u, v), max(u, v))
            if pair in table:
                raise DuplicatePairError(f"pair {pair} given twice")
            table[pair] = as_fraction(value)
        self.costs: dict[Pair, Fraction] = dict(sorted(table.items()))

    def __repr__(self):
        return f"Instance({self.tree!r}, {len(self.costs)} costs)"

    def __eq__(self, other):
        return isinstance(other, Instance) and self.tree == other.tree and self.costs == other.costs

    def cost(self, u: int, v: int) -> Fraction:
        return self.costs.get((min(u, v), max(u, v)), Fraction(0))

    @cached_property
    def cost_vector(self) -> tuple[Fraction, ...]:
        vec = [Fraction(0)] * self.tree.m
        for (u, v), c in self.costs.items():
            vec[self.tree.pair_index(u, v)] = c
        return tuple(vec)

    @property
    def total_cost(self) -> Fraction:
        return sum(self.costs.values(), Fraction(0))


# -- the two encodings ---------------------------------------------------


def _check_labeling(tree: Tree, y: Sequence[int]) -> int:
    if len(y) != tree.n:
        raise InputError(f"labeling has length {len(y)}, tree has {tree.n} edges")
    mask = 0
    for i, b in enumerate(y):
        if b not in (0, 1):
            raise InputError(f"labeling entry {i} is {b!r}, expected 0 or 1")
        mask |= b << i
    return mask


def labeling_mask(y: Sequence[int]) -> int:
    """Labeling as an integer, edge 0 in the least significant bit."""
    return sum(b << i for i, b in enumerate(y))


def mask_labeling(mask: int, n: int) -> EdgeLabeling:
    return tuple((mask >> i) & 1 for i in range(n))


def evaluate_objective(inst: Instance, y: Sequence[int]) -> Fraction:
    """Sum of c_uv over pairs whose whole path is labeled 1."""
    tree = inst.tree
    _check_labeling(tree, y)
    total = Fraction(0)
    for (u, v), c in inst.costs.items():
        if all(y[e] for e in tree.pair_paths[tree.pair_index(u, v)]):
            total += c
    return total


def labeling_to_lifted(tree: Tree, y: Sequence[int]) -> LiftedLabeling:
    mask = _check_labeling(tree, y)
    return tuple(0 if pm & ~mask == 0 else 1 for pm in tree.pair_masks)


def is_lifted_multicut(tree: Tree, x: Sequence[int]) -> bool:
    """Whether ``x`` is the lifted encoding of some edge labeling."""
    if len(x) != tree.m or any(b not in (0, 1) for b in x):
        return False
    y = tuple(1 - x[p] for p in tree.edge_pair_indices)
    return labeling_to_lifted(tree, y) == tuple(x)


def lifted_to_labeling(tree: Tree, x: Sequence[int]) -> EdgeLabeling:
    if len(x) != tree.m:
        raise InputError(f"lifted vector has length {len(x)}, expected {tree.m}")
    if not is_lifted_multicut(tree, x):
        raise InfeasibleEncodingError("vector violates a path or cut inequality")
    return tuple(1 - x[p] for p in tree.edge_pair_indices)


@dataclass(frozen=True)
class Partition:
    """A decomposition of the node set; components are sorted by first node."""

    components: tuple[tuple[int, ...], ...]
    component_of: tuple[int, ...] = field(compare=False)

    @classmethod
    def from_components(cls, components: Iterable[Iterable[int]]) -> "Partition":
        comps = sorted(tuple(sorted(c)) for c in components)
        size = sum(len(c) for c in comps)
        owner = [-1] * size
        for k, comp in enumerate(comps):
            for u in comp:
                if not 0 <= u < size or owner[u] >= 0:
                    raise InputError("components must be disjoint and cover 0..N-1")
                owner[u] = k
        return cls(tuple(comps), tuple(owner))

    def as_sets(self) -> list[set[int]]:
        return [set(c) for c in self.components]


def partition_from_labeling(tree: Tree, y: Sequence[int]) -> Partition:
    _check_labeling(tree, y)
    root = list(range(tree.node_count))

    def find(a):
        while root[a] != a:
            root[a] = root[root[a]]
            a = root[a]
        return a

    for (u, v), keep in zip(tree.edges, y):
        if keep:
            ru, rv = find(u), find(v)
            root[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for u in range(tree.node_count):
        groups.setdefault(find(u), []).append(u)
    return Partition.from_components(groups.values())


def labeling_from_partition(tree: Tree, partition: Partition) -> EdgeLabeling:
    owner = partition.component_of
    return tuple(int(owner[u] == owner[v]) for u, v in tree.edges)


# -- pseudo-Boolean views ------------------------------------------------


@dataclass(frozen=True)
class PbfCoefficients:
    """Multilinear polynomial over edge variables.

    ``terms`` maps a sorted tuple of edge indices to its coefficient; the empty
    tuple is the constant term. Zero coefficients are never stored.
    """

    n: int
    terms: Mapping[tuple[int, ...], Fraction]

    def evaluate(self, y: Sequence[int]) -> Fraction:
        if len(y) != self.n:
            raise InputError(f"labeling has length {len(y)}, polynomial has {self.n} variables")
        return sum((c for I, c in self.terms.items() if all(y[i] for i in I)), Fraction(0))

    @property
    def degree(self) -> int:
        return max((len(I) for I in self.terms), default=0)

    def is_tree_sparse(self, tree: Tree) -> bool:
        """Every monomial's edge set induces a path in ``tree``."""
        return all(not I or _induces_path(tree, I) for I in self.terms)


def _induces_path(tree: Tree, edge_ids: Sequence[int]) -> bool:
    deg: dict[int, int] = {}
    for e in edge_ids:
        for w in tree.edges[e]:
            deg[w] = deg.get(w, 0) + 1
    # a forest with |I| edges on |I|+1 nodes is connected; max degree 2 makes it a path
    return len(deg) == len(set(edge_ids)) + 1 and max(deg.values()) <= 2


def pbf_view(inst: Instance) -> PbfCoefficients:
    tree = inst.tree
    terms = {}
    for (u, v), c in inst.costs.items():
        if c:
            terms[tuple(sorted(tree.pair_paths[tree.pair_index(u, v)]))] = c
    return PbfCoefficients(tree.n, dict(sorted(terms.items())))


def star_to_quadratic(inst: Instance) -> PbfCoefficients:
    """Quadratic pseudo-Boolean form of a star instance.

    Edge ``i`` joins the center to leaf ``l_i``; the center-leaf cost becomes
    the linear coefficient of ``y_i`` and the leaf-leaf cost of ``l_i, l_j``
    the coefficient of ``y_i y_j``.
    """
    tree = inst.tree
    center = tree.star_center()
    if center is None:
        raise PreconditionError("tree is not a star")
    leaf_edge = {}
    for i, (u, v) in enumerate(tree.edges):
        leaf_edge[v if u == center else u] = i
    terms = {}
    for (u, v), c in inst.costs.items():
        if not c:
            continue
        if center in (u, v):
            key: tuple[int, ...] = (leaf_edge[v if u == center else u],)
        else:
            key = tuple(sorted((leaf_edge[u], leaf_edge[v])))
        terms[key] = c
    return PbfCoefficients(tree.n, dict(sorted(terms.items())))


# -- serialization -------------------------------------------------------


def save_instance(inst: Instance) -> bytes:
    """Canonical JSON text; ``save(load(save(i))) == save(i)`` byte for byte."""
    edges = json.dumps([list(e) for e in inst.tree.edges])
    lines = ["{", f'  "nodes": {inst.tree.node_count},', f'  "edges": {edges},']
    if inst.costs:
        lines.append('  "costs": [')
        entries = []
        for (u, v), c in inst.costs.items():
            cval = c.numerator if c.denominator == 1 else format_fraction(c)
            entries.append("    " + json.dumps({"u": u, "v": v, "c": cval}))
        lines.append(",\n".join(entries))
        lines.append("  ]")
    else:
        lines.append('  "costs": []')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


def _int_field(obj, key, where):
    val = obj.get(key)
    if isinstance(val, bool) or not isinstance(val, int):
        raise MalformedInstanceError(f"{where}: '{key}' must be an integer")
    return val


def load_instance(data: bytes | str) -> Instance:
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise MalformedInstanceError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != {"nodes", "edges", "costs"}:
        raise MalformedInstanceError("expected an object with keys 'nodes', 'edges', 'costs'")
    nodes = _int_field(doc, "nodes", "instance")
    if nodes < 1:
        raise MalformedInstanceError("'nodes' must be positive")
    edges = doc["edges"]
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(isinstance(w, int) and not isinstance(w, bool) for w in e)
        for e in edges
    ):
        raise MalformedInstanceError("'edges' must be a list of [u, v] integer pairs")
    costs_raw = doc["costs"]
    if not isinstance(costs_raw, list):
        raise MalformedInstanceError("'costs' must be a list")
    tree = Tree(nodes, edges)
    costs: dict[Pair, Fraction] = {}
    for k, entry in enumerate(costs_raw):
        where = f"costs[{k}]"
        if not isinstance(entry, dict) or set(entry) != {"u", "v", "c"}:
            raise MalformedInstanceError(f"{where}: expected keys 'u', 'v', 'c'")
        u, v = _int_field(entry, "u", where), _int_field(entry, "v", where)
        for w in (u, v):
            if not 0 <= w < nodes:
                raise NodeRangeError(f"{where}: node {w} outside 0..{nodes - 1}")
        if u == v:
            raise MalformedInstanceError(f"{where}: u and v must differ")
        c = entry["c"]
        if isinstance(c, bool) or not isinstance(c, (int, str)):
            raise MalformedInstanceError(f"{where}: 'c' must be an integer or a 'p/q' string")
        try:
            value = as_fraction(c)
        except InputError as exc:
            raise MalformedInstanceError(f"{where}: {exc}") from exc
        pair = (min(u, v), max(u, v))
        if pair in costs:
            raise DuplicatePairError(f"{where}: pair {pair} given twice")
        costs[pair] = value
    return Instance(tree, costs)
