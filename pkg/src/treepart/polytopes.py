"""Inequality systems over the lifted pair variables.

All rows are stored as ``a . x <= b`` (or ``a . x == b``) with sorted sparse
integer-valued coefficients over pair indices. Each row remembers the family
it came from and the nodes that generated it, which the facet classifier and
the cutting-plane solver both rely on.

Families:

* ``path`` / ``cut``: the defining system of lifted multicuts of a tree
  (one path row per pair at distance >= 2, one cut row per path edge).
* ``canonical-path`` / ``canonical-cut``: the same idea restricted to node
  triplets ``u, first_step(u, v), v``.
* ``square``: ``x_uv + x_{u'v'} <= x_{uv'} + x_{u'v}`` for dist(u, v) >= 3,
  where ``u'``/``v'`` are the first steps from ``u``/``v`` towards each other.
* ``box``: ``0 <= x <= 1``.
* ``path-cut-right``, ``path-cut-left``, ``triangle`` (and ``box``,
  ``square``) make up the complete description for paths on ``0..n``.
* ``extended``: the same path system rewritten with two artificial end nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import InputError, PreconditionError
from .instance import Tree, pair_count
from .lp import Constraint

FAMILY_ORDER = (
    "box",
    "path",
    "cut",
    "canonical-path",
    "canonical-cut",
    "square",
    "path-cut-right",
    "path-cut-left",
    "triangle",
    "extended",
)
_FAMILY_RANK = {f: i for i, f in enumerate(FAMILY_ORDER)}


@dataclass(frozen=True)
class Row:
    coeffs: tuple[tuple[int, Fraction], ...]
    rhs: Fraction
    family: str
    relation: str = "<="
    nodes: tuple = ()

    @classmethod
    def build(cls, coeffs: Mapping[int, int | Fraction], rhs, family, relation="<=", nodes=()):
        merged: dict[int, Fraction] = {}
        for j, a in coeffs.items():
            merged[j] = merged.get(j, Fraction(0)) + Fraction(a)
        items = tuple(sorted((j, a) for j, a in merged.items() if a))
        return cls(items, Fraction(rhs), family, relation, tuple(nodes))

    @property
    def key(self):
        """Identity of the geometric row, ignoring provenance."""
        return (self.relation, self.coeffs, self.rhs)

    def activity(self, x: Sequence) -> Fraction:
        return sum((a * x[j] for j, a in self.coeffs), Fraction(0))

    def violation(self, x: Sequence) -> Fraction:
        """``a . x - b``; positive means violated (for ``==`` rows, either sign is)."""
        return self.activity(x) - self.rhs

    def satisfied_by(self, x: Sequence) -> bool:
        v = self.violation(x)
        return v == 0 if self.relation == "==" else v <= 0

    def as_constraint(self) -> Constraint:
        return Constraint(dict(self.coeffs), self.relation, self.rhs, self.family)

    def describe(self, labels: Sequence[str]) -> str:
        parts = []
        for j, a in self.coeffs:
            mag = "" if abs(a) == 1 else f"{abs(a)} "
            parts.append(f"{'-' if a < 0 else '+'} {mag}{labels[j]}")
        lhs = " ".join(parts)
        lhs = lhs[2:] if lhs.startswith("+ ") else lhs
        return f"{lhs} {'=' if self.relation == '==' else '<='} {self.rhs}"


@dataclass(frozen=True)
class InequalitySystem:
    dim: int
    rows: tuple[Row, ...]

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __add__(self, other: "InequalitySystem") -> "InequalitySystem":
        if self.dim != other.dim:
            raise InputError("systems live in different spaces")
        return InequalitySystem(self.dim, _dedup(self.rows + other.rows))

    def count(self, family: str) -> int:
        return sum(1 for r in self.rows if r.family == family)

    def family(self, *families: str) -> "InequalitySystem":
        return InequalitySystem(self.dim, tuple(r for r in self.rows if r.family in families))

    def satisfied_by(self, x: Sequence) -> bool:
        return all(r.satisfied_by(x) for r in self.rows)

    def constraints(self) -> list[Constraint]:
        return [r.as_constraint() for r in self.rows]

    def matrix(self) -> list[list[int]]:
        """Dense constraint matrix (rows x dim); coefficients are integral here."""
        out = []
        for r in self.rows:
            line = [0] * self.dim
            for j, a in r.coeffs:
                line[j] = int(a)
            out.append(line)
        return out


def _dedup(rows: Iterable[Row]) -> tuple[Row, ...]:
    seen = set()
    out = []
    for r in rows:
        if r.key not in seen:
            seen.add(r.key)
            out.append(r)
    return tuple(out)


def pair_labels(tree: Tree) -> list[str]:
    return [f"x{u}_{v}" for u, v in tree.pairs]


# -- tree systems ----------------------------------------------------------


def box_rows(tree: Tree) -> tuple[Row, ...]:
    rows = []
    for p, (u, v) in enumerate(tree.pairs):
        rows.append(Row.build({p: -1}, 0, "box", nodes=("lower", u, v)))
        rows.append(Row.build({p: 1}, 1, "box", nodes=("upper", u, v)))
    return tuple(rows)


@lru_cache(maxsize=256)
def theta0_system(tree: Tree, boxes: bool = True) -> InequalitySystem:
    path_rows, cut_rows = [], []
    for p, (u, v) in enumerate(tree.pairs):
        edges = tree.pair_paths[p]
        if len(edges) < 2:
            continue
        eps = [tree.edge_pair_indices[e] for e in edges]
        coeffs = {p: 1}
        for q in eps:
            coeffs[q] = -1
        path_rows.append(Row.build(coeffs, 0, "path", nodes=(u, v)))
        for e, q in zip(edges, eps):
            cut_rows.append(Row.build({q: 1, p: -1}, 0, "cut", nodes=(u, v) + tree.edges[e]))
    rows = (box_rows(tree) if boxes else ()) + tuple(path_rows) + tuple(cut_rows)
    return InequalitySystem(tree.m, _dedup(rows))


@lru_cache(maxsize=256)
def theta1_system(tree: Tree, boxes: bool = True) -> InequalitySystem:
    """Canonical relaxation; ordered pairs (u, v) and (v, u) both contribute."""
    path_rows, cut_rows = [], []
    for u in range(tree.node_count):
        for v in range(tree.node_count):
            if u == v or tree.distance(u, v) < 2:
                continue
            w = tree.first_step(u, v)
            puv, puw, pwv = tree.pair_index(u, v), tree.pair_index(u, w), tree.pair_index(w, v)
            path_rows.append(Row.build({puv: 1, puw: -1, pwv: -1}, 0, "canonical-path", nodes=(u, v)))
            cut_rows.append(Row.build({pwv: 1, puv: -1}, 0, "canonical-cut", nodes=(u, v)))
    rows = (box_rows(tree) if boxes else ()) + tuple(path_rows) + tuple(cut_rows)
    return InequalitySystem(tree.m, _dedup(rows))


@lru_cache(maxsize=256)
def square_system(tree: Tree) -> InequalitySystem:
    rows = []
    for u, v in tree.pairs:
        if tree.distance(u, v) < 3:
            continue
        a = tree.first_step(u, v)  # next to u
        b = tree.first_step(v, u)  # next to v
        coeffs = {
            tree.pair_index(u, v): 1,
            tree.pair_index(a, b): 1,
            tree.pair_index(u, b): -1,
            tree.pair_index(a, v): -1,
        }
        rows.append(Row.build(coeffs, 0, "square", nodes=(u, v)))
    return InequalitySystem(tree.m, tuple(rows))


# -- paths -----------------------------------------------------------------


def _path_pair(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return i * (2 * (n + 1) - i - 1) // 2 + (j - i - 1)


@lru_cache(maxsize=64)
def theta_path_system(n: int) -> InequalitySystem:
    """Complete description for the path 0-1-...-n (no lower bounds needed)."""
    if n < 2:
        raise PreconditionError("the path system needs n >= 2")
    P = lambda i, j: _path_pair(n, i, j)  # noqa: E731
    rows = [Row.build({P(0, n): 1}, 1, "box", nodes=("upper", 0, n))]
    for i in range(1, n):
        rows.append(Row.build({P(i, n): 1, P(i - 1, n): -1}, 0, "path-cut-right", nodes=(i,)))
    for i in range(1, n):
        rows.append(Row.build({P(0, i): 1, P(0, i + 1): -1}, 0, "path-cut-left", nodes=(i,)))
    for i in range(1, n):
        rows.append(
            Row.build({P(i - 1, i + 1): 1, P(i - 1, i): -1, P(i, i + 1): -1}, 0, "triangle", nodes=(i,))
        )
    for j in range(n + 1):
        for k in range(j + 3, n + 1):
            coeffs = {P(j, k): 1, P(j + 1, k - 1): 1, P(j + 1, k): -1, P(j, k - 1): -1}
            rows.append(Row.build(coeffs, 0, "square", nodes=(j, k)))
    return InequalitySystem(pair_count(n + 1), tuple(rows))


def theta_path_system_for_tree(tree: Tree) -> InequalitySystem:
    """The path system mapped onto a path tree with arbitrary node numbering."""
    if not tree.is_path() or tree.n < 2:
        raise PreconditionError("needs a path with at least two edges")
    order = tree.path_order()
    base = theta_path_system(tree.n)
    positional = list(combinations(range(tree.node_count), 2))
    remap = [tree.pair_index(order[i], order[j]) for i, j in positional]
    rows = []
    for r in base.rows:
        rows.append(Row.build({remap[j]: a for j, a in r.coeffs}, r.rhs, r.family, r.relation, r.nodes))
    return InequalitySystem(tree.m, tuple(rows))


NEG_INF = "-inf"
POS_INF = "+inf"


class ExtendedPathSpace:
    """Variable space of the path system with artificial end nodes.

    Positions are ``-1`` (standing for -infinity), ``0..n`` and ``n + 1``
    (+infinity). Variables, in index order: the ``m`` real pairs, then
    ``x_ii`` for ``0 <= i <= n``, ``x_{-inf,i}`` and ``x_{i,+inf}`` for
    ``1 <= i <= n-1``, and ``x_{-inf,+inf}``: ``m + 3n`` in total. The
    remaining end-node pairs ``x_{-inf,0}``, ``x_{-inf,n}``, ``x_{0,+inf}`` and
    ``x_{n,+inf}`` are not variables; they are the constant 1 and fold into
    the right-hand sides.
    """

    def __init__(self, n: int):
        if n < 2:
            raise PreconditionError("the extended system needs n >= 2")
        self.n = n
        self.m = pair_count(n + 1)
        self.size = self.m + 3 * n
        self.labels: list[str] = [f"x{i}_{j}" for i, j in combinations(range(n + 1), 2)]
        self._index: dict[tuple[int, int], int] = {}
        for p, (i, j) in enumerate(combinations(range(n + 1), 2)):
            self._index[(i, j)] = p
        k = self.m
        for i in range(n + 1):
            self._index[(i, i)] = k
            self.labels.append(f"x{i}_{i}")
            k += 1
        for i in range(1, n):
            self._index[(-1, i)] = k
            self.labels.append(f"x{NEG_INF}_{i}")
            k += 1
        for i in range(1, n):
            self._index[(i, n + 1)] = k
            self.labels.append(f"x{i}_{POS_INF}")
            k += 1
        self._index[(-1, n + 1)] = k
        self.labels.append(f"x{NEG_INF}_{POS_INF}")
        assert k + 1 == self.size

    def var(self, a: int, b: int) -> int | None:
        """Index of ``x_ab`` (positions as above) or None for a constant-1 pair."""
        if (a, b) in self._index:
            return self._index[(a, b)]
        if (a, b) in ((-1, 0), (-1, self.n), (0, self.n + 1), (self.n, self.n + 1)):
            return None
        raise InputError(f"no extended variable x[{a},{b}]")

    def extend(self, x: Sequence) -> list[Fraction]:
        """Canonical extension of a real-pair vector (equalities filled in)."""
        if len(x) != self.m:
            raise InputError("expected a vector over the real pairs")
        out = [Fraction(v) for v in x] + [Fraction(0)] * (3 * self.n)
        for i in range(1, self.n):
            out[self._index[(-1, i)]] = Fraction(1)
            out[self._index[(i, self.n + 1)]] = Fraction(1)
        out[self._index[(-1, self.n + 1)]] = Fraction(1)
        return out


@dataclass(frozen=True)
class ExtendedPathSystem:
    space: ExtendedPathSpace
    inequalities: InequalitySystem
    equalities: InequalitySystem

    @property
    def all_rows(self) -> tuple[Row, ...]:
        return self.inequalities.rows + self.equalities.rows


@lru_cache(maxsize=64)
def extended_path_system(n: int) -> ExtendedPathSystem:
    """Square rows over every extended ``j <= k - 2`` plus the fixing equalities."""
    space = ExtendedPathSpace(n)
    rows = []
    for j in range(-1, n + 2):
        for k in range(j + 2, n + 2):
            coeffs: dict[int, int] = {}
            rhs = 0
            for (a, b), sign in (((j, k), 1), ((j + 1, k - 1), 1), ((j + 1, k), -1), ((j, k - 1), -1)):
                idx = space.var(a, b)
                if idx is None:
                    rhs -= sign
                else:
                    coeffs[idx] = coeffs.get(idx, 0) + sign
            rows.append(Row.build(coeffs, rhs, "extended", nodes=(j, k)))
    eqs = []
    for i in range(n + 1):
        eqs.append(Row.build({space.var(i, i): 1}, 0, "extended", "==", ("vertex", i)))
    for i in range(1, n):
        eqs.append(Row.build({space.var(-1, i): 1}, 1, "extended", "==", ("left", i)))
    for i in range(1, n):
        eqs.append(Row.build({space.var(i, n + 1): 1}, 1, "extended", "==", ("right", i)))
    eqs.append(Row.build({space.var(-1, n + 1): 1}, 1, "extended", "==", ("infinity",)))
    return ExtendedPathSystem(
        space, InequalitySystem(space.size, tuple(rows)), InequalitySystem(space.size, tuple(eqs))
    )


# -- membership and separation -----------------------------------------------


def check_membership(tree: Tree, x: Sequence) -> bool:
    """``x`` is binary and satisfies every path and cut row."""
    if len(x) != tree.m or any(v not in (0, 1) for v in x):
        return False
    return theta0_system(tree, boxes=False).satisfied_by(x)


def family_rows(tree: Tree, family: str) -> tuple[Row, ...]:
    """Rows of one family (or the named groups ``theta0``, ``theta1``, ``theta1+squares``, ``path-exact``)."""
    groups = {
        "theta0": lambda: theta0_system(tree).rows,
        "theta1": lambda: theta1_system(tree).rows,
        "theta1+squares": lambda: theta1_system(tree).rows + square_system(tree).rows,
        "path-exact": lambda: box_rows(tree) + theta_path_system_for_tree(tree).rows,
        "square": lambda: square_system(tree).rows,
    }
    if family in groups:
        return groups[family]()
    if family in ("path", "cut"):
        return theta0_system(tree, boxes=False).family(family).rows
    if family in ("canonical-path", "canonical-cut"):
        return theta1_system(tree, boxes=False).family(family).rows
    if family == "box":
        return box_rows(tree)
    if family in ("path-cut-right", "path-cut-left", "triangle"):
        return theta_path_system_for_tree(tree).family(family).rows
    raise InputError(f"unknown family {family!r}")


def separate(x: Sequence, rows: Iterable[Row]) -> list[tuple[Row, Fraction]]:
    """All violated rows with their violation, most violated first.

    Ties are broken by family order, then by the sparse row form, so the
    output is deterministic.
    """
    hits = []
    for r in rows:
        v = r.violation(x)
        if v > 0 or (r.relation == "==" and v != 0):
            hits.append((r, abs(v)))
    hits.sort(key=lambda rv: (-rv[1], _FAMILY_RANK.get(rv[0].family, len(FAMILY_ORDER)), rv[0].coeffs, rv[0].rhs))
    return hits


def separate_family(tree: Tree, x: Sequence, family: str) -> list[tuple[Row, Fraction]]:
    return separate(x, family_rows(tree, family))
