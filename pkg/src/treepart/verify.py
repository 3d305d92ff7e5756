"""Computational checks of the polyhedral structure on small trees and paths.

Everything is exact. Facets are certified by the affine rank of the tight
lifted multicuts (the multicut polytope of a tree is full-dimensional, so a
valid row is a facet exactly when its tight vertices span a hyperplane).
Inclusions between relaxations are checked one row at a time by maximizing
the row over the other system. Total dual integrality of the path system is
witnessed constructively: the dual is reduced to an interval-constrained LP
over the diagonal multipliers, solved at a vertex, and expanded back.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Iterator, Sequence

import networkx as nx
import numpy as np

from .catalog import seven_node_tree, three_leaf_star
from .errors import InputError, PreconditionError, SizeLimitError
from .instance import Tree, format_fraction
from .lp import OPTIMAL, Constraint, LinearProgram, solve
from .oracle import enumerate_lifted
from .polytopes import (
    InequalitySystem,
    Row,
    check_membership,
    extended_path_system,
    pair_labels,
    square_system,
    theta0_system,
    theta1_system,
    theta_path_system,
)

MAX_FACET_EDGES = 12
MAX_CLASSIFY_EDGES = 10


# -- trees up to isomorphism --------------------------------------------------


def trees_up_to(max_nodes: int) -> Iterator[Tree]:
    """Every tree with 1..max_nodes nodes, one per isomorphism class."""
    for order in range(1, max_nodes + 1):
        if order == 1:
            yield Tree(1, [])
            continue
        for g in nx.nonisomorphic_trees(order):
            yield Tree(order, sorted(tuple(sorted(e)) for e in g.edges()))


# -- exact linear algebra ------------------------------------------------------


def _reduce(basis: list[tuple[int, list[int]]], vec: list[int]) -> list[int]:
    for col, b in basis:
        if vec[col]:
            f, g = vec[col], b[col]
            vec = [g * a - f * c for a, c in zip(vec, b)]
            d = 0
            for a in vec:
                d = gcd(d, a)
            if d > 1:
                vec = [a // d for a in vec]
    return vec


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine hull of integer points (-1 when empty)."""
    if not points:
        return -1
    base = points[0]
    basis: list[tuple[int, list[int]]] = []
    for p in points[1:]:
        vec = _reduce(basis, [a - b for a, b in zip(p, base)])
        nz = next((j for j, a in enumerate(vec) if a), None)
        if nz is not None:
            basis.append((nz, vec))
            if len(basis) == len(base):
                break
    return len(basis)


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    A = [list(r) for r in M]
    k = len(A)
    sign, prev = 1, 1
    for i in range(k - 1):
        if A[i][i] == 0:
            swap = next((r for r in range(i + 1, k) if A[r][i]), None)
            if swap is None:
                return 0
            A[i], A[swap] = A[swap], A[i]
            sign = -sign
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                A[r][c] = (A[r][c] * A[i][i] - A[r][i] * A[i][c]) // prev
        prev = A[i][i]
    return sign * A[k - 1][k - 1] if k else 1


def _solve_square(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(A)
    M = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [a * inv for a in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * p for a, p in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


# -- facets ------------------------------------------------------------------


@dataclass(frozen=True)
class FacetReport:
    row: Row
    valid: bool
    tight_vertex_count: int
    face_dimension: int
    is_facet: bool

    def as_dict(self, labels=None) -> dict:
        return {
            "row": self.row.describe(labels) if labels else repr(self.row.coeffs),
            "family": self.row.family,
            "valid": self.valid,
            "tight_vertex_count": self.tight_vertex_count,
            "face_dimension": self.face_dimension,
            "is_facet": self.is_facet,
        }


@lru_cache(maxsize=512)
def _vertices(tree: Tree) -> tuple[tuple[int, ...], ...]:
    return tuple(enumerate_lifted(tree, max_edges=MAX_FACET_EDGES))


def facet_check(tree: Tree, row: Row) -> FacetReport:
    if tree.n > MAX_FACET_EDGES:
        raise SizeLimitError(f"facet checks enumerate 2^n vertices; capped at {MAX_FACET_EDGES} edges")
    if row.relation != "<=":
        raise InputError("facet_check expects an inequality")
    verts = _vertices(tree)
    valid = all(row.violation(x) <= 0 for x in verts)
    tight = [x for x in verts if row.violation(x) == 0]
    dim = affine_rank(tight)
    return FacetReport(row, valid, len(tight), dim, valid and dim == tree.m - 1)


def predicted_facet(tree: Tree, row: Row) -> tuple[bool, str]:
    """Facet status predicted by the structural rules, with the rule used."""
    fam = row.family
    if fam == "box":
        side, u, v = row.nodes
        if side == "upper":
            return tree.is_leaf(u) and tree.is_leaf(v), "upper box: both ends are leaves"
        # with a single edge the polytope is the segment [0, 1]
        return tree.n == 1, "lower box: never, except the one-edge segment"
    if fam in ("path", "canonical-path"):
        return tree.distance(*row.nodes) == 2, "path row: distance 2"
    if fam == "canonical-cut":
        return tree.is_leaf(row.nodes[1]), "canonical cut: far end is a leaf"
    if fam == "cut":
        u, v, a, b = row.nodes
        if tree.distance(u, v) != 2:
            return False, "cut row across distance >= 3: sum of canonical cuts"
        end = u if u in (a, b) else v
        return tree.is_leaf(end), "cut row at distance 2: cut-side end is a leaf"
    if fam == "square":
        return True, "square: always"
    raise InputError(f"no facet rule for family {fam!r}")


@dataclass(frozen=True)
class FacetRow:
    family: str
    nodes: tuple
    description: str
    predicted: bool
    observed: bool
    rule: str

    @property
    def agree(self) -> bool:
        return self.predicted == self.observed


def classify_trivial_facets(tree: Tree, squares: bool = True) -> list[FacetRow]:
    """Observed vs predicted facet status of every box, path, cut and square row."""
    if tree.n > MAX_CLASSIFY_EDGES:
        raise SizeLimitError(f"classification capped at {MAX_CLASSIFY_EDGES} edges")
    labels = pair_labels(tree)
    rows = list(theta0_system(tree).rows)
    rows += [r for r in theta1_system(tree).rows if r.family != "box"]
    if squares:
        rows += list(square_system(tree).rows)
    out = []
    for r in rows:
        rep = facet_check(tree, r)
        pred, rule = predicted_facet(tree, r)
        out.append(FacetRow(r.family, r.nodes, r.describe(labels), pred, rep.is_facet, rule))
    return out


@dataclass
class FacetSweep:
    trees: int = 0
    rows: int = 0
    by_family: dict = field(default_factory=dict)
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def as_dict(self) -> dict:
        return {
            "trees": self.trees,
            "rows": self.rows,
            "by_family": self.by_family,
            "disagreements": self.disagreements,
            "ok": self.ok,
        }


def facet_sweep(max_nodes: int = 6) -> FacetSweep:
    """Classify every row on every tree with at most ``max_nodes`` nodes."""
    sweep = FacetSweep()
    for tree in trees_up_to(max_nodes):
        sweep.trees += 1
        for fr in classify_trivial_facets(tree):
            sweep.rows += 1
            stats = sweep.by_family.setdefault(
                fr.family, {"rows": 0, "predicted": 0, "observed": 0, "agree": 0}
            )
            stats["rows"] += 1
            stats["predicted"] += fr.predicted
            stats["observed"] += fr.observed
            stats["agree"] += fr.agree
            if not fr.agree:
                sweep.disagreements.append(
                    {"edges": [list(e) for e in tree.edges], "row": fr.description,
                     "predicted": fr.predicted, "observed": fr.observed}
                )
    return sweep


def _row_from_pairs(tree: Tree, plus: Iterable[tuple[int, int]], minus: Iterable[tuple[int, int]]) -> Row:
    coeffs: dict[int, int] = {}
    for u, v in plus:
        p = tree.pair_index(u, v)
        coeffs[p] = coeffs.get(p, 0) + 1
    for u, v in minus:
        p = tree.pair_index(u, v)
        coeffs[p] = coeffs.get(p, 0) - 1
    return Row.build(coeffs, 0, "triangle")


def verify_triangle_examples() -> dict:
    """The star triangle row and the larger tree example built from it."""
    star = three_leaf_star()
    tri = facet_check(star, _row_from_pairs(star, [(0, 1), (2, 3)], [(1, 2), (1, 3)]))
    rev = facet_check(star, _row_from_pairs(star, [(1, 2), (1, 3)], [(0, 1), (2, 3)]))
    big = seven_node_tree()
    ext = facet_check(big, _row_from_pairs(big, [(0, 2), (5, 6)], [(0, 5), (0, 6)]))
    ok = tri.valid and tri.is_facet and not rev.valid and ext.valid
    return {
        "star_triangle": {"valid": tri.valid, "facet": tri.is_facet, "face_dimension": tri.face_dimension},
        "star_triangle_reversed": {"valid": rev.valid},
        "tree_example": {"valid": ext.valid, "facet": ext.is_facet, "face_dimension": ext.face_dimension},
        "ok": ok,
    }


# -- integrality of the path system ------------------------------------------


def _system_lp(system: InequalitySystem, objective, free: bool) -> LinearProgram:
    lower = [None] * system.dim if free else None
    return LinearProgram(objective, system.constraints(), sense="max", lower=lower)


def _best_vertex_value(verts, c) -> Fraction:
    return max(sum((a * b for a, b in zip(c, x)), Fraction(0)) for x in verts)


@dataclass
class IntegrityReport:
    n: int
    trials: int
    passed: int = 0
    failures: list = field(default_factory=list)
    lp_values: list = field(default_factory=list)
    best_values: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def as_dict(self) -> dict:
        return {"n": self.n, "trials": self.trials, "passed": self.passed,
                "failures": self.failures[:5], "ok": self.ok}


def verify_path_integrality(n: int, trials: int = 200, seed: int = 0, cost_range=(-5, 5)) -> IntegrityReport:
    """LP optima over the complete path system are lifted multicuts.

    For every random integral objective the simplex vertex must be 0/1, pass
    the membership check and match the best of the 2^n lifted multicuts.
    """
    if not 2 <= n <= 6:
        raise PreconditionError("path integrality sweeps take 2 <= n <= 6")
    tree = Tree.path(n)
    system = theta_path_system(n)
    verts = _vertices(tree)
    rng = np.random.default_rng(seed)
    rep = IntegrityReport(n, trials)
    lo, hi = cost_range
    for t in range(trials):
        c = [int(v) for v in rng.integers(lo, hi + 1, size=tree.m)]
        sol = solve(_system_lp(system, c, free=True))
        best = _best_vertex_value(verts, c)
        rep.lp_values.append(sol.objective)
        rep.best_values.append(best)
        ok = (
            sol.status == OPTIMAL
            and all(v in (0, 1) for v in sol.x)
            and check_membership(tree, [int(v) for v in sol.x])
            and sol.objective == best
        )
        if ok:
            rep.passed += 1
        else:
            rep.failures.append({"trial": t, "c": c, "x": [format_fraction(v) for v in sol.x]})
    return rep


def find_fractional_optimum(system_name: str = "theta0", n_values=range(3, 7), trials: int = 200, seed: int = 0):
    """Negative control: a random objective whose LP optimum is fractional.

    Returns ``(n, c, x)`` for the first hit or ``None``.
    """
    rng = np.random.default_rng(seed)
    for n in n_values:
        tree = Tree.path(n)
        system = {"theta0": theta0_system, "theta1": theta1_system}[system_name](tree)
        for _ in range(trials):
            c = [int(v) for v in rng.integers(-5, 6, size=tree.m)]
            sol = solve(_system_lp(system, c, free=True))
            if any(v.denominator != 1 for v in sol.x):
                return n, c, sol.x
    return None


@dataclass(frozen=True)
class VertexReport:
    n: int
    vertices: tuple
    lifted_count: int
    all_integral: bool
    matches_lifted: bool


def enumerate_vertices(system: InequalitySystem) -> list[tuple[Fraction, ...]]:
    """Vertices of a bounded system via all nonsingular row bases."""
    rows = system.rows
    dim = system.dim
    dense = [[Fraction(0)] * dim for _ in rows]
    for i, r in enumerate(rows):
        for j, a in r.coeffs:
            dense[i][j] = Fraction(a)
    found = set()
    for basis in combinations(range(len(rows)), dim):
        x = _solve_square([dense[i][:] for i in basis], [rows[i].rhs for i in basis])
        if x is None:
            continue
        if all(r.violation(x) <= 0 for r in rows):
            found.add(tuple(x))
    return sorted(found)


def verify_path_vertices(n: int) -> VertexReport:
    """Every vertex of the complete path system is a lifted multicut, and vice versa."""
    if not 2 <= n <= 4:
        raise PreconditionError("vertex enumeration is limited to 2 <= n <= 4")
    verts = enumerate_vertices(theta_path_system(n))
    lifted = {tuple(Fraction(v) for v in x) for x in _vertices(Tree.path(n))}
    integral = all(v.denominator == 1 for x in verts for v in x)
    return VertexReport(n, tuple(verts), len(lifted), integral, set(verts) == lifted)


# -- total dual integrality -------------------------------------------------------


@dataclass(frozen=True)
class TdiWitness:
    c: tuple[int, ...]
    primal_value: Fraction
    dual_value: Fraction
    y: tuple[Fraction, ...]
    z: tuple[Fraction, ...]
    integral: bool
    duality_gap_zero: bool
    dual_feasible: bool

    @property
    def valid(self) -> bool:
        return self.integral and self.duality_gap_zero and self.dual_feasible


def _interval_sums(n: int, c_pair: dict[tuple[int, int], Fraction]) -> list[list[Fraction]]:
    """``D[i][l]`` = sum of objective entries over pairs (j, k), i <= j <= k <= l, diagonal included."""
    D = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for l in range(n + 1):
        for i in range(l, -1, -1):
            inner = D[i + 1][l] if i + 1 <= l else Fraction(0)
            D[i][l] = inner + sum((c_pair[(i, k)] for k in range(i, l + 1)), Fraction(0))
    return D


def tdi_witness(n: int, c: Sequence[int]) -> TdiWitness:
    """An integral optimal dual for ``max c.x`` over the extended path system.

    Each inequality multiplier ``y_jk`` equals ``D[j+1][k-1]`` minus the
    diagonal multipliers ``z_tt`` for ``j < t < k``; the end-node multipliers
    are pinned by their single equations. Nonnegativity of ``y`` becomes
    interval constraints on the ``z_tt``, a consecutive-ones system, so the
    reduced problem is solved at a vertex and the full dual rebuilt.
    """
    ext = extended_path_system(n)
    space = ext.space
    if len(c) != space.size:
        raise InputError(f"objective needs {space.size} entries, got {len(c)}")
    c = tuple(int(v) for v in c)
    ineq = ext.inequalities.rows
    eqs = ext.equalities.rows

    primal = solve(LinearProgram(c, [r.as_constraint() for r in ext.all_rows], "max", lower=[None] * space.size))
    if primal.status != OPTIMAL:
        raise PreconditionError(f"primal returned {primal.status}")

    c_pair = {}
    for i in range(n + 1):
        for k in range(i, n + 1):
            c_pair[(i, k)] = Fraction(c[space.var(i, k)])
    D = _interval_sums(n, c_pair)

    # y_jk as (constant, coefficient per diagonal multiplier z_tt)
    def y_form(j, k):
        coef = [Fraction(0)] * (n + 1)
        for t in range(j + 1, k):
            coef[t] = Fraction(-1)
        return D[j + 1][k - 1], coef

    forms = {r.nodes: y_form(*r.nodes) for r in ineq}

    # end-node multipliers z = c - (y terms of their column), as affine forms
    col_rows: dict[int, list[tuple[tuple, int]]] = {}
    for r in ineq:
        for j, a in r.coeffs:
            col_rows.setdefault(j, []).append((r.nodes, int(a)))

    def z_form(eq: Row):
        (var, a), = eq.coeffs
        const = Fraction(c[var])
        coef = [Fraction(0)] * (n + 1)
        for nodes, b in col_rows.get(var, ()):
            yc, ycoef = forms[nodes]
            const -= b * yc
            coef = [x - b * y for x, y in zip(coef, ycoef)]
        return const / a, [x / a for x in coef]

    diag = {eq.nodes[1]: eq for eq in eqs if eq.nodes[0] == "vertex"}
    others = [eq for eq in eqs if eq.nodes[0] != "vertex"]
    other_forms = {eq.nodes: z_form(eq) for eq in others}

    # dual objective a.y + b.z as an affine form in the diagonal z's
    obj_const = Fraction(0)
    obj_coef = [Fraction(0)] * (n + 1)
    for r in ineq:
        yc, ycoef = forms[r.nodes]
        obj_const += r.rhs * yc
        obj_coef = [x + r.rhs * y for x, y in zip(obj_coef, ycoef)]
    for eq in eqs:
        if eq.nodes[0] == "vertex":
            obj_coef[eq.nodes[1]] += eq.rhs
        else:
            zc, zcoef = other_forms[eq.nodes]
            obj_const += eq.rhs * zc
            obj_coef = [x + eq.rhs * y for x, y in zip(obj_coef, zcoef)]

    cons = []
    for nodes, (yc, ycoef) in forms.items():
        # y >= 0  <=>  -ycoef . z <= yc
        coeffs = {t: -a for t, a in enumerate(ycoef) if a}
        if coeffs:
            cons.append(Constraint(coeffs, "<=", yc))
        elif yc < 0:
            raise PreconditionError("reduced dual is infeasible")
    reduced = solve(LinearProgram(obj_coef, cons, "min", lower=[None] * (n + 1)))
    if reduced.status != OPTIMAL:
        raise PreconditionError(f"reduced dual returned {reduced.status}")
    zd = reduced.x

    def evaluate(form):
        const, coef = form
        return const + sum((a * z for a, z in zip(coef, zd)), Fraction(0))

    y = tuple(evaluate(forms[r.nodes]) for r in ineq)
    z = tuple(zd[eq.nodes[1]] if eq.nodes[0] == "vertex" else evaluate(other_forms[eq.nodes]) for eq in eqs)

    feasible = all(v >= 0 for v in y) and _dual_residual(ineq, eqs, y, z, c, space.size) == 0
    dual_value = sum((r.rhs * v for r, v in zip(ineq, y)), Fraction(0)) + sum(
        (eq.rhs * v for eq, v in zip(eqs, z)), Fraction(0)
    )
    integral = all(v.denominator == 1 for v in y + z)
    return TdiWitness(c, primal.objective, dual_value, y, z, integral, dual_value == primal.objective, feasible)


def _dual_residual(ineq, eqs, y, z, c, size) -> int:
    """Number of columns where A^T y + B^T z differs from c."""
    lhs = [Fraction(0)] * size
    for r, v in zip(ineq, y):
        for j, a in r.coeffs:
            lhs[j] += a * v
    for r, v in zip(eqs, z):
        for j, a in r.coeffs:
            lhs[j] += a * v
    return sum(1 for j in range(size) if lhs[j] != c[j])


def verify_tdi(n: int, trials: int = 100, seed: int = 0, cost_range=(-5, 5)) -> dict:
    rng = np.random.default_rng(seed)
    size = extended_path_system(n).space.size
    lo, hi = cost_range
    passed, failures, values = 0, [], []
    for t in range(trials):
        c = [int(v) for v in rng.integers(lo, hi + 1, size=size)]
        w = tdi_witness(n, c)
        values.append((w.primal_value, w.dual_value))
        if w.valid:
            passed += 1
        else:
            failures.append({"trial": t, "c": c})
    return {"n": n, "trials": trials, "passed": passed, "failures": failures[:5],
            "ok": passed == trials, "values": values}


# -- total unimodularity ---------------------------------------------------------


def find_bad_subdeterminant(M: Sequence[Sequence[int]], max_order: int | None = None):
    """First square submatrix with |det| >= 2, searched by increasing order.

    Column choices are restricted to the joint support of the chosen rows
    (any other column is zero there). Returns ``(rows, cols, det)`` or None
    once the search is exhaustive.
    """
    n_rows = len(M)
    n_cols = len(M[0]) if M else 0
    top = min(n_rows, n_cols) if max_order is None else max_order
    support = [frozenset(j for j, a in enumerate(r) if a) for r in M]
    for k in range(1, top + 1):
        for rows in combinations(range(n_rows), k):
            cols_avail = sorted(frozenset().union(*(support[i] for i in rows)))
            if len(cols_avail) < k:
                continue
            for cols in combinations(cols_avail, k):
                det = determinant([[M[i][j] for j in cols] for i in rows])
                if abs(det) >= 2:
                    return rows, cols, det
    return None


def verify_non_tu(n: int):
    """Submatrix of the complete path system with determinant outside {-1, 0, 1}, or None."""
    if n < 2:
        raise PreconditionError("needs n >= 2")
    return find_bad_subdeterminant(theta_path_system(n).matrix())


# -- inclusions -----------------------------------------------------------


@dataclass
class ChainResult:
    weaker: str
    stronger: str
    rows: int = 0
    lps: int = 0
    max_violation: Fraction | None = None

    @property
    def ok(self) -> bool:
        return self.max_violation is None or self.max_violation <= 0

    def as_dict(self) -> dict:
        mv = self.max_violation
        return {"weaker": self.weaker, "stronger": self.stronger, "rows": self.rows, "lps": self.lps,
                "max_violation": None if mv is None else format_fraction(mv), "ok": self.ok}


def row_max_violation(row: Row, stronger: InequalitySystem) -> Fraction:
    """``max (a.x - b)`` over the stronger system; <= 0 means the row is implied."""
    obj = [Fraction(0)] * stronger.dim
    for j, a in row.coeffs:
        obj[j] = Fraction(a)
    sol = solve(_system_lp(stronger, obj, free=True))
    if sol.status != OPTIMAL:
        raise PreconditionError(f"violation LP returned {sol.status}")
    return sol.objective - row.rhs


def check_inclusion(weaker: InequalitySystem, stronger: InequalitySystem, names=("weaker", "stronger")) -> ChainResult:
    res = ChainResult(*names)
    for r in weaker.rows:
        v = row_max_violation(r, stronger)
        res.rows += 1
        res.lps += 1
        if res.max_violation is None or v > res.max_violation:
            res.max_violation = v
    return res


def verify_inclusions(target: Tree | int) -> dict:
    """Per-row violation LPs down the relaxation chain, plus vertex membership."""
    tree = Tree.path(target) if isinstance(target, int) else target
    t0, t1 = theta0_system(tree), theta1_system(tree)
    chains = []
    systems = {"theta0": t0, "theta1": t1}
    if tree.is_path() and tree.n >= 2 and isinstance(target, int):
        tp = theta_path_system(tree.n)
        systems["path"] = tp
        chains.append(check_inclusion(t1, tp, ("theta1", "path")))
    chains.append(check_inclusion(t0, t1, ("theta0", "theta1")))
    verts = _vertices(tree)
    vertices_ok = all(s.satisfied_by(x) for s in systems.values() for x in verts)
    return {
        "edges": [list(e) for e in tree.edges],
        "chains": [c.as_dict() for c in chains],
        "vertices_in_all": vertices_ok,
        "ok": vertices_ok and all(c.ok for c in chains),
    }


def strictness_witness(n: int = 3):
    """A point of the naive relaxation cut off by a square row.

    Returns ``(row, point, violation)`` for the most violated square or None.
    """
    tree = Tree.path(n)
    t0 = theta0_system(tree)
    best = None
    for r in square_system(tree).rows:
        obj = [Fraction(0)] * tree.m
        for j, a in r.coeffs:
            obj[j] = Fraction(a)
        sol = solve(_system_lp(t0, obj, free=True))
        v = sol.objective - r.rhs
        if v > 0 and (best is None or v > best[2]):
            best = (r, sol.x, v)
    return best
