"""Exact branch-and-cut for trees.

The problem is solved in its lifted form: maximize ``sum c_uv x_uv`` over
lifted multicuts, then report ``sum c - max``. Each node LP keeps ``0 <= x <= 1``
as variable bounds and pulls rows from the chosen relaxation lazily, by
enumerating that relaxation and adding the most violated rows. Branching fixes
tree-edge variables only, since they determine every other coordinate.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, PreconditionError
from .instance import (
    EdgeLabeling,
    Instance,
    evaluate_objective,
    format_fraction,
    partition_from_labeling,
)
from .lp import OPTIMAL, LinearProgram, LPError, solve
from .pathdp import solve_path
from .polytopes import Row, family_rows, separate

RELAXATIONS = ("theta0", "theta1", "theta1+squares", "path-exact")

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class BncConfig:
    """Search settings.

    ``seed`` is recorded in the certificate only; the search is deterministic.
    ``path_fallback`` hands path instances to the interval DP instead.
    """

    relaxation: str = "theta1+squares"
    node_limit: int = 100_000
    cut_rounds: int = 25
    cuts_per_round: int = 0  # 0: add every violated row
    seed: int = 0
    path_fallback: bool = False
    best_bound_every: int = 64

    def __post_init__(self):
        if self.relaxation not in RELAXATIONS:
            raise InputError(f"unknown relaxation {self.relaxation!r}; expected one of {RELAXATIONS}")
        if self.node_limit < 1 or self.cut_rounds < 1 or self.best_bound_every < 1:
            raise InputError("limits must be positive")
        if self.cuts_per_round < 0:
            raise InputError("cuts_per_round must be nonnegative")


@dataclass
class BncCertificate:
    incumbent: Fraction
    bound: Fraction
    nodes: int = 0
    cuts: dict[str, int] = field(default_factory=dict)
    optimal: bool = False
    relaxation: str = ""
    seed: int = 0

    def as_dict(self) -> dict:
        return {
            "incumbent": format_fraction(self.incumbent),
            "bound": format_fraction(self.bound),
            "nodes": self.nodes,
            "cuts": dict(sorted(self.cuts.items())),
            "optimal": self.optimal,
            "relaxation": self.relaxation,
            "seed": self.seed,
        }


# -- node relaxation ---------------------------------------------------------


class _Relaxation:
    """LP over the lifted variables with a growing pool of cuts."""

    def __init__(self, inst: Instance, relaxation: str):
        tree = inst.tree
        if relaxation == "path-exact" and not (tree.is_path() and tree.n >= 2):
            raise PreconditionError("the path-exact relaxation needs a path with at least two edges")
        self.tree = tree
        self.objective = inst.cost_vector
        self.candidates = tuple(r for r in family_rows(tree, relaxation) if r.family != "box")
        self.pool: list[Row] = []
        self.in_pool: set = set()
        self.cuts: dict[str, int] = {}

    def _solve(self, lower, upper):
        lp = LinearProgram(
            self.objective,
            [r.as_constraint() for r in self.pool],
            sense="max",
            lower=lower,
            upper=upper,
        )
        sol = solve(lp)
        if sol.status != OPTIMAL:
            # bounded, nonempty box: anything else is a solver defect
            raise LPError(f"node LP returned {sol.status}")
        return sol

    def _add(self, violated, limit):
        if limit:
            violated = violated[:limit]
        added = 0
        for row, _ in violated:
            if row.key in self.in_pool:
                continue
            self.pool.append(row)
            self.in_pool.add(row.key)
            self.cuts[row.family] = self.cuts.get(row.family, 0) + 1
            added += 1
        return added

    def run(self, fixed: dict[int, int], rounds: int, per_round: int):
        """Cut loop at one node; returns the final LP solution.

        ``fixed`` maps edge index to its lifted value (1 = cut). When the
        round cap is hit but every tree-edge value is integral, separation
        continues so that an integral-looking point is never accepted before
        its lifted coordinates are consistent.
        """
        tree = self.tree
        m = tree.m
        lower = [Fraction(0)] * m
        upper = [Fraction(1)] * m
        for e, val in fixed.items():
            p = tree.edge_pair_indices[e]
            lower[p] = upper[p] = Fraction(val)
        done = 0
        while True:
            sol = self._solve(lower, upper)
            violated = separate(sol.x, self.candidates)
            if not violated:
                return sol, True
            done += 1
            if done >= rounds and not _edges_integral(tree, sol.x):
                return sol, False
            if not self._add(violated, per_round):
                return sol, False


def _edges_integral(tree, x) -> bool:
    return all(x[p].denominator == 1 for p in tree.edge_pair_indices)


def _round(tree, x) -> EdgeLabeling:
    """Cut every edge whose lifted value is at least one half."""
    return tuple(0 if x[p] >= HALF else 1 for p in tree.edge_pair_indices)


def _branch_edge(tree, x) -> int | None:
    best, best_e = None, None
    for e, p in enumerate(tree.edge_pair_indices):
        if x[p].denominator == 1:
            continue
        dist = abs(x[p] - HALF)
        if best is None or dist < best:
            best, best_e = dist, e
    return best_e


# -- public API --------------------------------------------------------------


def lower_bound(inst: Instance, relaxation: str = "theta1") -> Fraction:
    """Optimum of the relaxation, in the original minimization terms.

    Separation runs until no row of the relaxation is violated, so the value
    equals the LP optimum over the full system.
    """
    BncConfig(relaxation=relaxation)  # validates the name
    if inst.tree.n == 0:
        return Fraction(0)
    rel = _Relaxation(inst, relaxation)
    sol, _ = rel.run({}, rounds=10**9, per_round=0)
    return inst.total_cost - sol.objective


def solve_exact(inst: Instance, cfg: BncConfig | None = None) -> tuple[EdgeLabeling, Fraction, BncCertificate]:
    """Provably optimal labeling by branch-and-cut.

    Returns ``(labeling, value, certificate)``. If the node limit is reached
    the best labeling found is returned with ``optimal = False`` and the
    certificate bound is the smallest bound among unexplored nodes.
    """
    cfg = cfg or BncConfig()
    tree = inst.tree
    total = inst.total_cost

    if cfg.path_fallback and tree.is_path() and tree.n >= 1:
        part, value = solve_path(inst)
        y = tuple(int(part.component_of[u] == part.component_of[v]) for u, v in tree.edges)
        cert = BncCertificate(value, value, 0, {}, True, "dp", cfg.seed)
        return y, value, cert

    # start from the better of "join everything" and "cut everything"
    all_ones = tuple([1] * tree.n)
    best_y, best_val = all_ones, evaluate_objective(inst, all_ones)
    if tree.n and best_val > 0:
        best_y, best_val = tuple([0] * tree.n), Fraction(0)
    if tree.n == 0:
        cert = BncCertificate(best_val, best_val, 0, {}, True, cfg.relaxation, cfg.seed)
        return best_y, best_val, cert

    rel = _Relaxation(inst, cfg.relaxation)
    # open nodes: (bound inherited from the parent, fixings)
    stack: list[tuple[Fraction, dict[int, int]]] = [(-_abs_total(inst), {})]
    nodes = 0
    while stack:
        if nodes >= cfg.node_limit:
            break
        if nodes and nodes % cfg.best_bound_every == 0:
            k = min(range(len(stack)), key=lambda i: (stack[i][0], i))
            parent_bound, fixed = stack.pop(k)
        else:
            parent_bound, fixed = stack.pop()
        if parent_bound >= best_val:
            continue
        nodes += 1
        sol, complete = rel.run(fixed, cfg.cut_rounds, cfg.cuts_per_round)
        node_bound = total - sol.objective
        x = sol.x
        y = _round(tree, x)
        val = evaluate_objective(inst, y)
        if val < best_val:
            best_y, best_val = y, val
        if node_bound >= best_val:
            continue
        e = _branch_edge(tree, x)
        if e is None:
            # integral edges and no violated row: the LP point is the lifted
            # labeling, so the node is solved by the rounding above
            if complete:
                continue
            raise LPError("separation stalled at an integral point")
        p = tree.edge_pair_indices[e]
        first = 1 if x[p] >= HALF else 0
        for val_e in (1 - first, first):  # pushed second is explored first
            child = dict(fixed)
            child[e] = val_e
            stack.append((node_bound, child))

    open_bounds = [b for b, _ in stack if b < best_val]
    optimal = not open_bounds
    bound = best_val if optimal else max(min(open_bounds), -_abs_total(inst))
    cert = BncCertificate(best_val, bound, nodes, dict(rel.cuts), optimal, cfg.relaxation, cfg.seed)
    return best_y, best_val, cert


def _abs_total(inst: Instance) -> Fraction:
    """A value no labeling can beat from below."""
    return sum((abs(c) for c in inst.costs.values()), Fraction(0))


def solution_dict(inst: Instance, y: EdgeLabeling, value: Fraction, cert: BncCertificate | None = None) -> dict:
    tree = inst.tree
    part = partition_from_labeling(tree, y)
    out = {
        "value": format_fraction(value),
        "cut_edges": [list(tree.edges[e]) for e in range(tree.n) if not y[e]],
        "components": [list(c) for c in part.components],
        "optimal": True if cert is None else cert.optimal,
        "bound": format_fraction(value if cert is None else cert.bound),
        "nodes": 0 if cert is None else cert.nodes,
        "cuts": {} if cert is None else dict(sorted(cert.cuts.items())),
    }
    return out


def solution_json(inst: Instance, y: EdgeLabeling, value: Fraction, cert: BncCertificate | None = None) -> str:
    return json.dumps(solution_dict(inst, y, value, cert), indent=2)
