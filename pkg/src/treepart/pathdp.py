"""Exact O(n^2) solver for paths via sequential set partitioning.

On a path the components of any decomposition are intervals of consecutive
nodes, so the problem is a shortest path through the DAG whose arcs are
intervals ``[j, k]`` weighted by the total cost of the pairs inside them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .instance import Instance, Partition


@dataclass(frozen=True)
class IntervalCostTable:
    """``d[i][l]`` = total cost of pairs inside positions i..l (upper triangle).

    Positions refer to ``order``, the nodes listed along the path.
    """

    order: tuple[int, ...]
    d: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.d[i]


def _positional_costs(inst: Instance) -> tuple[list[int], list[list[Fraction]]]:
    tree = inst.tree
    if not tree.is_path():
        raise PreconditionError("interval costs need a path")
    order = tree.path_order()
    pos = {u: i for i, u in enumerate(order)}
    size = len(order)
    c = [[Fraction(0)] * size for _ in range(size)]
    for (u, v), val in inst.costs.items():
        a, b = sorted((pos[u], pos[v]))
        c[a][b] = val
    return order, c


def interval_costs(inst: Instance) -> IntervalCostTable:
    order, c = _positional_costs(inst)
    size = len(order)
    d = [[Fraction(0)] * size for _ in range(size)]
    for l in range(1, size):
        # suffix = sum_{i <= j < l} c[j][l] as i walks upward
        suffix = sum((c[j][l] for j in range(l)), Fraction(0))
        for i in range(l):
            d[i][l] = d[i][l - 1] + suffix
            suffix -= c[i][l]
    return IntervalCostTable(tuple(order), tuple(tuple(row) for row in d))


def solve_path(inst: Instance) -> tuple[Partition, Fraction]:
    """Optimal decomposition of a path instance.

    ``f(k) = min_j f(j-1) + d[j][k]`` with ``f(-1) = 0``. Among minimizing
    ``j`` the smallest wins, i.e. the longest last interval.
    """
    table = interval_costs(inst)
    d = table.d
    size = len(table.order)
    f = [Fraction(0)] * (size + 1)  # f[k + 1] is the optimum over positions 0..k
    arg = [0] * size
    for k in range(size):
        best, best_j = None, 0
        for j in range(k + 1):
            val = f[j] + d[j][k]
            if best is None or val < best:
                best, best_j = val, j
        f[k + 1] = best
        arg[k] = best_j
    comps = []
    k = size - 1
    while k >= 0:
        j = arg[k]
        comps.append([table.order[p] for p in range(j, k + 1)])
        k = j - 1
    return Partition.from_components(comps), f[size]
