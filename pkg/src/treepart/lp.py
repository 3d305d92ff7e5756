"""Exact rational linear programming.

A dense two-phase primal simplex over rationals with Bland's rule. Every
optimal answer carries primal values, one dual value per constraint and the
basis; :func:`certify` re-derives feasibility, dual feasibility,
complementary slackness and the objective equality from scratch.

Dual values are sensitivities: ``duals[i]`` is the rate at which the optimal
objective moves when ``rhs[i]`` grows. For a maximization that makes duals of
``<=`` rows nonnegative and of ``>=`` rows nonpositive; minimization flips
both signs.

Internally the tableau holds ``gmpy2.mpq`` values when gmpy2 is importable and
``fractions.Fraction`` otherwise; results are always returned as Fractions.
"""
from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import InputError, TreePartError

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _Q = Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

RELATIONS = ("<=", ">=", "==")


class LPError(TreePartError):
    """An LP result failed its own certificate check."""


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[int, Fraction]
    relation: str
    rhs: Fraction
    name: str = ""


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` (``"max"``/``"min"``) of ``objective . x`` subject to rows and bounds.

    ``lower``/``upper`` default to 0 and +infinity; ``None`` means unbounded
    on that side.
    """

    objective: Sequence[Fraction]
    constraints: Sequence[Constraint]
    sense: str = "max"
    lower: Sequence[Fraction | None] | None = None
    upper: Sequence[Fraction | None] | None = None
    names: Sequence[str] | None = None

    def __post_init__(self):
        nv = len(self.objective)
        if self.sense not in ("max", "min"):
            raise InputError(f"sense must be 'max' or 'min', got {self.sense!r}")
        object.__setattr__(self, "objective", tuple(Fraction(c) for c in self.objective))
        lo = [Fraction(0)] * nv if self.lower is None else list(self.lower)
        hi = [None] * nv if self.upper is None else list(self.upper)
        if len(lo) != nv or len(hi) != nv:
            raise InputError("bounds must match the number of variables")
        lo = [None if v is None else Fraction(v) for v in lo]
        hi = [None if v is None else Fraction(v) for v in hi]
        for j, (a, b) in enumerate(zip(lo, hi)):
            if a is not None and b is not None and a > b:
                raise InputError(f"variable {j} has empty bounds [{a}, {b}]")
        object.__setattr__(self, "lower", tuple(lo))
        object.__setattr__(self, "upper", tuple(hi))
        rows = []
        for k, con in enumerate(self.constraints):
            if con.relation not in RELATIONS:
                raise InputError(f"constraint {k}: unknown relation {con.relation!r}")
            coeffs = {}
            for j, a in con.coeffs.items():
                if not 0 <= j < nv:
                    raise InputError(f"constraint {k} references undeclared variable {j}")
                if a:
                    coeffs[j] = Fraction(a)
            rows.append(Constraint(coeffs, con.relation, Fraction(con.rhs), con.name))
        object.__setattr__(self, "constraints", tuple(rows))
        if self.names is not None and len(self.names) != nv:
            raise InputError("names must match the number of variables")

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LPSolution:
    status: str
    x: tuple[Fraction, ...] = ()
    duals: tuple[Fraction, ...] = ()
    objective: Fraction | None = None
    basis: tuple = ()
    pivots: int = 0


# -- audit log -------------------------------------------------------------


@dataclass
class AuditLog:
    solved: int = 0
    certified: int = 0
    failures: list = field(default_factory=list)


_AUDIT: contextvars.ContextVar[AuditLog | None] = contextvars.ContextVar("lp_audit", default=None)


@contextlib.contextmanager
def audit() -> Iterator[AuditLog]:
    """Count every optimal solve (and its certificate) inside the block."""
    log = AuditLog()
    token = _AUDIT.set(log)
    try:
        yield log
    finally:
        _AUDIT.reset(token)


# -- simplex ---------------------------------------------------------------


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    """Dense tableau ``T p = beta`` with basis bookkeeping."""

    def __init__(self, T, beta, basis):
        self.T = T
        self.beta = beta
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, j: int) -> None:
        T = self.T
        piv = T[r, j]
        cols = np.flatnonzero(T[r])
        T[r, cols] = T[r, cols] / piv
        self.beta[r] = self.beta[r] / piv
        rows = np.flatnonzero(T[:, j])
        rows = rows[rows != r]
        if len(rows):
            factors = T[rows, j].copy()
            T[np.ix_(rows, cols)] = T[np.ix_(rows, cols)] - np.outer(factors, T[r, cols])
            self.beta[rows] = self.beta[rows] - factors * self.beta[r]
        self.basis[r] = j
        self.pivots += 1

    def reduced_costs(self, cost):
        cb = cost[self.basis]
        return cost - cb.dot(self.T)

    def run(self, cost, allowed) -> str:
        """Maximize ``cost . p`` from the current feasible basis (Bland's rule)."""
        T = self.T
        d = self.reduced_costs(cost)
        while True:
            eligible = np.flatnonzero(allowed & (d > 0).astype(bool))
            if not len(eligible):
                return OPTIMAL
            j = int(eligible[0])
            col = T[:, j]
            pos = np.flatnonzero((col > 0).astype(bool))
            if not len(pos):
                return UNBOUNDED
            ratios = self.beta[pos] / col[pos]
            best = min(ratios)
            ties = pos[(ratios == best).astype(bool)]
            r = int(min(ties, key=lambda i: self.basis[i]))
            self.pivot(r, j)
            d = d - d[j] * T[r]


def _standard_form(lp: LinearProgram):
    """Shift and split variables so every column is nonnegative.

    Returns the column map ``(var, sign)``, variable offsets and the row list
    ``(coeffs over columns, relation, rhs)``; upper bounds become extra rows.
    """
    columns: list[tuple[int, int]] = []
    offset = [Fraction(0)] * lp.num_vars
    colmap: dict[int, list[tuple[int, int]]] = {}
    bound_rows = []
    for j, (lo, hi) in enumerate(zip(lp.lower, lp.upper)):
        if lo is not None and hi is not None and lo == hi:
            offset[j] = lo
            colmap[j] = []
            continue
        if lo is not None:
            offset[j] = lo
            colmap[j] = [(len(columns), 1)]
            columns.append((j, 1))
            if hi is not None:
                bound_rows.append((j, hi - lo))
        elif hi is not None:
            offset[j] = hi
            colmap[j] = [(len(columns), -1)]
            columns.append((j, -1))
        else:
            colmap[j] = [(len(columns), 1), (len(columns) + 1, -1)]
            columns.extend([(j, 1), (j, -1)])
    rows = []
    for con in lp.constraints:
        coeffs: dict[int, Fraction] = {}
        rhs = con.rhs
        for j, a in con.coeffs.items():
            rhs -= a * offset[j]
            for col, sign in colmap[j]:
                coeffs[col] = a * sign
        rows.append((coeffs, con.relation, rhs))
    for j, width in bound_rows:
        rows.append(({colmap[j][0][0]: Fraction(1)}, "<=", width))
    return columns, offset, colmap, rows


def solve(lp: LinearProgram, check: bool = True) -> LPSolution:
    """Solve ``lp`` exactly; with ``check`` every optimum is certified before returning."""
    columns, offset, colmap, rows = _standard_form(lp)
    n_struct = len(columns)
    n_rows = len(rows)
    n_slack = sum(1 for _, rel, _ in rows if rel != "==")

    # column layout: structural | slacks | artificials
    slack_of: list[int | None] = []
    unit_col: list[int] = []
    row_sign: list[int] = []
    art_rows: list[int] = []
    s = n_struct
    for coeffs, rel, rhs in rows:
        if rel == "==":
            slack_of.append(None)
        else:
            slack_of.append(s)
            s += 1
    n_cols = n_struct + n_slack
    entries = []
    for i, (coeffs, rel, rhs) in enumerate(rows):
        sign = -1 if rhs < 0 else 1
        row_sign.append(sign)
        slack_coef = {"<=": 1, ">=": -1, "==": 0}[rel] * sign
        entries.append((coeffs, slack_coef, rhs * sign))
        if slack_coef == 1:
            unit_col.append(slack_of[i])
        else:
            unit_col.append(n_cols + len(art_rows))
            art_rows.append(i)
    n_total = n_cols + len(art_rows)

    zero = _Q(0)
    T = np.full((n_rows, n_total), zero, dtype=object)
    beta = np.full(n_rows, zero, dtype=object)
    for i, (coeffs, slack_coef, rhs) in enumerate(entries):
        sign = row_sign[i]
        for col, a in coeffs.items():
            T[i, col] = _Q(a.numerator * sign, a.denominator)
        if slack_of[i] is not None:
            T[i, slack_of[i]] = _Q(slack_coef)
        beta[i] = _Q(rhs.numerator, rhs.denominator)
    for k, i in enumerate(art_rows):
        T[i, n_cols + k] = _Q(1)
    tab = _Tableau(T, beta, list(unit_col))

    if art_rows:
        cost1 = np.full(n_total, zero, dtype=object)
        cost1[n_cols:] = _Q(-1)
        allowed = np.ones(n_total, dtype=bool)
        tab.run(cost1, allowed)
        if sum(cost1[tab.basis] * tab.beta) < 0:
            return LPSolution(INFEASIBLE, pivots=tab.pivots)
        # pivot zero-level artificials out of the basis where possible
        for r in range(n_rows):
            if tab.basis[r] >= n_cols:
                nz = np.flatnonzero(tab.T[r, :n_cols])
                if len(nz):
                    tab.pivot(r, int(nz[0]))

    sgn = 1 if lp.sense == "max" else -1
    cost = np.full(n_total, zero, dtype=object)
    for col, (j, csign) in enumerate(columns):
        c = lp.objective[j] * sgn * csign
        cost[col] = _Q(c.numerator, c.denominator)
    allowed = np.zeros(n_total, dtype=bool)
    allowed[:n_cols] = True
    status = tab.run(cost, allowed)
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED, pivots=tab.pivots)

    p = [zero] * n_total
    for r, col in enumerate(tab.basis):
        p[col] = tab.beta[r]
    x = []
    for j in range(lp.num_vars):
        val = offset[j]
        for col, csign in colmap[j]:
            val += csign * _to_fraction(p[col])
        x.append(val)
    cb = cost[tab.basis]
    binv_cols = tab.T[:, unit_col]
    ystar = cb.dot(binv_cols) if n_rows else []
    duals = tuple(sgn * row_sign[i] * _to_fraction(ystar[i]) for i in range(len(lp.constraints)))
    objective = sum((c * v for c, v in zip(lp.objective, x)), Fraction(0))
    labels = []
    for col in tab.basis:
        if col < n_struct:
            j, csign = columns[col]
            labels.append(("x", j, "+" if csign > 0 else "-"))
        elif col < n_cols:
            labels.append(("s", slack_of.index(col)))
        else:
            labels.append(("a", art_rows[col - n_cols]))
    sol = LPSolution(OPTIMAL, tuple(x), duals, objective, tuple(labels), tab.pivots)
    if check:
        ok = certify(lp, sol)
        log = _AUDIT.get()
        if log is not None:
            log.solved += 1
            log.certified += int(ok)
            if not ok:
                log.failures.append(lp)
        if not ok:
            raise LPError("simplex result failed certification")
    return sol


def certify(lp: LinearProgram, sol: LPSolution) -> bool:
    """Independently verify an optimal solution with exact arithmetic."""
    if sol.status != OPTIMAL or len(sol.x) != lp.num_vars or len(sol.duals) != len(lp.constraints):
        return False
    x = sol.x
    sgn = 1 if lp.sense == "max" else -1
    # primal feasibility
    for j, v in enumerate(x):
        if lp.lower[j] is not None and v < lp.lower[j]:
            return False
        if lp.upper[j] is not None and v > lp.upper[j]:
            return False
    activity = []
    for con in lp.constraints:
        act = sum((a * x[j] for j, a in con.coeffs.items()), Fraction(0))
        activity.append(act)
        if con.relation == "<=" and act > con.rhs:
            return False
        if con.relation == ">=" and act < con.rhs:
            return False
        if con.relation == "==" and act != con.rhs:
            return False
    # dual feasibility and complementary slackness, in max form
    ys = [sgn * y for y in sol.duals]
    red = [sgn * c for c in lp.objective]
    for con, y, act in zip(lp.constraints, ys, activity):
        if con.relation == "<=" and y < 0:
            return False
        if con.relation == ">=" and y > 0:
            return False
        if y and act != con.rhs:
            return False
        for j, a in con.coeffs.items():
            red[j] -= a * y
    dual_obj = sum((con.rhs * y for con, y in zip(lp.constraints, ys)), Fraction(0))
    for j, r in enumerate(red):
        lo, hi = lp.lower[j], lp.upper[j]
        if r > 0:
            if hi is None or x[j] != hi:
                return False
            dual_obj += r * hi
        elif r < 0:
            if lo is None or x[j] != lo:
                return False
            dual_obj += r * lo
    primal_obj = sum((c * v for c, v in zip(lp.objective, x)), Fraction(0))
    return primal_obj == sol.objective and sgn * primal_obj == dual_obj


# -- text export -----------------------------------------------------------


def _scaled_terms(coeffs: Mapping[int, Fraction], names) -> tuple[str, int]:
    scale = lcm(*(a.denominator for a in coeffs.values())) if coeffs else 1
    parts = []
    for j in sorted(coeffs):
        a = coeffs[j] * scale
        mag = "" if abs(a) == 1 else f"{abs(a.numerator)} "
        parts.append(f"{'-' if a < 0 else '+'} {mag}{names[j]}")
    if not parts:
        return "0", 1
    text = " ".join(parts)
    return (text[2:] if text.startswith("+ ") else text), scale


def to_lp_format(lp: LinearProgram) -> str:
    """CPLEX LP text for cross-checking against external solvers.

    Rows are scaled to integer coefficients; the objective is scaled too, with
    the factor noted in a comment. Fractional bounds are written as ``p/q``.
    """
    names = list(lp.names) if lp.names else [f"x{j}" for j in range(lp.num_vars)]
    obj = {j: c for j, c in enumerate(lp.objective) if c}
    text, scale = _scaled_terms(obj, names)
    out = [f"\\ objective scaled by {scale}", "Maximize" if lp.sense == "max" else "Minimize", f" obj: {text}"]
    out.append("Subject To")
    for k, con in enumerate(lp.constraints):
        body, sc = _scaled_terms(dict(con.coeffs), names)
        rel = {"<=": "<=", ">=": ">=", "==": "="}[con.relation]
        rhs = con.rhs * sc
        out.append(f" {con.name or f'c{k}'}: {body} {rel} {rhs}")
    out.append("Bounds")
    for j, (lo, hi) in enumerate(zip(lp.lower, lp.upper)):
        if lo is None and hi is None:
            out.append(f" {names[j]} free")
        elif lo is None:
            out.append(f" -inf <= {names[j]} <= {hi}")
        elif hi is None:
            if lo != 0:
                out.append(f" {names[j]} >= {lo}")
        else:
            out.append(f" {lo} <= {names[j]} <= {hi}")
    out.append("End")
    return "\n".join(out) + "\n"
