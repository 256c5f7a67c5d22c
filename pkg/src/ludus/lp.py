"""Exact linear programming.

Problems have the canonical shape ``opt c.x  s.t.  A x <= b, x >= 0`` with
every coefficient held as a :class:`fractions.Fraction`.  They are solved by a
two-phase tableau simplex using Bland's rule, so termination is guaranteed
and results are reproducible bit for bit.  Optimal dual prices are read off
the reduced costs of the slack columns.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Integral, Rational
from typing import Sequence

import numpy as np

__all__ = [
    "Sense",
    "Status",
    "LpError",
    "LinearProgram",
    "LpSolution",
    "to_fraction",
    "solve",
    "duality_certificate",
]


class Sense(str, Enum):
    MAXIMIZE = "max"
    MINIMIZE = "min"


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LpError(ValueError):
    """Malformed linear program (dimension mismatch, bad coefficient)."""


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions, ``"p/q"`` strings and finite floats exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise LpError(f"not a number: {value!r}")
    if isinstance(value, Integral):
        return Fraction(int(value))  # numpy ints would keep fixed-width components
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise LpError(f"not a rational: {value!r}") from exc
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise LpError(f"non-finite coefficient: {value!r}")
        return Fraction(value)
    try:
        return Fraction(value)
    except (TypeError, ValueError) as exc:
        raise LpError(f"not a number: {value!r}") from exc


@dataclass(frozen=True)
class LinearProgram:
    objective: tuple
    matrix: tuple
    rhs: tuple
    sense: Sense = Sense.MAXIMIZE

    def __init__(self, objective, matrix, rhs, sense=Sense.MAXIMIZE):
        c = tuple(to_fraction(x) for x in objective)
        a = tuple(tuple(to_fraction(x) for x in row) for row in matrix)
        b = tuple(to_fraction(x) for x in rhs)
        if len(a) != len(b):
            raise LpError(f"matrix has {len(a)} rows but rhs has {len(b)} entries")
        for k, row in enumerate(a):
            if len(row) != len(c):
                raise LpError(f"row {k} has {len(row)} columns, objective has {len(c)}")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "sense", Sense(sense))

    @property
    def shape(self):
        return len(self.rhs), len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    """Solver outcome.

    For ``MAXIMIZE`` the dual satisfies ``y >= 0, A^T y >= c``; for
    ``MINIMIZE`` it satisfies ``y <= 0, A^T y <= c``.  Either way
    ``c.x == b.y`` at an optimum.
    """

    status: Status
    primal: tuple = ()
    dual: tuple = ()
    value: Fraction | None = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


class _Tableau:
    """Dense tableau ``rows[k] = (coefficients..., rhs)`` with a basis list."""

    def __init__(self, rows, basis):
        self.rows = rows
        self.basis = basis

    def pivot(self, r, col):
        row = self.rows[r]
        piv = row[col]
        row = [x / piv for x in row]
        self.rows[r] = row
        for k, other in enumerate(self.rows):
            if k != r:
                f = other[col]
                if f:
                    self.rows[k] = [x - f * y for x, y in zip(other, row)]
        self.basis[r] = col

    def reduced_costs(self, cost, ncols):
        # z_j - c_j for every column under the current basis
        cb = [cost[j] for j in self.basis]
        out = []
        for j in range(ncols):
            z = sum((cb[k] * self.rows[k][j] for k in range(len(self.rows)) if cb[k]), Fraction(0))
            out.append(z - cost[j])
        return out

    def run(self, cost, allowed):
        """Maximize ``cost`` over the current basis with Bland's rule.

        Returns False if the objective is unbounded.
        """
        while True:
            rc = self.reduced_costs(cost, len(cost))
            entering = next((j for j in allowed if rc[j] < 0), None)
            if entering is None:
                return True
            best = None
            for k, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[k])
                    if best is None or key < best[0]:
                        best = (key, k)
            if best is None:
                return False
            self.pivot(best[1], entering)


def solve(lp: LinearProgram) -> LpSolution:
    """Solve ``lp`` exactly; see :class:`LpSolution` for the dual sign convention."""
    m, n = lp.shape
    sign = 1 if lp.sense is Sense.MAXIMIZE else -1
    c = [sign * x for x in lp.objective]

    # columns: x (n), slacks (m), artificials (one per row with negative rhs)
    flipped = [b < 0 for b in lp.rhs]
    n_art = sum(flipped)
    ncols = n + m + n_art
    rows, basis = [], []
    art = n + m
    for i in range(m):
        s = -1 if flipped[i] else 1
        row = [s * a for a in lp.matrix[i]]
        slack = [Fraction(0)] * m
        slack[i] = Fraction(s)
        arts = [Fraction(0)] * n_art
        if flipped[i]:
            arts[art - n - m] = Fraction(1)
            basis.append(art)
            art += 1
        else:
            basis.append(n + i)
        rows.append(row + slack + arts + [s * lp.rhs[i]])
    tab = _Tableau(rows, basis)

    if n_art:
        phase1 = [Fraction(0)] * (n + m) + [Fraction(-1)] * n_art
        tab.run(phase1, range(ncols))
        if any(tab.rows[k][-1] != 0 for k, j in enumerate(tab.basis) if j >= n + m):
            return LpSolution(Status.INFEASIBLE)
        # drive zero-level artificials out of the basis; slacks keep [A | I] full rank
        for k, j in enumerate(tab.basis):
            if j >= n + m:
                col = next(jj for jj in range(n + m) if tab.rows[k][jj] != 0)
                tab.pivot(k, col)

    cost = c + [Fraction(0)] * (m + n_art)
    if not tab.run(cost, range(n + m)):
        return LpSolution(Status.UNBOUNDED)

    x = [Fraction(0)] * n
    for k, j in enumerate(tab.basis):
        if j < n:
            x[j] = tab.rows[k][-1]
    rc = tab.reduced_costs(cost, ncols)
    y = [sign * rc[n + i] for i in range(m)]
    value = _dot(lp.objective, x)
    return LpSolution(Status.OPTIMAL, tuple(x), tuple(y), value)


def duality_certificate(lp: LinearProgram, sol: LpSolution) -> bool:
    """Re-check primal feasibility, dual feasibility and a zero duality gap, exactly."""
    if sol.status is not Status.OPTIMAL:
        return False
    m, n = lp.shape
    x, y = sol.primal, sol.dual
    if len(x) != n or len(y) != m:
        return False
    if any(v < 0 for v in x):
        return False
    if any(_dot(row, x) > b for row, b in zip(lp.matrix, lp.rhs)):
        return False
    aty = [_dot((lp.matrix[i][j] for i in range(m)), y) for j in range(n)]
    if lp.sense is Sense.MAXIMIZE:
        if any(v < 0 for v in y) or any(a < cj for a, cj in zip(aty, lp.objective)):
            return False
    else:
        if any(v > 0 for v in y) or any(a > cj for a, cj in zip(aty, lp.objective)):
            return False
    return _dot(lp.objective, x) == _dot(lp.rhs, y)


def max_lp(c: Sequence, a: Sequence[Sequence], b: Sequence) -> LpSolution:
    """Shorthand for ``solve(LinearProgram(c, a, b))``."""
    return solve(LinearProgram(c, a, b))
