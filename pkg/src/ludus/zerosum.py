"""Matrix games, LP games and finite n-person strategic games."""

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import lp as _lp
from .lp import LinearProgram, LpError, Sense, Status, to_fraction

__all__ = [
    "Mode",
    "MatrixGame",
    "MixedProfile",
    "BimatrixGame",
    "LpGame",
    "KKTReport",
    "pure_equilibria",
    "solve_randomized",
    "kkt_check",
    "shadow_prices",
    "nperson_expected_utility",
    "verify_mixed_equilibrium",
]


class Mode(str, Enum):
    GAIN = "gain"
    COST = "cost"


def _frac_matrix(rows):
    m = [tuple(to_fraction(x) for x in row) for row in rows]
    if not m or not m[0]:
        raise LpError("matrix must have at least one row and one column")
    if any(len(r) != len(m[0]) for r in m):
        raise LpError("matrix is not rectangular")
    return tuple(m)


@dataclass(frozen=True)
class MatrixGame:
    """Row player maximizes ``payoff[i][j]``, column player minimizes it."""

    payoff: tuple

    def __init__(self, payoff):
        object.__setattr__(self, "payoff", _frac_matrix(payoff))

    @property
    def shape(self):
        return len(self.payoff), len(self.payoff[0])


class MixedProfile(NamedTuple):
    row_dist: tuple
    col_dist: tuple


@dataclass(frozen=True)
class BimatrixGame:
    row_payoff: tuple
    col_payoff: tuple

    def __init__(self, row_payoff, col_payoff):
        a, b = _frac_matrix(row_payoff), _frac_matrix(col_payoff)
        if len(a) != len(b) or len(a[0]) != len(b[0]):
            raise LpError("bimatrix components differ in shape")
        object.__setattr__(self, "row_payoff", a)
        object.__setattr__(self, "col_payoff", b)

    @classmethod
    def from_pairs(cls, pairs):
        return cls([[p[0] for p in row] for row in pairs], [[p[1] for p in row] for row in pairs])

    def tensors(self):
        """Per-player payoff tensors for :func:`nperson_expected_utility`."""
        return [np.array(self.row_payoff, dtype=object), np.array(self.col_payoff, dtype=object)]


@dataclass(frozen=True)
class LpGame:
    """Lagrange game of ``max c.x s.t. A x <= b, x >= 0`` with ``L(x, y) = c.x + y.(b - A x)``."""

    c: tuple
    a: tuple
    b: tuple

    def __init__(self, c, a, b):
        prog = LinearProgram(c, a, b)
        object.__setattr__(self, "c", prog.objective)
        object.__setattr__(self, "a", prog.matrix)
        object.__setattr__(self, "b", prog.rhs)

    @property
    def program(self):
        return LinearProgram(self.c, self.a, self.b)

    def lagrangian(self, x, y):
        x = [to_fraction(v) for v in x]
        y = [to_fraction(v) for v in y]
        slack = [bi - sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row, bi in zip(self.a, self.b)]
        return sum((ci * xi for ci, xi in zip(self.c, x)), Fraction(0)) + sum(
            (yi * si for yi, si in zip(y, slack)), Fraction(0)
        )


def pure_equilibria(g: MatrixGame) -> list:
    """Saddle points ``(i, j)`` (0-based): column maximum and row minimum at once."""
    u = g.payoff
    m, n = g.shape
    col_max = [max(u[i][j] for i in range(m)) for j in range(n)]
    row_min = [min(u[i]) for i in range(m)]
    return [(i, j) for i in range(m) for j in range(n) if u[i][j] == col_max[j] and u[i][j] == row_min[i]]


def solve_randomized(g: MatrixGame):
    """Optimal mixed strategies and the value of a matrix game.

    Both players' programs are solved separately on the payoff matrix shifted
    to be strictly positive (so the value variable may be taken nonnegative);
    the probability-simplex equality is encoded as two inequalities.

    Returns ``(MixedProfile, value)`` with exact rationals.
    """
    u = g.payoff
    m, n = g.shape
    shift = 1 - min(min(row) for row in u)
    up = [[x + shift for x in row] for row in u]

    # row player: variables (x_1..x_m, z); max z s.t. z <= sum_i u_ij x_i, sum x = 1
    rows = [[-up[i][j] for i in range(m)] + [1] for j in range(n)]
    rows += [[1] * m + [0], [-1] * m + [0]]
    primal = _lp.solve(LinearProgram([0] * m + [1], rows, [0] * n + [1, -1]))

    # column player: variables (y_1..y_n, w); min w s.t. w >= sum_j u_ij y_j, sum y = 1
    rows = [[up[i][j] for j in range(n)] + [-1] for i in range(m)]
    rows += [[1] * n + [0], [-1] * n + [0]]
    dual = _lp.solve(LinearProgram([0] * n + [1], rows, [0] * m + [1, -1], Sense.MINIMIZE))

    if not (primal.optimal and dual.optimal) or primal.value != dual.value:
        raise RuntimeError("matrix-game programs failed to produce a common optimum")
    x = tuple(primal.primal[:m])
    y = tuple(dual.primal[:n])
    return MixedProfile(x, y), primal.value - shift


class KKTReport(NamedTuple):
    K0: bool
    K1: bool
    K2: bool

    @property
    def all(self):
        return self.K0 and self.K1 and self.K2


def kkt_check(g: LpGame, x, y) -> KKTReport:
    """Feasibility (K0), complementary slackness (K1), linear stationarity (K2)."""
    m, n = len(g.b), len(g.c)
    x = [to_fraction(v) for v in x]
    y = [to_fraction(v) for v in y]
    if len(x) != n or len(y) != m:
        raise LpError(f"expected x of length {n} and y of length {m}")
    if any(v < 0 for v in y):
        raise LpError("multipliers y must be nonnegative")
    slack = [bi - sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row, bi in zip(g.a, g.b)]
    k0 = all(s >= 0 for s in slack) and all(v >= 0 for v in x)
    k1 = sum((yi * si for yi, si in zip(y, slack)), Fraction(0)) == 0
    grad = [g.c[j] - sum((g.a[i][j] * y[i] for i in range(m)), Fraction(0)) for j in range(n)]
    k2 = all(d <= 0 and (d == 0 or xj == 0) for d, xj in zip(grad, x))
    return KKTReport(k0, k1, k2)


def shadow_prices(g: LpGame) -> tuple:
    """Optimal dual prices of the resources; raises if the program has no optimum."""
    sol = _lp.solve(g.program)
    if sol.status is not Status.OPTIMAL:
        raise LpError(f"program is {sol.status.value}")
    return sol.dual


def _check_profile(payoffs, profile):
    shape = np.shape(payoffs[0])
    if len(shape) != len(profile) or len(payoffs) != len(profile):
        raise ValueError("need one payoff tensor and one distribution per player")
    for k, t in enumerate(payoffs):
        if np.shape(t) != shape:
            raise ValueError(f"payoff tensor {k} has shape {np.shape(t)}, expected {shape}")
    for k, (p, s) in enumerate(zip(profile, shape)):
        if len(p) != s:
            raise ValueError(f"player {k} has {s} strategies but distribution of length {len(p)}")


def _expected(tensor, profile):
    tensor = np.asarray(tensor, dtype=object)
    acc = 0
    for cell in itertools.product(*(range(len(p)) for p in profile)):
        w = 1
        for k, idx in enumerate(cell):
            w = w * profile[k][idx]
            if w == 0:
                break
        if w:
            acc = acc + w * tensor[cell]
    return acc


def nperson_expected_utility(payoffs: Sequence, profile: Sequence[Sequence]) -> list:
    """Expected utility of every player under independent mixed strategies."""
    _check_profile(payoffs, profile)
    return [_expected(t, profile) for t in payoffs]


def verify_mixed_equilibrium(payoffs, profile, mode=Mode.GAIN, tol=0) -> bool:
    """No player can improve by a pure deviation (gain: raise utility, cost: lower it).

    Pure deviations suffice because expected utility is linear in each
    player's own distribution.
    """
    _check_profile(payoffs, profile)
    mode = Mode(mode)
    for k, size in enumerate(np.shape(payoffs[0])):
        base = _expected(payoffs[k], profile)
        for s in range(size):
            dev = list(profile)
            dev[k] = [1 if t == s else 0 for t in range(size)]
            u = _expected(payoffs[k], dev)
            if (mode is Mode.GAIN and u > base + tol) or (mode is Mode.COST and u < base - tol):
                return False
    return True


def random_matrix_game(rng, m, n, low=-9, high=9) -> MatrixGame:
    """Integer-payoff game drawn from a numpy ``Generator``."""
    return MatrixGame(rng.integers(low, high + 1, size=(m, n)).tolist())
