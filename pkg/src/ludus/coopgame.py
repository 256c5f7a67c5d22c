"""TU games on the subset lattice.

A coalition is a bitmask; player ``i`` (0-based) is bit ``1 << i``.  Values
live in a numpy array of length ``2**n``, either ``float64`` or an object
array of :class:`~fractions.Fraction` for exact work.
"""

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from . import lp as _lp
from .lp import LinearProgram, Sense, Status, to_fraction

__all__ = [
    "MAX_PLAYERS",
    "MAX_PLAYERS_EXACT",
    "CoreMode",
    "TUGame",
    "members",
    "mask_of",
    "zero_normalize",
    "dual_game",
    "mobius_transform",
    "mobius_inverse",
    "unanimity_decomposition",
    "marginal",
    "shapley",
    "shapley_weights",
    "shapley_sampled",
    "banzhaf",
    "random_value",
    "core_contains",
    "core_nonempty",
    "monge_order",
    "monge_primal",
    "monge_dual",
    "monge_extension",
    "choquet_integral",
    "is_supermodular",
    "is_submodular",
    "unanimity_game",
    "dirac_game",
    "additive_game",
    "voting_game",
    "network_game",
    "linear_production_game",
]

MAX_PLAYERS = 24
MAX_PLAYERS_EXACT = 16
_PAIRWISE_LIMIT = 12


class CoreMode(str, Enum):
    PROFIT = "profit"
    COST = "cost"


def members(mask: int, n: int) -> list:
    return [i for i in range(n) if mask >> i & 1]


def mask_of(players: Sequence[int]) -> int:
    m = 0
    for i in players:
        m |= 1 << i
    return m


@dataclass(frozen=True, eq=False)
class TUGame:
    n: int
    values: np.ndarray

    def __init__(self, n, values, exact=None):
        if not 0 <= n <= MAX_PLAYERS:
            raise ValueError(f"player count must be in 0..{MAX_PLAYERS}")
        arr = np.asarray(values)
        if arr.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} coalition values, got shape {arr.shape}")
        if exact is None:
            exact = arr.dtype == object or np.issubdtype(arr.dtype, np.integer)
            exact = exact and n <= MAX_PLAYERS_EXACT
        if exact:
            if n > MAX_PLAYERS_EXACT:
                raise ValueError(f"exact games support at most {MAX_PLAYERS_EXACT} players")
            arr = np.array([to_fraction(x) for x in arr], dtype=object)
        else:
            arr = np.array(arr, dtype=np.float64)
            if not np.all(np.isfinite(arr)):
                raise ValueError("coalition values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "values", arr)

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    @property
    def grand(self) -> int:
        return (1 << self.n) - 1

    def __getitem__(self, mask):
        return self.values[mask]

    def __call__(self, players=()):
        return self.values[mask_of(players)]

    def __eq__(self, other):
        return isinstance(other, TUGame) and self.n == other.n and bool(np.all(self.values == other.values))

    __hash__ = None

    def _new(self, values):
        return TUGame(self.n, values, exact=self.exact)

    def __add__(self, other):
        return self._new(self.values + other.values)

    def __sub__(self, other):
        return self._new(self.values - other.values)

    def __neg__(self):
        return self._new(-self.values)

    def __rmul__(self, scalar):
        if self.exact:
            scalar = to_fraction(scalar)
        return self._new(scalar * self.values)

    def as_exact(self):
        return TUGame(self.n, self.values, exact=True)

    def as_float(self):
        return TUGame(self.n, np.array([float(x) for x in self.values]), exact=False)


def _zero(g):
    return Fraction(0) if g.exact else 0.0


def zero_normalize(v: TUGame) -> TUGame:
    return v._new(v.values - v.values[0])


def dual_game(v: TUGame) -> TUGame:
    """``v*(S) = v(N) - v(N \\ S)``."""
    idx = np.arange(1 << v.n)
    return v._new(v.values[v.grand] - v.values[v.grand ^ idx])


def mobius_transform(w: TUGame) -> TUGame:
    """``out(S) = sum of w(T) over T subset of S``."""
    return w._new(kernels.zeta(w.values, w.n))


def mobius_inverse(v: TUGame) -> TUGame:
    """Harsanyi dividends: the unique ``w`` with ``mobius_transform(w) == v``."""
    return v._new(kernels.mobius(v.values, v.n))


def unanimity_decomposition(v: TUGame) -> dict:
    """Nonzero coefficients of ``v`` in the unanimity basis, keyed by coalition mask."""
    d = mobius_inverse(v).values
    return {s: d[s] for s in range(len(d)) if d[s] != 0}


def marginal(v: TUGame, i: int, s: int):
    bit = 1 << i
    return v.values[s | bit] - v.values[s & ~bit]


def shapley_weights(n: int, exact: bool = True):
    """Weight of a coalition of size ``k`` not containing the player: ``k!(n-k-1)!/n!``."""
    if n == 0:
        return np.zeros(0)
    w = [Fraction(math.factorial(k) * math.factorial(n - k - 1), math.factorial(n)) for k in range(n)]
    return np.array(w, dtype=object) if exact else np.array([float(x) for x in w])


def shapley(v: TUGame) -> np.ndarray:
    return kernels.weighted_marginals(v.values, v.n, shapley_weights(v.n, v.exact))


def banzhaf(v: TUGame) -> np.ndarray:
    if v.n == 0:
        return np.zeros(0)
    w = Fraction(1, 1 << (v.n - 1)) if v.exact else 1.0 / (1 << (v.n - 1))
    weights = np.array([w] * v.n, dtype=object if v.exact else np.float64)
    return kernels.weighted_marginals(v.values, v.n, weights)


def marginal_vector(v: TUGame, order: Sequence[int]) -> np.ndarray:
    """Increments ``v(S_k) - v(S_{k-1})`` along the chain built by ``order``."""
    out = np.empty(v.n, dtype=v.values.dtype)
    s = 0
    for i in order:
        t = s | 1 << i
        out[i] = v.values[t] - v.values[s]
        s = t
    return out


def shapley_sampled(v: TUGame, sample_count: int, seed: int, exhaustive: bool = False) -> np.ndarray:
    """Monte-Carlo Shapley value from uniformly random joining orders.

    ``exhaustive=True`` averages over all ``n!`` orders instead (small ``n``).
    """
    if exhaustive:
        orders = itertools.permutations(range(v.n))
        total = np.zeros(v.n, dtype=v.values.dtype)
        count = 0
        for order in orders:
            total = total + marginal_vector(v, order)
            count += 1
        return total / count
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    rng = np.random.default_rng(seed)
    vals = np.asarray(v.values, dtype=np.float64)
    orders = np.argsort(rng.random((sample_count, v.n)), axis=1)
    bits = (1 << orders).astype(np.int64)
    chains = np.cumsum(bits, axis=1)
    prev = np.concatenate([np.zeros((sample_count, 1), dtype=np.int64), chains[:, :-1]], axis=1)
    inc = vals[chains] - vals[prev]
    out = np.zeros(v.n)
    np.add.at(out, orders.ravel(), inc.ravel())
    return out / sample_count


def random_value(v: TUGame, pi: Sequence[Mapping[int, float]], tol: float = 1e-12) -> np.ndarray:
    """Expected marginal ``sum_S (v(S+i) - v(S)) pi_i(S)`` with ``pi_i`` on coalitions without ``i``."""
    if len(pi) != v.n:
        raise ValueError("need one distribution per player")
    out = []
    for i, dist in enumerate(pi):
        total = sum(dist.values())
        if abs(float(total) - 1.0) > tol:
            raise ValueError(f"distribution of player {i} sums to {total}, not 1")
        acc = _zero(v)
        for s, p in dist.items():
            if s >> i & 1:
                raise ValueError(f"distribution of player {i} charges a coalition containing {i}")
            acc = acc + (v.values[s | 1 << i] - v.values[s]) * p
        out.append(acc)
    return np.array(out, dtype=v.values.dtype)


def _coalition_sums(x, n):
    """``x(S)`` for every mask; dtype follows ``x``."""
    sums = np.zeros(1 << n, dtype=np.asarray(x).dtype)
    if sums.dtype == object:
        sums[:] = Fraction(0)
    for i in range(n):
        bit = 1 << i
        sums[bit:2 * bit] = sums[:bit] + x[i]
    return sums


def core_contains(v: TUGame, x, mode=CoreMode.PROFIT, tol: float = 1e-9) -> bool:
    """Efficiency ``x(N) = v(N)`` plus ``x(S) >= v(S)`` (profit) or ``x(S) <= v(S)`` (cost)."""
    mode = CoreMode(mode)
    if len(x) != v.n:
        raise ValueError(f"allocation needs {v.n} entries")
    if v.exact:
        xs = np.array([to_fraction(a) for a in x], dtype=object)
        tol = 0
    else:
        xs = np.asarray(x, dtype=np.float64)
    sums = _coalition_sums(xs, v.n)
    gap = sums - v.values
    if abs(gap[v.grand]) > tol:
        return False
    if mode is CoreMode.PROFIT:
        return bool(np.all(gap >= -tol))
    return bool(np.all(gap <= tol))


@dataclass(frozen=True)
class CoreResult:
    nonempty: bool
    witness: tuple | None
    deficit: Fraction


def core_nonempty(v: TUGame) -> CoreResult:
    """Decide ``core(v) != {}`` with the exact program ``min x(N)  s.t.  x(S) >= v(S)``.

    Allocations are free in sign, so each ``x_i`` is split as ``x_i+ - x_i-``.
    """
    ve = v.as_exact() if not v.exact else v
    n = ve.n
    rows, rhs = [], []
    for s in range(1, 1 << n):
        inc = [1 if s >> i & 1 else 0 for i in range(n)]
        rows.append([-a for a in inc] + inc)
        rhs.append(-ve.values[s])
    sol = _lp.solve(LinearProgram([1] * n + [-1] * n, rows, rhs, Sense.MINIMIZE))
    if sol.status is not Status.OPTIMAL:
        raise _lp.LpError(f"core program is {sol.status.value}")
    x = [sol.primal[i] - sol.primal[n + i] for i in range(n)]
    surplus = ve.values[ve.grand] - sum(x, Fraction(0))
    if surplus < 0:
        return CoreResult(False, None, -surplus)
    if n:
        x[0] += surplus
    return CoreResult(True, tuple(x), Fraction(0))


def monge_order(c: Sequence) -> list:
    """Players sorted by ``c`` descending; ties go to the smaller index first."""
    return sorted(range(len(c)), key=lambda i: (-c[i], i))


def monge_primal(v: TUGame, c: Sequence) -> np.ndarray:
    return marginal_vector(v, monge_order(c))


def monge_dual(v: TUGame, c: Sequence) -> dict:
    """Dual Monge vector: chain coalition mask -> weight (zero weights omitted)."""
    order = monge_order(c)
    out = {}
    s = 0
    for k, i in enumerate(order):
        s |= 1 << i
        w = c[i] - c[order[k + 1]] if k + 1 < len(order) else c[i]
        if w != 0:
            out[s] = w
    return out


def monge_extension(v: TUGame, c: Sequence):
    """``[v](c) = sum_S v(S) y_S`` for the dual Monge vector ``y`` of ``c``.

    For zero-normalized ``v`` this equals ``c . monge_primal(v, c)``.
    """
    return sum((v.values[s] * w for s, w in monge_dual(v, c).items()), _zero(v))


def choquet_integral(v: TUGame, f: Sequence):
    """``sum_k f_(k) (v(A_k) - v(A_{k+1}))`` over the ascending arrangement of ``f``."""
    if len(f) != v.n:
        raise ValueError(f"f needs {v.n} entries")
    if any(x < 0 for x in f):
        raise ValueError("the Choquet integral is defined for nonnegative f")
    asc = sorted(range(v.n), key=lambda i: (f[i], -i))
    tails = [0] * (v.n + 1)
    for k in range(v.n - 1, -1, -1):
        tails[k] = tails[k + 1] | 1 << asc[k]
    return sum(
        (f[asc[k]] * (v.values[tails[k]] - v.values[tails[k + 1]]) for k in range(v.n)),
        _zero(v),
    )


def is_supermodular(v: TUGame, tol: float = 0.0, method: str = "auto") -> bool:
    """``v(S & T) + v(S | T) >= v(S) + v(T)`` for all coalitions.

    ``method`` is ``"pairs"`` (all pairs), ``"local"`` (S, i, j outside S) or
    ``"auto"``: pairs up to 12 players, local beyond.
    """
    if method == "auto":
        method = "pairs" if v.n <= _PAIRWISE_LIMIT else "local"
    if method == "pairs":
        return kernels.is_supermodular_pairs(v.values, tol)
    if method == "local":
        return kernels.is_supermodular_local(v.values, v.n, tol)
    raise ValueError(f"unknown method {method!r}")


def is_submodular(v: TUGame, tol: float = 0.0, method: str = "auto") -> bool:
    return is_supermodular(-v, tol, method)


# --- generators ----------------------------------------------------------------


def unanimity_game(n: int, t: int) -> TUGame:
    """``1`` on every coalition containing ``t``; exact."""
    idx = np.arange(1 << n)
    return TUGame(n, ((idx & t) == t).astype(np.int64))


def dirac_game(n: int, s: int) -> TUGame:
    vals = np.zeros(1 << n, dtype=np.int64)
    vals[s] = 1
    return TUGame(n, vals)


def additive_game(weights: Sequence) -> TUGame:
    n = len(weights)
    exact = not any(isinstance(w, float) for w in weights)
    w = np.array([to_fraction(x) for x in weights], dtype=object) if exact else np.asarray(weights, dtype=float)
    return TUGame(n, _coalition_sums(w, n), exact=exact)


def voting_game(weights: Sequence, threshold) -> TUGame:
    """``v(S) = 1`` iff the weights in ``S`` reach ``threshold``."""
    if any(w < 0 for w in weights):
        raise ValueError("voting weights must be nonnegative")
    w = np.array([to_fraction(x) for x in weights], dtype=object)
    sums = _coalition_sums(w, len(weights))
    return TUGame(len(weights), np.array([1 if s >= to_fraction(threshold) else 0 for s in sums]))


def _mst_cost(nodes: list, cost) -> Fraction:
    # Prim on the complete graph induced by ``nodes`` (node 0 is the supply)
    if len(nodes) <= 1:
        return Fraction(0)
    inside = {nodes[0]}
    best = {u: cost[nodes[0]][u] for u in nodes[1:]}
    total = Fraction(0)
    while best:
        u = min(best, key=lambda k: (best[k], k))
        total += best.pop(u)
        inside.add(u)
        for w in best:
            if cost[u][w] < best[w]:
                best[w] = cost[u][w]
    return total


def network_game(cost: Sequence[Sequence]):
    """Connection cost game for users ``1..n`` and supply node ``0``.

    ``c(S)`` is the minimum spanning tree cost of ``S`` plus the supply node.
    Returns ``(game, charges)`` where ``charges`` are the greedy marginal costs
    of the chain that always adds the user with the cheapest extension.
    """
    size = len(cost)
    c = [[to_fraction(x) for x in row] for row in cost]
    if any(len(row) != size for row in c):
        raise ValueError("cost matrix must be square")
    if any(x < 0 for row in c for x in row):
        raise ValueError("connection costs must be nonnegative")
    sym = [[min(c[i][j], c[j][i]) for j in range(size)] for i in range(size)]
    n = size - 1
    values = [_mst_cost([0] + [i + 1 for i in members(s, n)], sym) for s in range(1 << n)]
    g = TUGame(n, np.array(values, dtype=object))
    charges = [Fraction(0)] * n
    s = 0
    for _ in range(n):
        p = min((i for i in range(n) if not s >> i & 1), key=lambda i: (g.values[s | 1 << i], i))
        charges[p] = g.values[s | 1 << p] - g.values[s]
        s |= 1 << p
    return g, tuple(charges)


def linear_production_game(a: Sequence[Sequence], resources: Sequence[Sequence], c: Sequence) -> TUGame:
    """``v(S) = max c.x  s.t.  A x <= sum_{i in S} b_i, x >= 0`` with player ``i`` owning ``b_i``."""
    n = len(resources)
    m = len(a)
    if any(len(b) != m for b in resources):
        raise ValueError("each resource vector needs one entry per material")
    res = [[to_fraction(x) for x in b] for b in resources]
    values = []
    for s in range(1 << n):
        pooled = [sum((res[i][k] for i in members(s, n)), Fraction(0)) for k in range(m)]
        sol = _lp.solve(LinearProgram(c, a, pooled))
        if sol.status is Status.UNBOUNDED:
            raise _lp.LpError(f"production program for coalition {s:#b} is unbounded")
        if sol.status is Status.INFEASIBLE:
            raise _lp.LpError(f"production program for coalition {s:#b} is infeasible")
        values.append(sol.value)
    return TUGame(n, np.array(values, dtype=object))


def production_shadow_allocation(a, resources, c) -> tuple:
    """Pay each player the market value of its resources at grand-coalition shadow prices."""
    m = len(a)
    pooled = [sum((to_fraction(b[k]) for b in resources), Fraction(0)) for k in range(m)]
    sol = _lp.solve(LinearProgram(c, a, pooled))
    if sol.status is not Status.OPTIMAL:
        raise _lp.LpError(f"grand-coalition program is {sol.status.value}")
    return tuple(sum((sol.dual[k] * to_fraction(b[k]) for k in range(m)), Fraction(0)) for b in resources)
