"""Boltzmann distributions, temperatures and Metropolis dynamics.

The distribution at parameter ``T`` is ``b_S = exp(v_S T) / Z_T``; ``T = +inf``
and ``T = -inf`` are the uniform distributions on the maximizers and the
minimizers of ``v`` respectively.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .coopgame import TUGame

__all__ = [
    "Convention",
    "BoltzmannDist",
    "boltzmann_distribution",
    "physical_distribution",
    "expected_value",
    "entropy",
    "mean_curve",
    "temperature_solve",
    "boltzmann_value",
    "ChainResult",
    "metropolis_chain",
    "transition_matrix",
    "AnnealResult",
    "geometric_schedule",
    "simulated_annealing",
]

BURN_IN = 0.2


class Convention(str, Enum):
    MARGINAL = "marginal"  # v(S+i) - v(S-i)
    SYMMETRIC_DIFF = "symmetric"  # v(S xor i) - v(S)


@dataclass(frozen=True)
class BoltzmannDist:
    T: float
    probs: np.ndarray
    log_partition: float

    @property
    def partition(self) -> float:
        return math.exp(self.log_partition)


def _as_potential(v):
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("potential must be a nonempty vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("potential values must be finite")
    return v


def boltzmann_distribution(v, T: float) -> BoltzmannDist:
    """Max-shifted evaluation of ``exp(v T) / Z_T``; infinite ``T`` gives the limit."""
    v = _as_potential(v)
    if math.isinf(T):
        target = v.max() if T > 0 else v.min()
        hit = (v == target).astype(np.float64)
        return BoltzmannDist(T, hit / hit.sum(), math.inf)
    z = v * T
    shift = z.max()
    w = np.exp(z - shift)
    total = w.sum()
    return BoltzmannDist(T, w / total, float(shift + math.log(total)))


def physical_distribution(v, theta: float, k_b: float = 1.0) -> BoltzmannDist:
    """``exp(-v / (k_b theta)) / Z``, i.e. parameter ``T = -1 / (k_b theta)``."""
    if theta < 0:
        raise ValueError("temperature must be nonnegative")
    T = -math.inf if theta == 0 else -1.0 / (k_b * theta)
    return boltzmann_distribution(v, T)


def expected_value(dist, v) -> float:
    probs = dist.probs if isinstance(dist, BoltzmannDist) else np.asarray(dist, dtype=np.float64)
    v = _as_potential(v)
    if probs.shape != v.shape:
        raise ValueError("distribution and potential differ in length")
    return float(probs @ v)


def entropy(dist, base: float = math.e) -> float:
    """``-sum p log p`` with ``0 log 0 = 0``."""
    p = dist.probs if isinstance(dist, BoltzmannDist) else np.asarray(dist, dtype=np.float64)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum() / math.log(base))


def mean_curve(v, T: float) -> float:
    """Expected potential ``mu(T)`` under the Boltzmann distribution."""
    return expected_value(boltzmann_distribution(v, T), v)


def temperature_solve(v, target_mu: float, iterations: int = 200) -> float:
    """Parameter ``T`` with ``mu(T) = target_mu``.

    ``mu`` is strictly increasing for non-constant ``v``, so bracketing by
    doubling followed by bisection converges.  Constant potentials return 0.
    """
    v = _as_potential(v)
    lo_v, hi_v = float(v.min()), float(v.max())
    span = hi_v - lo_v
    if not lo_v - 1e-12 * max(1.0, abs(lo_v)) <= target_mu <= hi_v + 1e-12 * max(1.0, abs(hi_v)):
        raise ValueError(f"target {target_mu} outside [{lo_v}, {hi_v}]")
    if span == 0:
        return 0.0
    if target_mu >= hi_v:
        return math.inf
    if target_mu <= lo_v:
        return -math.inf
    limit = 1.0
    while mean_curve(v, -limit) > target_mu or mean_curve(v, limit) < target_mu:
        limit *= 2.0
        if limit > 1e300:
            break
    lo, hi = -limit, limit
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if mean_curve(v, mid) < target_mu:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def boltzmann_value(game: TUGame, T: float, convention=Convention.MARGINAL) -> np.ndarray:
    """Expected marginal contribution of every player under ``b^T`` on all coalitions."""
    convention = Convention(convention)
    vals = np.asarray(game.values, dtype=np.float64)
    dist = boltzmann_distribution(vals, T)
    return kernels.expected_marginals(vals, dist.probs, game.n, convention is Convention.SYMMETRIC_DIFF)


# --- Metropolis ------------------------------------------------------------------


def _normalize_positive(p, name):
    p = np.asarray(p, dtype=np.float64)
    if np.any(p <= 0):
        raise ValueError(f"{name} probabilities must be strictly positive")
    if abs(p.sum() - 1.0) > 1e-12:
        raise ValueError(f"{name} probabilities must sum to 1")
    return p


def _draw(rng, radices, p, q, steps):
    agents = rng.choice(len(radices), size=steps, p=p)
    actions = np.empty(steps, dtype=np.int64)
    for i, k in enumerate(radices):
        hit = agents == i
        actions[hit] = rng.choice(k, size=int(hit.sum()), p=q[i])
    uniforms = rng.random(steps)
    return agents, actions, uniforms


def _defaults(radices, p, q):
    n = len(radices)
    p = _normalize_positive(np.full(n, 1.0 / n) if p is None else p, "agent")
    if q is None:
        q = [np.full(k, 1.0 / k) for k in radices]
    q = [_normalize_positive(qi, "action") for qi in q]
    if len(q) != n or any(len(qi) != k for qi, k in zip(q, radices)):
        raise ValueError("need one action distribution per agent matching its strategy count")
    return p, q


@dataclass(frozen=True)
class ChainResult:
    trajectory: np.ndarray
    empirical: np.ndarray
    burn_in: int


def metropolis_chain(v, radices: Sequence[int], T: float, steps: int, seed: int,
                     p=None, q=None, start: int = 0, jit=None) -> ChainResult:
    """Simulate the agent-wise Metropolis process on a product strategy space.

    A step picks agent ``i`` with probability ``p[i]`` and a proposed action
    ``y`` with probability ``q[i][y]``; improvements are always taken, a loss
    ``d < 0`` is accepted with probability ``exp(d T)``.  Profiles are encoded
    in mixed radix with agent 0 as the least significant digit.  The empirical
    distribution covers the trajectory after the first 20% of steps.

    With uniform ``q`` the chain is reversible with respect to ``b^T``.
    """
    if T < 0:
        raise ValueError("T must be nonnegative; negate the potential for T < 0")
    v = _as_potential(v)
    radices = [int(k) for k in radices]
    if int(np.prod(radices)) != v.size:
        raise ValueError("potential length must equal the product of the strategy counts")
    p, q = _defaults(radices, p, q)
    rng = np.random.default_rng(seed)
    agents, actions, uniforms = _draw(rng, radices, p, q, steps)
    temps = np.full(steps, float(T))
    traj = kernels.metropolis_walk(v, radices, temps, agents, actions, uniforms, start, jit=jit)
    burn = int(BURN_IN * steps)
    tail = traj[burn + 1:]
    emp = np.bincount(tail, minlength=v.size) / max(len(tail), 1)
    return ChainResult(traj, emp, burn)


def transition_matrix(v, radices: Sequence[int], T: float, p=None, q=None) -> np.ndarray:
    """Row-stochastic one-step matrix ``P[x, y]`` of :func:`metropolis_chain`."""
    v = _as_potential(v)
    radices = [int(k) for k in radices]
    p, q = _defaults(radices, p, q)
    size = v.size
    strides = np.concatenate(([1], np.cumprod(radices)[:-1])).astype(int)
    P = np.zeros((size, size))
    for x in range(size):
        for i, k in enumerate(radices):
            cur = (x // strides[i]) % k
            for a in range(k):
                y = x + (a - cur) * strides[i]
                d = v[y] - v[x]
                acc = 1.0 if d >= 0 or T == 0 else math.exp(d * T)
                P[x, y] += p[i] * q[i][a] * acc
                P[x, x] += p[i] * q[i][a] * (1.0 - acc)
    return P


def coalition_chain(game: TUGame, T: float, steps: int, seed: int, **kwargs) -> ChainResult:
    """Metropolis on the coalition lattice: each player toggles its own membership."""
    return metropolis_chain(np.asarray(game.values, dtype=np.float64), [2] * game.n, T, steps, seed, **kwargs)


@dataclass(frozen=True)
class AnnealResult:
    state: int
    value: float
    trajectory: np.ndarray


def geometric_schedule(start: float, factor: float) -> Callable[[int], float]:
    if start < 0 or factor < 1:
        raise ValueError("geometric schedule needs start >= 0 and factor >= 1")
    return lambda t: start * factor ** t


def simulated_annealing(v, schedule: Callable[[int], float], steps: int, seed: int,
                        radices: Sequence[int] | None = None, start: int = 0, jit=None) -> AnnealResult:
    """Metropolis with a nondecreasing parameter schedule; returns the best state visited.

    Without ``radices`` the space is a single agent choosing among ``len(v)``
    states, proposals uniform.
    """
    v = _as_potential(v)
    radices = [v.size] if radices is None else [int(k) for k in radices]
    temps = np.array([schedule(t) for t in range(steps)], dtype=np.float64)
    temps = np.minimum(temps, np.finfo(np.float64).max)
    if np.any(np.diff(temps) < 0):
        raise ValueError("schedule must be nondecreasing")
    if np.any(temps < 0):
        raise ValueError("schedule must be nonnegative")
    p, q = _defaults(radices, None, None)
    rng = np.random.default_rng(seed)
    agents, actions, uniforms = _draw(rng, radices, p, q, steps)
    traj = kernels.metropolis_walk(v, radices, temps, agents, actions, uniforms, start, jit=jit)
    best = int(traj[np.argmax(v[traj])])
    return AnnealResult(best, float(v[best]), traj)
