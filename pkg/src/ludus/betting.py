"""Betting, investing and information rates.

Scalar formulas accept ints, floats or Fractions and stay exact where the
arithmetic allows it (``kelly_fraction(Fraction(1, 10), 100) == Fraction(1, 11)``).
Logarithms are natural unless a function says otherwise.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

__all__ = [
    "SimpleBet",
    "AlternativesBet",
    "log_utility",
    "kelly_fraction",
    "fair_odds",
    "expected_gain",
    "optimal_alternatives",
    "alternatives_utility",
    "growth_from_frequencies",
    "doubling_analysis",
    "doubling_stakes",
    "st_petersburg",
    "information",
    "entropy2",
    "conditional_entropy",
    "transmission_rate",
    "channel_capacity",
]


@dataclass(frozen=True)
class SimpleBet:
    """Stake fraction ``a`` of bankroll ``bankroll``; success (prob. ``p``) returns ``rho`` per unit."""

    p: object
    rho: object
    bankroll: object = 1

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        if self.rho < 0:
            raise ValueError("rho must be nonnegative")
        if self.bankroll <= 0:
            raise ValueError("bankroll must be positive")

    @property
    def q(self):
        return 1 - self.p

    @property
    def surplus(self):
        return self.rho - 1


def log_utility(bet: SimpleBet, a) -> float:
    """``q ln(1 - a) + p ln(1 + r a) + ln B``; ``-inf`` when a certain loss is possible."""
    if not 0 <= a <= 1:
        raise ValueError("stake fraction must lie in [0, 1]")
    p, q, r = bet.p, bet.q, bet.surplus
    total = math.log(bet.bankroll)
    for prob, outcome in ((q, 1 - a), (p, 1 + r * a)):
        if prob == 0:
            continue
        if outcome <= 0:
            return -math.inf
        total += float(prob) * math.log(outcome)
    return total


def kelly_fraction(bet: SimpleBet):
    """Log-optimal stake ``p - q/r`` clamped to ``[0, 1]``."""
    p, q, r = bet.p, bet.q, bet.surplus
    if r <= 0:
        return p if q == 0 and r == 0 else 0 * p
    a = p - q / r
    return min(max(a, 0 * a), 1 + 0 * a)


def fair_odds(p):
    """``rho`` making a bet at odds ``1:rho`` fair: ``(1 - p) / p``."""
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    return (1 - p) / p


def expected_gain(p, rho):
    """Expected net gain per unit staked at odds ``1:rho``: ``(rho + 1) p - 1``."""
    return (rho + 1) * p - 1


@dataclass(frozen=True)
class AlternativesBet:
    p: tuple
    rho: tuple

    def __init__(self, p, rho):
        p, rho = tuple(p), tuple(rho)
        if len(p) != len(rho) or not p:
            raise ValueError("p and rho must be nonempty and of equal length")
        if any(x <= 0 for x in p) or abs(float(sum(p)) - 1) > 1e-12:
            raise ValueError("p must be a strictly positive distribution")
        if any(x <= 0 for x in rho):
            raise ValueError("payoffs must be positive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rho", rho)


def alternatives_utility(bet: AlternativesBet, a: Sequence) -> float:
    """``sum_i p_i ln(a_i rho_i)`` for a full allocation ``a``."""
    total = 0.0
    for pi, ai, ri in zip(bet.p, a, bet.rho):
        if ai <= 0:
            return -math.inf
        total += float(pi) * math.log(float(ai) * float(ri))
    return total


def optimal_alternatives(bet: AlternativesBet):
    """Bet your beliefs: ``a* = p``, with expected log utility ``U(p, p)``."""
    return bet.p, alternatives_utility(bet, bet.p)


def growth_from_frequencies(counts: Sequence[int], rho: Sequence):
    """Best fixed allocation ``s/n`` for observed counts and its growth factor.

    Returns ``(allocation, log_growth)`` where ``exp(log_growth)`` is
    ``prod (s_i rho_i)^{s_i} / n^n``.
    """
    counts = [int(s) for s in counts]
    if len(counts) != len(rho):
        raise ValueError("counts and rho differ in length")
    if any(s < 0 for s in counts) or sum(counts) == 0:
        raise ValueError("counts must be nonnegative and not all zero")
    n = sum(counts)
    alloc = tuple(Fraction(s, n) for s in counts)
    log_growth = sum(s * math.log(s * float(r)) for s, r in zip(counts, rho) if s) - n * math.log(n)
    return alloc, log_growth


@dataclass(frozen=True)
class DoublingReport:
    max_rounds: int
    ruin_prob: object
    success_prob: object


def doubling_analysis(budget, win_prob) -> DoublingReport:
    """Martingale staking ``1, 2, 4, ...`` on an event of probability ``win_prob``.

    The budget allows ``k = floor(log2 B)`` rounds; all are lost with
    probability ``(1 - w)^k``, otherwise the player ends one unit ahead.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not 0 < win_prob < 1:
        raise ValueError("win probability must lie in (0, 1)")
    k = int(budget).bit_length() - 1 if budget == int(budget) else math.floor(math.log2(budget))
    ruin = (1 - win_prob) ** k
    return DoublingReport(k, ruin, 1 - ruin)


def doubling_stakes(win_round: int):
    """Stakes up to and including the winning round and the resulting net gain."""
    stakes = [1 << k for k in range(win_round)]
    return stakes, 2 * stakes[-1] - sum(stakes)


@dataclass(frozen=True)
class PetersburgReport:
    expected_return: Fraction
    expected_log2_utility: Fraction
    prob_recover_fee: Fraction


def st_petersburg(fee, horizon: int) -> PetersburgReport:
    """Partial sums of the St. Petersburg game truncated at ``horizon`` tosses.

    The prize is ``2**k`` if the first head shows at toss ``k``.  The fee
    tail is the probability that the prize is at least ``fee``.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    er = sum((Fraction(2 ** k, 2 ** k) for k in range(1, horizon + 1)), Fraction(0))
    el = sum((Fraction(k, 2 ** k) for k in range(1, horizon + 1)), Fraction(0))
    k0 = 1
    while 2 ** k0 < fee:
        k0 += 1
    return PetersburgReport(er, el, Fraction(1, 2 ** (k0 - 1)))


# --- information ------------------------------------------------------------------


def information(p) -> float:
    """Bits of surprise ``-log2 p``."""
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    return -math.log2(p)


def entropy2(dist) -> float:
    p = np.asarray(dist, dtype=np.float64)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def _check_channel(transition):
    t = np.asarray(transition, dtype=np.float64)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValueError("transition must be a square matrix")
    if np.any(t < 0) or not np.allclose(t.sum(axis=0), 1.0, atol=1e-12):
        raise ValueError("each column p(.|y) must be a probability distribution")
    return t


def _joint(transition, report_dist):
    t = _check_channel(transition)
    py = np.asarray(report_dist, dtype=np.float64)
    if py.shape != (t.shape[1],) or np.any(py < 0) or abs(py.sum() - 1) > 1e-12:
        raise ValueError("report distribution must be a distribution over the columns")
    return t * py[None, :]  # joint[x, y] = p(x | y) p(y)


def conditional_entropy(transition, report_dist) -> float:
    """``H(X | Y) = sum_y p(y) H(p(. | y))`` in bits.

    ``transition[x, y]`` is the probability that the truth is ``x`` when
    ``y`` is reported.
    """
    _joint(transition, report_dist)
    t = _check_channel(transition)
    return float(sum(report_dist[y] * entropy2(t[:, y]) for y in range(t.shape[1])))


def transmission_rate(transition, report_dist) -> float:
    """``T(X | Y) = H(X) - H(X | Y)`` in bits."""
    joint = _joint(transition, report_dist)
    return entropy2(joint.sum(axis=1)) - conditional_entropy(transition, report_dist)


@dataclass(frozen=True)
class CapacityResult:
    capacity: float
    upper_bound: float
    input_dist: np.ndarray
    iterations: int


def channel_capacity(transition, tolerance: float = 1e-9, max_iter: int = 100000) -> CapacityResult:
    """Blahut-Arimoto iteration for ``sup_p T`` over report distributions.

    ``capacity`` is the achieved rate (a lower bound); ``upper_bound`` is the
    standard ``max_y D(p(.|y) || p_X)`` certificate; iteration stops once the
    two are within ``tolerance`` bits.
    """
    t = _check_channel(transition)
    k = t.shape[1]
    py = np.full(k, 1.0 / k)
    with np.errstate(divide="ignore", invalid="ignore"):
        for it in range(1, max_iter + 1):
            px = t @ py
            ratio = np.where(t > 0, t / px[:, None], 1.0)
            d = np.sum(np.where(t > 0, t * np.log2(ratio), 0.0), axis=0)  # D(p(.|y) || p_X)
            lower = float(py @ d)
            upper = float(d.max())
            if upper - lower <= tolerance:
                break
            py = py * np.exp2(d)
            py /= py.sum()
    return CapacityResult(max(lower, 0.0), upper, py, it)
