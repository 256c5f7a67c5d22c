"""Knowledge on a finite state space.

States are ``0..m-1`` and events are integer bitmasks (bit ``s`` for state
``s``).  An information function assigns each state the event ``P(s)`` of
states its holder cannot rule out.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .lp import to_fraction

__all__ = [
    "MAX_STATES",
    "InfoFunction",
    "AxiomReport",
    "AgreementReport",
    "RedHatsReport",
    "event",
    "states_of",
    "knowledge",
    "knowledge_table",
    "check_axioms",
    "common_knowledge",
    "nested_knowledge",
    "conditional_probability",
    "agreement_scan",
    "red_hats_demo",
]

MAX_STATES = 32
EXHAUSTIVE_EVENTS = 16
EXHAUSTIVE_PAIRS = 10
SAMPLES = 1000


def event(states) -> int:
    mask = 0
    for s in states:
        mask |= 1 << int(s)
    return mask


def states_of(mask: int) -> list:
    return [s for s in range(mask.bit_length()) if mask >> s & 1]


@dataclass(frozen=True)
class InfoFunction:
    m: int
    cells: tuple  # cells[s] = P(s) as a bitmask

    def __init__(self, cells: Sequence):
        cells = tuple(c if isinstance(c, int) else event(c) for c in cells)
        m = len(cells)
        if not 1 <= m <= MAX_STATES:
            raise ValueError(f"state count must lie in 1..{MAX_STATES}")
        for s, c in enumerate(cells):
            if c >> m:
                raise ValueError(f"P({s}) mentions states outside the space")
            if not c >> s & 1:
                raise ValueError(f"state {s} must belong to P({s})")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_partition(cls, m: int, blocks: Sequence) -> "InfoFunction":
        cells = [0] * m
        seen = 0
        for block in blocks:
            mask = block if isinstance(block, int) else event(block)
            if mask & seen:
                raise ValueError("blocks overlap")
            seen |= mask
            for s in states_of(mask):
                cells[s] = mask
        if seen != (1 << m) - 1:
            raise ValueError("blocks do not cover the state space")
        return cls(cells)

    @property
    def full(self) -> int:
        return (1 << self.m) - 1

    @property
    def is_partitional(self) -> bool:
        return all(self.cells[t] == c for c in self.cells for t in states_of(c))


def knowledge(P: InfoFunction, E: int) -> int:
    """``K(E) = {s : P(s) is contained in E}``."""
    out = 0
    for s, c in enumerate(P.cells):
        if c & ~E == 0:
            out |= 1 << s
    return out


def knowledge_table(P: InfoFunction, events=None) -> np.ndarray:
    """``K`` applied to every event (default: all ``2^m`` events) at once."""
    if events is None:
        if P.m > EXHAUSTIVE_EVENTS:
            raise ValueError(f"full tables need m <= {EXHAUSTIVE_EVENTS}")
        events = np.arange(1 << P.m, dtype=np.int64)
    events = np.asarray(events, dtype=np.int64)
    out = np.zeros_like(events)
    for s, c in enumerate(P.cells):
        out |= ((events & c) == c).astype(np.int64) << s
    return out


@dataclass(frozen=True)
class AxiomReport:
    K1: bool  # K(S) = S
    K2: bool  # monotone
    K3: bool  # K(E & F) = K(E) & K(F)
    K4: bool  # K(E) within E
    K5: bool  # K(K(E)) = K(E)
    K6: bool  # ~K(E) = K(~K(E))
    exhaustive: bool

    def as_dict(self):
        return {f"K{i}": getattr(self, f"K{i}") for i in range(1, 7)}


def check_axioms(P: InfoFunction, seed: int = 0) -> AxiomReport:
    """Test K.1-K.6; exhaustive for small spaces, seeded sampling beyond."""
    full = P.full
    rng = np.random.default_rng(seed)
    if P.m <= EXHAUSTIVE_EVENTS:
        E = np.arange(1 << P.m, dtype=np.int64)
    else:
        E = rng.integers(0, 1 << P.m, size=SAMPLES, dtype=np.int64)
    KE = knowledge_table(P, E)
    k1 = knowledge(P, full) == full
    k4 = bool(np.all(KE & ~E == 0))
    k5 = bool(np.all(knowledge_table(P, KE) == KE))
    k6 = bool(np.all(knowledge_table(P, full & ~KE) == full & ~KE))
    # monotonicity follows from single-state enlargements
    k2 = True
    for s in range(P.m):
        k2 &= bool(np.all(KE & ~knowledge_table(P, E | (1 << s)) == 0))
    pairs_exhaustive = P.m <= EXHAUSTIVE_PAIRS
    if pairs_exhaustive:
        A, B = E[:, None], E[None, :]
        k3 = bool(np.all(knowledge_table(P, (A & B).ravel()).reshape(A.size, B.size) == (KE[:, None] & KE[None, :])))
    else:
        A = rng.integers(0, 1 << P.m, size=SAMPLES * 10, dtype=np.int64)
        B = rng.integers(0, 1 << P.m, size=SAMPLES * 10, dtype=np.int64)
        k3 = bool(np.all(knowledge_table(P, A & B) == knowledge_table(P, A) & knowledge_table(P, B)))
    return AxiomReport(k1, k2, k3, k4, k5, k6, pairs_exhaustive)


def _check_agents(Ps):
    Ps = list(Ps)
    if not Ps:
        raise ValueError("need at least one agent")
    if len({P.m for P in Ps}) != 1:
        raise ValueError("agents live on different state spaces")
    return Ps


def evident_core(Ps: Sequence[InfoFunction], E: int) -> int:
    """Largest ``F`` within ``E`` with ``K_i(F) = F`` for every agent."""
    Ps = _check_agents(Ps)
    F = E & Ps[0].full
    while True:
        G = F
        for P in Ps:
            G &= knowledge(P, G)
        if G == F:
            return F
        F = G


def common_knowledge(Ps: Sequence[InfoFunction], E: int, sigma: int) -> tuple:
    """``(is E common knowledge at sigma, evident core F)``."""
    F = evident_core(Ps, E)
    return bool(F >> sigma & 1), F


def nested_knowledge(Ps: Sequence[InfoFunction], E: int, sequence: Sequence[int]) -> int:
    """``K_{i1}(K_{i2}(... K_{ik}(E)))``."""
    Ps = _check_agents(Ps)
    if not sequence:
        raise ValueError("index sequence must be nonempty")
    for i in reversed(sequence):
        E = knowledge(Ps[i], E)
    return E


def _prior(prior, m):
    pr = [to_fraction(p) for p in prior]
    if len(pr) != m:
        raise ValueError("prior length differs from the state count")
    if any(p < 0 for p in pr) or abs(float(sum(pr)) - 1) > 1e-12:
        raise ValueError("prior must be a probability vector")
    return pr


def _mass(pr, mask):
    return sum((pr[s] for s in states_of(mask)), Fraction(0))


def conditional_probability(prior, E: int, A: int) -> Fraction:
    """``Pr(E | A)``; zero when ``Pr(A) = 0``."""
    pr = [to_fraction(p) for p in prior]
    pa = _mass(pr, A)
    return Fraction(0) if pa == 0 else _mass(pr, E & A) / pa


@dataclass(frozen=True)
class AgreementReport:
    estimates1: tuple
    estimates2: tuple
    disagreement: int  # states where the two estimates differ
    disagreement_ck_states: tuple  # states where that event is common knowledge
    pair_ck_states: tuple  # states where some {est1 = a, est2 = b}, a != b, is common knowledge


def agreement_scan(P1: InfoFunction, P2: InfoFunction, prior, E: int) -> AgreementReport:
    """Where can differing posterior estimates of ``E`` be common knowledge?

    ``pair_ck_states`` follows the level-set construction: for each value pair
    ``a != b`` the event where agent 1 estimates ``a`` and agent 2 estimates
    ``b``.  With a common prior and partitional information it is empty.
    """
    Ps = _check_agents((P1, P2))
    m = P1.m
    pr = _prior(prior, m)
    est = [tuple(conditional_probability(pr, E, P.cells[s]) for s in range(m)) for P in Ps]
    diff = event(s for s in range(m) if est[0][s] != est[1][s])
    core = evident_core(Ps, diff)
    pair_states = 0
    for a, b in {(est[0][s], est[1][s]) for s in states_of(diff)}:
        level = event(s for s in range(m) if est[0][s] == a and est[1][s] == b)
        pair_states |= evident_core(Ps, level)
    return AgreementReport(est[0], est[1], diff, tuple(states_of(core)), tuple(states_of(pair_states)))


# --- red hats -------------------------------------------------------------------

RED, WHITE = "R", "W"


@dataclass(frozen=True)
class RedHatsReport:
    states: tuple  # hat strings per state, girl 0 first
    entropy_before: float
    entropy_after: float
    resolved_at: tuple  # count at which some hand goes up, per state (None: never)
    hands: tuple  # girls raising hands at that count, per state


def red_hats_demo(girls: int = 3) -> RedHatsReport:
    """Announcement "at least one red hat", then public counting rounds.

    Girl ``i`` considers possible every state that agrees with what she sees
    and has not been ruled out publicly.  She raises her hand at a count once
    those states agree on her own hat; if nobody does, every state in which
    someone would have known is ruled out for all.
    """
    n = 1 << girls
    # state order: more red hats first, then lexicographic with red before white
    hats = sorted(
        ("".join(RED if x >> (girls - 1 - g) & 1 else WHITE for g in range(girls)) for x in range(n)),
        key=lambda h: (-h.count(RED), h.replace(RED, "0").replace(WHITE, "1")),
    )
    before = math.log2(len(hats))
    possible = {s for s, h in enumerate(hats) if RED in h}
    after = math.log2(len(possible))

    def knowers(s, pool):
        out = []
        for g in range(girls):
            seen = {t for t in pool if all(hats[t][j] == hats[s][j] for j in range(girls) if j != g)}
            if len({hats[t][g] for t in seen}) == 1:
                out.append(g)
        return out

    resolved = [None] * n
    hands = [()] * n
    count = 0
    pool = set(possible)
    while pool:
        count += 1
        speaking = {s: knowers(s, pool) for s in pool}
        for s, who in speaking.items():
            if who and resolved[s] is None:
                resolved[s], hands[s] = count, tuple(who)
        silent = {s for s in pool if not speaking[s]}
        if silent == pool:
            break
        pool = silent
    return RedHatsReport(tuple(hats), before, after, tuple(resolved), tuple(hands))
