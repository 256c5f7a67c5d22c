"""Finite two-player combinatorial games.

Games are hash-consed: :func:`game` returns the same object for structurally
equal option multisets, so identity comparison is structural comparison and
memo tables can be keyed by ``id``.  Analyses (outcomes, Grundy numbers, sums)
keep their caches in a :class:`Session`; the module-level functions use a
shared default session.
"""

import functools
import threading
import weakref
from enum import Enum
from typing import Iterable, Optional

__all__ = [
    "Player",
    "Rule",
    "Game",
    "NotImpartialError",
    "Session",
    "game",
    "impartial",
    "ZERO",
    "star",
    "mex",
    "grundy",
    "outcome",
    "negate",
    "add",
    "second_player_wins",
    "congruent",
    "nim_value",
    "winning_move",
    "nim",
    "subtraction_game",
    "frogs",
    "de_bruijn",
]


class Player(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def other(self):
        return Player.RIGHT if self is Player.LEFT else Player.LEFT


class Rule(str, Enum):
    NORMAL = "normal"
    MISERE = "misere"


class NotImpartialError(ValueError):
    pass


class Game:
    """Immutable node ``{left options | right options}``; build with :func:`game`."""

    __slots__ = ("left", "right", "_key", "_impartial", "__weakref__")

    def __repr__(self):
        return f"<Game #{id(self):x} L={len(self.left)} R={len(self.right)}>"

    @property
    def is_impartial(self) -> bool:
        return self._impartial


_intern: "weakref.WeakValueDictionary[tuple, Game]" = weakref.WeakValueDictionary()
_intern_lock = threading.Lock()


def game(left: Iterable[Game] = (), right: Iterable[Game] = ()) -> Game:
    """Interned game with the given option multisets."""
    left = tuple(sorted(left, key=id))
    right = tuple(sorted(right, key=id))
    key = (tuple(map(id, left)), tuple(map(id, right)))
    with _intern_lock:
        g = _intern.get(key)
        if g is None:
            g = object.__new__(Game)
            g.left, g.right, g._key = left, right, key
            g._impartial = key[0] == key[1] and all(o._impartial for o in left)
            _intern[key] = g
        return g


def impartial(options: Iterable[Game] = ()) -> Game:
    """Game in which both players have the same ``options``."""
    opts = tuple(options)
    return game(opts, opts)


ZERO = game()


def mex(values: Iterable[int]) -> int:
    """Smallest nonnegative integer not in ``values``."""
    seen = set(values)
    g = 0
    while g in seen:
        g += 1
    return g


class Session:
    """Memo tables for one analysis; not meant to be shared across threads."""

    def __init__(self):
        self._grundy = {}
        self._wins = {}
        self._neg = {}
        self._sum = {}
        self._keep = []  # pins interned results for the session lifetime

    def grundy(self, g: Game) -> int:
        if not g.is_impartial:
            raise NotImpartialError("Grundy numbers are defined for impartial games only")
        return self._grundy_rec(g)

    def _grundy_rec(self, g):
        k = id(g)
        val = self._grundy.get(k)
        if val is None:
            val = mex(self._grundy_rec(o) for o in g.left)
            self._grundy[k] = val
            self._keep.append(g)
        return val

    def mover_wins(self, g: Game, mover: Player, rule: Rule = Rule.NORMAL) -> bool:
        key = (id(g), mover, rule)
        res = self._wins.get(key)
        if res is None:
            options = g.left if mover is Player.LEFT else g.right
            if not options:
                res = rule is Rule.MISERE
            else:
                res = any(not self.mover_wins(o, mover.other, rule) for o in options)
            self._wins[key] = res
            self._keep.append(g)
        return res

    def outcome(self, g: Game, first_mover: Player, rule: Rule = Rule.NORMAL) -> Player:
        """Winner under perfect play when ``first_mover`` starts."""
        first_mover, rule = Player(first_mover), Rule(rule)
        return first_mover if self.mover_wins(g, first_mover, rule) else first_mover.other

    def negate(self, g: Game) -> Game:
        res = self._neg.get(id(g))
        if res is None:
            res = game([self.negate(o) for o in g.right], [self.negate(o) for o in g.left])
            self._neg[id(g)] = res
            self._keep.extend((g, res))
        return res

    def add(self, g: Game, h: Game) -> Game:
        if g is ZERO:
            return h
        if h is ZERO:
            return g
        key = (id(g), id(h))
        res = self._sum.get(key)
        if res is None:
            left = [self.add(o, h) for o in g.left] + [self.add(g, o) for o in h.left]
            right = [self.add(o, h) for o in g.right] + [self.add(g, o) for o in h.right]
            res = game(left, right)
            self._sum[key] = res
            self._keep.extend((g, h, res))
        return res

    def second_player_wins(self, g: Game, rule: Rule = Rule.NORMAL) -> bool:
        return not self.mover_wins(g, Player.LEFT, rule) and not self.mover_wins(g, Player.RIGHT, rule)

    def congruent(self, g: Game, h: Game) -> bool:
        return self.second_player_wins(self.add(g, self.negate(h)))


_default = Session()


def grundy(g: Game) -> int:
    return _default.grundy(g)


def outcome(g: Game, first_mover: Player = Player.LEFT, rule: Rule = Rule.NORMAL) -> Player:
    return _default.outcome(g, first_mover, rule)


def negate(g: Game) -> Game:
    return _default.negate(g)


def add(g: Game, h: Game) -> Game:
    """Disjunctive sum: a move is a move in exactly one component."""
    return _default.add(g, h)


def second_player_wins(g: Game, rule: Rule = Rule.NORMAL) -> bool:
    return _default.second_player_wins(g, rule)


def congruent(g: Game, h: Game) -> bool:
    """``g - h`` is a second-player win (normal play) whoever starts."""
    return _default.congruent(g, h)


# --- nim arithmetic ------------------------------------------------------------


def nim_value(piles: Iterable[int]) -> int:
    value = 0
    for p in piles:
        if p < 0:
            raise ValueError("pile sizes must be nonnegative")
        value ^= p
    return value


def winning_move(piles: Iterable[int]) -> Optional[tuple]:
    """``(pile index, new size)`` restoring nim-sum zero, or ``None`` if already zero."""
    piles = list(piles)
    total = nim_value(piles)
    if total == 0:
        return None
    for k, p in enumerate(piles):
        target = p ^ total
        if target < p:
            return k, target
    raise AssertionError("unreachable: some pile has the top bit of the nim-sum")


# --- generators ----------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def star(n: int) -> Game:
    """Single nim heap ``*n``."""
    if n < 0:
        raise ValueError("heap size must be nonnegative")
    return impartial(star(k) for k in range(n))


def nim(piles: Iterable[int]) -> Game:
    """Multi-heap nim built directly on sorted heap tuples."""
    piles = tuple(piles)
    if any(p < 0 for p in piles):
        raise ValueError("pile sizes must be nonnegative")
    return _nim_state(tuple(sorted(p for p in piles if p)))


@functools.lru_cache(maxsize=None)
def _nim_state(piles: tuple) -> Game:
    opts = []
    for k, p in enumerate(piles):
        for q in range(p):
            rest = piles[:k] + ((q,) if q else ()) + piles[k + 1:]
            opts.append(_nim_state(tuple(sorted(rest))))
    return impartial(opts)


def subtraction_game(n: int, allowed: Iterable[int]) -> Game:
    """Heap of ``n`` tokens; a move removes ``s`` tokens for some ``s`` in ``allowed``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    allowed = tuple(sorted(set(allowed)))
    if not allowed or allowed[0] < 1:
        raise ValueError("allowed moves must be positive integers")
    table = []
    for k in range(n + 1):
        table.append(impartial(table[k - s] for s in allowed if s <= k))
    return table[n]


def frogs(n: int, k: int) -> Game:
    """Leaps of length 1..k along ``n`` free squares."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return subtraction_game(n, range(1, k + 1))


DE_BRUIJN_MAX = 16


def de_bruijn(n: int) -> Game:
    """Numbers ``1..n`` on the board; a move erases a number and all its divisors still present."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > DE_BRUIJN_MAX:
        raise ValueError(f"de_bruijn supports n <= {DE_BRUIJN_MAX}")
    divmask = [0] * (n + 1)
    for x in range(1, n + 1):
        for d in range(1, x + 1):
            if x % d == 0:
                divmask[x] |= 1 << (d - 1)
    memo = {}

    def build(mask):
        g = memo.get(mask)
        if g is None:
            opts = [build(mask & ~divmask[x]) for x in range(1, n + 1) if mask >> (x - 1) & 1]
            g = memo[mask] = impartial(opts)
        return g

    return build((1 << n) - 1)
