import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ludus import combinatorial as cg
from ludus.combinatorial import Player, Rule


def random_impartial(rng, nodes):
    pool = [cg.ZERO]
    for _ in range(nodes - 1):
        pool.append(cg.impartial(rng.sample(pool, rng.randint(0, min(3, len(pool))))))
    return pool[-1]


def random_partizan(rng, nodes):
    pool = [cg.ZERO]
    for _ in range(nodes - 1):
        left = rng.sample(pool, rng.randint(0, min(2, len(pool))))
        right = rng.sample(pool, rng.randint(0, min(2, len(pool))))
        pool.append(cg.game(left, right))
    return pool[-1]


def brute_mover_wins(g, left_to_move, misere=False):
    opts = g.left if left_to_move else g.right
    if not opts:
        return misere
    return any(not brute_mover_wins(o, not left_to_move, misere) for o in opts)


@pytest.mark.parametrize("values, expected", [(set(), 0), ({0, 1, 2}, 3), ({1, 2}, 0), ([0, 0, 2], 1)])
def test_mex(values, expected):
    assert cg.mex(values) == expected


@pytest.mark.parametrize("n", range(8))
def test_star(n):
    assert cg.grundy(cg.star(n)) == n


def test_hash_consing():
    assert cg.impartial([cg.ZERO]) is cg.star(1)
    assert cg.game([cg.star(1), cg.ZERO]) is cg.game([cg.ZERO, cg.star(1)])
    assert cg.nim([3, 1]) is cg.nim([1, 3, 0])


def test_zero_rules():
    for mover in Player:
        assert cg.outcome(cg.ZERO, mover) is mover.other
        assert cg.outcome(cg.ZERO, mover, Rule.MISERE) is mover
    assert cg.negate(cg.ZERO) is cg.ZERO


def test_grundy_rejects_partizan():
    with pytest.raises(cg.NotImpartialError):
        cg.grundy(cg.game([cg.ZERO], []))


@pytest.mark.parametrize("seed", range(30))
def test_random_impartial_grundy_vs_brute(seed):
    g = random_impartial(random.Random(seed), 20)
    assert (cg.grundy(g) == 0) == (not brute_mover_wins(g, True))
    for mover in Player:
        second = cg.outcome(g, mover) is mover.other
        assert second == (cg.grundy(g) == 0)


@pytest.mark.parametrize("seed", range(30))
def test_partizan_outcome_vs_brute(seed):
    g = random_partizan(random.Random(seed), 12)
    for rule in Rule:
        misere = rule is Rule.MISERE
        assert (cg.outcome(g, Player.LEFT, rule) is Player.LEFT) == brute_mover_wins(g, True, misere)
        assert (cg.outcome(g, Player.RIGHT, rule) is Player.RIGHT) == brute_mover_wins(g, False, misere)


@pytest.mark.parametrize("seed", range(20))
def test_g_minus_g_and_double_negation(seed):
    g = random_partizan(random.Random(seed), 8)
    s = cg.Session()
    assert s.second_player_wins(s.add(g, s.negate(g)))
    assert s.negate(s.negate(g)) is g
    assert s.add(g, cg.ZERO) is g and s.add(cg.ZERO, g) is g


def test_star_sums():
    s = cg.Session()
    for a, b in itertools.product(range(9), repeat=2):
        assert s.grundy(s.add(cg.star(a), cg.star(b))) == a ^ b


@pytest.mark.parametrize("k, m", list(itertools.product(range(5), repeat=2)))
def test_star_congruence(k, m):
    assert cg.congruent(cg.star(k), cg.star(m)) == (k == m)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_sum_theorem_and_congruence(seed):
    rng = random.Random(seed)
    g, h, k = (random_impartial(rng, rng.randint(1, 7)) for _ in range(3))
    s = cg.Session()
    assert s.grundy(s.add(g, h)) == s.grundy(g) ^ s.grundy(h)
    assert s.congruent(g, g)
    if s.congruent(g, h):
        assert s.congruent(h, g)
        assert s.congruent(s.add(g, k), s.add(h, k))
        assert s.outcome(g, Player.LEFT) is s.outcome(h, Player.LEFT)
        if s.congruent(h, k):
            assert s.congruent(g, k)


def test_partizan_congruence_transitive():
    rng = random.Random(5)
    games = [random_partizan(rng, rng.randint(1, 5)) for _ in range(12)]
    s = cg.Session()
    rel = {(i, j): s.congruent(a, b) for (i, a), (j, b) in itertools.product(enumerate(games), repeat=2)}
    for i, j, k in itertools.product(range(len(games)), repeat=3):
        if rel[i, j] and rel[j, k]:
            assert rel[i, k]


def test_nim_value_and_moves():
    assert cg.nim_value([1, 3, 5, 7]) == 0 and cg.winning_move([1, 3, 5, 7]) is None
    assert cg.winning_move([1, 3, 5, 4]) == (1, 0)
    for n in range(10):
        assert cg.nim_value([n, n]) == 0
    rng = random.Random(3)
    for _ in range(200):
        piles = [rng.randint(0, 15) for _ in range(rng.randint(1, 5))]
        mv = cg.winning_move(piles)
        if cg.nim_value(piles):
            k, size = mv
            assert size < piles[k]
            assert cg.nim_value(piles[:k] + [size] + piles[k + 1:]) == 0
        else:
            assert mv is None
    with pytest.raises(ValueError):
        cg.nim_value([-1])


@pytest.mark.parametrize("k", range(1, 5))
def test_frogs_pattern(k):
    assert [cg.grundy(cg.frogs(n, k)) for n in range(13)] == [n % (k + 1) for n in range(13)]


def test_frogs_table():
    assert [cg.grundy(cg.frogs(n, 3)) for n in range(11)] == [0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2]


def test_red_black_piles():
    g = cg.add(cg.subtraction_game(10, {1, 2, 3}), cg.subtraction_game(10, {1, 2}))
    assert cg.grundy(g) == 3
    assert cg.outcome(g) is Player.LEFT


@pytest.mark.parametrize("n", range(1, 9))
def test_de_bruijn_first_player(n):
    assert cg.outcome(cg.de_bruijn(n)) is Player.LEFT


def test_generator_errors():
    with pytest.raises(ValueError):
        cg.de_bruijn(17)
    with pytest.raises(ValueError):
        cg.frogs(3, 0)
    with pytest.raises(ValueError):
        cg.subtraction_game(3, [0, 1])
    with pytest.raises(ValueError):
        cg.nim([1, -2])


def test_nim_outcome_small():
    for piles in itertools.product(range(4), repeat=3):
        g = cg.nim(piles)
        assert (cg.outcome(g) is Player.RIGHT) == (cg.nim_value(piles) == 0)


def test_misere_nim_single_piles():
    # misere nim on all-ones piles: first player wins iff the number of piles is even
    for k in range(1, 6):
        assert (cg.outcome(cg.nim([1] * k), rule=Rule.MISERE) is Player.LEFT) == (k % 2 == 0)
