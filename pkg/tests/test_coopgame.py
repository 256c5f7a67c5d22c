import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ludus import coopgame as cg
from ludus import lp
from ludus.coopgame import CoreMode, TUGame


def brute_shapley(v):
    n = v.n
    out = []
    for i in range(n):
        acc = F(0)
        for s in range(1 << n):
            if s >> i & 1:
                continue
            k = bin(s).count("1")
            acc += F(math.factorial(k) * math.factorial(n - k - 1), math.factorial(n)) * (
                v.values[s | 1 << i] - v.values[s]
            )
        out.append(acc)
    return out


def random_game(rng, n, zero=True):
    vals = [int(x) for x in rng.integers(-5, 10, size=1 << n)]
    if zero:
        vals[0] = 0
    return TUGame(n, np.array(vals, dtype=object))


def random_supermodular(rng, n):
    # nonnegative combination of unanimity games is supermodular
    w = TUGame(n, np.array([0] + [int(x) for x in rng.integers(0, 4, size=(1 << n) - 1)], dtype=object))
    return cg.mobius_transform(w)


def min_over_core(v, c):
    # min c.x over x(S) >= v(S), x(N) = v(N) with x split into x+ - x-
    n = v.n
    rows, rhs = [], []
    for s in range(1, 1 << n):
        inc = [1 if s >> i & 1 else 0 for i in range(n)]
        rows.append([-a for a in inc] + inc)
        rhs.append(-v.values[s])
    inc = [1] * n
    rows.append(inc + [-1] * n)
    rhs.append(v.values[v.grand])
    sol = lp.solve(lp.LinearProgram(list(c) + [-x for x in c], rows, rhs, lp.Sense.MINIMIZE))
    return sol.value


def test_majority_game_deficit():
    v = cg.voting_game([1, 1, 1], 2)
    res = cg.core_nonempty(v)
    assert not res.nonempty and res.witness is None
    assert res.deficit == F(1, 2)


def test_core_witness_for_convex_game():
    rng = np.random.default_rng(2)
    for _ in range(20):
        v = random_supermodular(rng, 4)
        res = cg.core_nonempty(v)
        assert res.nonempty and res.deficit == 0
        assert cg.core_contains(v, res.witness)


@pytest.mark.parametrize("seed", range(15))
def test_shapley_matches_brute_force(seed):
    v = random_game(np.random.default_rng(seed), 4, zero=False)
    assert list(cg.shapley(v)) == brute_shapley(v)
    assert sum(cg.shapley(zero := cg.zero_normalize(v))) == zero.values[zero.grand]


def test_shapley_is_average_of_marginal_vectors():
    v = random_game(np.random.default_rng(4), 4)
    avg = cg.shapley_sampled(v, 1, 0, exhaustive=True)
    assert list(avg) == list(cg.shapley(v))
    orders = list(itertools.permutations(range(4)))
    mono = sum((cg.monge_primal(v, [-list(o).index(i) for i in range(4)]) for o in orders), np.zeros(4, dtype=object))
    assert list(mono / len(orders)) == list(cg.shapley(v))


def test_linearity():
    rng = np.random.default_rng(5)
    v, w = random_game(rng, 3), random_game(rng, 3)
    lhs = cg.shapley(3 * v + w)
    assert list(lhs) == list(3 * cg.shapley(v) + cg.shapley(w))
    assert list(cg.banzhaf(v - w)) == list(cg.banzhaf(v) - cg.banzhaf(w))


def test_unanimity_and_dirac():
    u = cg.unanimity_game(4, 0b0110)
    assert list(cg.shapley(u)) == [0, F(1, 2), F(1, 2), 0]
    assert cg.unanimity_decomposition(u) == {0b0110: 1}
    d = cg.dirac_game(3, 0b011)
    assert cg.unanimity_decomposition(cg.mobius_transform(d)) == {0b011: 1}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_mobius_round_trip(seed):
    v = random_game(np.random.default_rng(seed), 4, zero=False)
    assert cg.mobius_transform(cg.mobius_inverse(v)) == v
    assert cg.dual_game(cg.dual_game(cg.zero_normalize(v))) == cg.zero_normalize(v)


def test_banzhaf_voting():
    v = cg.voting_game([2, 1, 1], 3)
    brute = []
    for i in range(3):
        swings = sum(v.values[s | 1 << i] - v.values[s] for s in range(8) if not s >> i & 1)
        brute.append(F(swings, 4))
    assert list(cg.banzhaf(v)) == brute


def test_random_value_reduces_to_shapley():
    v = random_game(np.random.default_rng(7), 3)
    n = 3
    pi = []
    for i in range(n):
        dist = {}
        for s in range(1 << n):
            if not s >> i & 1:
                k = bin(s).count("1")
                dist[s] = F(math.factorial(k) * math.factorial(n - k - 1), math.factorial(n))
        pi.append(dist)
    assert list(cg.random_value(v, pi)) == list(cg.shapley(v))
    with pytest.raises(ValueError):
        cg.random_value(v, [{0: F(1, 2)}] * 3)
    with pytest.raises(ValueError):
        cg.random_value(v, [{1: 1}] * 3)


@pytest.mark.parametrize("seed", range(10))
def test_monge_extension_equals_core_minimum(seed):
    rng = np.random.default_rng(seed)
    v = random_supermodular(rng, 4)
    assert cg.is_supermodular(v)
    c = [int(x) for x in rng.integers(0, 6, size=4)]
    x = cg.monge_primal(v, c)
    assert cg.core_contains(v, x)
    ext = cg.monge_extension(v, c)
    assert ext == sum(ci * xi for ci, xi in zip(c, x))
    assert ext == min_over_core(v, c)
    assert cg.choquet_integral(v, c) == ext


def test_supermodularity_methods_agree():
    rng = np.random.default_rng(9)
    for _ in range(40):
        v = random_game(rng, 4)
        assert cg.is_supermodular(v, method="pairs") == cg.is_supermodular(v, method="local")
        vf = v.as_float()
        assert cg.is_supermodular(vf) == cg.is_supermodular(v)
    with pytest.raises(ValueError):
        cg.is_supermodular(v, method="bogus")


def test_submodular_is_negated_supermodular():
    v = random_supermodular(np.random.default_rng(1), 3)
    assert cg.is_submodular(-v)


def test_additive_game_core_is_a_point():
    v = cg.additive_game([1, 2, 3])
    assert cg.core_contains(v, [1, 2, 3])
    assert not cg.core_contains(v, [0, 3, 3])
    assert cg.core_contains(v, [1, 2, 3], CoreMode.COST)
    assert list(cg.shapley(v)) == [1, 2, 3]


def test_zero_normalization_invariance():
    v = random_game(np.random.default_rng(3), 3, zero=False)
    shift = v._new(v.values + 7)
    assert cg.zero_normalize(shift) == cg.zero_normalize(v)
    assert list(cg.shapley(shift)) == list(cg.shapley(v))


def test_sampled_shapley_close():
    v = random_game(np.random.default_rng(11), 5).as_float()
    est = cg.shapley_sampled(v, 100_000, seed=1)
    exact = cg.shapley(v)
    scale = np.abs(v.values).max()
    assert np.max(np.abs(est - exact)) <= 0.01 * scale
    assert np.array_equal(est, cg.shapley_sampled(v, 100_000, seed=1))


def test_network_game():
    cost = [[0, 100, 101], [100, 0, 2], [101, 2, 0]]
    g, charges = cg.network_game(cost)
    assert charges == (100, 2)
    assert g.values[g.grand] == 102
    assert cg.core_contains(g, charges, CoreMode.COST)
    assert cg.is_submodular(g)


def test_production_shadow_allocation_in_core():
    a = [[1, 2], [3, 1]]
    resources = [[2, 3], [4, 1], [1, 5]]
    c = [3, 2]
    v = cg.linear_production_game(a, resources, c)
    x = cg.production_shadow_allocation(a, resources, c)
    assert cg.core_contains(v, x)


def test_construction_errors():
    with pytest.raises(ValueError):
        TUGame(2, [0, 1, 2])
    with pytest.raises(ValueError):
        TUGame(1, [0.0, float("inf")])
    with pytest.raises(ValueError):
        cg.voting_game([-1, 1], 1)
    with pytest.raises(ValueError):
        cg.network_game([[0, 1], [1]])
    with pytest.raises(ValueError):
        cg.choquet_integral(cg.unanimity_game(2, 3), [-1, 1])
    with pytest.raises(ValueError):
        cg.core_contains(cg.unanimity_game(2, 3), [1])
