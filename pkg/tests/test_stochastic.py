import random

import pytest

from fairgame.bench import random_mdp, random_sets, random_stochastic_game
from fairgame.fixpoint import solve
from fairgame.model import Buchi, GameGraph, Owner, Rabin, StochasticGameGraph
from fairgame.stochastic import derand, is_good, mdp_almost_sure_oracle, mec_decompose, solve_almost_sure
from fairgame.symset import VertexSet

P0, P1, RND = Owner.P0, Owner.P1, Owner.RANDOM


def test_derand_without_random_vertices_is_identity():
    sg = StochasticGameGraph.build([P0, P1, P0], [(0, 1), (1, 2), (1, 0), (2, 2)])
    g = derand(sg)
    assert g.owner == sg.owner and g.succ == sg.succ and not g.live


def test_derand_random_vertex_becomes_live_p1():
    sg = StochasticGameGraph.build([RND, P0, P0], [(0, 1), (0, 2), (1, 0), (2, 0)])
    g = derand(sg)
    assert g.owner[0] == P1
    assert g.live == {(0, 1), (0, 2)}


def test_derand_ownership_counts():
    for seed in range(30):
        sg = random_stochastic_game(seed, 8)
        g = derand(sg)
        assert len(g.V1) == sg.owner.count(P1) + sg.owner.count(RND)


def test_no_random_vertices_means_plain_solve():
    for seed in range(50):
        sg = random_stochastic_game(seed, 6, p0_frac=0.5, random_frac=0.0)
        cond = Rabin(((VertexSet.of(6, [0, 1]), VertexSet.of(6, [2])),))
        g = GameGraph.build(sg.owner, sg.edges(), [])
        assert solve_almost_sure(sg, cond).region == solve(g, cond).region


def test_random_vertex_feeding_goal():
    # r picks a or goal at random; both return to r
    sg = StochasticGameGraph.build([RND, P0, P0], [(0, 1), (0, 2), (1, 0), (2, 0)], ["r", "a", "goal"])
    assert solve_almost_sure(sg, Buchi(sg.set([2]))).region == sg.set([0, 1, 2])


def test_fully_random_cycle_is_one_end_component():
    sg = StochasticGameGraph.build([RND] * 4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)])
    assert mec_decompose(sg) == [sg.set(range(4))]


def test_end_components_are_closed_and_stable():
    for seed in range(100):
        sg = random_mdp(seed, 8)
        comps = mec_decompose(sg)
        union = VertexSet.empty(8)
        for c in comps:
            assert not c & union
            union = union | c
            for v in c:
                inside = [w for w in sg.succ[v] if w in c]
                assert inside
                if sg.owner[v] == RND:
                    assert len(inside) == len(sg.succ[v])
        assert mec_decompose(sg, union) == comps


def test_goodness():
    n = 4
    A, B = VertexSet.of(n, [0, 1]), VertexSet.of(n, [2, 3])
    pairs = [((A.bits,), VertexSet.of(n, [3]).bits)]
    assert is_good(A.bits, pairs)
    assert not is_good(B.bits, pairs)
    gen = [((VertexSet.of(n, [0]).bits, VertexSet.of(n, [2]).bits), 0)]
    assert not is_good(A.bits, gen) and is_good((A | B).bits, gen)


def test_oracle_rejects_two_player_input():
    sg = StochasticGameGraph.build([P1, P0, P0], [(0, 1), (0, 2), (1, 0), (2, 0)])
    with pytest.raises(ValueError):
        mdp_almost_sure_oracle(sg, [(sg.all, sg.none)])


def test_almost_sure_matches_end_component_oracle():
    for seed in range(150):
        rng = random.Random(seed)
        n = rng.randint(2, 8)
        k = rng.randint(1, 2)
        sg = random_mdp(seed, n, rng.choice([0.2, 0.5, 0.8]))
        sets = random_sets(seed, n, 2 * k, 0.35)
        pairs = tuple((sets[2 * i], sets[2 * i + 1]) for i in range(k))
        assert solve_almost_sure(sg, Rabin(pairs)).region == mdp_almost_sure_oracle(sg, pairs)
