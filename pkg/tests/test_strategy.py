import random
from math import prod

import pytest

from fairgame.check import strategy_failures
from fairgame.fixpoint import solve, solve_dual_reach, solve_rabin, solve_safe_reach
from fairgame.model import (GR1, GameGraph, GenBuchi, GenRabin, Muller, Owner, Rabin, SafeReach)
from fairgame.oracle import (fair_violating_witness, safe_reach_as_rabin, verify_strategy_sound)
from fairgame.strategy import (extract_dual_ranks, extract_p0_strategy, extract_p1_spoiler_reach,
                               extract_rabin_ranks, extract_reach_ranks, format_rank, rank_key)

from games import rabin_seven, reach_nine
from helpers import KINDS, rand_condition, rand_game, rand_set

P0, P1 = Owner.P0, Owner.P1


def by_name(g, table):
    return {g.name(v): format_rank(w) for v, w in table.items()}


# ---------------------------------------------------------------- ranks

def test_format_rank():
    assert format_rank((0, 1, 1, 0, 2, 1)) == "011021"
    assert format_rank(None) == "inf"
    assert format_rank((0, 12)) == "0.12"
    assert rank_key(None) > rank_key((9, 9, 9))


def test_rabin_seven_ranks():
    g, pairs = rabin_seven()
    ranks = by_name(g, extract_rabin_ranks(solve_rabin(g, pairs, record=True)).table())
    assert ranks["q7"] == ranks["q3"] == "001121"
    assert ranks["q1"] == "011021"


def test_ranks_need_a_recorded_solve():
    g, pairs = rabin_seven()
    with pytest.raises(ValueError):
        extract_rabin_ranks(solve_rabin(g, pairs))


def test_unknown_convention_rejected():
    g, pairs = rabin_seven()
    with pytest.raises(ValueError):
        extract_rabin_ranks(solve_rabin(g, pairs, record=True), convention="other")


@pytest.mark.parametrize("convention", ["entry", "postfix"])
def test_rank_finite_exactly_on_region(convention):
    rng = random.Random(1)
    for i in range(150):
        n = rng.randint(2, 7)
        g = rand_game(rng, n, live_frac=(0.0, 0.3, 0.6)[i % 3])
        pairs = [(rand_set(rng, n), rand_set(rng, n, 0.3)) for _ in range(rng.randint(1, 3))]
        res = solve_rabin(g, pairs, record=True)
        assert set(extract_rabin_ranks(res, convention=convention).table()) == set(res.region)


def test_all_winning_pair_gives_finite_ranks():
    rng = random.Random(2)
    g = rand_game(rng, 6)
    res = solve_rabin(g, [(g.all, g.none)], record=True)
    assert set(extract_rabin_ranks(res).table()) == set(g.all)


def test_reach_ranks():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(2, 7)
        g = rand_game(rng, n, live_frac=0.4)
        T, Q = rand_set(rng, n, 0.3), rand_set(rng, n, 0.8)
        res = solve_safe_reach(g, T, Q, record=True)
        table = extract_reach_ranks(res).table()
        assert set(table) == set(res.region)
        for v in T:
            assert table[v] == (1,)
        region, strat = extract_p0_strategy(g, SafeReach(T, Q))
        for (v, _), w in strat.moves.items():
            if v not in T:
                assert table[w] < table[v]


def test_rabin_ranks_collapse_to_reach_ranks():
    rng = random.Random(4)
    for _ in range(200):
        n = rng.randint(2, 7)
        g = rand_game(rng, n, live_frac=0.4)
        T = rand_set(rng, n, 0.3)
        ga, pairs = safe_reach_as_rabin(g, T, g.all)
        reach = extract_reach_ranks(solve_safe_reach(ga, T, g.all, record=True)).table()
        rabin = extract_rabin_ranks(solve_rabin(ga, pairs, record=True)).table()
        assert set(reach) == set(rabin)
        assert all(rabin[v][3] == reach[v][0] for v in reach)


# ---------------------------------------------------------------- P0 strategies

def test_rabin_seven_strategy():
    g, pairs = rabin_seven()
    region, strat = extract_p0_strategy(g, Rabin(tuple(pairs)))
    moves = {g.name(v): g.name(w) for v, w in strat.as_map().items()}
    assert moves["q6"] == "q7" and moves["q5"] == "q3"
    assert verify_strategy_sound(g, pairs, region, strat.as_map()) == []
    assert strat.lines(g) == ["q1 -> q2", "q5 -> q3", "q6 -> q7", "q7 -> q4"]


def test_corrupted_strategy_is_caught():
    g, pairs = rabin_seven(False)
    _, strat = extract_p0_strategy(g, Rabin(tuple(pairs)))
    bad = dict(strat.as_map())
    bad[5] = 1                      # q6 -> q2, where P1 may now stay forever
    witness = fair_violating_witness(g, bad, pairs, 5)
    assert witness == g.set([1])
    assert verify_strategy_sound(g, pairs, g.set([5]), bad) == [5]


def test_sound_on_empty_region():
    g, pairs = rabin_seven()
    assert verify_strategy_sound(g, pairs, g.none, {}) == []


def test_single_successor_is_forced():
    g = GameGraph.build([P0, P1], [(0, 1), (1, 0), (1, 1)], [])
    _, strat = extract_p0_strategy(g, Rabin(((g.all, g.none),)))
    assert strat.move(0) == 1


def test_move_outside_region_is_an_error():
    g, pairs = rabin_seven(False)
    region, strat = extract_p0_strategy(g, Rabin(tuple(pairs)))
    assert 0 not in region
    with pytest.raises(ValueError):
        strat.move(0)


@pytest.mark.parametrize("kind", KINDS)
def test_strategies_are_winning(kind):
    rng = random.Random(KINDS.index(kind) + 50)
    for i in range(40):
        n = rng.randint(2, 6)
        g = rand_game(rng, n, live_frac=(0.0, 0.3, 0.6)[i % 3])
        cond = rand_condition(rng, kind, n)
        region, strat = extract_p0_strategy(g, cond)
        assert region == solve(g, cond).region
        assert strategy_failures(g, cond, region, strat) == []


def test_postfix_ranks_also_give_winning_strategies():
    from fairgame.strategy import strategy_from_rabin
    rng = random.Random(6)
    for i in range(150):
        n = rng.randint(2, 7)
        g = rand_game(rng, n, live_frac=(0.0, 0.3, 0.6)[i % 3])
        pairs = [(rand_set(rng, n), rand_set(rng, n, 0.3)) for _ in range(rng.randint(1, 2))]
        res = solve_rabin(g, pairs, record=True)
        strat = strategy_from_rabin(g, res, [((G,), R) for G, R in pairs], "postfix")
        assert verify_strategy_sound(g, pairs, res.region, strat.as_map()) == []


def test_memory_size_is_product_of_goal_counts():
    rng = random.Random(7)
    n = 5
    g = rand_game(rng, n)
    S = lambda: rand_set(rng, n)
    cond = GenRabin((((S(), S(), S()), S()), ((S(),), S()), ((S(), S()), S())))
    _, strat = extract_p0_strategy(g, cond)
    assert len(strat.memories) == prod(len(goals) for goals, _ in cond.pairs)
    cond = GenBuchi((S(), S(), S()), g.all)
    _, strat = extract_p0_strategy(g, cond)
    assert len(strat.memories) == 3
    _, strat = extract_p0_strategy(g, Rabin(((S(), S()),)))
    assert strat.memoryless


def test_finite_memory_lines():
    g = GameGraph.build([P0, P0], [(0, 0), (0, 1), (1, 0)], [])
    _, strat = extract_p0_strategy(g, GenBuchi((g.set([0]), g.set([1])), g.all))
    lines = strat.lines(g)
    assert all(" @ " in ln for ln in lines)
    assert not strat.memoryless
    with pytest.raises(ValueError):
        strat.as_map()


# ---------------------------------------------------------------- P1 spoiler

def test_spoiler_on_nine_vertex_game():
    g, T, Q = reach_nine()
    region, spoiler = extract_p1_spoiler_reach(g, T, Q)
    assert {g.name(v) for v in region} == {"1", "2", "3"}
    _check_trap(g, T, Q, region, spoiler)


def _check_trap(g, T, Q, D, spoiler):
    """Against the spoiler, plays from D never meet T before leaving Q, and
    live sources that such plays can revisit forever keep their live
    successors in D, so P1 can interleave them and still stay in D."""
    assert not D & T
    inner = D & Q

    def succ(v):
        if v not in inner:
            return ()          # already outside Q: P1 has won
        if g.owner[v] == P0:
            return g.succ[v]
        return (spoiler.move(v),) if g.succ[v] else ()

    seen, stack = set(D), list(D)
    while stack:
        v = stack.pop()
        for w in succ(v):
            assert w not in T
            if w not in seen:
                seen.add(w)
                stack.append(w)
    assert seen <= set(D)
    for v in inner:
        if g.live_succ(v) and _on_cycle(v, succ):
            assert all(w in D for w in g.live_succ(v))


def _on_cycle(v, succ):
    seen, stack = set(), list(succ(v))
    while stack:
        w = stack.pop()
        if w == v:
            return True
        if w not in seen:
            seen.add(w)
            stack.extend(succ(w))
    return False


def test_spoiler_keeps_plays_in_its_region():
    rng = random.Random(8)
    for _ in range(300):
        n = rng.randint(2, 7)
        g = rand_game(rng, n, live_frac=0.4, dead_frac=0.1)
        T, Q = rand_set(rng, n, 0.3), rand_set(rng, n, 0.8)
        D, spoiler = extract_p1_spoiler_reach(g, T, Q)
        assert D == ~solve_safe_reach(g, T, Q).region
        _check_trap(g, T, Q, D, spoiler)
        ranks = extract_dual_ranks(solve_dual_reach(g, T, Q, record=True)).table()
        for (v, _), w in spoiler.moves.items():
            if v in Q:          # outside Q any move will do
                assert rank_key(ranks.get(w)) <= rank_key(ranks.get(v))
