"""Cross-check a solve against the brute-force oracle."""
from __future__ import annotations

from .fixpoint import solve
from .model import (GR1, Buchi, CoBuchi, GameGraph, GenBuchi, GenCoBuchi, GenRabin, Muller, Owner,
                    Parity, Rabin, RabinChain, SafeBuchi, SafeReach, Safety, gen_buchi_counter_product,
                    gen_cobuchi_to_rabin, gr1_to_gen_rabin, muller_to_gen_rabin, parity_to_rabin_chain)
from .oracle import (absorbing, brute_force_region, fair_violating_witness, safe_buchi_as_rabin,
                     safe_reach_as_rabin, safety_as_rabin)
from .strategy import extract_p0_strategy, lift_pairs, memory_product
from .symset import VertexSet


def oracle_form(g: GameGraph, cond):
    """``(graph, pairs, exact)`` for the oracle.  ``exact`` is False when
    memoryless strategies may not suffice, so brute force only gives a
    lower bound on the region."""
    n = g.n
    if isinstance(cond, (Rabin, RabinChain)):
        return g, list(cond.pairs), True
    if isinstance(cond, Parity):
        return g, list(parity_to_rabin_chain(n, cond.colors).pairs), True
    if isinstance(cond, CoBuchi):
        return g, list(gen_cobuchi_to_rabin(n, [cond.A]).pairs), True
    if isinstance(cond, GenCoBuchi):
        return g, list(gen_cobuchi_to_rabin(n, cond.A).pairs), True
    if isinstance(cond, SafeReach):
        return (*safe_reach_as_rabin(g, cond.T, cond.Q), True)
    if isinstance(cond, Safety):
        return (*safety_as_rabin(g, cond.Q), True)
    if isinstance(cond, Buchi):
        return (*safe_buchi_as_rabin(g, cond.G, g.all), True)
    if isinstance(cond, SafeBuchi):
        return (*safe_buchi_as_rabin(g, cond.G, cond.Q), True)
    if isinstance(cond, GenBuchi):
        return absorbing(g, ~cond.Q), [(tuple(F & cond.Q for F in cond.F), ~cond.Q)], False
    if isinstance(cond, GenRabin):
        return g, list(cond.pairs), False
    if isinstance(cond, GR1):
        return g, list(gr1_to_gen_rabin(n, cond.A, cond.F).pairs), False
    if isinstance(cond, Muller):
        return g, list(muller_to_gen_rabin(n, cond.F).pairs), False
    raise TypeError("no oracle encoding for %r" % (cond,))


def _complete(g: GameGraph, moves: dict) -> dict:
    # sinks of the encoding and vertices the strategy leaves open get any edge
    out = {}
    for v in range(g.n):
        if g.owner[v] == Owner.P0 and g.succ[v]:
            w = moves.get(v)
            out[v] = w if w in g.succ[v] else g.succ[v][0]
    return out


def strategy_failures(g: GameGraph, cond, region: VertexSet, strat) -> list[int]:
    """Vertices of ``region`` from which the strategy can be beaten."""
    g2, pairs, _ = oracle_form(g, cond)
    if strat.memoryless:
        moves = _complete(g2, strat.as_map())
        return [v for v in region if fair_violating_witness(g2, moves, pairs, v) is not None]
    gp, moves, index = memory_product(g2, strat)
    moves = _complete(gp, moves)
    lp = lift_pairs(pairs, index, gp.n)
    return [v for v in region
            if fair_violating_witness(gp, moves, lp, index[(v, strat.initial)]) is not None]


def cross_check(g: GameGraph, cond, M: int = 0, budget: int = 10**6) -> list[str]:
    """Problems found comparing the solver with the oracle; empty if none."""
    problems = []
    region = solve(g, cond, M).region
    g2, pairs, exact = oracle_form(g, cond)
    if isinstance(cond, GenBuchi):
        emb = gen_buchi_counter_product(g, cond)
        pg, ppairs, _ = oracle_form(emb.game, emb.cond)
        truth = emb.project(brute_force_region(pg, ppairs, budget), g.n)
        exact = True
    else:
        truth = brute_force_region(g2, pairs, budget)
    names = lambda s: " ".join(g.name(v) for v in s) or "(none)"
    if exact and region != truth:
        problems.append("region mismatch: solver %s, oracle %s" % (names(region), names(truth)))
    elif not exact and not truth <= region:
        problems.append("solver misses memoryless wins: %s" % names(truth - region))
    sregion, strat = extract_p0_strategy(g, cond)
    if sregion != region:
        problems.append("strategy region differs from accelerated solve")
    bad = strategy_failures(g, cond, sregion, strat)
    if bad:
        problems.append("strategy loses from %s" % " ".join(g.name(v) for v in bad))
    return problems
