"""Brute-force ground truth for small games.

P1 beats a fixed memoryless P0 strategy from ``start`` iff there is a set S
of vertices such that (i) S is reachable from ``start`` under the strategy,
(ii) every P0 vertex of S has its strategy edge inside S and every P1 vertex
of S has an edge into S, (iii) live successors of vertices in S lie in S,
(iv) the allowed edges inside S form a strongly connected graph and (v)
every pair is violated on S.  Such an S is the set of vertices visited
infinitely often by a fair play that P1 can steer.  A reachable dead end
also counts as a win for P1, since a stuck play never satisfies an infinite
objective.

Pairs may be plain ``(G, R)`` or generalized ``(goal_sets, R)``; a pair is
violated on S if S meets R or misses one of its goal sets.
"""
from __future__ import annotations

from itertools import product
from typing import Mapping, Sequence

from .model import GameGraph, Owner
from .symset import VertexSet


class OracleBudgetError(RuntimeError):
    pass


def _norm_pairs(pairs) -> list[tuple[tuple[int, ...], int]]:
    out = []
    for first, R in pairs:
        goals = (first,) if isinstance(first, VertexSet) else tuple(first)
        out.append((tuple(gs.bits for gs in goals), R.bits))
    return out


def _allowed(g: GameGraph, strategy: Mapping[int, int]) -> list[int]:
    """Successor masks of the strategy-restricted graph."""
    masks = []
    for v in range(g.n):
        if g.owner[v] == Owner.P0 and g.succ[v]:
            if v not in strategy:
                masks.append(None)
                continue
            w = strategy[v]
            if w not in g.succ[v]:
                raise ValueError("strategy moves %s to %s, which is not an edge" % (g.name(v), g.name(w)))
            masks.append(1 << w)
        else:
            masks.append(g.succ_mask[v])
    return masks


def _reach(masks: Sequence[int], start_bits: int, within: int) -> int:
    seen = start_bits & within
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= masks[low.bit_length() - 1]
            f ^= low
        nxt &= within & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def _sccs(masks: Sequence[int], within: int) -> list[int]:
    """Nontrivial strongly connected components of the graph restricted to
    ``within``, as bitmasks."""
    n = len(masks)
    fwd = {}
    verts = [v for v in range(n) if (within >> v) & 1]
    for v in verts:
        fwd[v] = _reach(masks, masks[v] & within, within)  # reachable in >= 1 step
    out, done = [], 0
    for v in verts:
        if (done >> v) & 1:
            continue
        if not (fwd[v] >> v) & 1:
            done |= 1 << v
            continue
        comp = 1 << v
        for w in verts:
            if w != v and (fwd[v] >> w) & 1 and (fwd[w] >> v) & 1:
                comp |= 1 << w
        done |= comp
        out.append(comp)
    return out


def _bad_component(masks, live_masks, pairs, within: int) -> int:
    """A witness set inside ``within``, or 0."""
    for comp in _sccs(masks, within):
        unfair = 0
        c = comp
        while c:
            low = c & -c
            v = low.bit_length() - 1
            if live_masks[v] & ~comp:
                unfair |= low
            c ^= low
        if unfair:
            found = _bad_component(masks, live_masks, pairs, comp & ~unfair)
            if found:
                return found
            continue
        holding = None
        for goals, R in pairs:
            if comp & R == 0 and all(comp & G for G in goals):
                holding = goals
                break
        if holding is None:
            return comp
        for G in holding:
            found = _bad_component(masks, live_masks, pairs, comp & ~G)
            if found:
                return found
    return 0


def _check_strategy_total(g, masks, reach_bits):
    for v in range(g.n):
        if masks[v] is None and (reach_bits >> v) & 1:
            raise ValueError("partial strategy: no move for reachable P0 vertex %s" % g.name(v))


def fair_violating_witness(g: GameGraph, strategy: Mapping[int, int], pairs, start: int) -> VertexSet | None:
    """Witness set for a fair P1 play from ``start`` violating every pair,
    or None if the strategy wins from ``start``."""
    masks = _allowed(g, strategy)
    full = (1 << g.n) - 1
    safe = [m if m is not None else 0 for m in masks]
    reach = _reach(safe, 1 << start, full) | (1 << start)
    _check_strategy_total(g, masks, reach)
    dead = sum(1 << v for v in range(g.n) if not g.succ[v])
    if reach & dead:
        low = reach & dead
        return VertexSet(g.n, low & -low)
    found = _bad_component(safe, g.live_mask, _norm_pairs(pairs), reach)
    return VertexSet(g.n, found) if found else None


def witness_by_subsets(g: GameGraph, strategy: Mapping[int, int], pairs, start: int) -> VertexSet | None:
    """Same question as :func:`fair_violating_witness`, answered by literally
    enumerating all vertex subsets (n <= 16)."""
    if g.n > 16:
        raise OracleBudgetError("subset enumeration is limited to 16 vertices")
    masks = _allowed(g, strategy)
    safe = [m if m is not None else 0 for m in masks]
    full = (1 << g.n) - 1
    reach = _reach(safe, 1 << start, full) | (1 << start)
    _check_strategy_total(g, masks, reach)
    for v in range(g.n):
        if (reach >> v) & 1 and not g.succ[v]:
            return VertexSet(g.n, 1 << v)
    npairs = _norm_pairs(pairs)
    for S in range(1, full + 1):
        if S & ~reach:
            continue
        ok = True
        members = [v for v in range(g.n) if (S >> v) & 1]
        for v in members:
            if safe[v] & S == 0 or g.live_mask[v] & ~S:
                ok = False
                break
        if not ok:
            continue
        for v in members:
            if _reach(safe, safe[v] & S, S) != S:
                ok = False
                break
        if not ok:
            continue
        if all(S & R or any(S & G == 0 for G in goals) for goals, R in npairs):
            return VertexSet(g.n, S)
    return None


def _strategy_space(g: GameGraph):
    p0 = [v for v in range(g.n) if g.owner[v] == Owner.P0 and g.succ[v]]
    return p0, [g.succ[v] for v in p0]


def strategy_count(g: GameGraph) -> int:
    total = 1
    for choices in _strategy_space(g)[1]:
        total *= len(choices)
    return total


def losing_under(g: GameGraph, strategy: Mapping[int, int], pairs) -> int:
    """Bitmask of start vertices from which P1 beats ``strategy``."""
    masks = [m if m is not None else 0 for m in _allowed(g, strategy)]
    full = (1 << g.n) - 1
    npairs = _norm_pairs(pairs)
    bad = sum(1 << v for v in range(g.n) if not g.succ[v])
    for comp in _sccs(masks, full):
        if _bad_component(masks, g.live_mask, npairs, comp):
            bad |= comp
    # backward closure: everything that can reach a bad vertex
    losing = bad
    changed = True
    while changed:
        changed = False
        for v in range(g.n):
            if not (losing >> v) & 1 and masks[v] & losing:
                losing |= 1 << v
                changed = True
    return losing


def brute_force_region(g: GameGraph, pairs, budget: int = 10**6) -> VertexSet:
    """Union over all memoryless P0 strategies of the vertices they win from."""
    count = strategy_count(g)
    if count > budget:
        raise OracleBudgetError("%d strategies exceed the budget of %d" % (count, budget))
    p0, choices = _strategy_space(g)
    full = (1 << g.n) - 1
    win = 0
    for pick in product(*choices):
        win |= full & ~losing_under(g, dict(zip(p0, pick)), pairs)
        if win == full:
            break
    return VertexSet(g.n, win)


def verify_strategy_sound(g: GameGraph, pairs, region: VertexSet, strategy: Mapping[int, int]) -> list[int]:
    """Vertices of ``region`` from which ``strategy`` is beaten; empty means sound."""
    return [v for v in region if fair_violating_witness(g, strategy, pairs, v) is not None]


# ------------------------------------------------------------------ condition encodings

def absorbing(g: GameGraph, sinks: VertexSet) -> GameGraph:
    """Copy of ``g`` where every vertex of ``sinks`` becomes a P0 self-loop."""
    owner = [Owner.P0 if v in sinks else o for v, o in enumerate(g.owner)]
    edges = [(u, v) for u, v in g.edges() if u not in sinks] + [(v, v) for v in sinks]
    live = [(u, v) for u, v in g.live if u not in sinks]
    return GameGraph.build(owner, edges, live, g.names)


def safe_reach_as_rabin(g: GameGraph, T: VertexSet, Q: VertexSet):
    """``Q U T`` as a one-pair Rabin game: T and the unsafe vertices become
    sinks, and the pair asks to visit T infinitely often."""
    stop = T | ~Q
    return absorbing(g, stop), [(T, ~T & stop)]


def safe_buchi_as_rabin(g: GameGraph, G: VertexSet, Q: VertexSet):
    """``□Q ∧ □◊G``: unsafe vertices become rejecting sinks."""
    return absorbing(g, ~Q), [(G & Q, ~Q)]


def safety_as_rabin(g: GameGraph, Q: VertexSet):
    return absorbing(g, ~Q), [(VertexSet.full(g.n), ~Q)]
