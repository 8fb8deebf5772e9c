"""Ranks and winning strategies.

Rabin-type ranks are words ``p0 i0 p1 i1 … pk ik`` compared
lexicographically; vertices outside the winning region have rank ∞
(``None`` here).  Two conventions are provided:

``"entry"`` (default): the word records the state of every µ-counter at
    the moment the vertex first enters the innermost µ-variable during the
    final passes of all enclosing ν-variables.  Outer counters give the
    index of the iterate the variable currently holds (0 for the initial
    empty set), the innermost counter the index of the iterate that
    contains the vertex.
``"postfix"``: the vertex gets ``δ p_j i_j`` padded with the smallest
    remaining postfix ``p 0 p' 0 …`` for every level j whose partial union
    ``S`` contains it, with all counters 1-based.

P0 moves to a successor of minimal rank, ties broken by lowest id.
Generalized conditions carry a goal index per pair (or per goal set, for
generalized Büchi) as memory and advance it when the current goal is
visited.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from .fixpoint import (Record, SolveResult, solve_dual_reach, solve_gen_rabin,
                       solve_safe_gen_buchi, solve_safe_reach, solve_safety)
from .model import (GR1, Buchi, CoBuchi, GameGraph, GenBuchi, GenCoBuchi, GenRabin, Muller,
                    Owner, Parity, Rabin, RabinChain, SafeBuchi, SafeReach, Safety,
                    gen_cobuchi_to_rabin, gr1_to_gen_rabin, muller_to_gen_rabin,
                    parity_to_rabin_chain)
from .symset import VertexSet

Rank = tuple | None  # None is ∞


def rank_key(r: Rank):
    return (1, ()) if r is None else (0, r)


def format_rank(r: Rank) -> str:
    if r is None:
        return "inf"
    if all(0 <= x < 10 for x in r):
        return "".join(map(str, r))
    return ".".join(map(str, r))


@dataclass
class RankTable:
    """Rank words per vertex, one table per memory state."""
    ranks: dict = field(default_factory=dict)    # memory -> {v: word}

    def rank(self, v: int, mem=()) -> Rank:
        return self.ranks.get(mem, {}).get(v)

    def table(self, mem=()) -> dict:
        return self.ranks.get(mem, {})


def _lower(table: dict, v: int, word: tuple) -> None:
    old = table.get(v)
    if old is None or word < old:
        table[v] = word


def _require_records(res: SolveResult):
    if res.records is None:
        raise ValueError("ranks need a solve with record=True")
    return res.records


def extract_reach_ranks(res: SolveResult) -> RankTable:
    """rank(v) = i iff v enters the µ-iterates in iteration i of the final pass."""
    table: dict = {}
    for rec in _require_records(res):
        for v in rec.X:
            _lower(table, v, (rec.counters[-1],))
    return RankTable({(): table})


def extract_dual_ranks(res: SolveResult) -> RankTable:
    table: dict = {}
    for rec in _require_records(res):
        if rec.tag == "dual":
            for v in rec.X:
                _lower(table, v, (rec.counters[-1],))
    return RankTable({(): table})


def _innermost(records):
    depth = max(r.level for r in records) if records else 0
    return depth, [r for r in records if r.level == depth]


def _entry_word(rec: Record) -> tuple:
    word = []
    last = len(rec.perm) - 1
    for j, (p, c) in enumerate(zip(rec.perm, rec.counters)):
        word += [p, c if j == last else c - 1]
    return tuple(word)


def _postfix_word(rec: Record, k: int, order: str) -> tuple:
    word = []
    for p, c in zip(rec.perm, rec.counters):
        word += [p, c]
    rest = sorted(set(range(1, k + 1)) - set(rec.perm), reverse=(order == "chain"))
    for p in rest:
        word += [p, 0]
    return tuple(word)


def _consistent(rec: Record, mem: tuple, multi: tuple) -> bool:
    """Does the record's goal chain agree with memory ``mem``?  ``multi``
    lists the pairs whose goal index is remembered."""
    for p, l in zip(rec.perm[1:], rec.goals[1:]):
        if p in multi and mem[multi.index(p)] != l:
            return False
    return True


def extract_rabin_ranks(res: SolveResult, pairs=None, convention: str = "entry") -> RankTable:
    """Rank table of a (generalized) Rabin solve made with ``record=True``.

    ``pairs`` (as ``(goal_sets, R)``) is needed only for generalized pairs,
    where one table is built per goal-index memory state.
    """
    records = _require_records(res)
    k = res.extra.get("k", 0)
    order = res.extra.get("order", "all")
    multi, sizes = _memory_layout(pairs)
    mems = list(product(*[range(s) for s in sizes])) if multi else [()]
    ranks = {}
    if convention == "entry":
        _, recs = _innermost(records)
        for mem in mems:
            table: dict = {}
            for rec in recs:
                if multi and not _consistent(rec, mem, multi):
                    continue
                w = _entry_word(rec)
                for v in rec.X:
                    _lower(table, v, w)
            ranks[mem] = table
    elif convention == "postfix":
        for mem in mems:
            table = {}
            for rec in records:
                if multi and not _consistent(rec, mem, multi):
                    continue
                w = _postfix_word(rec, k, order)
                for v in rec.S:
                    _lower(table, v, w)
            ranks[mem] = table
    else:
        raise ValueError("unknown rank convention %r" % convention)
    return RankTable(ranks)


def _memory_layout(pairs):
    """Pairs (1-based) with more than one goal set, and their goal counts."""
    if not pairs:
        return (), ()
    multi = tuple(i + 1 for i, (goals, _) in enumerate(pairs) if len(goals) > 1)
    sizes = tuple(len(pairs[i - 1][0]) for i in multi)
    return multi, sizes


# ------------------------------------------------------------------ strategies

@dataclass
class Strategy:
    """Finite-memory strategy for one player.

    At vertex ``v`` with memory ``m`` the memory first becomes
    ``update(v, m)``; then, if ``v`` belongs to the player, the play moves
    to ``moves[(v, m')]``.  Memoryless strategies use the single memory
    state ``()``.
    """
    player: Owner
    moves: dict
    memories: list
    initial: object = ()
    update_table: dict = field(default_factory=dict)

    @property
    def memoryless(self) -> bool:
        return len(self.memories) == 1

    def update(self, v: int, mem):
        return self.update_table.get((v, mem), mem)

    def move(self, v: int, mem=()) -> int:
        try:
            return self.moves[(v, mem)]
        except KeyError:
            raise ValueError("no move at vertex %d: not a winning vertex of this player" % v) from None

    def as_map(self) -> dict:
        if not self.memoryless:
            raise ValueError("strategy needs memory")
        return {v: w for (v, _), w in self.moves.items()}

    def lines(self, g: GameGraph) -> list[str]:
        out = []
        for (v, mem), w in sorted(self.moves.items(), key=lambda t: (t[0][0], t[0][1])):
            s = "%s -> %s" % (g.name(v), g.name(w))
            if not self.memoryless:
                s += " @ " + ".".join(str(x + 1) for x in mem)
            out.append(s)
        return out


def _argmin(g: GameGraph, v: int, table: Mapping[int, tuple]) -> int:
    best = None
    for w in g.succ[v]:
        key = rank_key(table.get(w))
        if best is None or key < best[0]:
            best = (key, w)
    return best[1]


def _memoryless(g: GameGraph, region: VertexSet, table: Mapping[int, tuple]) -> Strategy:
    moves = {}
    for v in region:
        if g.owner[v] == Owner.P0 and g.succ[v]:
            moves[(v, ())] = _argmin(g, v, table)
    return Strategy(Owner.P0, moves, [()])


def _goal_cycling(g: GameGraph, region: VertexSet, tables: dict, multi_goals: list) -> Strategy:
    """``multi_goals[t]`` is the goal list for memory component t."""
    sizes = [len(gs) for gs in multi_goals]
    mems = list(product(*[range(s) for s in sizes]))
    update = {}
    for v in range(g.n):
        for mem in mems:
            new = tuple((l + 1) % sizes[t] if v in multi_goals[t][l] else l for t, l in enumerate(mem))
            if new != mem:
                update[(v, mem)] = new
    moves = {}
    for v in region:
        if g.owner[v] == Owner.P0 and g.succ[v]:
            for mem in mems:
                moves[(v, mem)] = _argmin(g, v, tables[mem])
    return Strategy(Owner.P0, moves, mems, mems[0], update)


def strategy_from_rabin(g: GameGraph, res: SolveResult, pairs, convention: str = "entry") -> Strategy:
    """Rank-minimal strategy from a recorded (generalized) Rabin solve."""
    ranks = extract_rabin_ranks(res, pairs, convention)
    multi, _ = _memory_layout(pairs)
    if not multi:
        return _memoryless(g, res.region, ranks.table())
    return _goal_cycling(g, res.region, ranks.ranks, [pairs[i - 1][0] for i in multi])


def _gen_rabin_form(g: GameGraph, cond):
    """Condition as generalized pairs plus the permutation order to use."""
    n = g.n
    if isinstance(cond, Rabin):
        return [((G,), R) for G, R in cond.pairs], "all"
    if isinstance(cond, RabinChain):
        return [((G,), R) for G, R in cond.pairs], "chain"
    if isinstance(cond, Parity):
        return [((G,), R) for G, R in parity_to_rabin_chain(n, cond.colors).pairs], "chain"
    if isinstance(cond, GenCoBuchi):
        return [((G,), R) for G, R in gen_cobuchi_to_rabin(n, cond.A).pairs], "all"
    if isinstance(cond, CoBuchi):
        return [((G,), R) for G, R in gen_cobuchi_to_rabin(n, [cond.A]).pairs], "all"
    if isinstance(cond, GenRabin):
        return list(cond.pairs), "all"
    if isinstance(cond, GR1):
        return list(gr1_to_gen_rabin(n, cond.A, cond.F).pairs), "all"
    if isinstance(cond, Muller):
        return list(muller_to_gen_rabin(n, cond.F).pairs), "all"
    return None, None


def extract_p0_strategy(g: GameGraph, cond, convention: str = "entry") -> tuple[VertexSet, Strategy]:
    """Winning region and a winning P0 strategy for ``cond``.

    The region is recomputed without acceleration so that the recorded
    iterates are the plain ones.
    """
    V = VertexSet.full(g.n)
    pairs, order = _gen_rabin_form(g, cond)
    if pairs is not None:
        res = solve_gen_rabin(g, pairs, 0, True, order=order)
        return res.region, strategy_from_rabin(g, res, pairs, convention)
    if isinstance(cond, SafeReach):
        res = solve_safe_reach(g, cond.T, cond.Q, 0, True)
        return res.region, _memoryless(g, res.region, extract_reach_ranks(res).table())
    if isinstance(cond, Safety):
        res = solve_safety(g, cond.Q)
        table = {v: () for v in res.region}
        return res.region, _memoryless(g, res.region, table)
    if isinstance(cond, (Buchi, SafeBuchi, GenBuchi)):
        F = cond.F if isinstance(cond, GenBuchi) else (cond.G,)
        Q = V if isinstance(cond, Buchi) else cond.Q
        res = solve_safe_gen_buchi(g, F, Q, 0, True)
        tables = {}
        for rec in res.records:
            t = tables.setdefault((rec.goals[0],) if len(F) > 1 else (), {})
            for v in rec.X:
                _lower(t, v, (rec.counters[-1],))
        if len(F) == 1:
            return res.region, _memoryless(g, res.region, tables.get((), {}))
        return res.region, _goal_cycling(g, res.region, tables, [tuple(F)])
    raise TypeError("unsupported condition %r" % (cond,))


def extract_p1_spoiler_reach(g: GameGraph, T: VertexSet, Q: VertexSet) -> tuple[VertexSet, Strategy]:
    """P1's region in the safe reachability game and a memoryless spoiler
    moving to a successor of minimal dual rank."""
    res = solve_dual_reach(g, T, Q, 0, True)
    table = extract_dual_ranks(res).table()
    moves = {}
    for v in res.region:
        if g.owner[v] == Owner.P1 and g.succ[v]:
            moves[(v, ())] = _argmin(g, v, table)
    return res.region, Strategy(Owner.P1, moves, [()])


# ------------------------------------------------------------------ products

def memory_product(g: GameGraph, strat: Strategy):
    """Unfold a finite-memory P0 strategy into a memoryless one on the
    product arena.  Product vertex ``(v, m)`` means: at ``v`` with memory
    ``m`` before the update.  Returns (graph, memoryless map, index)."""
    mems = strat.memories
    index = {(v, m): i for i, (v, m) in enumerate(product(range(g.n), mems))}
    owner, edges, live, names, moves = [], [], [], [], {}
    for (v, m), i in index.items():
        owner.append(g.owner[v])
        names.append("%s@%s" % (g.name(v), ".".join(str(x + 1) for x in m)))
        m2 = strat.update(v, m)
        for w in g.succ[v]:
            edges.append((i, index[(w, m2)]))
            if (v, w) in g.live:
                live.append((i, index[(w, m2)]))
        if g.owner[v] == Owner.P0 and (v, m2) in strat.moves:
            moves[i] = index[(strat.moves[(v, m2)], m2)]
    return GameGraph.build(owner, edges, live, names), moves, index


def lift_pairs(pairs, index, n_product: int):
    """Lift pairs over V to the product by ignoring memory."""
    def lift(s: VertexSet) -> VertexSet:
        return VertexSet.of(n_product, (i for (v, _), i in index.items() if v in s))
    out = []
    for first, R in pairs:
        goals = (first,) if isinstance(first, VertexSet) else tuple(first)
        out.append((tuple(lift(G) for G in goals), lift(R)))
    return out
