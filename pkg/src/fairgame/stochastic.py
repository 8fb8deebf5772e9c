"""Qualitative 2½-player games: reduction to fair games and an
end-component oracle for 1½-player games."""
from __future__ import annotations

from itertools import product

from .fixpoint import SolveResult, solve
from .model import GameGraph, Owner, StochasticGameGraph, ensure_valid
from .oracle import OracleBudgetError, _norm_pairs, _sccs
from .symset import VertexSet


def derand(sg: StochasticGameGraph) -> GameGraph:
    """Random vertices become P1 vertices and all their edges become live."""
    ensure_valid(sg)
    owner = [Owner.P1 if o == Owner.RANDOM else o for o in sg.owner]
    live = [(u, v) for u, v in sg.edges() if sg.owner[u] == Owner.RANDOM]
    return GameGraph.build(owner, sg.edges(), live, sg.names)


def solve_almost_sure(sg: StochasticGameGraph, cond, M: int = 0, record: bool = False) -> SolveResult:
    """Vertices from which P0 wins with probability 1 against every P1
    strategy, for any full-support distributions at random vertices."""
    return solve(derand(sg), cond, M, record)


def _check_mdp(sg: StochasticGameGraph) -> None:
    for v, o in enumerate(sg.owner):
        if o == Owner.P1 and len(sg.succ[v]) != 1:
            raise ValueError("not a 1½-player game: P1 vertex %s has %d successors"
                             % (sg.name(v), len(sg.succ[v])))


def _end_components(n, owner, succ_masks, within: int) -> list[int]:
    """Maximal end components inside ``within`` as bitmasks.  Random
    vertices must keep all successors inside, the others at least one."""
    out = []
    todo = [within]
    while todo:
        U = todo.pop()
        changed = True
        while changed:
            changed = False
            for v in range(n):
                if not (U >> v) & 1:
                    continue
                m = succ_masks[v]
                if (owner[v] == Owner.RANDOM and m & ~U) or m & U == 0:
                    U &= ~(1 << v)
                    changed = True
        if not U:
            continue
        inside = [m & U for m in succ_masks]
        comps = _sccs(inside, U)
        if len(comps) == 1 and comps[0] == U:
            out.append(U)
            continue
        # random vertices leaving their component are dropped by the next round
        todo.extend(comps)
    return sorted(out, key=lambda c: (c & -c).bit_length())


def mec_decompose(sg: StochasticGameGraph, within: VertexSet | None = None) -> list[VertexSet]:
    """Maximal end components of a 1½-player game (P1 vertices, if any,
    have a single successor and behave deterministically)."""
    _check_mdp(sg)
    w = within.bits if within is not None else (1 << sg.n) - 1
    succ = [sum(1 << x for x in s) for s in sg.succ]
    return [VertexSet(sg.n, c) for c in _end_components(sg.n, sg.owner, succ, w)]


def is_good(component: int, pairs) -> bool:
    """Some pair has R missed and every goal set met on the component."""
    return any(component & R == 0 and all(component & G for G in goals) for goals, R in pairs)


def mdp_almost_sure_oracle(sg: StochasticGameGraph, pairs, budget: int = 10**6) -> VertexSet:
    """Union over memoryless P0 strategies of the vertices from which every
    reachable end component of the induced chain is good."""
    _check_mdp(sg)
    ensure_valid(sg)
    npairs = _norm_pairs(pairs)
    n = sg.n
    p0 = [v for v in range(n) if sg.owner[v] == Owner.P0 and sg.succ[v]]
    total = 1
    for v in p0:
        total *= len(sg.succ[v])
    if total > budget:
        raise OracleBudgetError("%d strategies exceed the budget of %d" % (total, budget))
    full = (1 << n) - 1
    dead = sum(1 << v for v in range(n) if not sg.succ[v])
    # under a fixed strategy every vertex is random-like: all kept edges must stay inside
    chain_owner = [Owner.RANDOM] * n
    win = 0
    for pick in product(*[sg.succ[v] for v in p0]):
        choice = dict(zip(p0, pick))
        masks = [1 << choice[v] if v in choice else sum(1 << x for x in sg.succ[v]) for v in range(n)]
        bad = dead
        for comp in _end_components(n, chain_owner, masks, full):
            if not is_good(comp, npairs):
                bad |= comp
        losing = bad
        changed = True
        while changed:
            changed = False
            for v in range(n):
                if not (losing >> v) & 1 and masks[v] & losing:
                    losing |= 1 << v
                    changed = True
        win |= full & ~losing
        if win == full:
            break
    return VertexSet(n, win)
