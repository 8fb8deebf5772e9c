"""Deterministic instance generators."""
from __future__ import annotations

import random

from .model import Buchi, GameGraph, Owner, Parity, Rabin, StochasticGameGraph
from .symset import VertexSet


def _check_frac(name: str, x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise ValueError("%s must lie in [0, 1], got %r" % (name, x))


def _random_set(rng: random.Random, n: int, frac: float) -> VertexSet:
    return VertexSet.of(n, (v for v in range(n) if rng.random() < frac))


def random_arena(rng: random.Random, n: int, owner_frac: float = 0.5, max_degree: int = 4):
    """Owners and successor lists; every vertex gets 1..max_degree successors."""
    owner = [Owner.P0 if rng.random() < owner_frac else Owner.P1 for _ in range(n)]
    edges = []
    for v in range(n):
        d = rng.randint(1, min(max_degree, n))
        edges += [(v, w) for w in sorted(rng.sample(range(n), d))]
    return owner, edges


def random_fair_game(seed: int, n: int, k: int, owner_frac: float = 0.5, live_frac: float = 0.05,
                     member_frac: float = 0.05) -> tuple[GameGraph, Rabin]:
    """Random arena with live edges drawn from P1 edges and k random Rabin
    pairs whose sets contain each vertex with probability ``member_frac``."""
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    for name, x in (("owner_frac", owner_frac), ("live_frac", live_frac), ("member_frac", member_frac)):
        _check_frac(name, x)
    rng = random.Random(seed)
    owner, edges = random_arena(rng, n, owner_frac)
    live = [(u, v) for u, v in edges if owner[u] == Owner.P1 and rng.random() < live_frac]
    g = GameGraph.build(owner, edges, live)
    pairs = tuple((_random_set(rng, n, member_frac), _random_set(rng, n, member_frac)) for _ in range(k))
    return g, Rabin(pairs)


def random_sets(seed: int, n: int, count: int, frac: float) -> list[VertexSet]:
    rng = random.Random(seed)
    return [_random_set(rng, n, frac) for _ in range(count)]


def random_mdp(seed: int, n: int, random_frac: float = 0.4) -> StochasticGameGraph:
    """1½-player arena: P0 and random vertices only."""
    _check_frac("random_frac", random_frac)
    rng = random.Random(seed)
    owner, edges = random_arena(rng, n, 1.0)
    owner = [Owner.RANDOM if rng.random() < random_frac else Owner.P0 for _ in range(n)]
    return StochasticGameGraph.build(owner, edges)


def random_stochastic_game(seed: int, n: int, p0_frac: float = 0.4, random_frac: float = 0.3):
    rng = random.Random(seed)
    owner, edges = random_arena(rng, n, 1.0)
    owner = []
    for _ in range(n):
        x = rng.random()
        owner.append(Owner.P0 if x < p0_frac else Owner.RANDOM if x < p0_frac + random_frac else Owner.P1)
    return StochasticGameGraph.build(owner, edges)


def gadget_chain(m: int, encoding: str = "buchi"):
    """m copies of the two-vertex live-edge gadget in series.

    Copy i has a P1 vertex p_i that loops or takes the live edge to the P0
    vertex q_i; q_i moves on to p_{i+1}, and the last q returns to p_1.
    Only the last q is a goal, so P0 wins everywhere but the attractor
    has depth proportional to m.  ``encoding`` states the goal as a Büchi
    condition, a one-pair Rabin condition (G, ∅) or a two-color parity
    condition.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    owner, names, edges, live = [], [], [], []
    for i in range(m):
        p, q = 2 * i, 2 * i + 1
        owner += [Owner.P1, Owner.P0]
        names += ["p%d" % (i + 1), "q%d" % (i + 1)]
        edges += [(p, p), (p, q)]
        live.append((p, q))
        edges.append((q, (p + 2) % (2 * m)))
    g = GameGraph.build(owner, edges, live, names)
    G = g.set([2 * m - 1])
    if encoding == "buchi":
        return g, Buchi(G)
    if encoding == "rabin":
        return g, Rabin(((G, g.none),))
    if encoding == "parity":
        return g, Parity((~G, G))
    raise ValueError("unknown encoding %r" % encoding)
