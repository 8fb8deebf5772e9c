"""Random instances shared by the test modules."""
import random

from hypothesis import strategies as st

from fairgame.model import GameGraph, Owner
from fairgame.symset import VertexSet


def rand_set(rng, n, p=0.4):
    return VertexSet.of(n, [v for v in range(n) if rng.random() < p])


def rand_game(rng, n, live_frac=0.3, owner_frac=0.5, dead_frac=0.0, max_deg=3):
    """Arena with optional dead ends; live edges are drawn from P1 edges."""
    owner = [Owner.P0 if rng.random() < owner_frac else Owner.P1 for _ in range(n)]
    edges = []
    for v in range(n):
        if rng.random() < dead_frac:
            continue
        for w in rng.sample(range(n), rng.randint(1, min(max_deg, n))):
            edges.append((v, w))
    live = [(u, v) for u, v in edges if owner[u] == Owner.P1 and rng.random() < live_frac]
    return GameGraph.build(owner, edges, live)


def samples(count, seed=0, nmax=8, dead_frac=0.15):
    """``count`` deterministic (rng, graph) samples of mixed size and liveness."""
    for i in range(count):
        rng = random.Random(seed * 100003 + i)
        n = rng.randint(1, nmax)
        yield rng, rand_game(rng, n, live_frac=rng.choice([0.0, 0.3, 0.7]), dead_frac=dead_frac)


@st.composite
def games(draw, nmax=7, dead_ends=True):
    n = draw(st.integers(1, nmax))
    owner = [draw(st.sampled_from([Owner.P0, Owner.P1])) for _ in range(n)]
    edges, live = [], []
    for v in range(n):
        lo = 0 if dead_ends else 1
        succ = draw(st.sets(st.integers(0, n - 1), min_size=lo, max_size=n))
        for w in sorted(succ):
            edges.append((v, w))
            if owner[v] == Owner.P1 and draw(st.booleans()):
                live.append((v, w))
    return GameGraph.build(owner, edges, live)


def vsets(n):
    return st.integers(0, (1 << n) - 1).map(lambda b: VertexSet(n, b))


@st.composite
def game_and_sets(draw, count=2, **kw):
    g = draw(games(**kw))
    return (g, *[draw(vsets(g.n)) for _ in range(count)])


def rand_colors(rng, n, k):
    cols = [rng.randrange(2 * k) for _ in range(n)]
    return tuple(VertexSet.of(n, [v for v in range(n) if cols[v] == c]) for c in range(2 * k))


def rand_chain(rng, n, k, p=0.5):
    """k pairs nested by inclusion, largest first."""
    G, R = rand_set(rng, n, 0.7), rand_set(rng, n, 0.7)
    pairs = []
    for _ in range(k):
        pairs.append((G, R))
        G, R = G & rand_set(rng, n, p), R & rand_set(rng, n, p)
    return tuple(pairs)


KINDS = ("reach", "safety", "buchi", "safe_buchi", "cobuchi", "gen_cobuchi", "rabin",
         "rabin_chain", "parity", "gen_buchi", "gen_rabin", "gr1", "muller")


def rand_condition(rng, kind, n, k=2):
    from fairgame import model as m
    S = lambda p=0.4: rand_set(rng, n, p)
    if kind == "reach":
        return m.SafeReach(S(0.3), ~S(0.2))
    if kind == "safety":
        return m.Safety(~S(0.25))
    if kind == "buchi":
        return m.Buchi(S())
    if kind == "safe_buchi":
        return m.SafeBuchi(S(), ~S(0.2))
    if kind == "cobuchi":
        return m.CoBuchi(S(0.6))
    if kind == "gen_cobuchi":
        return m.GenCoBuchi(tuple(S(0.6) for _ in range(k)))
    if kind == "rabin":
        return m.Rabin(tuple((S(), S(0.3)) for _ in range(k)))
    if kind == "rabin_chain":
        return m.RabinChain(rand_chain(rng, n, k))
    if kind == "parity":
        return m.Parity(rand_colors(rng, n, k))
    if kind == "gen_buchi":
        return m.GenBuchi(tuple(S(0.5) for _ in range(k)), ~S(0.15))
    if kind == "gen_rabin":
        return m.GenRabin(tuple((tuple(S(0.5) for _ in range(rng.randint(1, 2))), S(0.3)) for _ in range(k)))
    if kind == "gr1":
        return m.GR1(tuple(S() for _ in range(rng.randint(1, k))), tuple(S(0.5) for _ in range(rng.randint(1, 2))))
    if kind == "muller":
        return m.Muller(tuple(S(0.5) | VertexSet.of(n, [rng.randrange(n)]) for _ in range(rng.randint(1, k))))
    raise ValueError(kind)
