"""Game graphs with live edges, winning conditions, validation and transforms."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .symset import VertexSet


class Owner(enum.IntEnum):
    P0 = 0
    P1 = 1
    RANDOM = 2


def _normalize_edges(n: int, edges: Iterable[tuple[int, int]]) -> tuple[tuple[int, ...], ...]:
    succ: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError("edge (%r, %r) outside universe of size %d" % (u, v, n))
        succ[u].add(v)
    return tuple(tuple(sorted(s)) for s in succ)


@dataclass(frozen=True, eq=True)
class GameGraph:
    """Two-player arena; ``live`` is a set of P1 edges that must be taken
    infinitely often whenever their source is visited infinitely often.

    Successor lists are kept sorted by target id.  The live set is not
    checked here; :func:`validate` reports bad live edges.
    """

    owner: tuple[Owner, ...]
    succ: tuple[tuple[int, ...], ...]
    live: frozenset = frozenset()
    names: tuple[str, ...] | None = field(default=None, compare=False)

    @classmethod
    def build(cls, owner: Sequence, edges: Iterable[tuple[int, int]],
              live: Iterable[tuple[int, int]] = (), names: Sequence[str] | None = None) -> "GameGraph":
        n = len(owner)
        live = frozenset((int(u), int(v)) for u, v in live)
        edges = list(edges) + list(live)
        return cls(tuple(Owner(o) for o in owner), _normalize_edges(n, edges), live,
                   tuple(names) if names is not None else None)

    @property
    def n(self) -> int:
        return len(self.owner)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def name(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.succ[u]]

    def live_succ(self, v: int) -> tuple[int, ...]:
        return tuple(w for w in self.succ[v] if (v, w) in self.live)

    def set(self, members: Iterable[int] = ()) -> VertexSet:
        return VertexSet.of(self.n, members)

    @property
    def all(self) -> VertexSet:
        return VertexSet.full(self.n)

    @property
    def none(self) -> VertexSet:
        return VertexSet.empty(self.n)

    # precomputed bit masks used by the operators
    @cached_property
    def succ_mask(self) -> tuple[int, ...]:
        return tuple(sum(1 << w for w in s) for s in self.succ)

    @cached_property
    def live_mask(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for u, v in self.live:
            masks[u] |= 1 << v
        return tuple(masks)

    def _owner_mask(self, who: Owner) -> int:
        return sum(1 << v for v in range(self.n) if self.owner[v] == who)

    @cached_property
    def p0_mask(self) -> int:
        return self._owner_mask(Owner.P0)

    @cached_property
    def p1_mask(self) -> int:
        return self._owner_mask(Owner.P1)

    @cached_property
    def live_src_mask(self) -> int:
        mask = 0
        for u, _ in self.live:
            mask |= 1 << u
        return mask

    @property
    def V0(self) -> VertexSet:
        return VertexSet(self.n, self.p0_mask)

    @property
    def V1(self) -> VertexSet:
        return VertexSet(self.n, self.p1_mask)

    @property
    def live_sources(self) -> VertexSet:
        """The domain of the live-edge relation, always derived from ``live``."""
        return VertexSet(self.n, self.live_src_mask)

    @property
    def dead_ends(self) -> VertexSet:
        return VertexSet.of(self.n, (v for v in range(self.n) if not self.succ[v]))

    def with_live(self, live: Iterable[tuple[int, int]]) -> "GameGraph":
        return GameGraph.build(self.owner, self.edges(), live, self.names)

    def without_live(self) -> "GameGraph":
        return GameGraph(self.owner, self.succ, frozenset(), self.names)

    def relabel(self, perm: Sequence[int]) -> "GameGraph":
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        n = self.n
        owner = [Owner.P0] * n
        for v in range(n):
            owner[perm[v]] = self.owner[v]
        names = None
        if self.names:
            nm = [""] * n
            for v in range(n):
                nm[perm[v]] = self.names[v]
            names = nm
        return GameGraph.build(owner, [(perm[u], perm[v]) for u, v in self.edges()],
                               [(perm[u], perm[v]) for u, v in self.live], names)


@dataclass(frozen=True, eq=True)
class StochasticGameGraph:
    """Arena with P0, P1 and random vertices.  Distributions at random
    vertices are left implicit; only their support matters here."""

    owner: tuple[Owner, ...]
    succ: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = field(default=None, compare=False)

    @classmethod
    def build(cls, owner: Sequence, edges: Iterable[tuple[int, int]],
              names: Sequence[str] | None = None) -> "StochasticGameGraph":
        return cls(tuple(Owner(o) for o in owner), _normalize_edges(len(owner), edges),
                   tuple(names) if names is not None else None)

    @property
    def n(self) -> int:
        return len(self.owner)

    def name(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.succ[u]]

    def set(self, members: Iterable[int] = ()) -> VertexSet:
        return VertexSet.of(self.n, members)

    @property
    def all(self) -> VertexSet:
        return VertexSet.full(self.n)

    @property
    def none(self) -> VertexSet:
        return VertexSet.empty(self.n)

    @property
    def random_vertices(self) -> list[int]:
        return [v for v in range(self.n) if self.owner[v] == Owner.RANDOM]


# ---------------------------------------------------------------- conditions

@dataclass(frozen=True)
class SafeReach:
    T: VertexSet
    Q: VertexSet


@dataclass(frozen=True)
class Safety:
    Q: VertexSet


@dataclass(frozen=True)
class Buchi:
    G: VertexSet


@dataclass(frozen=True)
class SafeBuchi:
    G: VertexSet
    Q: VertexSet


@dataclass(frozen=True)
class CoBuchi:
    A: VertexSet


@dataclass(frozen=True)
class GenBuchi:
    F: tuple[VertexSet, ...]
    Q: VertexSet


@dataclass(frozen=True)
class GenCoBuchi:
    A: tuple[VertexSet, ...]


@dataclass(frozen=True)
class Rabin:
    """Pairs ``(G, R)``: visit G infinitely often and R finitely often."""
    pairs: tuple[tuple[VertexSet, VertexSet], ...]


@dataclass(frozen=True)
class GenRabin:
    """Pairs ``(goals, R)``: every goal set infinitely often, R finitely often."""
    pairs: tuple[tuple[tuple[VertexSet, ...], VertexSet], ...]


@dataclass(frozen=True)
class RabinChain:
    """Rabin pairs with R_1 ⊇ … ⊇ R_k and G_1 ⊇ … ⊇ G_k."""
    pairs: tuple[tuple[VertexSet, VertexSet], ...]


@dataclass(frozen=True)
class Parity:
    """Colors C_1..C_2k partitioning V; the largest color seen infinitely
    often must be even.  ``colors[i]`` holds color ``i + 1``."""
    colors: tuple[VertexSet, ...]


@dataclass(frozen=True)
class GR1:
    A: tuple[VertexSet, ...]
    F: tuple[VertexSet, ...]


@dataclass(frozen=True)
class Muller:
    F: tuple[VertexSet, ...]


Condition = (SafeReach | Safety | Buchi | SafeBuchi | CoBuchi | GenBuchi | GenCoBuchi
             | Rabin | GenRabin | RabinChain | Parity | GR1 | Muller)


def condition_sets(cond) -> list[VertexSet]:
    """All vertex sets mentioned by a condition."""
    if isinstance(cond, SafeReach):
        return [cond.T, cond.Q]
    if isinstance(cond, Safety):
        return [cond.Q]
    if isinstance(cond, Buchi):
        return [cond.G]
    if isinstance(cond, SafeBuchi):
        return [cond.G, cond.Q]
    if isinstance(cond, CoBuchi):
        return [cond.A]
    if isinstance(cond, GenBuchi):
        return [*cond.F, cond.Q]
    if isinstance(cond, GenCoBuchi):
        return list(cond.A)
    if isinstance(cond, (Rabin, RabinChain)):
        return [s for p in cond.pairs for s in p]
    if isinstance(cond, GenRabin):
        return [s for goals, r in cond.pairs for s in (*goals, r)]
    if isinstance(cond, Parity):
        return list(cond.colors)
    if isinstance(cond, GR1):
        return [*cond.A, *cond.F]
    if isinstance(cond, Muller):
        return list(cond.F)
    raise TypeError("unknown condition %r" % (cond,))


# ---------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __str__(self) -> str:
        lines = ["error: " + e for e in self.errors] + ["warning: " + w for w in self.warnings]
        return "\n".join(lines) if lines else "valid"


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


def chain_violations(pairs) -> list[str]:
    out = []
    for i in range(len(pairs) - 1):
        (g1, r1), (g2, r2) = pairs[i], pairs[i + 1]
        if not r2 <= r1:
            out.append("chain violation: R%d not contained in R%d" % (i + 2, i + 1))
        if not g2 <= g1:
            out.append("chain violation: G%d not contained in G%d" % (i + 2, i + 1))
    return out


def parity_violations(n: int, colors) -> list[str]:
    out = []
    if len(colors) % 2 or not colors:
        out.append("parity condition needs an even, positive number of colors")
    seen = VertexSet.empty(n)
    for i, c in enumerate(colors):
        if c & seen:
            out.append("color %d overlaps a lower color" % (i + 1))
        seen = seen | c
    if seen != VertexSet.full(n):
        out.append("colors do not cover vertices %s" % sorted(~seen))
    return out


def validate(game, cond=None) -> ValidationReport:
    rep = ValidationReport()
    n = game.n
    if isinstance(game, GameGraph):
        for u, v in sorted(game.live):
            if v not in game.succ[u]:
                rep.errors.append("live edge %s -> %s is not an edge" % (game.name(u), game.name(v)))
            if game.owner[u] != Owner.P1:
                rep.errors.append("live edge from P0 vertex %s" % game.name(u))
        for v, o in enumerate(game.owner):
            if o == Owner.RANDOM:
                rep.errors.append("random vertex %s in a two-player graph" % game.name(v))
    else:
        for v in game.random_vertices:
            if not game.succ[v]:
                rep.errors.append("random vertex %s has no successor" % game.name(v))
    for v in range(n):
        if not game.succ[v]:
            rep.warnings.append("dead end at vertex %s" % game.name(v))
    if cond is not None:
        for s in condition_sets(cond):
            if s.n != n:
                rep.errors.append("condition set over universe %d, graph has %d" % (s.n, n))
                return rep
        if isinstance(cond, Parity):
            rep.errors.extend(parity_violations(n, cond.colors))
        elif isinstance(cond, RabinChain):
            rep.errors.extend(chain_violations(cond.pairs))
        elif isinstance(cond, GenRabin):
            for i, (goals, _) in enumerate(cond.pairs):
                if not goals:
                    rep.errors.append("generalized pair %d has no goal sets" % (i + 1))
        elif isinstance(cond, (Rabin, GenCoBuchi)) and not (cond.pairs if isinstance(cond, Rabin) else cond.A):
            rep.errors.append("condition needs at least one pair")
        elif isinstance(cond, GenBuchi) and not cond.F:
            rep.errors.append("generalized Büchi condition needs at least one set")
        elif isinstance(cond, GR1) and (not cond.A or not cond.F):
            rep.errors.append("GR(1) condition needs at least one assumption and one guarantee")
        elif isinstance(cond, Muller):
            for i, f in enumerate(cond.F):
                if not f:
                    rep.errors.append("Muller set F%d is empty" % (i + 1))
    return rep


def ensure_valid(game, cond=None) -> ValidationReport:
    rep = validate(game, cond)
    if not rep.ok:
        raise ValidationError(rep)
    return rep


# ---------------------------------------------------------------- transforms

def muller_to_gen_rabin(n: int, F: Sequence[VertexSet]) -> GenRabin:
    """One generalized pair per Muller set: every member seen infinitely
    often, nothing outside it."""
    pairs = []
    for i, f in enumerate(F):
        if not f:
            raise ValueError("Muller set F%d is empty" % (i + 1))
        pairs.append((tuple(VertexSet.of(n, [v]) for v in f), ~f))
    return GenRabin(tuple(pairs))


def gr1_to_gen_rabin(n: int, A: Sequence[VertexSet], F: Sequence[VertexSet]) -> GenRabin:
    if not A or not F:
        raise ValueError("GR(1) needs at least one assumption and one guarantee")
    full = VertexSet.full(n)
    pairs = [((full,), a) for a in A]
    pairs.append((tuple(F), VertexSet.empty(n)))
    return GenRabin(tuple(pairs))


def parity_to_rabin_chain(n: int, colors: Sequence[VertexSet]) -> RabinChain:
    errs = parity_violations(n, colors)
    if errs:
        raise ValueError("; ".join(errs))
    k = len(colors) // 2
    # F[i] = union of colors i..2k, 1-based; F[2k+1] = empty
    F = [VertexSet.empty(n)] * (2 * k + 2)
    for i in range(2 * k, 0, -1):
        F[i] = F[i + 1] | colors[i - 1]
    return RabinChain(tuple((F[2 * i], F[2 * i + 1]) for i in range(1, k + 1)))


def gen_cobuchi_to_rabin(n: int, A: Sequence[VertexSet]) -> Rabin:
    full = VertexSet.full(n)
    return Rabin(tuple((full, ~a) for a in A))


def rabin_as_gen_rabin(pairs) -> GenRabin:
    return GenRabin(tuple(((g,), r) for g, r in pairs))


@dataclass(frozen=True)
class Embedding:
    """Result of a transform that changes the vertex universe.  ``embed[v]``
    is the image of original vertex ``v``."""
    game: GameGraph
    cond: object
    embed: tuple[int, ...]

    def project(self, s: VertexSet, n: int) -> VertexSet:
        return VertexSet.of(n, (v for v in range(n) if self.embed[v] in s))


def naive_streett_reduction(game: GameGraph, cond: Rabin) -> Embedding:
    """Replace every live edge (v, w) by a fresh P0 vertex vw with edges
    v -> vw -> w and add the pair ({v}, {vw}) ordered as (G, R)."""
    n = game.n
    live = sorted(game.live)
    m = n + len(live)
    owner = list(game.owner) + [Owner.P0] * len(live)
    names = list(game.names) if game.names else [str(v) for v in range(n)]
    edges = [(u, v) for u, v in game.edges() if (u, v) not in game.live]
    lift = lambda s: VertexSet(m, s.bits)
    pairs = [(lift(g), lift(r)) for g, r in cond.pairs]
    for j, (u, v) in enumerate(live):
        mid = n + j
        names.append("%s~%s" % (names[u], names[v]))
        edges += [(u, mid), (mid, v)]
        pairs.append((VertexSet.of(m, [u]), VertexSet.of(m, [mid])))
    g2 = GameGraph.build(owner, edges, (), names)
    return Embedding(g2, Rabin(tuple(pairs)), tuple(range(n)))


def gen_buchi_counter_product(game: GameGraph, cond: GenBuchi) -> Embedding:
    """Product with a goal counter b in [0, s).  The counter moves to b+1
    when leaving a vertex of F_b; the goal set holds the vertices (v, 0)
    reached by completing a full round.  Vertex (v, b) gets id v*s + b and
    original vertex v embeds as (v, 0).  The safety set Q is lifted."""
    s = len(cond.F)
    if s < 1:
        raise ValueError("generalized Büchi needs s >= 1")
    n = game.n
    m = n * s
    pid = lambda v, b: v * s + b

    def step(v: int, b: int) -> int:
        return (b + 1) % s if v in cond.F[b] else b

    owner, names, edges, live = [], [], [], []
    for v in range(n):
        for b in range(s):
            owner.append(game.owner[v])
            names.append("%s#%d" % (game.name(v), b))
    for v in range(n):
        for b in range(s):
            b2 = step(v, b)
            for w in game.succ[v]:
                edges.append((pid(v, b), pid(w, b2)))
                if (v, w) in game.live:
                    live.append((pid(v, b), pid(w, b2)))
    # goal: vertices of F_{s-1} carrying counter s-1 complete a round
    goal = VertexSet.of(m, (pid(v, s - 1) for v in cond.F[s - 1]))
    Q = VertexSet.of(m, (pid(v, b) for v in cond.Q for b in range(s)))
    g2 = GameGraph.build(owner, edges, live, names)
    return Embedding(g2, SafeBuchi(goal, Q), tuple(pid(v, 0) for v in range(n)))
