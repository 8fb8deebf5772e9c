"""Nested fixpoint evaluation and the solvers built on it.

Every solver is written as nested ``nu``/``mu`` calls on an :class:`Engine`,
mirroring the shape of its fixpoint formula.  The engine counts iterations
per variable, optionally keeps the iterates of the final passes (needed for
ranks) together with every converged value of every variable, and optionally warm-starts variables from a bounded cache.

Warm starts.  A ν-variable is keyed by the permutation prefix and the
counters of the enclosing µ-variables; a µ-variable by the permutation
prefix and the counters of the enclosing ν-variables.  A stored value is
reused only if every counter in the key is below ``M`` and the environment
it was computed in dominates the current one in the right direction
(superset for ν, subset for µ).  Under that check a stored ν value is a
post-fixpoint above the greatest fixpoint (dually for µ), so iterating from
it reaches exactly the same fixpoint.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import chain
from typing import Callable, Sequence

from .model import (GR1, Buchi, CoBuchi, GameGraph, GenBuchi, GenCoBuchi, GenRabin, Muller,
                    Parity, Rabin, RabinChain, SafeBuchi, SafeReach, Safety, ensure_valid,
                    muller_to_gen_rabin)
from .symset import Operators, StepCounter, VertexSet


@dataclass(frozen=True)
class Record:
    """One µ-iteration inside the final passes of all enclosing ν-variables.

    ``perm``/``goals`` identify the branch, ``counters`` are the 1-based
    iteration numbers of the enclosing µ-variables including this one,
    ``S`` is the part of the new iterate contributed by this level and the
    levels above, ``X`` is the new iterate itself.
    """
    level: int
    perm: tuple
    goals: tuple
    counters: tuple
    S: VertexSet
    X: VertexSet
    tag: str = ""


@dataclass
class SolveResult:
    region: VertexSet
    steps: dict
    iterations: dict
    records: list | None = None
    cache_hits: int = 0
    kind: str = ""
    extra: dict = field(default_factory=dict)
    history: dict | None = None

    @property
    def total_steps(self) -> int:
        return self.steps.get("total", 0)


class _Frame:
    __slots__ = ("kind", "label", "count", "value", "buf")

    def __init__(self, kind, label, value, buf):
        self.kind = kind
        self.label = label
        self.count = 0
        self.value = value
        self.buf = buf


class Engine:
    def __init__(self, g: GameGraph, M: int = 0, record: bool = False,
                 counter: StepCounter | None = None):
        if M < 0:
            raise ValueError("acceleration bound M must be >= 0")
        self.g = g
        self.n = g.n
        self.ops = Operators(g, counter)
        self.M = M
        self.record = record
        self.stack: list[_Frame] = []
        self.cache: dict = {}
        self.cache_hits = 0
        self.iterations: Counter = Counter()
        self.history: dict = {}
        self.root: list = []
        self.V = VertexSet.full(g.n)
        self.E = VertexSet.empty(g.n)

    # ---- cache
    def _key(self, kind: str, label):
        if self.M <= 0:
            return None
        other = "mu" if kind == "nu" else "nu"
        counters = tuple(f.count for f in self.stack if f.kind == other)
        if any(c >= self.M for c in counters):
            return None
        return (kind, tuple(f.label for f in self.stack), label, counters)

    def _env(self):
        return tuple(f.value for f in self.stack)

    def _lookup(self, kind, key, env):
        if key is None or key not in self.cache:
            return None
        value, old_env = self.cache[key]
        if kind == "nu":
            ok = all(cur <= old for cur, old in zip(env, old_env))
        else:
            ok = all(old <= cur for cur, old in zip(env, old_env))
        if not ok:
            return None
        self.cache_hits += 1
        return value

    # ---- recording
    def _buf(self):
        return self.stack[-1].buf if self.stack else self.root

    def emit(self, rec) -> None:
        if self.record:
            self._buf().append(rec)

    def mu_counters(self) -> tuple:
        """1-based iteration numbers of the µ-variables on the stack."""
        return tuple(f.count + 1 for f in self.stack if f.kind == "mu")

    # ---- fixpoints
    def _fix(self, kind: str, label, name: str, body: Callable[[VertexSet], VertexSet]) -> VertexSet:
        key = self._key(kind, label)
        env = self._env() if key is not None else None
        warm = self._lookup(kind, key, env)
        init = self.V if kind == "nu" else self.E
        value = warm if warm is not None else init
        parent_buf = self._buf()
        frame = _Frame(kind, label, value, parent_buf if kind == "mu" else None)
        self.stack.append(frame)
        evals = 0
        try:
            while True:
                if kind == "nu":
                    frame.buf = [] if self.record else None
                new = body(frame.value)
                evals += 1
                self.iterations[name] += 1
                if kind == "nu":
                    assert new <= frame.value, "ν-iterate grew in %s" % name
                else:
                    assert frame.value <= new, "µ-iterate shrank in %s" % name
                if new == frame.value:
                    break
                frame.value = new
                frame.count += 1
                assert evals <= self.n + 1, "%s did not converge within n+1 iterations" % name
        finally:
            self.stack.pop()
        if kind == "nu" and self.record:
            parent_buf.extend(frame.buf)
        if key is not None:
            self.cache[key] = (frame.value, env)
        if self.record:
            self.history.setdefault(name, []).append(frame.value)
        return frame.value

    def nu(self, label, body, name: str | None = None) -> VertexSet:
        return self._fix("nu", label, name or _name("Y", label), body)

    def mu(self, label, body, name: str | None = None) -> VertexSet:
        return self._fix("mu", label, name or _name("X", label), body)

    def result(self, region: VertexSet, kind: str, **extra) -> SolveResult:
        return SolveResult(region, self.ops.counter.snapshot(), dict(sorted(self.iterations.items())),
                           self.root if self.record else None, self.cache_hits, kind, extra,
                           dict(sorted(self.history.items())) if self.record else None)


def _name(prefix: str, label) -> str:
    if isinstance(label, tuple):
        return prefix + "[" + " ".join(map(str, label)) + "]"
    return prefix + str(label)


def _check_sets(g: GameGraph, *sets: VertexSet) -> None:
    for s in sets:
        if s.n != g.n:
            raise ValueError("universe mismatch: set over %d, graph has %d" % (s.n, g.n))


# ------------------------------------------------------------------ reachability

def solve_safe_reach(g: GameGraph, T: VertexSet, Q: VertexSet, M: int = 0,
                     record: bool = False) -> SolveResult:
    """Vertices from which P0 forces ``Q U T`` against fair P1 behaviour."""
    ensure_valid(g)
    _check_sets(g, T, Q)
    eng = Engine(g, M, record)
    ops = eng.ops

    def ybody(Y):
        def xbody(X):
            new = T | (Q & ops.apre(Y, X))
            eng.emit(Record(0, (0,), (), eng.mu_counters(), new, new))
            return new
        return eng.mu("X", xbody)

    return eng.result(eng.nu("Y", ybody), "safe_reach")


def solve_reach_classic(g: GameGraph, T: VertexSet, Q: VertexSet, M: int = 0,
                        record: bool = False) -> SolveResult:
    """Attractor of ``T`` inside ``Q``; live edges are ignored."""
    ensure_valid(g)
    _check_sets(g, T, Q)
    eng = Engine(g, M, record)
    ops = eng.ops

    def xbody(X):
        new = T | (Q & ops.cpre(X))
        eng.emit(Record(0, (0,), (), eng.mu_counters(), new, new))
        return new

    return eng.result(eng.mu("X", xbody), "reach_classic")


def solve_dual_reach(g: GameGraph, T: VertexSet, Q: VertexSet, M: int = 0,
                     record: bool = False) -> SolveResult:
    """P1's region in the safe reachability game, computed directly.

    Ybar grows from the empty set; Xbar shrinks from V.  Ybar-iterates are
    recorded for the spoiler ranking.  P1 dead ends are added explicitly
    since a stuck play never reaches T.
    """
    ensure_valid(g)
    _check_sets(g, T, Q)
    eng = Engine(g, M, record)
    ops = eng.ops
    Tb, Qb = ~T, ~Q
    stuck1 = g.dead_ends & g.V1

    def ybody(Yb):
        ex_l = ops.pre_exists_l(Yb)

        def xbody(Xb):
            return Tb & (Qb | ops.pre_forall_0(Xb) | ops.pre_exists_1_minus_l(Xb)
                         | ops.lpre_forall(Xb) | ex_l | stuck1)
        new = eng.nu("Xbar", xbody)
        eng.emit(Record(0, (0,), (), eng.mu_counters(), new, new, "dual"))
        return new

    return eng.result(eng.mu("Ybar", ybody), "dual_reach")


def solve_safety(g: GameGraph, Q: VertexSet, M: int = 0, record: bool = False) -> SolveResult:
    ensure_valid(g)
    _check_sets(g, Q)
    eng = Engine(g, M, record)
    return eng.result(eng.nu("Y", lambda Y: Q & eng.ops.cpre(Y)), "safety")


# ------------------------------------------------------------------ Büchi family

def solve_safe_gen_buchi(g: GameGraph, F: Sequence[VertexSet], Q: VertexSet, M: int = 0,
                         record: bool = False) -> SolveResult:
    """``□Q ∧ □◊F_1 ∧ … ∧ □◊F_s`` under fairness."""
    ensure_valid(g)
    _check_sets(g, Q, *F)
    if not F:
        raise ValueError("need at least one goal set")
    eng = Engine(g, M, record)
    ops = eng.ops

    def ybody(Y):
        cY = ops.cpre(Y)
        out = None
        for b, Fb in enumerate(F):
            goal = Q & Fb & cY

            def xbody(X, b=b, goal=goal):
                new = goal | (Q & ops.apre(Y, X))
                eng.emit(Record(0, (0,), (b,), eng.mu_counters(), new, new))
                return new
            Xb = eng.mu(("X", b), xbody, "X%d" % (b + 1) if len(F) > 1 else "X")
            out = Xb if out is None else out & Xb
        return out

    return eng.result(eng.nu("Y", ybody), "safe_gen_buchi", goals=len(F))


def solve_safe_buchi(g: GameGraph, G: VertexSet, Q: VertexSet, M: int = 0,
                     record: bool = False) -> SolveResult:
    res = solve_safe_gen_buchi(g, [G], Q, M, record)
    res.kind = "safe_buchi"
    return res


# ------------------------------------------------------------------ Rabin family

def _permutation_children(order: str, remaining: tuple) -> tuple:
    if not remaining:
        return ()
    if order == "chain":
        return (max(remaining),)
    return remaining


def solve_gen_rabin(g: GameGraph, pairs, M: int = 0, record: bool = False,
                    order: str = "all", kind: str = "gen_rabin") -> SolveResult:
    """Generalized Rabin fixpoint; ``pairs`` is a sequence of
    ``(goal_sets, R)``.  ``order="chain"`` keeps only the permutation
    k, k-1, …, 1, which is exact for Rabin chains."""
    ensure_valid(g)
    if not pairs:
        raise ValueError("need at least one pair")
    for goals, R in pairs:
        if not goals:
            raise ValueError("every generalized pair needs a goal set")
        _check_sets(g, R, *goals)
    eng = Engine(g, M, record)
    ops = eng.ops
    k = len(pairs)
    # index 0 is the artificial pair with no goal and no rejection
    goals_of = [(eng.E,)] + [tuple(gs) for gs, _ in pairs]
    rbar = [eng.V] + [~R for _, R in pairs]

    def nest(j: int, perm: tuple, lpre: tuple, Qp: VertexSet, S: VertexSet) -> VertexSet:
        remaining = tuple(i for i in range(1, k + 1) if i not in perm)
        children = _permutation_children(order, remaining)
        goals = goals_of[perm[-1]]

        def ybody(Y):
            cY = ops.cpre(Y)
            out = None
            for l, G in enumerate(goals):
                gterm = Qp & G & cY

                def xbody(X, l=l, gterm=gterm):
                    S2 = S | gterm | (Qp & ops.apre(Y, X))
                    if not children:
                        if record:
                            eng.emit(Record(j, perm, lpre + (l,), eng.mu_counters(), S2, S2))
                        return S2
                    new = S2
                    recs_at = len(eng._buf()) if record else 0
                    for q in children:
                        new = new | nest(j + 1, perm + (q,), lpre + (l,), Qp & rbar[q], S2)
                    if record:
                        eng._buf().insert(recs_at, Record(j, perm, lpre + (l,), eng.mu_counters(), S2, new))
                    return new
                Xl = eng.mu(("X", perm, lpre + (l,)), xbody,
                            _name("X", perm) + ("/%d" % (l + 1) if len(goals) > 1 else ""))
                out = Xl if out is None else out & Xl
            return out
        return eng.nu(("Y", perm, lpre), ybody, _name("Y", perm))

    region = nest(0, (0,), (), eng.V, eng.E)
    return eng.result(region, kind, k=k, order=order)


def solve_rabin(g: GameGraph, pairs, M: int = 0, record: bool = False) -> SolveResult:
    """Plain Rabin pairs ``(G, R)``."""
    return solve_gen_rabin(g, [((G,), R) for G, R in pairs], M, record, kind="rabin")


def solve_rabin_chain(g: GameGraph, pairs, M: int = 0, record: bool = False) -> SolveResult:
    from .model import chain_violations
    errs = chain_violations(pairs)
    if errs:
        raise ValueError("; ".join(errs))
    return solve_gen_rabin(g, [((G,), R) for G, R in pairs], M, record, order="chain",
                           kind="rabin_chain")


def _parity_colors(g: GameGraph, colors: Sequence[VertexSet]) -> list[VertexSet]:
    from .model import parity_violations
    errs = parity_violations(g.n, colors)
    if errs:
        raise ValueError("; ".join(errs))
    return [VertexSet.empty(g.n)] + list(colors)  # 1-based


def solve_parity(g: GameGraph, colors: Sequence[VertexSet], M: int = 0,
                 record: bool = False) -> SolveResult:
    """Fair parity fixpoint.  Nesting Y_2k, X_2k-1, …, Y_2, X_1; the odd
    colors below 2i are paired with Apre(Y_2i, X_2i-1)."""
    ensure_valid(g)
    C = _parity_colors(g, colors)
    k = len(colors) // 2
    eng = Engine(g, M, record)
    ops = eng.ops
    below = [VertexSet.empty(g.n)]
    for c in C[1:]:
        below.append(below[-1] | c)  # below[i] = C_1 ∪ … ∪ C_i

    def level(i: int, S: VertexSet) -> VertexSet:
        def ybody(Y):
            even = C[2 * i] & ops.cpre(Y)

            def xbody(X):
                S2 = S | even | (below[2 * i - 1] & ops.apre(Y, X))
                new = S2 if i == 1 else level(i - 1, S2)
                eng.emit(Record(k - i, (i,), (), eng.mu_counters(), S2, new))
                return new
            return eng.mu(2 * i - 1, xbody)
        return eng.nu(2 * i, ybody)

    return eng.result(level(k, eng.E), "parity")


def solve_parity_classic(g: GameGraph, colors: Sequence[VertexSet], M: int = 0,
                         record: bool = False) -> SolveResult:
    """Usual parity fixpoint; live edges play no role."""
    ensure_valid(g)
    C = _parity_colors(g, colors)
    k = len(colors) // 2
    eng = Engine(g, M, record)
    ops = eng.ops

    def level(i: int, S: VertexSet) -> VertexSet:
        def ybody(Y):
            even = C[2 * i] & ops.cpre(Y)

            def xbody(X):
                S2 = S | even | (C[2 * i - 1] & ops.cpre(X))
                return S2 if i == 1 else level(i - 1, S2)
            return eng.mu(2 * i - 1, xbody)
        return eng.nu(2 * i, ybody)

    return eng.result(level(k, eng.E), "parity_classic")


def solve_gen_cobuchi(g: GameGraph, A: Sequence[VertexSet], M: int = 0,
                      record: bool = False) -> SolveResult:
    """``◊□A_1 ∨ … ∨ ◊□A_r`` under fairness."""
    ensure_valid(g)
    _check_sets(g, *A)
    if not A:
        raise ValueError("need at least one set")
    eng = Engine(g, M, record)
    ops = eng.ops

    def y0body(Y0):
        def x0body(X0):
            base = ops.apre(Y0, X0)
            out = base
            for a, Aa in enumerate(A):
                out = out | eng.nu(a + 1, lambda Ya, Aa=Aa: base | (Aa & ops.cpre(Ya)))
            return out
        return eng.mu(0, x0body)

    return eng.result(eng.nu(0, y0body), "gen_cobuchi")


def solve_gr1(g: GameGraph, A: Sequence[VertexSet], F: Sequence[VertexSet], M: int = 0,
              record: bool = False) -> SolveResult:
    """``□◊A_1 ∧ … ∧ □◊A_r → □◊F_1 ∧ … ∧ □◊F_s`` under fairness."""
    ensure_valid(g)
    _check_sets(g, *A, *F)
    if not A or not F:
        raise ValueError("need at least one assumption and one guarantee")
    eng = Engine(g, M, record)
    ops = eng.ops
    Abar = [~a for a in A]

    def ybody(Y):
        cY = ops.cpre(Y)
        out = None
        for b, Fb in enumerate(F):
            goal = Fb & cY

            def xbody(X, goal=goal):
                base = goal | ops.apre(Y, X)
                new = base
                for a, Ab in enumerate(Abar):
                    new = new | eng.nu(("Ya", a + 1),
                                       lambda Ya, Ab=Ab: base | (Ab & ops.cpre(Ya)),
                                       "Y%d" % (a + 1))
                return new
            Xb = eng.mu(("X", b), xbody, "X/%d" % (b + 1))
            out = Xb if out is None else out & Xb
        return out

    return eng.result(eng.nu("Yk", ybody, "Yk"), "gr1")


# ------------------------------------------------------------------ dispatch

def solve(g: GameGraph, cond, M: int = 0, record: bool = False) -> SolveResult:
    """Solve any supported condition."""
    ensure_valid(g, cond)
    V = VertexSet.full(g.n)
    if isinstance(cond, SafeReach):
        return solve_safe_reach(g, cond.T, cond.Q, M, record)
    if isinstance(cond, Safety):
        return solve_safety(g, cond.Q, M, record)
    if isinstance(cond, Buchi):
        return solve_safe_buchi(g, cond.G, V, M, record)
    if isinstance(cond, SafeBuchi):
        return solve_safe_buchi(g, cond.G, cond.Q, M, record)
    if isinstance(cond, CoBuchi):
        return solve_gen_cobuchi(g, [cond.A], M, record)
    if isinstance(cond, GenBuchi):
        return solve_safe_gen_buchi(g, cond.F, cond.Q, M, record)
    if isinstance(cond, GenCoBuchi):
        return solve_gen_cobuchi(g, cond.A, M, record)
    if isinstance(cond, Rabin):
        return solve_rabin(g, cond.pairs, M, record)
    if isinstance(cond, GenRabin):
        return solve_gen_rabin(g, cond.pairs, M, record)
    if isinstance(cond, RabinChain):
        return solve_rabin_chain(g, cond.pairs, M, record)
    if isinstance(cond, Parity):
        return solve_parity(g, cond.colors, M, record)
    if isinstance(cond, GR1):
        return solve_gr1(g, cond.A, cond.F, M, record)
    if isinstance(cond, Muller):
        return solve_gen_rabin(g, muller_to_gen_rabin(g.n, cond.F).pairs, M, record, kind="muller")
    raise TypeError("unsupported condition %r" % (cond,))
