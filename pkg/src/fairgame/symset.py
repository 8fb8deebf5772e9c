"""Vertex sets over a fixed universe and the predecessor operators.

Sets are immutable bitsets backed by Python integers.  Every operator
application is counted by a :class:`StepCounter`; one application of any
operator is one symbolic step, whatever it does internally.
"""
from __future__ import annotations

from collections import Counter
from typing import Iterable, Iterator


class VertexSet:
    """Immutable subset of ``range(n)``."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if bits >> n:
            raise ValueError("bits outside universe of size %d" % n)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("VertexSet is immutable")

    def __reduce__(self):
        return (VertexSet, (self.n, self.bits))

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "VertexSet":
        bits = 0
        for v in members:
            if not 0 <= v < n:
                raise ValueError("vertex %r outside universe of size %d" % (v, n))
            bits |= 1 << v
        return cls(n, bits)

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(n, (1 << n) - 1)

    def _check(self, other: "VertexSet") -> None:
        if not isinstance(other, VertexSet):
            raise TypeError("expected VertexSet, got %s" % type(other).__name__)
        if other.n != self.n:
            raise ValueError("universe mismatch: %d vs %d" % (self.n, other.n))

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.bits & other.bits)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.bits | other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.bits & ~other.bits)

    def __xor__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.n, self.bits ^ other.bits)

    def __invert__(self) -> "VertexSet":
        return VertexSet(self.n, ((1 << self.n) - 1) & ~self.bits)

    def complement(self) -> "VertexSet":
        return ~self

    def __le__(self, other: "VertexSet") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __ge__(self, other: "VertexSet") -> bool:
        return other <= self

    def __lt__(self, other: "VertexSet") -> bool:
        return self <= other and self.bits != other.bits

    def __gt__(self, other: "VertexSet") -> bool:
        return other < self

    def __eq__(self, other) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.n == other.n and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.n and (self.bits >> v) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count() if hasattr(int, "bit_count") else bin(self.bits).count("1")

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return "VertexSet(%d, {%s})" % (self.n, ", ".join(map(str, self)))


class StepCounter:
    """Counts predecessor-operator applications, in total and per operator."""

    def __init__(self):
        self.total = 0
        self.by_op: Counter = Counter()

    def tick(self, op: str) -> None:
        self.total += 1
        self.by_op[op] += 1

    def snapshot(self) -> dict:
        return {"total": self.total, **dict(sorted(self.by_op.items()))}


class Operators:
    """Predecessor operators of one game graph, charged to one counter.

    ``g`` is any object exposing the precomputed masks of
    :class:`fairgame.model.GameGraph` (``n``, ``succ_mask``, ``live_mask``,
    ``p0_mask``, ``p1_mask``, ``live_src_mask``).
    """

    def __init__(self, g, counter: StepCounter | None = None):
        self.g = g
        self.n = g.n
        self.counter = counter if counter is not None else StepCounter()
        self._succ = g.succ_mask
        self._live = g.live_mask
        self._p0 = [v for v in range(g.n) if (g.p0_mask >> v) & 1]
        self._p1 = [v for v in range(g.n) if (g.p1_mask >> v) & 1]
        self._lsrc = [v for v in range(g.n) if (g.live_src_mask >> v) & 1]
        # non-live part of each P1 vertex's successors
        self._nonlive = [self._succ[v] & ~self._live[v] for v in range(g.n)]

    def _bits(self, s: VertexSet) -> int:
        if not isinstance(s, VertexSet):
            raise TypeError("expected VertexSet, got %s" % type(s).__name__)
        if s.n != self.n:
            raise ValueError("universe mismatch: %d vs %d" % (s.n, self.n))
        return s.bits

    def _set(self, bits: int) -> VertexSet:
        return VertexSet(self.n, bits)

    # raw bit-level helpers, uncounted
    def _ex(self, vs, masks, s: int) -> int:
        out = 0
        for v in vs:
            if masks[v] & s:
                out |= 1 << v
        return out

    def _all(self, vs, masks, s: int) -> int:
        out = 0
        for v in vs:
            m = masks[v]
            if m and m & ~s == 0:
                out |= 1 << v
        return out

    def _cpre(self, s: int) -> int:
        return self._ex(self._p0, self._succ, s) | self._all(self._p1, self._succ, s)

    # counted operators
    def pre_exists_0(self, s: VertexSet) -> VertexSet:
        """P0 vertices with some successor in ``s``."""
        self.counter.tick("pre_exists_0")
        return self._set(self._ex(self._p0, self._succ, self._bits(s)))

    def pre_forall_1(self, s: VertexSet) -> VertexSet:
        """P1 vertices with at least one successor, all of them in ``s``."""
        self.counter.tick("pre_forall_1")
        return self._set(self._all(self._p1, self._succ, self._bits(s)))

    def cpre(self, s: VertexSet) -> VertexSet:
        self.counter.tick("cpre")
        return self._set(self._cpre(self._bits(s)))

    def lpre_exists(self, s: VertexSet) -> VertexSet:
        """Live-edge sources with some live successor in ``s``."""
        self.counter.tick("lpre_exists")
        return self._set(self._ex(self._lsrc, self._live, self._bits(s)))

    def apre(self, y: VertexSet, x: VertexSet) -> VertexSet:
        self.counter.tick("apre")
        yb, xb = self._bits(y), self._bits(x)
        out = self._cpre(xb)
        out |= self._ex(self._lsrc, self._live, xb) & self._all(self._p1, self._succ, yb)
        return self._set(out)

    def pre_forall_0(self, s: VertexSet) -> VertexSet:
        """P0 vertices all of whose successors lie in ``s`` (vacuous for dead ends)."""
        self.counter.tick("pre_forall_0")
        sb = self._bits(s)
        out = 0
        for v in self._p0:
            if self._succ[v] & ~sb == 0:
                out |= 1 << v
        return self._set(out)

    def pre_exists_1(self, s: VertexSet) -> VertexSet:
        self.counter.tick("pre_exists_1")
        return self._set(self._ex(self._p1, self._succ, self._bits(s)))

    def pre_exists_1_minus_l(self, s: VertexSet) -> VertexSet:
        """P1 vertices without live edges having some successor in ``s``."""
        self.counter.tick("pre_exists_1_minus_l")
        sb = self._bits(s)
        out = self._ex(self._p1, self._succ, sb) & ~self.g.live_src_mask
        return self._set(out)

    def pre_exists_l(self, s: VertexSet) -> VertexSet:
        """Live-edge sources with any successor (live or not) in ``s``."""
        self.counter.tick("pre_exists_l")
        return self._set(self._ex(self._lsrc, self._succ, self._bits(s)))

    def pre_forall_l(self, s: VertexSet) -> VertexSet:
        """Live-edge sources all of whose successors lie in ``s``."""
        self.counter.tick("pre_forall_l")
        return self._set(self._all(self._lsrc, self._succ, self._bits(s)))

    def lpre_forall(self, s: VertexSet) -> VertexSet:
        """Live-edge sources all of whose live successors lie in ``s``."""
        self.counter.tick("lpre_forall")
        return self._set(self._all(self._lsrc, self._live, self._bits(s)))


def _ops(g, counter):
    return Operators(g, counter)


def pre_exists_0(g, s, counter=None):
    return _ops(g, counter).pre_exists_0(s)


def pre_forall_1(g, s, counter=None):
    return _ops(g, counter).pre_forall_1(s)


def cpre(g, s, counter=None):
    return _ops(g, counter).cpre(s)


def lpre_exists(g, s, counter=None):
    return _ops(g, counter).lpre_exists(s)


def apre(g, s, t, counter=None):
    return _ops(g, counter).apre(s, t)


def pre_forall_0(g, s, counter=None):
    return _ops(g, counter).pre_forall_0(s)


def pre_exists_1(g, s, counter=None):
    return _ops(g, counter).pre_exists_1(s)


def pre_exists_1_minus_l(g, s, counter=None):
    return _ops(g, counter).pre_exists_1_minus_l(s)


def pre_exists_l(g, s, counter=None):
    return _ops(g, counter).pre_exists_l(s)


def pre_forall_l(g, s, counter=None):
    return _ops(g, counter).pre_forall_l(s)


def lpre_forall(g, s, counter=None):
    return _ops(g, counter).lpre_forall(s)
