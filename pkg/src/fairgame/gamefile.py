"""Line-oriented text format for games.

::

    fairgame v1
    # comment
    vertex q1 p0
    vertex q2 p1
    edge q1 q2
    edge q2 q1 live
    condition rabin
    G1: q1
    R1: q2

Owners are ``p0``, ``p1`` or ``random``; a file with random vertices is a
stochastic game.  Set lines name their set followed by member vertices.
"""
from __future__ import annotations

import re

from .model import (GR1, Buchi, CoBuchi, GameGraph, GenBuchi, GenCoBuchi, GenRabin, Muller,
                    Owner, Parity, Rabin, RabinChain, SafeBuchi, SafeReach, Safety,
                    StochasticGameGraph)
from .symset import VertexSet

HEADER = "fairgame v1"

OWNERS = {"p0": Owner.P0, "p1": Owner.P1, "random": Owner.RANDOM}
OWNER_NAMES = {v: k for k, v in OWNERS.items()}

CONDITIONS = ("reach", "safety", "buchi", "safe_buchi", "cobuchi", "gen_buchi", "gen_cobuchi",
              "rabin", "gen_rabin", "rabin_chain", "parity", "gr1", "muller")

_SET_NAME = re.compile(r"^([A-Za-z]+)(\d+(?:\.\d+)?)?$")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__("line %d: %s" % (line, msg) if line else msg)
        self.line = line


def _sets_by_name(sets: dict, n: int):
    """Split named sets into {letter: {index: VertexSet}}."""
    groups: dict = {}
    for name, (members, lineno) in sets.items():
        m = _SET_NAME.match(name)
        if not m:
            raise ParseError("bad set name %r" % name, lineno)
        letter, idx = m.group(1), m.group(2)
        groups.setdefault(letter, {})[idx] = (VertexSet.of(n, members), lineno)
    return groups


def _indexed(group: dict, letter: str, lineno) -> dict[int, VertexSet]:
    out = {}
    for idx, (s, ln) in group.get(letter, {}).items():
        if idx is None or "." in idx:
            raise ParseError("set %s needs a plain index, e.g. %s1" % (letter, letter), ln)
        out[int(idx)] = s
    return out


def _build_condition(ctype: str, sets: dict, n: int, lineno: int):
    groups = _sets_by_name(sets, n)
    full, empty = VertexSet.full(n), VertexSet.empty(n)
    allowed = {
        "reach": {"T", "Q"}, "safety": {"Q"}, "buchi": {"G"}, "safe_buchi": {"G", "Q"},
        "cobuchi": {"A"}, "gen_buchi": {"F", "Q"}, "gen_cobuchi": {"A"}, "rabin": {"G", "R"},
        "gen_rabin": {"G", "R"}, "rabin_chain": {"G", "R"}, "parity": {"color"},
        "gr1": {"A", "F"}, "muller": {"F"},
    }[ctype]
    for letter, members in groups.items():
        if letter not in allowed:
            ln = next(iter(members.values()))[1]
            raise ParseError("set %s not used by condition %s" % (letter, ctype), ln)

    def single(letter, default):
        grp = groups.get(letter, {})
        if not grp:
            return default
        if list(grp) != [None]:
            raise ParseError("condition %s takes a single set %s" % (ctype, letter), lineno)
        return grp[None][0]

    def seq(letter, required=True):
        d = _indexed(groups, letter, lineno)
        if not d:
            if required:
                raise ParseError("condition %s needs sets %s1, %s2, …" % (ctype, letter, letter), lineno)
            return ()
        return tuple(d.get(i, empty) for i in range(1, max(d) + 1))

    if ctype == "reach":
        return SafeReach(single("T", empty), single("Q", full))
    if ctype == "safety":
        return Safety(single("Q", full))
    if ctype == "buchi":
        return Buchi(single("G", empty))
    if ctype == "safe_buchi":
        return SafeBuchi(single("G", empty), single("Q", full))
    if ctype == "cobuchi":
        return CoBuchi(single("A", empty))
    if ctype == "gen_buchi":
        return GenBuchi(seq("F"), single("Q", full))
    if ctype == "gen_cobuchi":
        return GenCoBuchi(seq("A"))
    if ctype in ("rabin", "rabin_chain"):
        G = _indexed(groups, "G", lineno)
        R = _indexed(groups, "R", lineno)
        k = max([*G, *R], default=0)
        if k == 0:
            raise ParseError("condition %s needs at least one pair" % ctype, lineno)
        pairs = tuple((G.get(i, empty), R.get(i, empty)) for i in range(1, k + 1))
        return Rabin(pairs) if ctype == "rabin" else RabinChain(pairs)
    if ctype == "gen_rabin":
        goals: dict = {}
        for idx, (s, ln) in groups.get("G", {}).items():
            if idx is None or "." not in idx:
                raise ParseError("generalized goal sets are named G<pair>.<goal>", ln)
            i, l = map(int, idx.split("."))
            goals.setdefault(i, {})[l] = s
        R = _indexed(groups, "R", lineno)
        k = max([*goals, *R], default=0)
        if k == 0:
            raise ParseError("condition gen_rabin needs at least one pair", lineno)
        pairs = []
        for i in range(1, k + 1):
            gi = goals.get(i, {})
            gl = tuple(gi.get(l, empty) for l in range(1, max(gi, default=1) + 1))
            pairs.append((gl, R.get(i, empty)))
        return GenRabin(tuple(pairs))
    if ctype == "parity":
        cols = seq("color")
        if len(cols) % 2:
            cols = cols + (empty,)
        return Parity(cols)
    if ctype == "gr1":
        return GR1(seq("A"), seq("F"))
    if ctype == "muller":
        return Muller(seq("F"))
    raise ParseError("unknown condition type %r" % ctype, lineno)


def parse_text(text: str):
    """Parse a game file; returns ``(game, condition)``."""
    lines = text.splitlines()
    content = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(lines)]
    content = [(i, ln) for i, ln in content if ln]
    if not content:
        raise ParseError("missing header")
    if content[0][1] != HEADER:
        raise ParseError("missing header (expected %r)" % HEADER, content[0][0])
    names: list[str] = []
    ids: dict[str, int] = {}
    owner: list[Owner] = []
    edges, live = [], []
    ctype, cline = None, None
    sets: dict = {}

    def vid(name, lineno):
        if name not in ids:
            raise ParseError("unknown vertex %r" % name, lineno)
        return ids[name]

    for lineno, ln in content[1:]:
        if ctype is None:
            parts = ln.split()
            kw = parts[0]
            if kw == "vertex":
                if len(parts) != 3 or parts[2] not in OWNERS:
                    raise ParseError("expected 'vertex <name> <p0|p1|random>'", lineno)
                if parts[1] in ids:
                    raise ParseError("duplicate vertex %r" % parts[1], lineno)
                ids[parts[1]] = len(names)
                names.append(parts[1])
                owner.append(OWNERS[parts[2]])
            elif kw == "edge":
                if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "live"):
                    raise ParseError("expected 'edge <u> <v> [live]'", lineno)
                u, v = vid(parts[1], lineno), vid(parts[2], lineno)
                edges.append((u, v))
                if len(parts) == 4:
                    if owner[u] != Owner.P1:
                        raise ParseError("live edge from %s vertex %s" % (OWNER_NAMES[owner[u]], parts[1]), lineno)
                    live.append((u, v))
            elif kw == "condition":
                if len(parts) != 2:
                    raise ParseError("expected 'condition <type>'", lineno)
                if parts[1] not in CONDITIONS:
                    raise ParseError("unknown condition type %r" % parts[1], lineno)
                ctype, cline = parts[1], lineno
            else:
                raise ParseError("unexpected %r" % kw, lineno)
        else:
            if ln.split()[0] == "condition":
                raise ParseError("only one condition per file", lineno)
            if ":" not in ln:
                raise ParseError("expected '<set>: <vertices>'", lineno)
            name, _, rest = ln.partition(":")
            name = name.strip()
            if name in sets:
                raise ParseError("duplicate set %r" % name, lineno)
            sets[name] = ([vid(x, lineno) for x in rest.split()], lineno)
    if not names:
        raise ParseError("no vertices")
    if ctype is None:
        raise ParseError("missing condition")
    n = len(names)
    cond = _build_condition(ctype, sets, n, cline)
    if any(o == Owner.RANDOM for o in owner):
        return StochasticGameGraph.build(owner, edges, names), cond
    return GameGraph.build(owner, edges, live, names), cond


def parse_game(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_text(fh.read())


def _names(g, s: VertexSet) -> str:
    return " ".join(g.name(v) for v in s)


def emit_game(g, cond) -> str:
    """Text form of ``(g, cond)``; :func:`parse_text` inverts it."""
    out = [HEADER]
    for v in range(g.n):
        out.append("vertex %s %s" % (g.name(v), OWNER_NAMES[g.owner[v]]))
    live = getattr(g, "live", frozenset())
    for u, v in g.edges():
        out.append("edge %s %s%s" % (g.name(u), g.name(v), " live" if (u, v) in live else ""))

    def line(name, s):
        out.append(("%s: %s" % (name, _names(g, s))).rstrip())

    if isinstance(cond, SafeReach):
        out.append("condition reach")
        line("T", cond.T)
        line("Q", cond.Q)
    elif isinstance(cond, Safety):
        out.append("condition safety")
        line("Q", cond.Q)
    elif isinstance(cond, Buchi):
        out.append("condition buchi")
        line("G", cond.G)
    elif isinstance(cond, SafeBuchi):
        out.append("condition safe_buchi")
        line("G", cond.G)
        line("Q", cond.Q)
    elif isinstance(cond, CoBuchi):
        out.append("condition cobuchi")
        line("A", cond.A)
    elif isinstance(cond, GenBuchi):
        out.append("condition gen_buchi")
        for i, f in enumerate(cond.F):
            line("F%d" % (i + 1), f)
        line("Q", cond.Q)
    elif isinstance(cond, GenCoBuchi):
        out.append("condition gen_cobuchi")
        for i, a in enumerate(cond.A):
            line("A%d" % (i + 1), a)
    elif isinstance(cond, (Rabin, RabinChain)):
        out.append("condition " + ("rabin" if isinstance(cond, Rabin) else "rabin_chain"))
        for i, (G, R) in enumerate(cond.pairs):
            line("G%d" % (i + 1), G)
            line("R%d" % (i + 1), R)
    elif isinstance(cond, GenRabin):
        out.append("condition gen_rabin")
        for i, (goals, R) in enumerate(cond.pairs):
            for l, G in enumerate(goals):
                line("G%d.%d" % (i + 1, l + 1), G)
            line("R%d" % (i + 1), R)
    elif isinstance(cond, Parity):
        out.append("condition parity")
        for i, c in enumerate(cond.colors):
            line("color%d" % (i + 1), c)
    elif isinstance(cond, GR1):
        out.append("condition gr1")
        for i, a in enumerate(cond.A):
            line("A%d" % (i + 1), a)
        for i, f in enumerate(cond.F):
            line("F%d" % (i + 1), f)
    elif isinstance(cond, Muller):
        out.append("condition muller")
        for i, f in enumerate(cond.F):
            line("F%d" % (i + 1), f)
    else:
        raise TypeError("cannot emit condition %r" % (cond,))
    return "\n".join(out) + "\n"
