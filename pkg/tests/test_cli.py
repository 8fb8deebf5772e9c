import random
from pathlib import Path

import pytest

from fairgame.bench import gadget_chain, random_fair_game, random_stochastic_game
from fairgame.cli import run_cli
from fairgame.gamefile import ParseError, emit_game, parse_game, parse_text
from fairgame.model import Rabin, StochasticGameGraph

from helpers import KINDS, rand_condition, rand_game

DATA = Path(__file__).parent / "data"


# ---------------------------------------------------------------- format

def test_parse_rabin_seven_file():
    g, cond = parse_game(DATA / "rabin_seven.game")
    assert g.n == 7 and len(g.live) == 1
    assert isinstance(cond, Rabin) and len(cond.pairs) == 2
    assert g.live == {(1, 2)} and g.name(1) == "q2"


def test_empty_file():
    with pytest.raises(ParseError, match="missing header"):
        parse_text("")
    with pytest.raises(ParseError, match="missing header"):
        parse_text("# only a comment\n")


def test_wrong_header_positioned():
    with pytest.raises(ParseError) as e:
        parse_text("\n\nfairgame v2\n")
    assert e.value.line == 3


BASE = "fairgame v1\nvertex a p0\nvertex b p1\nedge a b\nedge b a\n"


@pytest.mark.parametrize("text,msg,line", [
    (BASE + "edge a b live\ncondition buchi\nG: a\n", "live edge from p0 vertex a", 6),
    (BASE + "condition streett\n", "unknown condition type", 6),
    (BASE + "edge a c\n", "unknown vertex", 6),
    (BASE + "vertex a p1\n", "duplicate vertex", 6),
    (BASE + "vertex c p2\n", "vertex <name>", 6),
    (BASE + "condition buchi\nG: a\ncondition buchi\n", "only one condition", 8),
    (BASE + "condition buchi\nG: a\nR1: b\n", "not used by condition", 8),
    (BASE + "condition buchi\nG a\n", "expected '<set>: <vertices>'", 7),
    (BASE + "condition rabin\n", "at least one pair", 6),
    (BASE + "bogus\n", "unexpected", 6),
])
def test_parse_errors(text, msg, line):
    with pytest.raises(ParseError) as e:
        parse_text(text)
    assert msg in str(e.value)
    assert e.value.line == line


def test_missing_condition():
    with pytest.raises(ParseError, match="missing condition"):
        parse_text(BASE)


def test_names_map_in_order_of_appearance():
    g, _ = parse_text("fairgame v1\nvertex z p0\nvertex y p0\nedge z y\nedge y y\ncondition safety\n")
    assert [g.name(v) for v in range(2)] == ["z", "y"]
    assert g.succ[0] == (1,)


def test_comments_and_blank_lines():
    text = "# game\nfairgame v1\n\nvertex a p0   # the only vertex\nedge a a\ncondition buchi\nG: a # goal\n"
    g, cond = parse_text(text)
    assert cond.G == g.all


def test_random_vertices_give_stochastic_game():
    g, cond = parse_text("fairgame v1\nvertex a random\nvertex b p0\nedge a b\nedge b a\ncondition buchi\nG: b\n")
    assert isinstance(g, StochasticGameGraph)


def test_round_trip_generated_instances():
    rng = random.Random(0)
    for i in range(100):
        g, cond = random_fair_game(i, 2 + i % 9, 1 + i % 3, live_frac=0.3, member_frac=0.3)
        assert parse_text(emit_game(g, cond)) == (g, cond)
        n = rng.randint(1, 7)
        g = rand_game(rng, n, dead_frac=0.1)
        cond = rand_condition(rng, KINDS[i % len(KINDS)], n)
        g2, cond2 = parse_text(emit_game(g, cond))
        assert (g2, cond2) == (g, cond)
        assert emit_game(g2, cond2) == emit_game(g, cond)


def test_round_trip_stochastic():
    for seed in range(20):
        sg = random_stochastic_game(seed, 6)
        if not any(o.name == "RANDOM" for o in sg.owner):
            continue
        cond = Rabin(((sg.set([0]), sg.set([1])),))
        assert parse_text(emit_game(sg, cond)) == (sg, cond)


# ---------------------------------------------------------------- CLI

def run(capsys, *argv):
    code = run_cli([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_prints_region(capsys):
    code, out, _ = run(capsys, "solve", DATA / "rabin_seven.game")
    assert code == 0
    assert out == "winning: q1 q2 q3 q4 q5 q6 q7\n"


def test_solve_output_is_stable(capsys):
    outs = set()
    for accel in (0, 4, 0):
        code, out, _ = run(capsys, "solve", "--accel", accel, DATA / "rabin_seven.game")
        outs.add(out)
    assert len(outs) == 1


def test_solve_stats_and_strategy(capsys, tmp_path):
    out_file = tmp_path / "strategy.txt"
    code, out, _ = run(capsys, "solve", DATA / "rabin_seven.game", "--stats", "--frames",
                       "--strategy", out_file)
    assert code == 0
    assert "steps.total" in out and "iterations.X[0]" in out and "cache_hits" in out
    assert "  q7 001121" in out
    assert out_file.read_text() == "q1 -> q2\nq5 -> q3\nq6 -> q7\nq7 -> q4\n"
    code, out, _ = run(capsys, "solve", DATA / "rabin_seven.game", "--stats", "--kv")
    assert "steps.total=169" in out.splitlines()


def test_solve_dead_end_warning(capsys):
    code, out, err = run(capsys, "solve", DATA / "reach_nine.game")
    assert code == 0
    assert out == "winning: 4 5 6 7 8 9\n"
    assert "dead end at vertex 9" in err


def test_check_random_instance(capsys, tmp_path):
    path = tmp_path / "r.game"
    assert run(capsys, "bench", "--seed", 3, "--n", 6, "--k", 2, "--live-frac", 0.3,
               "--member-frac", 0.3, "-o", path)[0] == 0
    code, out, _ = run(capsys, "check", path)
    assert code == 0 and out == "check: ok\n"


def test_check_stochastic(capsys, tmp_path):
    path = tmp_path / "s.game"
    path.write_text("fairgame v1\nvertex r random\nvertex a p0\nvertex goal p0\n"
                    "edge r a\nedge r goal\nedge a r\nedge a a\nedge goal r\ncondition buchi\nG: goal\n")
    code, out, _ = run(capsys, "check", path)
    assert code == 0


def test_bench_is_deterministic(capsys):
    a = run(capsys, "bench", "--seed", 9, "--n", 7, "--k", 2)[1]
    b = run(capsys, "bench", "--seed", 9, "--n", 7, "--k", 2)[1]
    assert a == b and a.startswith("fairgame v1\n")
    c = run(capsys, "bench", "--seed", 0, "--n", 2, "--gadget-chain", 3)[1]
    assert parse_text(c) == gadget_chain(3)


def test_derand(capsys, tmp_path):
    path = tmp_path / "s.game"
    path.write_text("fairgame v1\nvertex r random\nvertex a p0\nedge r a\nedge r r\nedge a r\ncondition buchi\nG: a\n")
    code, out, _ = run(capsys, "derand", path)
    assert code == 0
    assert "vertex r p1" in out and "edge r a live" in out and "edge r r live" in out


def test_steps_table(capsys):
    code, out, _ = run(capsys, "steps", "--gadget-chain", "1,5", "--as", "rabin")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["instance", "M", "steps", "cache_hits", "|region|", "same_region"]
    assert len(lines) == 9
    code, out2, _ = run(capsys, "--jobs", 2, "steps", "--gadget-chain", "1,5", "--as", "rabin")
    assert out2 == out


def test_steps_on_file(capsys):
    code, out, _ = run(capsys, "steps", DATA / "rabin_seven.game", "--kv")
    assert code == 0
    assert "instance=%s M=0 steps=169" % (DATA / "rabin_seven.game") in out


def test_exit_codes(capsys, tmp_path):
    assert run(capsys)[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "solve")[0] == 1
    assert run(capsys, "solve", tmp_path / "missing.game")[0] == 1
    assert run(capsys, "solve", "--accel", -1, DATA / "rabin_seven.game")[0] == 1
    assert run(capsys, "--jobs", 0, "solve", DATA / "rabin_seven.game")[0] == 1
    assert run(capsys, "steps")[0] == 1
    bad = tmp_path / "bad.game"
    bad.write_text("")
    code, _, err = run(capsys, "solve", bad)
    assert code == 2 and "missing header" in err
    bad.write_text(BASE + "condition parity\ncolor1: a\n")
    assert run(capsys, "solve", bad)[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_check_reports_mismatch(capsys, monkeypatch, tmp_path):
    import fairgame.check as check
    real = check.solve

    def wrong(g, cond, M=0, record=False):
        res = real(g, cond, M, record)
        res.region = ~res.region
        return res
    monkeypatch.setattr(check, "solve", wrong)
    code, out, _ = run(capsys, "check", DATA / "rabin_seven.game")
    assert code == 3 and out.startswith("mismatch: region mismatch")
