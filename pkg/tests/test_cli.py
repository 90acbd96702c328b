import subprocess
import sys

import pytest

from graphsearch.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_clear_example(capsys, example_file):
    before = example_file.read_bytes()
    code, out, err = run(capsys, "clear", "-i", example_file, "-s", 4)
    assert code == 0
    assert out == "s=4 t=3\n1 2 3 4\n4 5 6 8\n6 7 8 9\n"
    assert "lower_bound=3" in err and "peak_searchers=4" in err
    assert example_file.read_bytes() == before


def test_clear_writes_plan(capsys, tmp_path):
    g = tmp_path / "tri.txt"
    g.write_text("10 20\n20 30\n30 10\n")
    plan = tmp_path / "plan.txt"
    code, out, _ = run(capsys, "clear", "-i", g, "-s", 2, "--plan", plan)
    assert code == 0 and "30" in plan.read_text()
    assert all("30" in line.split() for line in out.splitlines()[1:])


def test_plank_and_validate_round_trip(capsys, example_file, tmp_path):
    strat = tmp_path / "sigma.txt"
    assert run(capsys, "plank", "-i", example_file, "-s", 4, "-o", strat)[0] == 0
    code, out, _ = run(capsys, "validate", "-i", example_file, "--strategy", strat)
    assert code == 0 and out.strip() == "valid: t=3"


def test_validate_reports_first_failure(capsys, example_file, tmp_path):
    strat = tmp_path / "bad.txt"
    strat.write_text("s=4 t=2\n1 2 3 4\n9 8\n")
    code, _, err = run(capsys, "validate", "-i", example_file, "--strategy", strat)
    assert code == 1 and "invalid: step 2" in err


def test_lower_bound(capsys, example_file):
    assert run(capsys, "lower-bound", "--nodes", 9, "-s", 4)[1] == "3\n"
    assert run(capsys, "lower-bound", "-i", example_file, "-s", 4)[1] == "3\n"
    assert run(capsys, "lower-bound", "--nodes", 9, "-s", 1)[0] == 2


def test_decompose(capsys, example_file):
    code, out, _ = run(capsys, "decompose", "-i", example_file)
    assert code == 0
    assert out.splitlines()[1:] == ["R tops=1,3 bottoms=4 branches=1>2>4|3>4",
                                    "B tops=4 bottoms=7,8 branches=4>5>8|4>6>7",
                                    "B tops=7 bottoms=8,9 branches=7>8|7>9"]


def test_exact(capsys, example_file):
    code, out, _ = run(capsys, "exact", "-i", example_file, "-s", 4)
    assert code == 0 and out.startswith("search_time=3")
    code, out, _ = run(capsys, "exact", "-i", example_file, "-s", 4, "--max-t", 2)
    assert code == 1 and "exceeds" in out


def test_gen_then_plank(capsys, tmp_path):
    out = tmp_path / "er.txt"
    assert run(capsys, "gen", "--nodes", 50, "--p", 0.1, "--seed", 3, "-o", out)[0] == 0
    assert run(capsys, "plank", "-i", out, "-s", 3)[0] == 0
    ba = tmp_path / "ba.txt"
    assert run(capsys, "gen", "--model", "ba", "--nodes", 50, "-o", ba)[0] == 0
    assert run(capsys, "gen", "--model", "ba", "--nodes", 50, "--p", 0.1, "-o", ba)[0] == 2


def test_sweep(capsys, tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("graph = er\nn = 40\ns = 3\n")
    code, out, _ = run(capsys, "sweep", "--config", cfg)
    assert code == 0 and out.startswith("# graphsearch sweep v1")
    cfg.write_text("graph = er\nn = 40\n")
    assert run(capsys, "sweep", "--config", cfg)[0] == 2


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["clear", "-s", "2"],
    ["clear", "-i", "/nonexistent/graph.txt", "-s", "2"],
    ["plank", "-i", "x", "-s", "two"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_missing_searchers_and_small_s(capsys, example_file):
    assert run(capsys, "plank", "-i", example_file)[0] == 2
    assert run(capsys, "plank", "-i", example_file, "-s", 1)[0] == 2


def test_cycle_in_plank_exits_1_with_labels(capsys, tmp_path):
    g = tmp_path / "cyc.txt"
    g.write_text("7 8\n8 9\n9 7\n")
    code, _, err = run(capsys, "plank", "-i", g, "-s", 2)
    assert code == 1 and "cycle" in err
    assert {"7", "8", "9"} <= set(err.replace("->", " ").split())


def test_reverse_and_lcc(capsys, tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("1 2\n2 3\n10 11\n")
    code, out, _ = run(capsys, "plank", "-i", g, "-s", 2, "--reverse", "--lcc")
    assert code == 0 and out == "s=2 t=2\n2 3\n1 2\n"  # 3 -> 2 cleared first


def test_console_entry_point(example_file):
    proc = subprocess.run([sys.executable, "-m", "graphsearch.cli", "lower-bound", "--nodes", "9", "-s", "4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "3\n"
