import pytest

from abcbribery.cli import main
from abcbribery import parse_election


@pytest.fixture
def e0_file(tmp_path, e0_text):
    path = tmp_path / "e0.elect"
    path.write_text(e0_text)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_winners_av(e0_file, capsys):
    code, out, _ = run(capsys, "winners", e0_file, "--rule", "av", "--k", "2")
    assert code == 0
    assert "scores: a=7 b=5 c=4 p=1" in out
    assert "winning committees: {a,b}" in out


def test_winners_uses_file_k(e0_file, capsys):
    code, out, _ = run(capsys, "winners", e0_file, "--rule", "gav")
    assert code == 0
    assert "winning committees: {a,b}" in out


def test_winners_k_equals_m(e0_file, capsys):
    code, out, _ = run(capsys, "winners", e0_file, "--rule", "av", "--k", "4")
    assert code == 0
    assert "{a,b,c,p}" in out


def test_winners_sav_rationals(e0_file, capsys):
    code, out, _ = run(capsys, "winners", e0_file, "--rule", "sav", "--k", "2")
    assert code == 0
    assert "a=29/6" in out and "p=1/3" in out


def test_bribe_add_feasible(e0_file, capsys):
    code, out, _ = run(capsys, "bribe", e0_file, "--rule", "av", "--op", "add",
                       "--p", "p", "--budget", "4")
    assert code == 0
    assert "feasible: yes" in out and "cost: 4" in out


def test_bribe_budget_zero_winner(e0_file, capsys):
    code, out, _ = run(capsys, "bribe", e0_file, "--rule", "av", "--op", "add",
                       "--p", "a", "--budget", "0")
    assert code == 0
    assert "cost: 0" in out


def test_bribe_swap_infeasible(e0_file, capsys):
    code, out, _ = run(capsys, "bribe", e0_file, "--rule", "av", "--op", "swap",
                       "--p", "p", "--budget", "2")
    assert code == 1
    assert "feasible: no" in out


def test_bribe_unsupported_cell(e0_file, capsys):
    code, _, err = run(capsys, "bribe", e0_file, "--rule", "sav", "--op", "delete",
                       "--p", "p", "--budget", "3")
    assert code == 4
    code, out, _ = run(capsys, "bribe", e0_file, "--rule", "sav", "--op", "delete",
                       "--p", "p", "--budget", "3", "--algorithm", "oracle")
    assert code in (0, 1)


def test_bribe_approx_banner(e0_file, capsys):
    code, out, _ = run(capsys, "bribe", e0_file, "--rule", "sav", "--op", "add",
                       "--p", "p", "--budget", "9", "--restrict-to-p")
    assert code == 0
    assert "2-approximation" in out


def test_rank_swap(e0_file, capsys):
    code, out, _ = run(capsys, "rank", e0_file, "--rule", "av", "--op", "swap")
    assert code == 0
    lines = [line for line in out.splitlines() if ":" in line][1:]
    assert lines == ["a: 0", "b: 0", "c: 1", "p: 3"]


def test_rank_add(e0_file, capsys):
    code, out, _ = run(capsys, "rank", e0_file, "--rule", "av", "--op", "add")
    assert code == 0
    assert "p: 4" in out


def test_rank_single_candidate(tmp_path, capsys):
    path = tmp_path / "one.elect"
    path.write_text("candidates: solo\nvoter v1: solo\n")
    code, out, _ = run(capsys, "rank", str(path), "--rule", "av", "--op", "add", "--k", "1")
    assert code == 0
    assert "solo: 0" in out


def test_rank_infinite_margin(tmp_path, capsys):
    path = tmp_path / "stuck.elect"
    path.write_text("candidates: a p b\nvoter v1: a p\n")
    code, out, _ = run(capsys, "rank", str(path), "--rule", "gav", "--op", "add", "--k", "1")
    assert code == 0
    assert "p: inf" in out


def test_verify_paper_swaps(e0_file, tmp_path, capsys):
    sol = tmp_path / "sol.txt"
    sol.write_text("swap v1 b p\nswap v2 b p\nswap v6 c p\n")
    code, out, _ = run(capsys, "verify", e0_file, str(sol), "--rule", "av", "--p", "p")
    assert code == 0
    assert "cost: 3" in out and "p co-winner: yes" in out


def test_verify_empty_solution_for_winner(e0_file, tmp_path, capsys):
    sol = tmp_path / "empty.txt"
    sol.write_text("")
    code, out, _ = run(capsys, "verify", e0_file, str(sol), "--rule", "av", "--p", "a")
    assert code == 0
    assert "cost: 0" in out


def test_verify_invalid_action(e0_file, tmp_path, capsys):
    sol = tmp_path / "bad.txt"
    sol.write_text("swap v1 b a\n")  # a is already approved in v1
    code, _, err = run(capsys, "verify", e0_file, str(sol), "--rule", "av", "--p", "p")
    assert code == 5


def test_gen_is_reduction(tmp_path, capsys):
    out_path = tmp_path / "is.elect"
    code, out, _ = run(capsys, "gen", "--kind", "is-reduction", "--vertices", "4",
                       "--edges", "0-1,0-2,0-3,1-2,1-3,2-3", "--h", "1",
                       "--out", str(out_path))
    assert code == 0
    assert "5 candidates, 9 voters" in out
    election, prices, k = parse_election(out_path.read_text())
    assert election.m == 5 and election.n == 9 and k == 4


def test_gen_x3c_reduction(tmp_path, capsys):
    out_path = tmp_path / "x3c.elect"
    code, out, _ = run(capsys, "gen", "--kind", "x3c-reduction",
                       "--sets", "0,1,2;0,1,2;0,1,2", "--alpha", "1",
                       "--out", str(out_path))
    assert code == 0
    assert "599 voters" in out
    election, _, _ = parse_election(out_path.read_text())
    assert election.n == 599


def test_gen_random_rejects_zero_candidates(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "--kind", "random", "--m", "0",
                       "--out", str(tmp_path / "x.elect"))
    assert code == 2


def test_gen_random_roundtrip(tmp_path, capsys):
    out_path = tmp_path / "r.elect"
    code, out, _ = run(capsys, "gen", "--kind", "random", "--m", "4", "--n", "5",
                       "--seed", "3", "--out", str(out_path))
    assert code == 0
    election, _, _ = parse_election(out_path.read_text())
    assert election.m == 4 and election.n == 5


def test_parse_error_exit(tmp_path, capsys):
    path = tmp_path / "broken.elect"
    path.write_text("candidates: a b\ngarbage\n")
    code, _, err = run(capsys, "winners", str(path), "--rule", "av", "--k", "1")
    assert code == 2
    assert "line 2" in err


def test_resource_guard_exit(tmp_path, capsys):
    names = " ".join(f"c{i}" for i in range(26))
    path = tmp_path / "big.elect"
    path.write_text(f"candidates: {names}\nvoter v1: c0\n")
    code, _, err = run(capsys, "winners", str(path), "--rule", "pav", "--k", "13")
    assert code == 3


def test_identical_runs_identical_output(e0_file, capsys):
    _, out1, _ = run(capsys, "bribe", e0_file, "--rule", "av", "--op", "swap",
                     "--p", "p", "--budget", "3")
    _, out2, _ = run(capsys, "bribe", e0_file, "--rule", "av", "--op", "swap",
                     "--p", "p", "--budget", "3")
    assert out1 == out2
