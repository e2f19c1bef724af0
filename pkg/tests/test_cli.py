from __future__ import annotations

import json
from fractions import Fraction

import pytest

from nicer_ears import cli


def run(capsys, *argv) -> tuple[int, str]:
    code = cli.main([str(a) for a in argv])
    return code, capsys.readouterr().out


@pytest.fixture
def fig4_file(tmp_path, capsys):
    code, text = run(capsys, "gen", "fig4", "--k", 1)
    assert code == 0
    path = tmp_path / "fig4.gr"
    path.write_text(text)
    return path


def test_gen_counts(capsys):
    code, text = run(capsys, "gen", "fig3", "--k", 3)
    assert code == 0
    assert "p 29 41" in text and any(line.startswith("t ") for line in text.splitlines())


def test_solve_tsp_fig4(fig4_file, tmp_path, capsys):
    out = tmp_path / "r.json"
    code, line = run(capsys, "solve", "tsp", fig4_file, "--lp", "--oracle", "--json", out)
    assert code == 0 and "ok" in line
    rep = json.loads(out.read_text())
    assert rep["schema"] == cli.SCHEMA
    assert rep["cardinality"] <= 14
    assert Fraction(rep["bounds"]["LP"]) == 11 and rep["oracle"]["opt"] == 11
    assert all(rep["ratios"].values())


def test_solve_2ecss_fig5_lp(tmp_path, capsys):
    code, text = run(capsys, "gen", "fig5", "--k", 1)
    path = tmp_path / "fig5.gr"
    path.write_text(text)
    out = tmp_path / "r.json"
    code, _ = run(capsys, "solve", "2ecss", path, "--lp", "--json", out)
    rep = json.loads(out.read_text())
    assert code == 0 and rep["cardinality"] <= 32 and rep["bounds"]["LP"] == "24/1"


def test_solve_tjoin_path(tmp_path, capsys):
    path = tmp_path / "path2.gr"
    path.write_text("p 3 2\ne 1 2\ne 2 3\nt 1 3\n")
    code, line = run(capsys, "solve", "tjoin", path)
    assert code == 0 and "cardinality 2" in line


def test_reports_are_byte_identical(tmp_path, capsys):
    code, text = run(capsys, "gen", "random", "--k", 7, "--seed", 11)
    path = tmp_path / "rnd.gr"
    path.write_text(text)
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert run(capsys, "solve", "tjoin", path, "--lp", "--oracle", "--json", out)[0] == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_verify_and_solution_file(fig4_file, tmp_path, capsys):
    sol = tmp_path / "s.txt"
    assert run(capsys, "solve", "tsp", fig4_file, "--solution", sol)[0] == 0
    code, line = run(capsys, "verify", fig4_file, sol)
    assert code == 0 and "pass" in line
    sol.write_text("x 1 1\n")
    code, line = run(capsys, "verify", fig4_file, sol)
    assert code == 1 and "FAIL" in line


def test_oracle_command(fig4_file, capsys):
    code, line = run(capsys, "oracle", "tsp", fig4_file)
    assert code == 0 and "opt 11" in line


def test_bound_failure_gives_exit_one(fig4_file, capsys, monkeypatch):
    monkeypatch.setitem(cli.RATIO, "tsp", Fraction(1, 2))
    code, line = run(capsys, "solve", "tsp", fig4_file, "--lp")
    assert code == 1 and "within_ratio_of_LP" in line


def test_bad_input_gives_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.gr"
    bad.write_text("p 2 1\ne 1 1\n")
    assert cli.main(["solve", "tsp", str(bad)]) == 2
    assert cli.main(["solve", "tjoin", str(tmp_path / "missing.gr")]) == 2
    path = tmp_path / "noT.gr"
    path.write_text("p 3 3\ne 1 2\ne 2 3\ne 3 1\n")
    assert cli.main(["solve", "tjoin", str(path)]) == 2
