import json

from hurwitz_lab.cli import run


def test_hurwitz_all_methods_agree(capsys):
    code = run(["hurwitz", "--genus", "1", "--mu", "2,1", "--method", "all"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("= 40") == 3


def test_budget_exit_code(capsys):
    assert run(["hurwitz", "--genus", "9", "--mu", "9,9", "--method", "monodromy"]) == 3


def test_usage_exit_code(capsys):
    assert run(["no-such-command"]) == 2
    assert run(["hurwitz", "--genus", "1"]) == 2  # missing --mu


def test_intersect(capsys):
    assert run(["intersect", "--genus", "2", "--taus", "3,2"]) == 0
    out = capsys.readouterr().out
    assert "29/5760" in out
    assert run(["intersect", "--genus", "1", "--taus", "0", "--lambda", "1"]) == 0
    assert "1/24" in capsys.readouterr().out


def test_kontsevich_two_sides(capsys):
    assert run(["kontsevich", "--genus", "0", "--cells", "3", "--eval", "1,2,3"]) == 0
    out = capsys.readouterr().out
    assert out.count("1/6") == 2


def test_maps_enumerate(capsys):
    assert run(["maps", "enumerate", "--genus", "1", "--cells", "1"]) == 0
    out = capsys.readouterr().out
    assert "1 isomorphism classes" in out


def test_toda_verify(capsys):
    assert run(["toda", "verify", "--dmax", "3", "--lmax", "2"]) == 0
    assert run(["toda", "verify", "--dmax", "3", "--lmax", "2", "--htilde"]) == 0


def test_trees_stats_small(capsys):
    args = ["trees", "stats", "--stat", "valence", "--n", "500", "--samples", "20000", "--seed", "4"]
    assert run(args) == 0


def test_json_round_trip(capsys):
    assert run(["--format", "json", "hurwitz", "--genus", "1", "--mu", "3", "--method", "degeneration"]) == 0
    out = capsys.readouterr().out
    doc = json.loads(out)
    assert doc["result"]["degeneration"] == {"num": "9", "den": "1"}
    assert json.loads(json.dumps(doc)) == doc


def test_deterministic_output(capsys):
    args = ["--format", "json", "trees", "stats", "--stat", "valence", "--n", "500",
            "--samples", "20000", "--seed", "11"]
    run(args)
    first = capsys.readouterr().out
    run(args)
    second = capsys.readouterr().out
    assert first == second


def test_config_echoed(capsys):
    run(["hurwitz", "--genus", "0", "--mu", "2", "--method", "degeneration"])
    out = capsys.readouterr().out
    assert out.startswith("# config:")
    assert "seed=0" in out and "command=hurwitz" in out


def test_backend_flag(capsys):
    code = run(["--backend", "numpy", "hurwitz", "--genus", "1", "--mu", "3", "--method", "monodromy"])
    out = capsys.readouterr().out
    assert code == 0 and "= 9" in out and "backend=numpy" in out
