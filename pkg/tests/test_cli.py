import json

import pytest

from intercomm import files
from intercomm.cli import main
from intercomm.config import network_from_config
from intercomm.coordination import check_admissible
from intercomm.generate import SizeInfeasible, random_config


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_golden(capsys):
    code, out, _ = run(capsys, "validate", "--config", "golden")
    assert code == 0
    assert "5 robots, 5 teams" in out


def test_plan_golden(capsys, tmp_path):
    code, out, _ = run(capsys, "plan", "--config", "golden", "--out", str(tmp_path))
    assert code == 0
    assert "k_p 1" in out and "k_s 2" in out and "admissible yes" in out
    assert (tmp_path / "plan.json").exists() and (tmp_path / "plan.txt").exists()


def test_outputs_are_byte_identical(capsys, tmp_path):
    for sub in ("a", "b"):
        assert run(capsys, "simulate", "--config", "golden", "--cycles", "3", "--format", "csv",
                   "--out", str(tmp_path / sub))[0] == 0
        assert run(capsys, "plan", "--config", "golden", "--format", "csv", "--out", str(tmp_path / sub))[0] == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert {"trace.csv", "waits.csv", "consensus.csv", "summary.txt", "plan.json", "plan.csv"} <= set(names)
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_plan_json_round_trip(golden_coord, golden_plan):
    text = files.dump_plan_json(golden_plan, golden_coord.wts)
    again = files.plan_from_dict(json.loads(text))
    assert (again.k_p, again.k_s) == (golden_plan.k_p, golden_plan.k_s)
    for a, b in zip(again.rounds, golden_plan.rounds):
        assert a.paths == b.paths
        assert a.meetings() == b.meetings()
    assert check_admissible(again, golden_coord.wts).ok
    assert files.dump_plan_json(again, golden_coord.wts) == text


def test_missing_file_is_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "validate", "--config", str(tmp_path / "nope.json"))
    assert code == 2 and "error" in err


def test_bad_json_is_io_error(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "plan", "--config", str(p))[0] == 2


def test_invalid_network_is_domain_error(capsys, tmp_path):
    cfg = random_config(3)
    cfg["robots"][0]["speed"] = -1.0
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(cfg))
    code, _, err = run(capsys, "validate", "--config", str(p))
    assert code == 1 and "NonPositiveSpeed" in err


def test_gen_then_simulate(capsys, tmp_path):
    p = tmp_path / "g.json"
    assert run(capsys, "gen", "--seed", "1", "--out", str(p))[0] == 0
    network_from_config(json.loads(p.read_text()))
    code, out, _ = run(capsys, "simulate", "--config", str(p), "--cycles", "2")
    assert code == 0 and "connectivity ok" in out


def test_gen_is_seeded(capsys):
    a = run(capsys, "gen", "--seed", "7")[1]
    b = run(capsys, "gen", "--seed", "7")[1]
    assert a == b and a != run(capsys, "gen", "--seed", "8")[1]


def test_gen_size_limits(capsys):
    assert run(capsys, "gen", "-L", "0")[0] == 1
    with pytest.raises(SizeInfeasible):
        random_config(0, n_robots=4, n_teams=1, max_team=3)
    net = network_from_config(random_config(0, n_robots=1, n_teams=2, n_locations=4))
    assert net.robot_ids == [1] and net.team_graph.edges == {(1, 2)}


def test_simulate_zero_cycles(capsys):
    code, out, _ = run(capsys, "simulate", "--config", "golden", "--cycles", "0")
    assert code == 0


def test_plan_text_layout(golden_coord, golden_plan):
    text = files.plan_text(golden_plan, golden_coord.wts)
    assert "robot 1 T1[20 3] T5[3 20] X[20 20]" in text
