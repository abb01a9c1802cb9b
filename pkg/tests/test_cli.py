import csv
import io
import json
from fractions import Fraction as F

import pytest

from robust_search.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--c", "0.3", "--l", "1", "--l", "0.1")
    assert code == 0
    assert rows(out) == [["l", "N", "phi", "first_search_location"], ["1", "2", "0.6", "0.4"],
                         ["0.1", "1", "0.95", "0.95"]]
    code, out, _ = run(capsys, "--c", "0.6", "table", "--l", "1")
    assert rows(out)[1] == ["1", "0", "", ""]


def test_table_steps(capsys):
    code, out, _ = run(capsys, "table", "--c", "0.1", "--steps", "4")
    assert [r[0] for r in rows(out)[1:]] == ["0.25", "0.5", "0.75", "1"]
    assert rows(out)[-1] == ["1", "3", "~0.733333333333", "~0.266666666667"]


def test_regions(capsys):
    code, out, _ = run(capsys, "regions", "--c", "0.3", "--samples", "11")
    assert code == 0
    table = {r[0]: r[1:] for r in rows(out)[1:]}
    assert table["0.4"] == ["0.6", "0.6", "0.6"]
    assert table["0.5"] == ["0.5", "~0.633333333333", "0.5"]
    assert table["0"] == ["1", "~0.466666666667", "~0.466666666667"]


def test_regions_out_of_range(capsys):
    code, _, err = run(capsys, "regions", "--c", "0.6")
    assert code == 2
    assert "1/4 < c < 1/2" in err


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


def test_run_tent(tmp_path, capsys):
    idx = write(tmp_path / "tent.json", {"breakpoints": [["0", "0.05"], ["0.95", "1"], ["1", "0.95"]]})
    code, out, _ = run(capsys, "run", "--c", "0.3", "--index", idx)
    assert code == 0
    trace = json.loads(out)
    assert [(s["x"], s["z"]) for s in trace["steps"]] == [("0.4", "0.45"), ("0.975", "0.975"), (None, None)]
    assert trace["terminal"]["payoff"] == "0.375"


def test_run_bifurcation_and_expensive(tmp_path, capsys):
    idx = write(tmp_path / "b.json", {"breakpoints": [[0, 0.6], [0.4, 0.6], [0.8, 1], [1, 1]]})
    code, out, _ = run(capsys, "run", "--c", "0.3", "--index", idx)
    assert json.loads(out)["terminal"] == {"adopted_quality": "0.6", "payoff": "0.3", "searches_paid": 1}
    code, out, _ = run(capsys, "run", "--c", "0.6", "--index", idx)
    assert json.loads(out)["terminal"]["payoff"] == "0"
    assert len(json.loads(out)["steps"]) == 1


def test_run_invalid_index(tmp_path, capsys):
    idx = write(tmp_path / "bad.json", {"breakpoints": [[0, 0], [0.5, 1.2], [1, 1]]})
    code, _, err = run(capsys, "run", "--c", "0.3", "--index", idx)
    assert code == 2
    assert "segment 0" in err
    code, _, _ = run(capsys, "run", "--c", "0.3", "--index", str(tmp_path / "missing.json"))
    assert code == 2


def test_adversary_and_round_trip(tmp_path, capsys):
    out_dir = tmp_path / "adv"
    code, _, _ = run(capsys, "adversary", "--c", "0.1", "--out", str(out_dir))
    assert code == 0
    trace = json.loads((out_dir / "trace.json").read_text())
    assert trace["terminal"]["payoff"] == "19/30"
    replay = tmp_path / "replay"
    code, _, _ = run(capsys, "run", "--c", "0.1", "--index", str(out_dir / "witness.json"), "--out", str(replay))
    assert code == 0
    assert json.loads((replay / "trace.json").read_text())["steps"] == trace["steps"]


def test_adversary_script(tmp_path, capsys):
    script = write(tmp_path / "s.json", [{"max_searches": 3}, {"if_window_measure_geq": 0, "search_at_fraction": 0.5}])
    code, out, _ = run(capsys, "adversary", "--c", "0.3", "--policy", script)
    assert code == 0
    assert F(json.loads(out)["trace"]["terminal"]["payoff"]) <= F(3, 10)


def test_adversary_bad_script(tmp_path, capsys):
    script = write(tmp_path / "s.json", [{"nonsense": 1}])
    assert run(capsys, "adversary", "--c", "0.3", "--policy", script)[0] == 2


@pytest.mark.parametrize("argv, oracle, closed", [
    (["--c", "0.3"], "0.29375", "0.3"),
    (["--c", "0.45"], None, "0.075"),
    (["--c", "0.6", "--M", "16", "--Kz", "16", "--D", "2"], "0", "0"),
])
def test_verify(capsys, argv, oracle, closed):
    code, out, _ = run(capsys, "verify", *argv)
    report = json.loads(out)
    assert code == 0 and report["pass"]
    assert report["closed_form_value"] == closed
    if oracle:
        assert report["oracle_value"] == oracle
    assert F(report["gap"]) <= F(report["tolerance"])


def test_verify_budget(capsys):
    code, _, err = run(capsys, "verify", "--c", "0.15", "--M", "32", "--Kz", "32", "--max-states", "100")
    assert code == 4


def test_fuzz(tmp_path, capsys):
    code, out, _ = run(capsys, "fuzz", "--c", "0.3", "--n", "1", "--seed", "149")
    summary = json.loads(out)
    assert code == 0
    assert summary["min_payoff"] == "0.3" and summary["violations"] == 0
    code, _, _ = run(capsys, "--seed", "7", "--out", str(tmp_path), "fuzz", "--c", "0.15", "--n", "50")
    assert code == 0
    assert json.loads((tmp_path / "fuzz_summary.json").read_text())["seed"] == 7
    assert len(rows((tmp_path / "fuzz_cases.csv").read_text())) == 51


def test_missing_cost(capsys):
    assert run(capsys, "table")[0] == 2


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
