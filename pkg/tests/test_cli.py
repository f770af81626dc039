import csv
import json

import pytest

from posreal.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, run


@pytest.fixture
def write_tf(tmp_path):
    def _write(data: dict, name: str = "h.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(data))
        return str(path)

    return _write


def last_json_line(text: str) -> dict:
    return json.loads(text.strip().splitlines()[-1])


def test_minimal_dim_integrator(write_tf, capsys):
    code = run(["minimal-dim", "--tf", write_tf({"b": [1], "a": [1, -1]})])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert out["N"] == 1
    assert out["q"] == [1.0]
    assert out["certified_minimal"] is True


def test_minimal_dim_cube_roots(write_tf, capsys):
    code = run(["minimal-dim", "--tf", write_tf({"b": [1], "a": [1, 0, 0, -1]})])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert out["N"] == 3
    assert out["certified_minimal"] is True
    assert out["lower_bound"] == 3


def test_minimal_dim_multiple_positive_poles(write_tf, capsys):
    tf = write_tf({"poles": [[1, 0], [0.5, 0], [-0.3, 0]], "gain": 1})
    code = run(["minimal-dim", "--tf", tf])
    err = last_json_line(capsys.readouterr().err)
    assert code == EXIT_DOMAIN
    assert err["error"] == "multiple_positive_poles"
    assert "multiple positive poles" in err["detail"]


def test_realize_reports_scale_and_round_trips(write_tf, tmp_path, capsys):
    out_path = tmp_path / "real.json"
    code = run(["realize", "--tf", write_tf({"b": [1], "a": [1, -2]}), "--dim", "1", "--out", str(out_path)])
    assert code == EXIT_OK
    data = json.loads(out_path.read_text())
    assert data["scale"] == 2.0
    assert data["A"] == [[2.0]]
    assert data["C"] == [1.0]


def test_realize_infeasible(write_tf, capsys):
    tf = write_tf({"zeros": [], "poles": [[1, 0], [-0.80901699437494745, 0.58778525229247314], [-0.80901699437494745, -0.58778525229247314]]})
    code = run(["realize", "--tf", tf, "--dim", "4"])
    assert code == EXIT_DOMAIN
    assert last_json_line(capsys.readouterr().err)["error"] == "infeasible"


def test_certify(write_tf, capsys):
    code = run(["certify", "--tf", write_tf({"b": [1], "a": [1, 0, 0, -1]})])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert out["N"] == 3
    assert out["q"] == [1.0]
    assert out["max_aq"] <= 1e-9


def test_certify_inapplicable(write_tf, capsys):
    tf = write_tf({"poles": [[1, 0], [-0.9, 0], [-0.8, 0]]})
    assert run(["certify", "--tf", tf]) == EXIT_DOMAIN
    assert last_json_line(capsys.readouterr().err)["error"] == "theorem_inapplicable"


def test_classify(write_tf, capsys):
    code = run(["classify", "--tf", write_tf({"b": [1], "a": [1, -3]})])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert out["in_M"] is True
    assert out["scale"] == 3.0


def test_compound(write_tf, capsys):
    tf = write_tf({"poles": [[1, 0], [0.5, 0]]})
    code = run(["compound", "--tf", tf])
    out = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert out["plan"]["mode"] == "series"
    assert out["realization"]["N"] == 2


def test_compound_parallel_fails(write_tf, capsys):
    tf = write_tf({"poles": [[1, 0], [0.5, 0]]})
    assert run(["compound", "--tf", tf, "--mode", "parallel"]) == EXIT_DOMAIN
    assert last_json_line(capsys.readouterr().err)["error"] == "decomposition_failed"


def test_region_scan(tmp_path, capsys):
    out_path = tmp_path / "psi_3.csv"
    vertices = tmp_path / "v.csv"
    code = run(["region-scan", "--N", "3", "--grid", "21", "--out", str(out_path), "--vertices", str(vertices)])
    summary = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert summary["steps"] == 21
    with open(out_path, newline="") as f:
        rows = list(csv.DictReader(f))
    assert rows and all(r["N"] == "3" for r in rows)
    assert vertices.exists()


def test_usage_errors(capsys):
    assert run([]) == EXIT_USAGE
    assert run(["realize", "--tf", "h.json"]) == EXIT_USAGE
    assert run(["realize", "--tf", "h.json", "--dim", "0"]) == EXIT_USAGE


def test_region_scan_dimension_checked_by_parser(tmp_path, capsys):
    out_path = tmp_path / "psi_2.csv"
    assert run(["region-scan", "--N", "2", "--grid", "5", "--out", str(out_path)]) == EXIT_USAGE
    assert ">= 3" in capsys.readouterr().err
    assert not out_path.exists()


def test_bad_config_is_usage_error(write_tf, capsys):
    tf = write_tf({"b": [1], "a": [1, -1]})
    assert run(["--set", "feas_tol=-1", "minimal-dim", "--tf", tf]) == EXIT_USAGE
    assert last_json_line(capsys.readouterr().err)["error"] == "config_error"
    assert run(["--set", "nonsense", "minimal-dim", "--tf", tf]) == EXIT_USAGE


def test_missing_tf_file(tmp_path, capsys):
    assert run(["classify", "--tf", str(tmp_path / "missing.json")]) == EXIT_DOMAIN
    assert last_json_line(capsys.readouterr().err)["error"] == "invalid_input"


def test_set_overrides_n_max(write_tf, capsys):
    tf = write_tf({"poles": [[1, 0], [-0.80901699437494745, 0.58778525229247314], [-0.80901699437494745, -0.58778525229247314]]})
    assert run(["--set", "n_max=4", "minimal-dim", "--tf", tf]) == EXIT_DOMAIN
    assert last_json_line(capsys.readouterr().err)["error"] == "infeasible"
