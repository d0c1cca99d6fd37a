import io
import json
import subprocess
import sys

import pytest

import reference_tables as ref
from tdshape.cli import Report, emit, run
from tdshape.tensor import parse_rendered_table


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_weight_table_command():
    code, out, _ = call("tables", "--d", "9", "--s", "3", "--t", "6", "--kind", "weight")
    assert code == 0
    cells = parse_rendered_table(out.split("\n", 1)[1], 9)["cells"]
    expected = {(i, j): v for i, row in enumerate(ref.WEIGHT[3, 6])
                for j, v in enumerate(row.split())}
    assert cells == expected


def test_lifting_command():
    code, out, _ = call("lifting", "--d", "3", "--s", "2")
    assert code == 0
    assert out.splitlines()[-1].startswith("count 3")
    assert "e_2 e*_1 e_3 e*_0  ->  {2, 3}" in out


def test_verify_shape_command():
    code, out, _ = call("model", "--family", "krawtchouk", "--d", "3", "verify-shape")
    assert code == 0
    assert out.strip() == "rho = 1 1 1 1; bound 1 3 3 1; PASS"


def test_census_json():
    code, out, _ = call("census", "--d", "9", "--s", "3", "--t", "6", "--format", "json")
    assert code == 0
    assert out.startswith('{"zigzag":46,')
    data = json.loads(out)
    assert data["r_right"] == data["r_left"] == 27 and data["match"]


def test_dims_text():
    code, out, _ = call("dims", "--d", "2")
    assert (code, out.strip()) == (0, "dim R = 48, codim = 33")


def test_dims_with_rank_sweep():
    code, out, _ = call("dims", "--d", "3", "--brute", "--field", "fp:101")
    assert code == 0 and "rank sweep" in out


def test_empty_report_renders_as_empty_object():
    assert emit({}, "text") == "{}"
    assert emit(Report(), "json") == "{}"


def test_usage_errors_exit_2():
    assert call("tables", "--d", "3")[0] == 2
    assert call("nonsense")[0] == 2
    code, _, err = call("tables", "--d", "3", "--s", "5", "--t", "0")
    assert code == 2 and "tdshape:" in err
    assert call("enumerate-words", "--d", "2", "--n", "3", "--begin", "e_0",
                "--end", "e*_0")[0] == 2
    assert call("verify-basis", "--d", "2", "--field", "fp:100")[0] == 2


def test_check_failure_exits_1(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"d": 1, "A": [["0/1", "1/1"], ["1/1", "0/1"]],
                                "Astar": [["1/1", "0/1"], ["0/1", "1/1"]]}))
    code, out, _ = call("model", "--input", str(path), "validate")
    assert code == 1
    assert "distinct_eigenvalues: FAIL" in out


@pytest.mark.parametrize("argv", [
    ["tables", "--d", "4", "--s", "1", "--t", "3"],
    ["census", "--d", "4"],
    ["enumerate-words", "--d", "2", "--n", "3", "--begin", "e_0"],
    ["lifting", "--d", "4", "--s", "2"],
    ["verify-basis", "--d", "3", "--family", "geometric"],
    ["reduce", "--d", "4", "--cell", "1,3,4,4"],
    ["reduce", "--d", "3", "--word", "e*_0 e_1 e*_2"],
    ["reduce", "--d", "3", "--word", "e_0 e*_1 e_3 e*_2"],
    ["model", "--d", "2", "validate"],
    ["model", "--d", "2", "--family", "qracah", "verify-span", "--n", "3"],
    ["model", "--d", "2", "eddde", "--n", "2"],
    ["model", "--d", "2", "probe"],
    ["model", "--d", "2", "build"],
    ["model", "--d", "2", "cross-check", "--cases", "20", "--seed", "3"],
    ["dims", "--d", "4"],
])
def test_json_outputs_parse_and_repeat(argv):
    first = call(*argv, "--format", "json")
    second = call(*argv, "--format", "json")
    assert first == second
    assert first[0] == 0
    json.loads(first[1])
    code, text, _ = call(*argv, "--format", "csv")
    assert code == 0 and text.strip()


def test_reduce_cell_certificate_verifies():
    code, out, _ = call("reduce", "--d", "5", "--cell", "2,4,0,0", "--format", "json")
    assert code == 0 and json.loads(out)["verified"]


def test_out_file(tmp_path):
    target = tmp_path / "dims.txt"
    code, out, _ = call("dims", "--d", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().strip() == "dim R = 48, codim = 33"


def test_format_from_environment():
    env = {"TDSHAPE_FORMAT": "json", "PATH": ""}
    proc = subprocess.run([sys.executable, "-m", "tdshape", "dims", "--d", "2"],
                          capture_output=True, text=True, env=env, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dim_r4"] == 48


def test_model_from_json_file(tmp_path):
    code, out, _ = call("model", "--d", "3", "build", "--format", "json")
    path = tmp_path / "m.json"
    path.write_text(out)
    code, out, _ = call("model", "--input", str(path), "verify-shape")
    assert code == 0 and out.strip().endswith("PASS")
