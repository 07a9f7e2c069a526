from __future__ import annotations

import json

import pytest

from polydist.cli import main
from polydist.knapsack import PartitionInstance, decide_partition_via_distance


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.startswith("{") else out.out), out.err


def test_gen_knapsack(capsys):
    code, data, _ = run(capsys, "gen-knapsack", "--weights", "1,1")
    assert code == 0
    assert data["polytope"]["dim"] == 4 and len(data["polytope"]["A"]) == 9
    assert data["partition"] is True and data["distance"] == 3
    code, data, _ = run(capsys, "gen-knapsack", "--weights", "3,1,1,1")
    assert data["objective"]["epsilon"] == "1/15"


@pytest.mark.parametrize("weights", ["1,2", "0,2", "a,b"])
def test_gen_knapsack_input_errors(capsys, weights):
    code, _, err = run(capsys, "gen-knapsack", "--weights", weights)
    assert code == 2 and "error" in err


def test_decision_bit_matches_library(capsys):
    for w in [(1, 1, 4), (1, 1, 2), (3, 1, 1, 1)]:
        _, data, _ = run(capsys, "gen-knapsack", "--weights", ",".join(map(str, w)))
        assert data["partition"] == decide_partition_via_distance(PartitionInstance(w)).answer


@pytest.mark.parametrize("k,expected", [(3, True), (2, False)])
def test_distance_on_cube(capsys, k, expected):
    code, data, _ = run(capsys, "distance", "--polytope", "cube:3", "--u", "0,0,0", "--v", "hi:1,hi:2,hi:3",
                        "--k", str(k))
    assert code == 0 and data["distance"] == 3 and data["within_k"] is expected


def test_distance_gadget_no_instance(capsys):
    code, data, _ = run(capsys, "distance", "--polytope", "knapsack:1,1,4", "--u", "lo:1,lo:2,lo:3,lo:4,ks",
                        "--v", "hi:1,hi:2,hi:3,hi:4,ks", "--k", "4")
    assert code == 0 and data["within_k"] is False


def test_monotone_distance(capsys):
    _, data, _ = run(capsys, "monotone-distance", "--polytope", "cube:3", "--c", "1,1,1", "--start", "0,0,0", "--k", "3")
    assert data["within_k"] is True
    _, data, _ = run(capsys, "monotone-distance", "--polytope", "knapsack:1,1", "--c", "1,1,1,1/5",
                     "--start", "0,0,0,5/6", "--k", "3")
    assert data["within_k"] is True and data["length"] == 3
    _, data, _ = run(capsys, "monotone-distance", "--polytope", "knapsack:1,1,4", "--c", "1,1,1,1,1/30",
                     "--start", "lo:1,lo:2,lo:3,lo:4,ks", "--k", "4")
    assert data["within_k"] is False


def test_bad_vertex_and_budget(capsys):
    code, _, _ = run(capsys, "distance", "--polytope", "cube:3", "--u", "0,0,2", "--v", "1,1,1")
    assert code == 2
    code, _, _ = run(capsys, "diameter", "--polytope", "cube:3", "--max-bases", "3")
    assert code == 3
    code, _, _ = run(capsys, "diameter", "--polytope", "/nonexistent.json")
    assert code == 2


def test_truncate_then_diameter(capsys, tmp_path):
    out = tmp_path / "t.json"
    assert main(["truncate", "--polytope", "cube:3", "--vertex", "0,0,0", "--out", str(out)]) == 0
    code, data, _ = run(capsys, "diameter", "--polytope", str(out), "--edge-list")
    assert code == 0 and data["vertices"] == 10 and data["diameter"] == 3
    assert len(data["edge_list"]) == 15


def test_silo_and_cyclic_silo(capsys):
    _, data, _ = run(capsys, "silo", "--polytope", "cube:3", "--vertex", "0,0,0", "--order", "lo:3,lo:1,lo:2")
    assert data["vertex_count"] == 14 and data["order"] == ["lo:3", "lo:1", "lo:2"]
    _, data, _ = run(capsys, "cyclic-silo", "--polytope", "cube:3", "--vertex", "0,0,0", "--r", "1")
    assert data["vertex_count"] == 26 and len(data["record"]["peaks"]) == 4


def test_reduce_diameter(capsys):
    code, _, err = run(capsys, "reduce-diameter", "--polytope", "cube:3", "--u", "0,0,0", "--v", "1,1,1", "--r", "2")
    assert code == 2 and "RTooSmall" in err
    code, data, err = run(capsys, "reduce-diameter", "--polytope", "cube:3", "--u", "0,0,0", "--v", "1,1,1",
                          "--r", "2", "--force", "--verify")
    assert code == 0 and data["r_meets_hypothesis"] is False and "warning" in err
    assert data["verified_diameter"] == data["predicted_diameter"] == 27


@pytest.mark.slow
def test_reduce_diameter_default_r(capsys):
    code, data, _ = run(capsys, "reduce-diameter", "--polytope", "cube:3", "--u", "0,0,0", "--v", "1,1,1", "--verify")
    assert code == 0 and data["K"] == 72 and data["r"] == 6 and data["verified_diameter"] == 75


def test_rock_build_and_path(capsys, tmp_path):
    base = tmp_path / "pentagon.json"
    base.write_text(json.dumps({"A": [["-1", "-3"], ["3", "-1"], ["1", "2"], ["-2", "1"], ["-3", "-1"]],
                                "b": ["0", "6", "9", "4", "3"]}))
    record = tmp_path / "rock.json"
    assert main(["rock-build", "--polytope", str(base), "--center", "1,1", "--radius2", "1/100",
                 "--out", str(record)]) == 0
    built = json.loads(record.read_text())
    n = len(built["graph"]["nodes"])
    assert set(built["layers"]) == {str(i) for i in range(n)}
    code, data, _ = run(capsys, "rock-path", "--record", str(record), "--u", str(n - 1), "--v", "1")
    assert code == 0 and data["within_bound"] is True
    code, _, err = run(capsys, "rock-build", "--polytope", "cube:2", "--center", "1/2,1/2", "--radius2", "1/4")
    assert code == 4 and "LayeringFailed" in err


def test_outputs_are_deterministic(capsys):
    argv = ["gen-knapsack", "--weights", "2,1,1"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_verify_paper_scopes(capsys):
    code, out, _ = run(capsys, "verify-paper", "--scope", "silo", "--max-d", "3")
    assert code == 0 and "criterion 7" in out
    code, data, _ = run(capsys, "verify-paper", "--scope", "rock", "--format", "json")
    # boxes admit no simple lift with a unique top vertex, so this scope reports failures
    assert code == 4 and data["summary"]["10"]["passed"] < data["summary"]["10"]["total"]
