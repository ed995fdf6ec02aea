import json
import subprocess
import sys
from pathlib import Path

import pytest

from localduality.cli import main

MODULES = Path(__file__).resolve().parents[1] / "demos" / "modules"


def write(tmp_path, data, name="m.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data), encoding="utf-8")
    return str(p)


def run_json(capsys, *argv):
    code = main([*argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


def test_hilbert_hypersurface_window(capsys):
    code, rep = run_json(capsys, "hilbert", str(MODULES / "hypersurface.json"), "--window", "0:2,0:2")
    assert code == 0
    rows = rep["tables"]["hilbert[x,t,dim]"]
    assert {(a, b): v for a, b, v in rows} == {(a, b): int(a == 0) for a in range(3) for b in range(3)}


def test_hilbert_free_is_all_ones(capsys, tmp_path):
    f = write(tmp_path, {"base_vars": 1, "fiber_vars": 1, "generators": [{"x_shift": 0, "t_shift": 0}], "relations": []})
    code, rep = run_json(capsys, "hilbert", f, "--window", "0:0,0:2")
    assert code == 0
    assert [v for _, _, v in rep["tables"]["hilbert[x,t,dim]"]] == [1, 1, 1]


def test_parse_error_exit_code(capsys):
    assert main(["hilbert", str(MODULES / "bad_poly.json")]) == 2
    err = capsys.readouterr().err
    assert "relations[0][0]" in err and "column 4" in err


def test_bad_flags_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["hilbert", str(MODULES / "hypersurface.json"), "--window", "0:2"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["frobnicate", "x.json"])
    assert info.value.code == 2


def test_localcoh_free_d2(capsys):
    code, rep = run_json(capsys, "localcoh", str(MODULES / "free_d2.json"), "-i", "2", "--window", "0:0,-4:-2")
    assert code == 0
    assert [[t, v] for _, t, v, _ in rep["tables"]["H2[x,t,dim,cap]"]] == [[-4, 3], [-3, 2], [-2, 1]]


def test_localcoh_hypersurface(capsys):
    f = str(MODULES / "hypersurface.json")
    code, rep = run_json(capsys, "localcoh", f, "-i", "0", "--window", "0:2,-3:3")
    assert code == 0 and {v for _, _, v, _ in rep["tables"]["H0[x,t,dim,cap]"]} == {0}
    code, rep = run_json(capsys, "localcoh", f, "-i", "1", "--window", "0:2,-3:3")
    for a, t, v, _ in rep["tables"]["H1[x,t,dim,cap]"]:
        assert v == (1 if a == 0 and t <= -1 else 0)


def test_cm_check_failure_exit_one(capsys):
    code, rep = run_json(capsys, "cm-check", str(MODULES / "point_plus_free.json"))
    assert code == 1
    assert rep["verdict"] == "fail" and rep["tables"]["nonzero_ext"] == [0, 2]


def test_abort_exit_three(capsys):
    code = main(["localcoh", str(MODULES / "hypersurface.json"), "--max-cap", "1"])
    assert code == 3
    assert "aborted" in capsys.readouterr().err


def test_verify_duality_hypersurface_table(capsys):
    code, rep = run_json(capsys, "verify-duality", str(MODULES / "hypersurface.json"))
    assert code == 0
    rows = {(a, k): dims for a, k, *dims in rep["tables"]["dims[x,t,G,Gamma,D0,D1]"]}
    for k in range(-3, 4):
        assert rows[(0, k)] == ([0, 1, 0, 1] if k <= -1 else [1, 1, 0, 0])
    assert {r["check_id"] for r in rep["records"]} == {"duality.i:D0=H0", "duality.ii:D1=H1", "duality.iv:euler"}
    assert rep["tables"]["selfdual"]["matches"] == [2]


@pytest.mark.parametrize("name,weight", [("hypersurface.json", None), ("zero_section.json", None), ("conormal.json", None),
                                         ("free_d2.json", None), ("point_plus_free.json", "1")])
def test_verify_derham_corpus(capsys, name, weight):
    argv = ["verify-derham", str(MODULES / name)] + (["--weight", weight] if weight else [])
    code, rep = run_json(capsys, *argv)
    assert code == 0, rep


def test_verify_derham_refusal_is_recorded(capsys):
    code, rep = run_json(capsys, "verify-derham", str(MODULES / "point_plus_free.json"), "--weight", "1")
    assert any("e1 refused" in n for n in rep["notes"])
    assert any(r["check_id"].startswith("der3") for r in rep["records"])


def test_negative_ranges_parse(capsys):
    code, rep = run_json(capsys, "selfdual-scan", str(MODULES / "zero_section.json"), "--weight-range", "-3:5",
                         "--window", "-1:2,-3:3")
    assert code == 0
    assert rep["tables"]["selfdual"]["matches"] == [1]
    assert rep["window"]["x"] == [-1, 2]


def test_reports_are_byte_stable():
    argv = [sys.executable, "-m", "localduality.cli", "verify-duality", str(MODULES / "point_plus_free.json"), "--json"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b
    assert b"wall_time" not in a


def test_timing_flag_adds_wall_time(capsys):
    code, rep = run_json(capsys, "cm-check", str(MODULES / "hypersurface.json"), "--timing")
    assert code == 0 and rep["wall_time"] >= 0


def test_resolve_reports_betti(capsys):
    code, rep = run_json(capsys, "resolve", str(MODULES / "conormal.json"))
    assert code == 0
    assert rep["tables"]["ranks"] == [1, 2, 1]
