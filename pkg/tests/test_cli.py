import csv
import io
import json
import subprocess
import sys

import pytest

from lattes_periodic.cli import run

E5 = "5:0,0,0,1,1"
E7 = "7:0,0,0,1,6"


def _table_value(out, key):
    for line in out.splitlines():
        parts = line.split()
        if parts and parts[0] == key:
            return parts[1]
    raise KeyError(key)


def _csv(out):
    return list(csv.DictReader(io.StringIO(out.split("\n#")[0])))


# -- density -------------------------------------------------------------------------------

@pytest.mark.parametrize("curve,d,delta", [
    (E5, "3", "1/6"),
    (E7, "55", "1/8"),
    ("7:0,0,0,1,-1", "55", "1/8"),
    (E5, "1", "1"),
])
def test_density_examples(curve, d, delta):
    code, out, _ = run(["density", "--curve", curve, "--d", d, "--n", "1"])
    assert code == 0
    assert _table_value(out, "delta") == delta


def test_density_json_and_csv():
    code, out, _ = run(["density", "--curve", E5, "--d", "3", "--n", "2", "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert data["delta"] == {"num": 1, "den": 2} and data["tau_n"] == "-1"
    code, out, _ = run(["density", "--curve", E5, "--d", "3", "--format", "csv"])
    assert out.startswith("q,n,tau_n,d,pi_plus,pi_minus,delta,per_count,permutation,gap_ok\n")
    assert _csv(out)[0]["delta"] == "1/6"
    assert "\r" not in out


@pytest.mark.parametrize("argv,code", [
    (["density", "--curve", "5:0,0,0,0,0", "--d", "3"], 2),
    (["density", "--curve", E5, "--d", "5"], 2),
    (["density", "--curve", E5, "--d", "0"], 2),
    (["density", "--curve", "6:0,0,0,1,1", "--d", "5"], 2),
    (["density", "--curve", "5:1,2", "--d", "3"], 2),
    (["density", "--curve", E5, "--d", "3", "--n", "0"], 2),
    (["density", "--curve", E5], 1),
    (["density", "--curve", E5, "--d", "x"], 1),
    (["density", "--curve", E5, "--d", "3", "--format", "xml"], 1),
    ([], 1),
    (["nonsense"], 1),
    (["verify", "--q-max", "1"], 1),
])
def test_exit_codes(argv, code):
    assert run(argv)[0] == code


# -- oracle ----------------------------------------------------------------------------------

def test_oracle_examples(tmp_path):
    path = tmp_path / "graph.csv"
    code, out, _ = run(["oracle", "--curve", E5, "--d", "3", "--emit-graph", str(path)])
    assert code == 0
    assert _table_value(out, "per_count") == "1" and _table_value(out, "delta") == "1/6"
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["index", "repr", "succ_index", "periodic"]
    assert rows[-1] == ["5", "inf", "5", "1"]
    assert len(rows) == 7
    for d in ("2", "1"):
        code, out, _ = run(["oracle", "--curve", E7, "--d", d])
        assert _table_value(out, "permutation") == "true"


def test_oracle_over_extension_matches_density():
    _, out, _ = run(["oracle", "--curve", E5, "--d", "3", "--n", "2", "--format", "json"])
    assert json.loads(out)["delta"] == {"num": 1, "den": 2}


# -- verify -----------------------------------------------------------------------------------

def test_verify_small():
    code, out, _ = run(["verify", "--q-max", "2"])
    assert code == 0 and "passed" in out


def test_verify_counts():
    code, out, _ = run(["verify", "--q-max", "7", "--d-max", "10", "--format", "csv"])
    assert code == 0
    rows = _csv(out)
    assert [int(r["q"]) for r in rows] == [2, 3, 4, 5, 7]
    total = sum(int(r["checks"]) for r in rows)
    assert total > 10 ** 4
    assert f"all {total} checks passed" in out


def test_verify_injected_fault():
    code, out, err = run(["verify", "--q-max", "3", "--inject-fault"])
    assert code == 3
    assert "curve:" in err and "formula:" in err and "oracle:" in err


def test_verify_parallel_matches_serial():
    serial = run(["verify", "--q-max", "4", "--d-max", "6", "--format", "json"])
    parallel = run(["verify", "--q-max", "4", "--d-max", "6", "--format", "json", "--jobs", "2"])
    assert serial == parallel and serial[0] == 0


# -- tower ---------------------------------------------------------------------------------------

def test_tower_examples():
    code, out, _ = run(["tower", "--curve", E5, "--d", "3", "--format", "json"])
    data = json.loads(out)
    assert code == 0 and data["c"] == 8 and data["limit"] == {"num": 2, "den": 9}
    code, out, _ = run(["tower", "--curve", E5, "--d", "1"])
    assert code == 0 and _table_value(out, "limit") == "1" and _table_value(out, "N_emp") == "0"
    code, out, _ = run(["tower", "--curve", "7:0,0,0,1,0", "--d", "3", "--n", "2"])
    assert code == 0 and _table_value(out, "limit") == "5/9"


def test_tower_cap_exit_code():
    code, out, err = run(["tower", "--curve", E5, "--d", "3", "--m-max", "3", "--n-cap", "1",
                          "--format", "csv"])
    assert code == 4 and "stabilization" in err
    assert _csv(out)[0]["limit"] == "2/9"


# -- supersingular -----------------------------------------------------------------------------

def test_supersingular_rows():
    code, out, _ = run(["supersingular", "--field", "5", "--ell", "3", "--n-max", "4",
                        "--paper-epsilon", "--format", "csv"])
    assert code == 0
    rows = {int(r["n"]): r for r in _csv(out)}
    assert rows[1]["delta_tau0"] == rows[1]["delta_oracle"] == "1/3"
    r2 = rows[2]
    assert r2["delta_tau0"] == r2["delta_formula"] == r2["delta_oracle"] == "5/13"
    assert r2["epsilon"] == "-1" and r2["paper_epsilon"] == "1"
    assert r2["paper_divergent"] == "true" and r2["paper_integral"] == "false"
    assert all(r["match"] == "true" for r in rows.values())


def test_supersingular_permutation_row():
    code, out, _ = run(["supersingular", "--field", "7", "--ell", "5", "--n", "1", "--format", "json"])
    (row,) = json.loads(out)
    assert code == 0 and row["delta_tau0"] == {"num": 1, "den": 1} and row["match"]


def test_supersingular_explicit_curve():
    code, _, _ = run(["supersingular", "--curve", "5:0,0,0,0,1", "--ell", "3", "--n", "2"])
    assert code == 0
    code, _, err = run(["supersingular", "--curve", E5, "--ell", "3", "--n", "2"])
    assert code == 2 and "trace" in err


def test_supersingular_missing_curve():
    # for p ≡ 1 (mod 4) there is no trace-zero curve over GF(p^2)
    code, _, err = run(["supersingular", "--field", "25", "--ell", "3", "--n", "1"])
    assert code == 2 and "no curve" in err


@pytest.mark.parametrize("ell", ["2", "5", "9"])
def test_supersingular_bad_ell(ell):
    assert run(["supersingular", "--field", "5", "--ell", ell, "--n", "1"])[0] == 2


# -- scan ------------------------------------------------------------------------------------------

def test_scan_gf5():
    code, out, _ = run(["scan", "--field", "5", "--d", "3", "--format", "csv"])
    assert code == 0
    rows = _csv(out)
    assert len(rows) == 5 ** 5 - 5 ** 4
    assert all(r["delta_formula"] == r["delta_oracle"] for r in rows)
    assert out.rstrip("\n").splitlines()[-1] == "# smooth=2500 singular=625"
    keys = [tuple(int(r[f"a{i}"]) for i in (1, 2, 3, 4, 6)) for r in rows]
    assert keys == sorted(keys)


def test_scan_gf2_json():
    code, out, _ = run(["scan", "--field", "2", "--d", "3", "--format", "json"])
    data = json.loads(out)
    assert code == 0 and data["smooth"] == 16 and data["singular"] == 16
    assert all(r["match"] for r in data["curves"])


def test_scan_rejects_bad_d():
    assert run(["scan", "--field", "3", "--d", "6"])[0] == 2


# -- determinism and entry points --------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["scan", "--field", "4", "--d", "5", "--format", "csv"],
    ["supersingular", "--field", "7", "--ell", "3", "--n-max", "3", "--format", "json"],
    ["tower", "--curve", E5, "--d", "3", "--format", "csv"],
])
def test_byte_identical_output(argv):
    assert run(argv) == run(argv)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lattes_periodic", "density", "--curve", E5,
                           "--d", "3", "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["delta"] == {"num": 1, "den": 6}
    proc = subprocess.run([sys.executable, "-m", "lattes_periodic", "density"], capture_output=True, text=True)
    assert proc.returncode == 1
