import copy
import json
import subprocess
import sys

import pytest

from ndkp.cli import main
from ndkp.config import load_config, parse_config
from ndkp.errors import ConfigError

E1 = {
    "lattice": {"base": [0, 0, 0], "window": {"n": [0, 3], "m": [0, 3], "h": [0, 3]},
                "p": [2, 2, 2, 2], "q": [3, 3, 3, 3], "r": [5, 5, 5, 5]},
    "solution": {"k_blocks": [{"kind": "diagonal", "values": [1], "amplitudes": [1]}],
                 "kappa_blocks": [{"kind": "diagonal", "values": [4], "amplitudes": [1]}],
                 "C": "identity"},
    "checks": ["LPKP", "LPKP_ALT", "LPKP_RATIO", "LPMKP_V", "LPMKP_W", "ASYM_V_P", "ASYM_V_Q", "ASYM_V_R",
               "ASYM_W_P", "ASYM_W_Q", "ASYM_W_R", "NQC(1/3,1/7)", "LSKP", "BLKP", "INVARIANCE"],
    "tolerance": 1e-10,
}


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg, indent=2))
    return str(path)


def small_e1(n_hi=1):
    cfg = copy.deepcopy(E1)
    cfg["lattice"].update(window={"n": [0, n_hi], "m": [0, 0], "h": [0, 0]}, p=[2] * (n_hi + 1), q=[3], r=[5])
    return cfg


def test_verify_e1_all_pass(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "--config", write(tmp_path, E1), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] and doc["schema_version"] == 1
    assert [c["check"] for c in doc["checks"]][:2] == ["LPKP", "LPKP_ALT"]
    assert all(c["status"] == "PASS" for c in doc["checks"])
    assert doc["config"]["lattice"]["p"][0] == [2.0, 0.0]


def test_report_is_byte_identical(tmp_path):
    cfg = write(tmp_path, E1)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "--config", cfg, "--out", str(a), "--seed", "4"])
    main(["verify", "--config", cfg, "--out", str(b), "--seed", "4"])
    assert a.read_bytes() == b.read_bytes()


def test_failing_check_gives_nonzero_exit(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--config", write(tmp_path, E1), "--out", str(out), "--tolerance", "1e-30"]) == 1
    assert not json.loads(out.read_text())["passed"]


def test_error_check_gives_nonzero_exit(tmp_path):
    cfg = copy.deepcopy(E1)
    cfg["checks"] = ["LPKP"]
    cfg["points"] = [[3, 3, 3]]
    out = tmp_path / "r.json"
    assert main(["verify", "--config", write(tmp_path, cfg), "--out", str(out)]) == 1
    assert json.loads(out.read_text())["checks"][0]["status"] == "ERROR"


def test_fields_csv(tmp_path, capsys):
    assert main(["fields", "--config", write(tmp_path, small_e1()), "--field", "U"]) == 0
    text = capsys.readouterr().out
    assert "\r" not in text
    rows = text.splitlines()
    assert rows[0] == "n,m,h,re,im"
    n, m, h, re, im = rows[1].split(",")
    assert (n, m, h) == ("0", "0", "0") and abs(float(re) - 5 / 6) < 1e-16 and float(im) == 0
    assert abs(float(rows[2].split(",")[3]) + 15 / 7) < 1e-15
    assert rows[1] == "0,0,0,0.83333333333333337,0"


def test_fields_json_and_out_file(tmp_path):
    out = tmp_path / "tau.json"
    assert main(["fields", "--config", write(tmp_path, small_e1()), "--field", "Tau", "--format", "json",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [(d["n"], d["m"], d["h"]) for d in data] == [(0, 0, 0), (1, 0, 0)]
    assert abs(data[0]["re"] - 1.2) < 1e-15 and abs(data[1]["re"] - 0.7) < 1e-15


def test_fields_vacuum_tau_is_one(tmp_path, capsys):
    cfg = small_e1()
    cfg["solution"]["k_blocks"][0]["amplitudes"] = [0]
    main(["fields", "--config", write(tmp_path, cfg), "--field", "Tau"])
    rows = capsys.readouterr().out.splitlines()[1:]
    assert all(r.split(",")[3] == "1" for r in rows)


def test_fields_z_at_base(tmp_path, capsys):
    main(["fields", "--config", write(tmp_path, small_e1(0)), "--field", "Z"])
    assert abs(float(capsys.readouterr().out.splitlines()[1].split(",")[3]) - 5 / 24) < 1e-16


def test_fields_unknown_field(tmp_path):
    assert main(["fields", "--config", write(tmp_path, small_e1()), "--field", "Nope"]) == 2


def test_oracle(tmp_path):
    out = tmp_path / "o.json"
    cfg = copy.deepcopy(E1)
    cfg["solution"] = {"k_blocks": [{"kind": "jordan", "value": 1, "size": 3}],
                       "kappa_blocks": [{"kind": "jordan", "value": 9, "size": 3}]}
    assert main(["oracle", "--config", write(tmp_path, cfg), "--out", str(out)]) == 0
    c = json.loads(out.read_text())["checks"][0]
    assert c["status"] == "PASS" and c["max_relative_deviation"] <= 1e-10


def test_invertibility_error_names_clause(tmp_path, capsys):
    cfg = copy.deepcopy(E1)
    cfg["lattice"]["p"][0] = -1
    assert main(["verify", "--config", write(tmp_path, cfg)]) == 2
    err = capsys.readouterr().err
    assert "lattice.p[0]" in err and "p_0 I + K is not invertible" in err


@pytest.mark.parametrize("mutate,field", [
    (lambda c: c.pop("solution"), "solution"),
    (lambda c: c["lattice"].update(p=[2, 2]), "lattice"),
    (lambda c: c.update(tolerance=-1), "tolerance"),
    (lambda c: c.update(checks=["LPKP(1)"]), "checks[0]"),
    (lambda c: c.update(bogus=1), "bogus"),
    (lambda c: c["solution"]["k_blocks"][0].update(kind="triangle"), "solution.k_blocks[0].kind"),
    (lambda c: c.update(points=[[1, 2]]), "points[0]"),
    (lambda c: c.update(constants={"y0": 0}), "constants"),
])
def test_config_errors_name_field(mutate, field):
    cfg = copy.deepcopy(E1)
    mutate(cfg)
    text = json.dumps(cfg, indent=2)
    with pytest.raises(ConfigError) as info:
        parse_config(json.loads(text), text)
    assert info.value.field == field


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "lattice": {\n    "p": [1,,2]\n  }\n}\n')
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert info.value.line == 3


def test_complex_and_fraction_inputs():
    cfg = copy.deepcopy(E1)
    cfg["lattice"]["q"] = ["10/3", [3, 0.5], 3, 3]
    rc = parse_config(cfg)
    assert rc.params.q[0] == 10 / 3 and rc.params.q[1] == 3 + 0.5j


def test_list_checks(capsys):
    assert main(["list-checks"]) == 0
    out = capsys.readouterr().out
    assert "LPKP\tequation" in out and "LAX_W_ASYM\tlax" in out and "INVARIANCE" in out


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ndkp", "fields", "--config", write(tmp_path, small_e1()),
                           "--field", "U"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("n,m,h,re,im\n")
