import json
import math
from pathlib import Path

import pytest

from axialym import cli


def test_missing_command_exits_2():
    assert cli.main([]) == 2


def test_missing_seed_for_stochastic():
    assert cli.main(["--command", "mc"]) == 2


def test_bad_kappa_list():
    assert cli.main(["--command", "area", "--kappa", "2,zebra"]) == 2


def test_strict_resolution_guard():
    assert cli.main(["--command", "area", "--resolution", "4",
                     "--strict"]) == 3


def test_area_csv_output(tmp_path, capsys):
    out = tmp_path / "area.csv"
    assert cli.main(["--command", "area", "--kappa", "5,10",
                     "--resolution", "16", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("#")            # config echo
    assert "heat_kernel_ratio" in text
    assert (tmp_path / "area.png").exists()


def test_limit_json(tmp_path):
    out = tmp_path / "limit.json"
    assert cli.main(["--command", "limit", "--format", "json",
                     "--out", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert rec["config"]["command"] == "limit"
    su2 = [r for r in rec["rows"] if r["group"] == "SU(2)"][0]
    assert abs(su2["limit"] - 2 * math.exp(-3.0 / 16.0)) < 1e-9


def test_grid_check_deterministic(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        assert cli.main(["--command", "grid-check", "--seed", "11",
                         "--out", str(out)]) == 0
        outs.append(out.read_text())
    assert outs[0] == outs[1]


def test_potential_stdout(capsys):
    assert cli.main(["--command", "potential"]) == 0
    text = capsys.readouterr().out
    assert "group,R,V" in text


def test_config_file_override(tmp_path):
    cfgfile = tmp_path / "run.json"
    cfgfile.write_text(json.dumps({
        "command": "abelian",
        "kappa": [20.0],
        "surface": {"shape": "rectangle", "R": 1.0, "T": 1.0},
        "resolution": 32,
    }))
    out = tmp_path / "ab.csv"
    assert cli.main(["--config", str(cfgfile), "--out", str(out)]) == 0
    body = [l for l in out.read_text().splitlines()
            if l and not l.startswith("#")]
    header, row = body[0].split(","), body[1].split(",")
    val = float(row[header.index("value")])
    assert abs(val - math.exp(-1.0 / 8.0)) < 0.02


def test_duality_command(tmp_path):
    out = tmp_path / "dual.csv"
    assert cli.main(["--command", "duality", "--kappa", "2,4",
                     "--out", str(out)]) == 0
    assert "cos_theta" in out.read_text()
