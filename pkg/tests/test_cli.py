"""Command-line interface."""

import csv
import json
import math

import numpy as np
import pytest

from dunkl_besov import build_grid, load_profile
from dunkl_besov.cli import main

FAST = ["--grid-points", "512", "--scales", "0.03125,4,7"]


def test_seminorm_json(tmp_path):
    out = tmp_path / "s.json"
    rc = main(["seminorm", "--function", "gaussian", "--alpha", "0.5", "--p", "2", "--q", "2",
               "--beta", "0.5", "--out", str(out)] + FAST)
    assert rc == 0
    d = json.loads(out.read_text())
    sem = d["seminorms"]
    assert all(math.isfinite(sem[k]) and sem[k] > 0 for k in ("bd", "kd", "ed"))
    assert d["flags"]["theorem1"]["pass"]


def test_seminorm_q_inf(tmp_path):
    out = tmp_path / "s.json"
    assert main(["seminorm", "--function", "bump", "--q", "inf", "--out", str(out)] + FAST) == 0
    d = json.loads(out.read_text())
    assert d["params"]["q"] == "inf"
    assert d["quadrature_meta"]["bd"]["branch"] == "sup"


def test_seminorm_constant_csv(tmp_path):
    g = build_grid(0.0, 20.0, 512)
    src = tmp_path / "one.csv"
    with open(src, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["x", "value"])
        for x in g.nodes:
            wr.writerow([repr(float(x)), "1.0"])
    out = tmp_path / "s.json"
    assert main(["seminorm", "--function", str(src), "--out", str(out)] + FAST) == 0
    d = json.loads(out.read_text())
    assert d["flags"]["degenerate"]
    assert d["seminorms"]["bd"] == d["seminorms"]["kd"] == d["seminorms"]["ed"] == 0.0


def test_seminorm_csv_output(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["seminorm", "--function", "gaussian", "--output", "csv", "--out", str(out)] + FAST) == 0
    rows = list(csv.DictReader(open(out)))
    assert rows and set(rows[0]) == {"x", "w", "k", "e"}


def test_transform_and_translate(tmp_path, capsys):
    assert main(["transform", "--function", "gaussian", "--alpha", "0.5", "--grid-points", "512"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert isinstance(d, dict)
    out = tmp_path / "t.csv"
    assert main(["translate", "--function", "gaussian", "--x", "1.0", "--grid-points", "512",
                 "--output", "csv", "--out", str(out)]) == 0
    rows = list(csv.reader(open(out)))
    assert rows[0] == ["x", "re", "im"] and len(rows) == 513
    assert main(["convolve", "--function", "gaussian", "--with", "bump", "--grid-points", "512",
                 "--out", str(tmp_path / "c.json")]) == 0


def test_off_grid_csv_is_resampled(tmp_path):
    src = tmp_path / "g.csv"
    xs = np.linspace(-20, 20, 4001)
    np.savetxt(src, np.c_[xs, np.exp(-xs * xs / 2)], delimiter=",", header="x,value", comments="")
    out = tmp_path / "t.json"
    assert main(["transform", "--function", str(src), "--grid-points", "512", "--out", str(out)]) == 0


def test_usage_errors(capsys):
    assert main(["seminorm", "--function", "no_such_function"] + FAST) == 2
    assert "catalog" in capsys.readouterr().err
    assert main(["seminorm", "--function", "gaussian", "--p", "0.5"] + FAST) == 2


def test_verify_rejects_alpha_before_running(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--alpha", "-0.6", "--out", str(out)]) == 2
    assert not out.exists()
    assert "alpha" in capsys.readouterr().err


def test_verify_zero_tolerance_fails(tmp_path, capsys):
    prof = load_profile().to_dict()
    prof["tolerances"]["S1.plancherel"] = 0.0
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(prof))
    out = tmp_path / "r.json"
    rc = main(["verify", "--profile", str(path), "--suites", "S1", "--alpha", "0", "--out", str(out)])
    assert rc == 1
    err = capsys.readouterr().err
    assert "S1.plancherel[" in err
    rep = json.loads(out.read_text())
    assert rep["failed"] and all(f.startswith("S1.plancherel[") for f in rep["failed"])
