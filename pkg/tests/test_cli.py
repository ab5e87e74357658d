import io
import json
import subprocess
import sys

import pytest

from unitgroups.abelian import groups_of_order
from unitgroups.cli import run


def call(args, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(args, out=out)
    return code, out.getvalue()


def test_classify_cyclic_44():
    code, out = call(["classify-cyclic", "44"])
    assert code == 0 and json.loads(out)["status"] == "NotRealizable"


def test_classify_group_nilpotent_witness():
    code, out = call(["classify-group", "C2 x C9^3"])
    data = json.loads(out)
    assert code == 0 and data["status"] == "Realizable"
    assert data["witness"]["presentation"]["family"] == "NilpotentExtension"


def test_unknown_exits_3():
    code, out = call(["classify-group", "C4 x C4 x C11"])
    assert code == 3 and json.loads(out)["status"] == "Unknown"
    code, out = call(["classify-group", "C4 x C4 x C11", "--enable-rule", "F2"])
    assert code == 0 and json.loads(out)["status"] == "NotRealizable"


def test_ring_classes():
    assert json.loads(call(["classify-group", "C7", "--ring-class", "domain"])[1])["status"] == "Realizable"
    assert json.loads(call(["classify-group", "C2 x C2", "--ring-class", "domain"])[1])["status"] == "NotRealizable"
    assert json.loads(call(["classify-group", "C4 x C3", "--ring-class", "torsion-free"])[1])["status"] == "NotRealizable"


def test_ditor():
    assert json.loads(call(["ditor", "105"])[1])["status"] == "Realizable"
    assert json.loads(call(["ditor", "5"])[1])["status"] == "NotRealizable"


def test_parse_errors_exit_2():
    assert call(["classify-group", "C4 x D3"])[0] == 2
    assert call(["nonsense"])[0] == 2
    assert call(["classify-group", "C4", "--enable-rule", "Z9"])[0] == 2
    assert call(["units", "Zmod:abc"])[0] == 2


def test_units():
    code, out = call(["units", "Zmod:13"])
    assert code == 0 and json.loads(out)["report"]["structure"] == "C4 x C3"
    assert json.loads(call(["units", "F9"])[1])["report"]["structure"] == "C8"
    assert json.loads(call(["units", "A1"])[1])["report"]["unit_count"] == 18


def test_bound_errors_exit_2():
    assert call(["--bound", "100", "units", "Zmod:1000"])[0] == 2
    assert call(["--an-bound", "1", "units", "A2"])[0] == 2
    assert call(["--density-limit", "100", "density", "--max", "1000"])[0] == 2


def test_witness_verify_round_trip_sweep(monkeypatch):
    checked = 0
    for n in range(1, 201):
        for G in groups_of_order(n):
            text = str(G)
            code, cert = call(["witness", text])
            if code != 0 or json.loads(cert).get("status"):
                continue  # not realizable, verdict printed instead
            vcode, rep = call(["verify", "--cert", "-"], stdin=cert, monkeypatch=monkeypatch)
            assert vcode == 0, (text, rep)
            assert json.loads(rep)["match"] is True
            checked += 1
    assert checked > 200


def test_verify_mismatch_exits_1(monkeypatch, tmp_path):
    _, cert = call(["witness", "C4 x C11^2"])
    path = tmp_path / "cert.json"
    path.write_text(cert)
    assert call(["verify", "--cert", str(path)])[0] == 0
    assert call(["verify", "--cert", str(path), "--expect", "C4 x C11"])[0] == 1
    pres = json.dumps(json.loads(cert)["presentation"])
    assert call(["verify", "--cert", "-", "--expect", "C4 x C11^2"], stdin=pres, monkeypatch=monkeypatch)[0] == 0
    assert call(["verify", "--cert", "-"], stdin=pres, monkeypatch=monkeypatch)[0] == 2


def test_density_csv(tmp_path):
    out = tmp_path / "report.csv"
    code, text = call(["density", "--max", "1e4", "--checkpoints", "1e3,1e4", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "n,count_all,count_odd,count_reduced,density_all,density_odd,density_reduced"
    assert lines[1].startswith("1000,540,40,378,")
    assert json.loads(text)["checkpoints"][1]["n"] == 10000


def test_config_file(tmp_path):
    cfg = tmp_path / "ug.conf"
    cfg.write_text("bound = 100\n")
    assert call(["--config", str(cfg), "units", "Zmod:1000"])[0] == 2
    assert call(["--config", str(cfg), "--bound", "5000", "units", "Zmod:1000"])[0] == 0
    cfg.write_text("colour = blue\n")
    assert call(["--config", str(cfg), "ditor", "4"])[0] == 2


def test_pretty():
    code, out = call(["--pretty", "classify-cyclic", "12"])
    assert code == 0 and "status: Realizable" in out and not out.lstrip().startswith("{")


def test_deterministic_bytes_subprocess():
    args = [sys.executable, "-m", "unitgroups.cli", "classify-group", "C4 x C4 x C11", "--enable-rule", "F2"]
    a = subprocess.run(args, capture_output=True)
    b = subprocess.run(args, capture_output=True)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout
