import io
import json
import subprocess
import sys

import numpy as np
import pytest

from equipart.cli import run
from equipart.model import PointCloud, dump_masses


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


JSON_INVOCATIONS = [
    ("bounds", "--j", "1", "--k", "1"),
    ("bounds", "--j", "4", "--k", "2", "--index-certificates"),
    ("table", "--jmax", "4", "--kmax", "3", "--format", "json"),
    ("certify", "--j", "3", "--k", "2"),
    ("certify", "--j", "5", "--k", "3", "--cap", "20"),
    ("enumerate", "--j", "3"),
    ("decide", "--j", "5"),
    ("decide", "--j", "3"),
    ("solve", "--demo", "ham-sandwich-2", "--k", "1", "--restarts", "4"),
]


@pytest.mark.parametrize("argv", JSON_INVOCATIONS, ids=lambda a: " ".join(a))
def test_json_valid_and_reproducible(argv):
    code1, out1 = call(*argv)
    code2, out2 = call(*argv)
    assert code1 == code2 == 0
    assert out1 == out2
    json.loads(out1)


def test_bounds_one_one():
    code, out = call("bounds", "--j", "1", "--k", "1")
    obj = json.loads(out)
    assert code == 0 and (obj["lower"], obj["upper"], obj["exact"]) == (1, 1, 1)


def test_decide_five():
    code, out = call("decide", "--j", "5")
    assert code == 0 and json.loads(out)["certified"] == 8


def test_enumerate_three():
    code, out = call("enumerate", "--j", "3")
    assert code == 0 and len(json.loads(out)) == 3


def test_plain_format():
    code, out = call("bounds", "--j", "3", "--k", "2", "--format", "plain")
    assert code == 0 and "exact: 5" in out


def test_table_formats():
    assert call("table", "--jmax", "2", "--kmax", "2")[1].startswith("| j \\ k |")
    assert call("table", "--jmax", "2", "--kmax", "2", "--format", "csv")[1].startswith("j,k,lower")
    code, out = call("table", "--jmax", "2", "--kmax", "2", "--conjecture")
    assert code == 0 and "conj." in out


@pytest.mark.parametrize(
    "argv",
    [
        (),
        ("frobnicate",),
        ("bounds", "--j", "1"),
        ("bounds", "--j", "1", "--k", "1", "--bogus"),
        ("bounds", "--j", "0", "--k", "1"),
        ("certify", "--j", "3", "--k", "9"),
        ("enumerate", "--j", "4"),
        ("decide", "--j", "4"),
        ("table", "--jmax", "2", "--kmax", "2", "--format", "yaml"),
        ("solve", "--k", "1"),
        ("solve", "--demo", "hadwiger", "--k", "2", "--eps", "0.5"),
        ("verify", "--cert", "/nonexistent/file.json"),
    ],
)
def test_usage_errors(argv, capsys):
    assert call(*argv)[0] == 2
    assert capsys.readouterr().err


def test_masses_and_demo_exclusive(tmp_path, capsys):
    f = tmp_path / "m.json"
    f.write_text("{}")
    code, _ = call("solve", "--masses", str(f), "--demo", "hadwiger", "--k", "2")
    assert code == 2
    err = capsys.readouterr().err
    assert "--masses" in err and "--demo" in err


def test_enumerate_out_and_verify(tmp_path, capsys):
    path = tmp_path / "certs.json"
    code, out = call("enumerate", "--j", "5", "--out", str(path))
    assert code == 0
    assert json.loads(out)["count"] == 10
    certs = json.loads(path.read_text())
    assert len(certs) == 10
    code, out = call("verify", "--cert", str(path))
    assert code == 0 and json.loads(out)["valid"] == 10

    certs[3]["h1"]["roots"][0] = "1/1000"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(certs))
    code, out = call("verify", "--cert", str(bad))
    assert code == 1
    obj = json.loads(out)
    assert obj["valid"] == 9 and not obj["results"][3]["valid"]
    assert "verification failed" in capsys.readouterr().err


def test_verify_tampered_orthant_hyperplane(tmp_path):
    _, out = call("enumerate", "--j", "1")
    (cert,) = json.loads(out)
    cert["h1"]["roots"] = ["63/50", "7/4"]
    cert["h1"]["normal"] = ["-301", "100"]
    cert["h1"]["offset"] = "-441/2"
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cert))
    code, out = call("verify", "--cert", str(path))
    assert code == 1
    assert "off by" in json.loads(out)["results"][0]["error"]


def test_solve_masses_file(tmp_path):
    rng = np.random.default_rng(0)
    clouds = [PointCloud(rng.standard_normal((200, 2)) + c) for c in ([0, 0], [5, 1])]
    path = tmp_path / "m.json"
    path.write_text(json.dumps(dump_masses(2, clouds)))
    code, out = call("solve", "--masses", str(path), "--k", "1", "--eps", "0.02", "--seed", "1")
    assert code == 0
    obj = json.loads(out)
    assert obj["status"] == "Found" and obj["residual"] <= 0.02


def test_solve_not_found_exit_one(tmp_path, capsys):
    rng = np.random.default_rng(0)
    clouds = [PointCloud(rng.standard_normal((100, 2)) + [30.0 * i, 0]) for i in range(3)]
    path = tmp_path / "m.json"
    path.write_text(json.dumps(dump_masses(2, clouds)))
    code, out = call("solve", "--masses", str(path), "--k", "2", "--eps", "0.000001",
                     "--restarts", "1", "--max-iters", "20")
    assert code == 1
    assert json.loads(out)["status"] == "NotFound"
    assert "no eps-equipartition found within budget" in capsys.readouterr().err


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "equipart", "decide", "--j", "9"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["certified"] == 14
    proc = subprocess.run([sys.executable, "-m", "equipart", "bounds", "--nope"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == ""
