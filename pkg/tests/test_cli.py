import json

from conftest import ROOT
from pluckerdss.cli import main
from pluckerdss.field import GF
from pluckerdss.fileio import load_snapshot

CONFIGS = ROOT / "configs"
SCENARIOS = ROOT / "scenarios"

B6 = "0 0 0 1 1 0\n1 0 0 0 1 0\n1 1 0 0 0 0\n0 1 1 0 0 0\n0 0 1 1 0 0\n1 1 1 1 1 0\n"


def test_goodmatrix(capsys):
    assert main(["goodmatrix", "6"]) == 0
    assert capsys.readouterr().out == B6


def test_goodmatrix_too_small(capsys):
    assert main(["goodmatrix", "2"]) == 2
    assert "b" in capsys.readouterr().err


def test_verify_resilient7(capsys, tmp_path):
    out = tmp_path / "sweep.json"
    code = main(["verify-assignment", str(CONFIGS / "resilient7.ini"), "--t", "2",
                 "--output", str(out), "--figures", str(tmp_path / "fig")])
    assert code == 0
    assert "RESULT ok" in capsys.readouterr().out
    doc = json.loads(out.read_text())
    assert doc["ok"] and doc["sets_checked"] == 66
    assert (tmp_path / "fig" / "sweep.png").stat().st_size > 0


def test_verify_resilient7_t3_fails(capsys):
    assert main(["verify-assignment", str(CONFIGS / "resilient7.ini"), "--t", "3", "--no-verify", "-q"]) == 1


def test_run_scenario(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = main(["run", str(CONFIGS / "full_gf3_b4.ini"), str(SCENARIOS / "lifecycle.txt"),
                 "--output", str(out), "--figures", str(tmp_path)])
    assert code == 0
    assert capsys.readouterr().out.endswith("RESULT ok\n")
    doc = json.loads(out.read_text())
    assert doc["format"] == "pluckerdss-report" and doc["ok"]
    assert doc["ledger"]["by_kind"]["reconstruct-full"] == 12
    assert doc["ledger"]["by_kind"]["reconstruct-min"] == 12
    assert (tmp_path / "ledger.png").stat().st_size > 0


def test_run_failing_assertion(tmp_path, capsys):
    sc = tmp_path / "s.txt"
    sc.write_text("store random\nassert dead == 1\n")
    assert main(["run", str(CONFIGS / "gf2_b3.ini"), str(sc)]) == 1


def test_run_bad_scenario(tmp_path, capsys):
    sc = tmp_path / "s.txt"
    sc.write_text("store random\nfrobnicate\n")
    assert main(["run", str(CONFIGS / "gf2_b3.ini"), str(sc)]) == 2
    assert f"{sc}:2:" in capsys.readouterr().err


def test_bad_config_line(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[system]\nfield = gf(2)\nb = x\n")
    assert main(["goodmatrix", "3"]) == 0
    capsys.readouterr()
    assert main(["gen-assignment", str(cfg)]) == 2
    assert f"{cfg}:3:" in capsys.readouterr().err


def test_store_gf2(tmp_path, capsys):
    f = tmp_path / "file.bin"
    f.write_bytes(bytes([0b10100000]))
    snap = tmp_path / "snap.json"
    assert main(["store", str(CONFIGS / "gf2_b3.ini"), str(f), "--output", str(snap)]) == 0
    F, b, nodes = load_snapshot(snap.read_text())
    assert F == GF(2) and b == 3 and len(nodes) == 7
    e1 = next(n for n in nodes if n.id.coords == (1, 0, 0))
    assert e1.payload.tolist() == [1, 0]
    # byte-identical on a second run
    snap2 = tmp_path / "snap2.json"
    main(["store", str(CONFIGS / "gf2_b3.ini"), str(f), "--output", str(snap2)])
    assert snap.read_bytes() == snap2.read_bytes()


def test_store_wrong_length(tmp_path, capsys):
    f = tmp_path / "file.bin"
    f.write_bytes(b"\x00\x00")
    assert main(["store", str(CONFIGS / "gf2_b3.ini"), str(f)]) == 2
    err = capsys.readouterr().err
    assert "B = 3" in err


def test_store_field_override(tmp_path, capsys):
    f = tmp_path / "file.bin"
    f.write_bytes(bytes([1, 2, 0, 2, 1, 1]))
    assert main(["store", str(CONFIGS / "gf2_b3.ini"), str(f), "--field", "gf(3)", "--b", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["field"] == "gf(3)" and len(doc["nodes"]) == 40


def test_gen_assignment(tmp_path, capsys):
    out = tmp_path / "a.txt"
    assert main(["gen-assignment", str(CONFIGS / "partition_gf2_b6.ini"), "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("#") and "locality 3" in lines[0]
    assert len(lines) == 1 + 14


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "pluckerdss", "goodmatrix", "6"],
                         capture_output=True, text=True, check=True)
    assert res.stdout == B6


def test_run_grow_scenario(capsys):
    code = main(["run", str(CONFIGS / "basis_gf5_b4.ini"), str(SCENARIOS / "grow_and_repair.txt")])
    out = capsys.readouterr().out
    assert code == 0, out
    assert "add-node: 6" in out and "repair-parallel: 12" in out
