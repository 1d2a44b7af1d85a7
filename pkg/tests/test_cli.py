import csv
import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import jsonschema
import pytest

from socketlab.cli import build_parser, main
from socketlab.schemas import SCHEMA_ID, SCHEMAS

FX = Path(__file__).parent / "fixtures"

COMMANDS = {
    "netparams": ["--in", str(FX / "dut.s2p"), "--z-load", "50"],
    "isolation": ["--in", str(FX / "xtalk.s4p")],
    "dips": ["--in", str(FX / "dip.s2p")],
    "tdr-extract": ["--in", str(FX / "tdr.csv")],
    "tdr-synth": ["--profile", str(FX / "profile.json")],
    "resfit": ["--in", str(FX / "sweep.csv")],
    "cavity": ["--eps-r", "11.68", "--d-s", "0.1e-3"],
    "dc": ["--sample", "Ag-3um"],
    "thermal": [],
    "magnetics": [],
    "layout": ["--n", "10"],
    "compression": ["--spring", "FE-113 225"],
    "yield": ["--trials", "20000"],
    "pulse": ["--in", str(FX / "dut.s2p")],
}


def run(argv, tmp_path, ext="json"):
    out = tmp_path / f"out.{ext}"
    rc = main([*argv, "--out", str(out)])
    return rc, out


def test_every_subcommand_registered():
    sub = next(a for a in build_parser()._actions if a.dest == "command")
    assert set(sub.choices) == set(COMMANDS) == set(SCHEMAS)


@pytest.mark.parametrize("cmd", sorted(COMMANDS))
def test_json_is_schema_valid(cmd, tmp_path, capsys):
    rc, out = run([cmd, *COMMANDS[cmd]], tmp_path)
    assert rc == 0, capsys.readouterr().err
    doc = json.loads(out.read_text())
    assert doc["schema"] == SCHEMA_ID and doc["kind"] == cmd
    jsonschema.validate(doc, SCHEMAS[cmd])
    assert capsys.readouterr().out.startswith(cmd)


def test_fixture_values(tmp_path):
    def doc(cmd):
        rc, out = run([cmd, *COMMANDS[cmd]], tmp_path)
        assert rc == 0
        return json.loads(out.read_text())

    assert doc("isolation")["isolation_db"] == pytest.approx(45.0, abs=0.1)
    d = doc("dips")
    assert d["classification"] == "non-resonant-anomaly"
    assert d["bandwidth_3db_hz"] == pytest.approx(200e6, rel=0.02)
    z = [s["z_ohm"] for s in doc("tdr-extract")["segments"]]
    assert z == pytest.approx([50, 60, 50], rel=0.01)
    assert doc("resfit")["q_i"] == pytest.approx(165790, rel=0.05)
    assert doc("layout")["chip_side_m"] == 0.072


@pytest.mark.parametrize("cmd", ["netparams", "isolation", "tdr-synth", "layout", "compression", "pulse"])
def test_csv_output(cmd, tmp_path):
    rc, out = run([cmd, *COMMANDS[cmd]], tmp_path, "csv")
    assert rc == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert len(rows) > 1 and all(len(r) == len(rows[0]) for r in rows)


@pytest.mark.parametrize("cmd", ["netparams", "isolation", "dips", "tdr-extract", "resfit", "pulse"])
def test_svg_output(cmd, tmp_path):
    rc, out = run([cmd, *COMMANDS[cmd]], tmp_path, "svg")
    assert rc == 0
    assert ET.fromstring(out.read_text()).tag.endswith("svg")


def test_format_flag_overrides_extension(tmp_path):
    out = tmp_path / "x.txt"
    assert main(["dc", "--sample", "Ag-3um", "--out", str(out), "--format", "json"]) == 0
    assert json.loads(out.read_text())["kind"] == "dc"


def test_no_csv_for_scalar_command(tmp_path, capsys):
    assert main(["magnetics", "--out", str(tmp_path / "m.csv")]) == 2
    assert "no CSV" in capsys.readouterr().err


class TestExitCodes:
    def test_missing_file(self, capsys):
        assert main(["netparams", "--in", "/nonexistent.s2p"]) == 2
        assert "cannot read" in capsys.readouterr().err

    def test_parse_error(self, tmp_path):
        bad = tmp_path / "bad.s2p"
        bad.write_text("# GHz S RI R 50\n1 0 0 x 0 1 0 0 0\n")
        assert main(["netparams", "--in", str(bad)]) == 2

    def test_unknown_sample(self):
        assert main(["dc", "--sample", "Cu"]) == 2

    def test_usage_errors(self):
        assert main([]) == 2
        assert main(["layout"]) == 2
        assert main(["nope"]) == 2

    def test_computation_errors(self, capsys):
        assert main(["layout", "--n", "11"]) == 1
        assert main(["cavity", "--eps-r", "11.68", "--d-s", "1.9e-3"]) == 1
        assert "computation failed" in capsys.readouterr().err

    def test_help(self):
        assert main(["--help"]) == 0


def test_module_entry_point(tmp_path):
    out = tmp_path / "d.json"
    res = subprocess.run([sys.executable, "-m", "socketlab", "dc", "--sample", "Ag-3um", "--out", str(out)],
                         capture_output=True, text=True, timeout=60)
    assert res.returncode == 0, res.stderr
    assert json.loads(out.read_text())["kind"] == "dc"
