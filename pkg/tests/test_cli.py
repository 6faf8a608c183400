import csv
import io
import json
import math
import subprocess
import sys

import pytest

from exclusion_spectra import tau2
from exclusion_spectra.cli import main, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def pairs(obj):
    return {round(p["value"], 9) + 0.0: p["multiplicity"] for p in obj["pairs"]}


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--n", "4", "--ell", "2", "--alpha", "1", "--kind", "uep")
    assert code == 0 and pairs(json.loads(out)) == {0: 1, 4: 3, 6: 2}
    code, out, _ = run(capsys, "spectrum", "--n", "4", "--ell", "2", "--kind", "uep", "--verify")
    d = json.loads(out)
    assert code == 0 and d["max_dev"] < 1e-8 and d["multiplicities_match"] is True
    code, out, _ = run(capsys, "spectrum", "--n", "3", "--ell", "0")
    assert pairs(json.loads(out)) == {0: 1}
    code, out, _ = run(capsys, "spectrum", "--n", "4", "--ell", "2", "--alpha", "1", "--kind", "lep")
    assert code == 0 and json.loads(out)["kind"] == "LEP"


def test_envelope(capsys):
    code, out, _ = run(capsys, "envelope", "--n", "4", "--ell", "4", "--alpha", "1")
    assert json.loads(out)["values"] == [0, 4, 6, 8, 9, 12]
    code, out, _ = run(capsys, "envelope", "--n", "4", "--ell", "4", "--check")
    d = json.loads(out)
    a = 2 / 16
    assert code == 0 and d["contained"] and d["core_contains_spectrum"]
    assert d["symmetric_core"] == pytest.approx([a * v for v in (0, 4, 6, 8, 12)])
    code, out, _ = run(capsys, "envelope", "--n", "4", "--ell", "1", "--alpha", "1")
    assert json.loads(out)["values"] == [0, 4]


def test_l2_csv(capsys):
    code, out, _ = run(capsys, "l2", "--n", "100", "--ell", "50", "--c-grid", "0:2:0.25",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 9
    l2 = [float(r["l2"]) for r in rows]
    assert all(a > b for a, b in zip(l2, l2[1:]))
    code, out, err = run(capsys, "l2", "--n", "500", "--ell", "10", "--kind", "lep",
                         "--c-grid", "0,1", "--approx")
    assert json.loads(out)["approximate"] is True and "approximate" in err


def test_parse_grid():
    assert parse_grid("0:2:0.25") == pytest.approx([0.25 * k for k in range(9)])
    assert parse_grid("0:1:0.3") == pytest.approx([0, 0.3, 0.6, 0.9])
    assert parse_grid("0:1:0.34") == pytest.approx([0, 0.34, 0.68, 1.02])
    assert parse_grid("1,2.5") == [1.0, 2.5]


def test_mix_agrees_with_library(capsys):
    code, out, _ = run(capsys, "mix", "--n", "1000", "--ell", "500", "--epsilon", "0.25")
    d = json.loads(out)
    assert code == 0 and d["tau2"] == tau2(1000, 500, "uep", 0.25).tau2
    assert d["reference_time"] == pytest.approx(250 * math.log(999))


def test_simulate(capsys, tmp_path):
    path = tmp_path / "h.csv"
    code, _, _ = run(capsys, "simulate", "--n", "4", "--ell", "2", "--t", "1", "--replicas", "500",
                     "--format", "csv", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and lines[0] == "rank,count" and len(lines) == 7
    assert sum(int(x.split(",")[1]) for x in lines[1:]) == 500
    code, out, _ = run(capsys, "simulate", "--n", "4", "--ell", "2", "--t", "100", "--exact")
    d = json.loads(out)
    assert d["tv"] <= d["bias_bound"] + 3 * d["halfwidth"] and d["exact_tv"] < 1e-9


def test_sandwich_and_dump(capsys):
    code, out, _ = run(capsys, "sandwich", "--n", "10000", "--ell", "5000")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "dump", "--n", "3", "--ell", "1", "--alpha", "1")
    assert out.splitlines()[:2] == ["dim 3", "0 0 -2.0"]


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "5")
    assert code == 0 and out.count("PASS") == 6 and "FAIL" not in out


@pytest.mark.parametrize("argv,code", [
    (["spectrum", "--n", "3", "--ell", "5"], 2),
    (["spectrum", "--n", "5", "--ell", "3", "--verify"], 2),
    (["mix", "--n", "10", "--ell", "2", "--epsilon", "1.5"], 2),
    (["l2", "--n", "10", "--ell", "2"], 2),
    (["spectrum", "--n", "20", "--ell", "10", "--kind", "lep"], 3),
    (["spectrum", "--n", "3", "--ell", "1"], 0),
])
def test_exit_codes(capsys, argv, code):
    assert main(argv) == code


def test_bad_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_byte_identical_subprocess():
    argv = [sys.executable, "-m", "exclusion_spectra.cli", "simulate", "--n", "5", "--ell", "2",
            "--t", "0.7", "--replicas", "3000", "--seed", "9"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["replicas"] == 3000
