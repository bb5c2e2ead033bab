import json
import subprocess
import sys

import pytest

from cantor_spectra.cli import SCHEMA, RunConfig, config_from_args, main, run


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def js(capsys, *argv):
    code, out = call(capsys, *argv)
    data = json.loads(out)
    assert data["schema"] == SCHEMA
    return code, data


def test_member_example(capsys):
    code, data = js(capsys, "member", "--q", "3", "--digits", "0,2", "--x", "1/4")
    assert code == 0 and data["member"] is True and data["period"] == "02"


def test_hadamard_example(capsys):
    code, data = js(capsys, "hadamard", "--N", "4", "--B", "0,2", "--L", "0,1")
    assert code == 0 and data["valid"] is True


def test_hadamard_triple_json(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text('{"N": 4, "B": [0, 2], "L": [0, 2]}')
    code, data = js(capsys, "hadamard", "--triple", str(path))
    assert code == 0 and data["valid"] is False and data["witness"]


def test_order_example(capsys):
    code, data = js(capsys, "order", "--a", "2", "--m", "7")
    assert code == 0 and data["order"] == 3


@pytest.mark.parametrize(
    "argv,err",
    [
        (["member", "--q", "3", "--digits", "0,2", "--x", "1/0"], "E_RATIONAL"),
        (["member", "--q", "2", "--digits", "0,1", "--x", "1/3"], "E_SYSTEM"),
        (["order", "--a", "6", "--m", "9"], "E_COPRIME"),
        (["bloshchitsyn", "--p", "9", "--q", "2"], "E_PRIME"),
        (["hadamard", "--N", "4", "--B", "0,0", "--L", "0,1"], "E_TRIPLE"),
        (["bogus"], "E_INPUT"),
        (["member", "--q", "3"], "E_INPUT"),
    ],
)
def test_error_codes(capsys, argv, err):
    code, data = js(capsys, *argv)
    assert code == 1
    assert data["error"]["code"] == err


def test_inconclusive_exit(capsys):
    code, data = js(capsys, "intersect", "--q", "3", "--digits", "0,1,2", "--p", "2", "--max-level", "4")
    assert code == 2 and data["stabilized"] is False


def test_intersect_stabilizes(capsys):
    code, data = js(capsys, "intersect", "--q", "3", "--digits", "0,2", "--p", "2", "--max-level", "12")
    assert code == 0 and data["points"] == ["0", "1/4", "3/4", "1"]


def test_format_flag_position_and_csv(capsys):
    c1, a = call(capsys, "--format", "csv", "intersect", "--q", "3", "--digits", "0,2", "--p", "2", "--max-level", "8")
    c2, b = call(capsys, "intersect", "--q", "3", "--digits", "0,2", "--p", "2", "--max-level", "8", "--format", "csv")
    assert a == b and c1 == c2 == 0
    assert "1/4" in a and not a.lstrip().startswith("{")


def test_format_env(capsys, monkeypatch):
    monkeypatch.setenv("CANTOR_SPECTRA_FORMAT", "csv")
    cfg = config_from_args(["order", "--a", "2", "--m", "7"])
    assert cfg.output_format == "csv"


@pytest.mark.parametrize(
    "argv",
    [
        ["coding", "--q", "3", "--digits", "0,2", "--x", "3/4"],
        ["dimbound", "--q", "3", "--digits", "0,1,3", "--max-m", "2"],
        ["uniformbound", "--q", "5", "--digits", "0,1", "--p", "2", "--alphas", "0,1/3", "--level", "8"],
        ["bloshchitsyn", "--p", "11", "--q", "3"],
        ["spectrum", "--N", "4", "--B", "0,2", "--L", "0,1", "--depth", "3"],
        ["eigenspectrum", "--N", "4", "--B", "0,2", "--L", "0,1", "--factors", "3", "--depth", "2", "--exponents", "0;1;2"],
        ["verify", "--N", "4", "--B", "0,2", "--L", "0,1", "--depth", "6", "--grid-points", "21"],
    ],
)
def test_subcommands_run(capsys, argv):
    code, data = js(capsys, *argv)
    assert code == 0, data
    assert data["command"] == argv[0]


def test_spectrum_levels(capsys):
    _, data = js(capsys, "spectrum", "--N", "4", "--B", "0,2", "--L", "0,1", "--depth", "3")
    assert data["levels"][3] == ["0", "1", "4", "5", "16", "17", "20", "21"]


def test_run_is_deterministic():
    cfg = RunConfig("uniformbound", {"q": "5", "digits": "0,1", "p": "2", "samples": "5", "max_den": "50", "level": "6", "window": "6"}, "json", 7)
    first = run(cfg)
    assert run(cfg) == first


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "cantor_spectra", "order", "--a", "3", "--m", "5"], capture_output=True, text=True
    )
    assert res.returncode == 0 and json.loads(res.stdout)["order"] == 4


def test_run_fills_defaults_and_reports_missing():
    code, text = run(RunConfig("spectrum", {"N": "4", "B": "0,2", "L": "0,1"}))
    assert code == 0 and len(json.loads(text)["levels"]) == 4
    code, text = run(RunConfig("order", {"a": "2"}))
    assert code == 1 and "missing parameter" in json.loads(text)["error"]["message"]
