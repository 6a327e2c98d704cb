import io
import json
import subprocess
import sys

import pytest

from bstsat.cli import RunConfig, main, run
from bstsat.fulfill import Certificate, Mode
from bstsat.hfset import parse as parse_hf
from bstsat.partition import evaluate
from bstsat.formula import parse


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    args = list(argv)
    text = args.pop()
    flags = set(args)
    cfg = RunConfig(
        text=text,
        mode=Mode.FINITE if "--finite" in flags else Mode.ORDINARY,
        emit_model="--model" in flags,
        oracle_check="--oracle" in flags,
    )
    code = run(cfg, out, err)
    return code, out.getvalue(), err.getvalue()


def test_finite_model_emitted_and_valid():
    code, out, _ = call("--finite", "--model", "x = y >< y and y != y \\ y")
    assert code == 0
    assert out.startswith("verdict: SAT mode: finite regions: ")
    model = json.loads(out.split("model: ", 1)[1])
    M = {v: parse_hf(s) for v, s in model.items()}
    assert evaluate(M, parse("x = y >< y and y != y \\ y"))


def test_separating_exit_codes():
    assert call("--finite", "x != x \\ x and x >< x <= x")[0] == 1
    assert call("x != x \\ x and x >< x <= x")[0] == 0


def test_parse_error():
    code, out, err = call("x = y |")
    assert code == 2 and "1:8" in err and out == ""


def test_oracle_agrees():
    code, out, _ = call("--oracle", "x = y >< y and x != y")
    assert code == 0 and "oracle: SAT" in out


def test_missing_user_variables_get_empty_set():
    code, out, _ = call("--finite", "--model", "x = x or y != y")
    model = json.loads(out.split("model: ", 1)[1])
    assert code == 0 and model == {"x": "[]", "y": "[]"}


def test_main_flags(tmp_path, capsys):
    cert = tmp_path / "c.json"
    assert main(["solve", "--cert", str(cert), "--fair-rounds", "10",
                 "x != x \\ x and x >< x <= x"]) == 0
    out = capsys.readouterr().out
    assert "residual: ['0,1', '1']" in out
    Certificate.from_json(json.loads(cert.read_text())).validate()
    assert main(["solve", "--max-regions", "0", "x != y"]) == 3
    f = tmp_path / "f.txt"
    f.write_text("x = y # same\n")
    assert main(["solve", "--file", str(f)]) == 0
    with pytest.raises(SystemExit) as info:
        main(["solve"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["solve", "--fair-rounds", "-1", "x = x"])


def test_module_entry_point_and_stdin():
    proc = subprocess.run([sys.executable, "-m", "bstsat", "solve", "--finite", "-"],
                          input="x = x >< x and x != x \\ x", capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stdout.startswith("verdict: UNSAT mode: finite")


def test_deterministic_output():
    a = call("--finite", "--model", "x = y >< z and y != z")[1].split("time_ms")[0]
    b = call("--finite", "--model", "x = y >< z and y != z")[1].split("time_ms")[0]
    assert a == b
