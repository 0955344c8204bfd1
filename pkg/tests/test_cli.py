from __future__ import annotations

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from paracr.cli import REPORT_KEYS, main

MODELS = Path(__file__).resolve().parent.parent / "models"


def run(*argv: str) -> tuple[int, str]:
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_analyze_cubic_json():
    code, text = run("analyze", str(MODELS / "cubic_par.model"), "--json")
    assert code == 0
    rep = json.loads(text)
    assert tuple(rep) == REPORT_KEYS
    assert (rep["delta0"], rep["box0"], rep["case_label"]) == ("2", "0", "III")
    assert rep["pde"]["F"] == "0" and rep["pde"]["H"] == "0"
    assert rep["k_par"] == {"order": 2, "k_max_searched": 7}
    assert rep["l_var"]["order"] is None and rep["l_var"]["k_max_searched"] >= 6


def test_analyze_golden_json():
    code, text = run("analyze", str(MODELS / "golden.model"), "--json")
    assert code == 0
    rep = json.loads(text)
    assert rep["case_label"] == "IV"
    assert rep["pde"]["F"] == "z_x^2"
    assert rep["integrability"]["status"] == "pass"
    assert rep["coframe"]["triangular"] is True
    assert (rep["beta"], rep["beta_underline"]) == ("1", "1")
    statuses = {v["status"] for v in rep["identity_verdicts"]}
    assert statuses == {"pass"}


def test_analyze_human_output():
    code, text = run("analyze", str(MODELS / "golden.model"))
    assert code == 0
    assert "F = z_x^2" in text and "case_label: IV" in text
    assert "coframe: triangular" in text


def test_analyze_levi_rank_two_takes_other_branch():
    code, text = run("analyze", str(MODELS / "levi_rank2.model"), "--json")
    rep = json.loads(text)
    assert code == 0 and rep["pde"]["branch"] == "z_xx-dependent"


def test_malformed_file(tmp_path, capsys):
    p = tmp_path / "bad.model"
    p.write_text("n = 2\nm = 2\nQ = c + \n", encoding="utf-8")
    code, text = run("analyze", str(p))
    assert code == 2 and text == ""
    err = capsys.readouterr().err
    assert err.startswith("SyntaxError at byte ")


def test_missing_file():
    assert run("analyze", "/nonexistent.model")[0] == 2


def test_degree_validation():
    assert run("analyze", str(MODELS / "golden.model"), "--degree", "2")[0] == 2
    code, text = run("analyze", str(MODELS / "golden.model"), "--degree", "6", "--json")
    assert json.loads(text)["model"]["truncation"] == 6


def test_bound():
    assert run("bound", "2", "2", "2", "2") == (0, "990\n")
    assert run("bound", "1", "1", "1", "1") == (0, "60\n")
    assert run("bound", "2", "2", "0", "1")[0] == 2
    assert json.loads(run("bound", "2", "2", "2", "2", "--json")[1]) == {"bound": 990}


def test_normalize_command():
    code, text = run("normalize", str(MODELS / "golden.model"), "--json")
    assert code == 0
    res = json.loads(text)
    assert res["levi_rank"] == 1
    assert (res["normal_form_22"]["beta"], res["normal_form_22"]["beta_underline"]) == ("1", "1")


def test_derive_pde_command():
    code, text = run("derive-pde", str(MODELS / "golden.model"))
    assert code == 0 and "z_y = z_x^2" in text and "z_xxx = 0" in text
    code, text = run("derive-pde", str(MODELS / "cubic_var.model"), "--dual", "--json")
    assert code == 0 and json.loads(text)["pde"]["F"] == "0"
    assert run("derive-pde", str(MODELS / "cubic_var.model"))[0] == 2


def test_classify_command():
    code, text = run("classify", str(MODELS / "line.model"), "--json")
    rep = json.loads(text)
    assert code == 0 and rep["k_par"] == 1 and rep["case_label"] is None
    code, text = run("classify", str(MODELS / "cubic_par.model"), "--point", "x=1/2", "--json")
    assert json.loads(text)["probe_point"] == {"x": "1/2", "y": "0", "a": "0", "b": "0", "c": "0"}


def test_fuzz_command():
    code, text = run("fuzz", "--cases", "2", "--only", "roundtrip", "--only", "rank_one", "--json")
    assert code == 0
    res = json.loads(text)
    assert set(res["classes"]) == {"roundtrip", "rank_one"}
    assert all(c["fail"] == 0 for c in res["classes"].values())
    assert run("fuzz", "--only", "nope")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "paracr", "bound", "2", "2", "2", "2"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "990"
