import json
import shutil
import subprocess
import sys

import pytest

from mmsnp.cli import main
from mmsnp.textio import parse_sentence, parse_structure

from support import DATA, load, same_up_to_renaming


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_pretty_prints(capsys):
    code, out, _ = run(capsys, "parse", DATA / "twocol.mmsnp")
    assert code == 0
    assert parse_sentence(out) == load("twocol")


def test_parse_error_has_location(tmp_path, capsys):
    bad = tmp_path / "bad.mmsnp"
    bad.write_text("signature { E/2 }\ncolors { M }\nforbid { E(x), M(x) }\n")
    code, _, err = run(capsys, "parse", bad)
    assert code == 2
    assert f"{bad}:3:10: arity mismatch" in err


def test_missing_file_is_an_error(capsys):
    code, _, err = run(capsys, "parse", "/nonexistent.mmsnp")
    assert code == 2 and err.startswith("error:")


def test_normalize_and_output_file(tmp_path, capsys):
    out = tmp_path / "nf.mmsnp"
    code, _, _ = run(capsys, "normalize", DATA / "ex_p3.mmsnp", "-o", out)
    assert code == 0
    assert same_up_to_renaming(parse_sentence(out.read_text()), load("ex_p3_nf"))


def test_normalize_rejects_disconnected(tmp_path, capsys):
    f = tmp_path / "d.mmsnp"
    f.write_text("signature { E/2 } colors { } forbid { E(x,y), E(z,z) }")
    code, _, err = run(capsys, "normalize", f)
    assert code == 2 and "decompose" in err


def test_decompose_writes_parts(tmp_path, capsys):
    f = tmp_path / "d.mmsnp"
    f.write_text("signature { E/2 } colors { } forbid { E(x,y), E(z,z) }")
    code, _, _ = run(capsys, "decompose", f, "--output-dir", tmp_path / "parts")
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "parts").iterdir()) == ["d.1.mmsnp", "d.2.mmsnp"]


def test_snf(capsys):
    code, out, _ = run(capsys, "snf", DATA / "ex_nf1.mmsnp")
    assert code == 0
    assert same_up_to_renaming(parse_sentence(out), load("snf1"))


def test_precolour(capsys):
    code, out, _ = run(capsys, "precolour", DATA / "twocol.mmsnp")
    assert code == 0
    phi = parse_sentence(out)
    assert {"P_M1", "P_M2"} <= set(phi.tau.names)


def test_obstructions(capsys):
    code, out, _ = run(capsys, "obstructions", DATA / "ex_p3_nf.mmsnp")
    assert code == 0
    assert out.count("structure {") == 5


def test_chi(capsys):
    code, out, _ = run(capsys, "chi", DATA / "monotri.mmsnp", "--color", "magenta", "--depth", "2")
    assert code == 0
    a = parse_structure(out)
    assert len(a) == 7


def test_contains_exit_codes(capsys):
    code, out, _ = run(capsys, "contains", DATA / "twocol.mmsnp", DATA / "threecol.mmsnp")
    assert code == 0 and out.startswith("holds")
    code, out, _ = run(capsys, "contains", DATA / "threecol.mmsnp", DATA / "twocol.mmsnp", "--json")
    assert code == 1
    doc = json.loads(out)
    assert doc["holds"] is False
    assert len(parse_structure(doc["counterexample"])) == 3


def test_check(capsys, tmp_path):
    code, out, _ = run(capsys, "check", DATA / "k6.struct", DATA / "monotri.mmsnp")
    assert code == 1 and out == "does not satisfy\n"
    # vertex 2-colourings of K5 always contain a monochromatic triangle
    code, _, _ = run(capsys, "check", DATA / "k5.struct", DATA / "monotri.mmsnp")
    assert code == 1
    path = tmp_path / "p.struct"
    path.write_text("structure { domain { a, b, c } E(a,b) E(b,c) }")
    code, out, _ = run(capsys, "check", path, DATA / "twocol.mmsnp", "--json")
    assert code == 0
    colouring = json.loads(out)["colouring"]
    assert colouring["a"] == colouring["c"] != colouring["b"]


def test_classify_single(capsys):
    code, out, _ = run(capsys, "classify", DATA / "twocol.mmsnp", "--explain")
    assert code == 0
    doc = json.loads(out)
    assert doc["overall"] == "P"
    assert "cells" in doc["components"][0]["witness"]


def test_classify_directory_in_parallel(tmp_path, capsys):
    for name in ["twocol", "threecol", "snf1"]:
        shutil.copy(DATA / f"{name}.mmsnp", tmp_path)
    code, out, _ = run(capsys, "classify", tmp_path, "--jobs", "2")
    assert code == 0
    doc = json.loads(out)
    verdicts = {k.split("/")[-1]: v["overall"] for k, v in doc.items()}
    assert verdicts == {"snf1.mmsnp": "P", "threecol.mmsnp": "NP-complete", "twocol.mmsnp": "P"}


def test_budget_flag_reports_and_is_restored(capsys):
    import os
    code, _, err = run(capsys, "--max-cegar-iters", "1", "classify", DATA / "threecol.mmsnp")
    assert code == 2 and "budget exceeded" in err
    assert "MMSNP_BUDGET_CEGAR_ITERS" not in os.environ


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mmsnp", "parse", str(DATA / "snf1.mmsnp")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "colors { M1 }" in proc.stdout


@pytest.mark.skipif(shutil.which("mmsnp") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["mmsnp", "contains", str(DATA / "noedges.mmsnp"), str(DATA / "twocol.mmsnp")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
