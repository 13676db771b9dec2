import json
import re
import subprocess
import sys

import pytest

from unirow.cli import BUDGET, CONFIG, FAILED, OK, run, split_top


def cli(*argv):
    return run(list(argv))


def test_census_z2(tmp_path, capsys):
    out = tmp_path / "census.txt"
    assert cli("census", "--ring", "Z/2", "--n", "3", "--out", str(out)) == OK
    text = out.read_text()
    header = json.loads(text.splitlines()[0][len("# census "):])
    assert header["ring"] == "Z/2"
    assert "7 rows, 1 orbits" in capsys.readouterr().err
    assert cli("verify", str(out)) == OK


def test_census_stdout_is_deterministic(capsys):
    cli("census", "--ring", "Z/4", "--n", "2")
    first = capsys.readouterr().out
    cli("census", "--ring", "Z/4", "--n", "2", "--jobs", "3")
    assert capsys.readouterr().out == first


def mutate_first_letter(text):
    lines = text.splitlines(keepends=True)
    for k, line in enumerate(lines):
        if line.startswith("step |"):
            head, word = line.rsplit(" | ", 1)
            m = re.search(r";([^)]*)\)", word)
            bumped = word[:m.start(1)] + "[3]" + word[m.end(1):]
            lines[k] = head + " | " + bumped
            return "".join(lines)
    raise AssertionError("trace has no steps")


def test_reduce_verify_and_mutation(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    ring = "graded(Z; 2@1)"
    assert cli("reduce", "--ring", ring, "--ideal", "2", "--seed", "5", "--out", str(a)) == OK
    assert cli("reduce", "--ring", ring, "--ideal", "2", "--seed", "5", "--jobs", "4", "--out", str(b)) == OK
    assert a.read_bytes() == b.read_bytes()
    assert cli("verify", str(a)) == OK
    bad = tmp_path / "bad.txt"
    bad.write_text(mutate_first_letter(a.read_text()))
    assert cli("verify", str(bad)) == FAILED


def test_path_certificate(tmp_path):
    out = tmp_path / "cert.txt"
    assert cli("path", "--ring", "Z/3", "--from", "[1, 1, 0]", "--to", "[1, 0, 0]", "--out", str(out)) == OK
    assert cli("verify", str(out)) == OK
    text = out.read_text().replace("target | [1, 0, 0", "target | [1, 1, 0")
    out.write_text(text)
    assert cli("verify", str(out)) == FAILED


def test_experiments(capsys):
    assert cli("experiment", "L411", "--ring", "Z/6", "--set", "I=3", "--set", "J=2") == OK
    assert cli("experiment", "IJ", "--ring", "Z/4", "--set", "I=2", "--set", "J=2") == OK
    assert cli("experiment", "exact_seq", "--ring", "Z/4", "--ideal", "2") == OK
    assert cli("experiment", "retract", "--ring", "excision(Z/4; 2)") == OK
    assert cli("experiment", "artin_rees", "--ring", "graded(Z; 2@1)", "--set", "I=2", "--set", "J=4") == OK
    assert "artin-rees k=2 window N=8 D=8" in capsys.readouterr().out


def test_witt_group_power(capsys):
    assert cli("witt", "--ring", "Z/9", "--count", "20") == OK
    assert cli("witt", "--ring", "Z", "--row", "[5, 2, 4 | 1, -2, 0]", "--root", "2") == OK
    assert "completion [5, 2, 4; 4, 2, -13; 2, 1, -6] | det 1" in capsys.readouterr().out
    assert cli("group", "--ring", "Z/3") == OK
    assert '"failures": 0' in capsys.readouterr().out
    assert cli("power", "--ring", "Z/5", "--row", "[2, 1, 0]") == OK


@pytest.mark.parametrize("argv", [
    ("census", "--ring", "graded(Z; 0@1)"),
    ("census",),
    ("experiment", "L411", "--ring", "Z/6", "--set", "bogus=1"),
    ("experiment", "nope", "--ring", "Z/6"),
    ("verify", "/nonexistent/file.txt"),
    ("census", "--ring", "Z/2", "--window", "8"),
    ("frobnicate",),
])
def test_config_errors(argv):
    assert cli(*argv) == CONFIG


def test_inconclusive_exit_codes():
    # the L411 hypothesis fails for I = J = (2) over Z/6
    assert cli("experiment", "L411", "--ring", "Z/6", "--set", "I=2", "--set", "J=2") == CONFIG
    assert cli("experiment", "artin_rees", "--ring", "graded(Z; 2@1)", "--set", "I=2",
               "--set", "J=4096", "--window", "3,3") == BUDGET


def test_split_top():
    assert split_top("[1, 2@1], 3, (4, 5)") == ["[1, 2@1]", "3", "(4, 5)"]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "unirow.cli", "census", "--ring", "Z/2", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("# census ")
