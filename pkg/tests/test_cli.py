import shutil
import subprocess
import sys

import pytest

from cfa.cli import main
from cfa.families import build_machine
from cfa.machines import parse_machine, serialize_machine


@pytest.fixture
def lsp(tmp_path):
    path = tmp_path / "lsp.txt"
    path.write_text(serialize_machine(build_machine("Lsp", 1)))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_count_and_gap(capsys, lsp):
    code, out = run(capsys, "count", "--machine", lsp, "--input", "00#0")
    assert code == 0
    assert out.out.strip() == "accepting=3 rejecting=2 improper=0 gap=1"
    assert run(capsys, "gap", "--machine", lsp, "--input", "0#00")[1].out.strip() == "-1"


def test_construct_chain(capsys, lsp, tmp_path):
    square = tmp_path / "sq.txt"
    assert run(capsys, "construct", "square", lsp, "-o", str(square))[0] == 0
    assert run(capsys, "gap", "--machine", str(square), "--input", "0#00")[1].out.strip() == "1"
    pfa = tmp_path / "p.txt"
    assert run(capsys, "construct", "to-pfa", lsp, "-o", str(pfa))[0] == 0
    code, out = run(capsys, "pfa", "--machine", str(pfa), "--input", "0#")
    assert code == 0 and out.out.startswith("p_acc=")
    code, out = run(capsys, "construct", "gap-sum", lsp, lsp)
    assert code == 0 and parse_machine(out.out).alphabet == ("0", "1", "#")


def test_construct_homomorphism(capsys, lsp):
    code, out = run(capsys, "construct", "inverse", lsp, "--hom", "0=10,1=11,#=0")
    assert code == 0 and parse_machine(out.out).alphabet == ("0", "1")
    code, out = run(capsys, "construct", "inverse", lsp)
    assert code == 2 and "--hom" in out.err


def test_family_commands(capsys, tmp_path):
    code, out = run(capsys, "family", "gen", "--name", "LU", "--n", "2")
    assert code == 0 and len(out.out.split()) == 45
    assert run(capsys, "family", "classify", "--name", "Lsp", "--n", "1",
               "--input", "00#0")[1].out.strip() == "Positive"
    target = tmp_path / "ldot.txt"
    assert run(capsys, "family", "machine", "--name", "Ldot", "--n", "2", "-o", str(target))[0] == 0
    code, out = run(capsys, "run", "--machine", str(target), "--input", "01#10")
    assert out.out.strip() == "verdict=Accept steps=7 turns=1 max_height=4"


def test_analyze_commands(capsys, lsp):
    code, out = run(capsys, "analyze", "cequal-extension", "--machine", lsp, "--name", "Lsp",
                    "--n", "1", "--m", "4", "--l", "2", "--z", "#0")
    assert code == 0 and "violations=0" in out.out
    code, out = run(capsys, "analyze", "span", "--machine", lsp, "--max-len", "2")
    assert code == 0 and out.out.startswith("prefixes=13 rank=")
    code, out = run(capsys, "analyze", "sign-pattern", "--name", "Lparity", "--n", "2",
                    "--spanning", "0$0#,1$1#", "--suffix-len", "3")
    assert code == 0 and "'1$0' 01" in out.out and "'1$1' 00" in out.out


def test_verify_exit_codes(capsys):
    code, out = run(capsys, "verify", "--suite", "semantics", "--seed", "3")
    assert code == 0 and out.out.splitlines()[-1].endswith("fail=0")
    code, out = run(capsys, "verify", "--suite", "constructions", "--inject-fault")
    assert code == 1 and "FAIL" in out.out


def test_usage_and_parse_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["verify", "--suite", "bogus"])
    assert err.value.code == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("machine x\nkind nfa\nwhat\nend\n")
    code, out = run(capsys, "count", "--machine", str(bad), "--input", "")
    assert code == 2 and "line 3" in out.err
    assert run(capsys, "count", "--machine", str(tmp_path / "missing"), "--input", "")[0] == 2


@pytest.mark.skipif(shutil.which("cfa") is None, reason="console script not installed")
def test_console_script():
    done = subprocess.run(["cfa", "family", "classify", "--name", "Lsp", "--n", "1", "--input", "0#0"],
                          capture_output=True, text=True, check=False)
    assert done.returncode == 0 and done.stdout.strip() == "Negative"
    done = subprocess.run([sys.executable, "-m", "cfa.cli", "gap"], capture_output=True, text=True)
    assert done.returncode == 2
