import json
import subprocess
import sys

import pytest

from tsirelson_lab.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, json.loads(out), err


class TestNorm:
    def test_values(self, capsys):
        code, doc, _ = run(["norm", "--theta", "1/2", "--alpha", "1", "--vec", "3:1,4:1,5:1"], capsys)
        assert code == 0 and doc["norm"] == "3/2" and doc["schema"] == "tsirelson-lab/1"
        code, doc, _ = run(["norm", "--theta", "1/2", "--alpha", "2", "--vec", "2:1,3:1,4:1,5:1"], capsys)
        assert code == 0 and doc["norm"] == "2"

    def test_iterates_and_witness(self, capsys):
        code, doc, _ = run(["norm", "--theta", "1/2", "--alpha", "1", "--vec", "3:1,4:1,5:1",
                            "--iterates", "2", "--witness"], capsys)
        assert doc["iterates"] == ["1", "3/2", "3/2"]
        assert doc["witness"]["minima"] == [3, 4, 5]
        code, doc, _ = run(["witness", "--theta", "1/2", "--alpha", "1", "--vec", "1:1"], capsys)
        assert doc["witness"] == {"type": "sup", "index": 1, "value": "1"}

    @pytest.mark.parametrize("argv", [
        ["norm", "--theta", "3/4", "--alpha", "1", "--vec", "3:1"],
        ["norm", "--theta", "1/2", "--alpha", "1", "--vec", "3:0"],
        ["norm", "--theta", "1/2", "--alpha", "x", "--vec", "3:1"],
        ["norm", "--theta", "1/2", "--alpha", "1"],
        ["witness", "--theta", "1/2", "--alpha", "1", "--vec", "0"],
        ["bogus"],
        [],
    ])
    def test_input_errors(self, argv, capsys):
        code, doc, err = run(argv, capsys)
        assert code == 2 and "error" in doc and err


class TestSchreier:
    def test_member(self, capsys):
        code, doc, _ = run(["schreier", "member", "--alpha", "2", "--set", "2,4,5,6,7"], capsys)
        assert code == 0 and doc["member"] is True
        assert doc["decomposition"] == {"order": "1", "blocks": [[2], [4, 5, 6, 7]]}
        code, doc, _ = run(["schreier", "member", "--alpha", "w", "--set", "1,2"], capsys)
        assert doc["member"] is False and doc["decomposition"] is None

    def test_enum_and_maximal(self, capsys):
        code, doc, _ = run(["schreier", "enum", "--alpha", "1", "--max", "3"], capsys)
        assert doc["members"] == [[], [1], [2], [3], [2, 3]]
        code, doc, _ = run(["schreier", "maximal", "--alpha", "1", "--start", "3"], capsys)
        assert doc["set"] == [3, 4, 5]

    @pytest.mark.parametrize("argv", [
        ["schreier", "member", "--alpha", "2", "--set", "3,2"],
        ["schreier", "enum", "--alpha", "1", "--max", "40"],
        ["schreier", "maximal", "--alpha", "3", "--start", "9"],
        ["schreier", "maximal", "--alpha", "1", "--start", "0"],
    ])
    def test_errors(self, argv, capsys):
        assert run(argv, capsys)[0] == 2


class TestVerify:
    def test_isometry_half(self, capsys):
        code, doc, _ = run(["verify", "--theta", "1/2", "--alpha", "1", "--suite", "isometry", "--count", "6"],
                           capsys)
        assert code == 0 and doc["status"] == "pass"
        assert "elapsed" not in doc

    def test_isometry_two_fifths(self, capsys):
        code, doc, _ = run(["verify", "--theta", "2/5", "--alpha", "1", "--suite", "isometry", "--count", "6"],
                           capsys)
        assert code == 0
        assert any(c["lhs"] == "6/5" for c in doc["counterexamples"])

    def test_lemmas_order_two(self, capsys):
        code, doc, _ = run(["verify", "--theta", "1/2", "--alpha", "2", "--suite", "lemmas", "--count", "6"],
                           capsys)
        assert code == 0 and doc["suite"] == "lemmas"

    def test_oracle_suite(self, capsys):
        code, doc, _ = run(["verify", "--theta", "1/2", "--alpha", "w", "--suite", "oracle", "--bound", "4"],
                           capsys)
        assert code == 0

    def test_identical_output(self, capsys):
        argv = ["verify", "--theta", "1/3", "--alpha", "1", "--suite", "lemmas", "--count", "5", "--seed", "9"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first


class TestIsometryCommand:
    def test_pass_and_fail(self, capsys):
        code, doc, _ = run(["isometry", "--theta", "1/2", "--alpha", "1", "--map", "perm=2,1;signs=-1"], capsys)
        assert code == 0 and doc["admissible_form"] is True
        code, doc, _ = run(["isometry", "--theta", "1/2", "--alpha", "2", "--map", "perm=2,1",
                            "--vec", "2:1,3:1,4:1,5:1", "--no-corpus"], capsys)
        assert code == 1 and doc["counterexample"]["lhs"] == "3/2"

    def test_bad_input(self, capsys):
        assert run(["isometry", "--theta", "1/2", "--alpha", "1", "--map", "perm=1,1"], capsys)[0] == 2
        assert run(["isometry", "--theta", "1/2", "--alpha", "1", "--map", "", "--no-corpus"], capsys)[0] == 2


def test_oracle_command(capsys):
    code, doc, _ = run(["oracle", "--theta", "2/5", "--alpha", "1", "--vec", "3:1,4:-1,5:-1"], capsys)
    assert code == 0 and doc["norm"] == doc["brute_force"] == "6/5"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tsirelson_lab", "norm", "--theta", "1/2", "--alpha", "1",
                           "--vec", "2:1,3:1"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["norm"] == "1"
