import csv
import io
import json
import subprocess
import sys

import pytest

from summa import cli, norms, sums

SEQ = {"atoms": [0, 1, 2, 3], "weights": ["1/4"] * 4,
       "stages": [[[0, 1], [2, 3]], [[0], [1], [2], [3]]],
       "values": [["2", "6"], ["1", "3", "5", "7"]]}


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return write


class TestCommands:
    def test_khintchine_moment(self, capsys):
        rc, out, _ = run(capsys, "dyadic", "khintchine", "--coeffs", "1,1", "--p", "4")
        d = json.loads(out)
        assert rc == 0 and d["result"]["moment"] == "8" and d["summary"]["status"] == "pass"

    def test_dirac_csv(self, capsys):
        rc, out, _ = run(capsys, "mart", "experiment", "dirac_singular", "--stages", "6", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        body = rows[1:rows.index([])]
        assert rc == 0 and len(body) == 6 and all(r[1] == "1" for r in body)

    def test_ynorm(self, capsys, files):
        rc, out, _ = run(capsys, "sums", "ynorm", "--terms", files("f.json", [1, -2, 3]))
        assert rc == 0 and json.loads(out)["result"]["y_norm"] == "4"

    def test_classify(self, capsys, files):
        rc, out, _ = run(capsys, "mart", "classify", "--seq", files("s.json", SEQ), "--format", "table")
        assert rc == 0 and "martingale" in out

    def test_lp_norm(self, capsys):
        rc, out, _ = run(capsys, "norms", "lp", "--vec", "3,4", "--p", "2")
        assert rc == 0 and "5" in json.dumps(json.loads(out)["result"])

    def test_path_length(self, capsys, files):
        p = files("p.json", {"knots": [0, 1, 2], "points": [[0, 0], [1, 0], [1, 1]], "norm": "l2"})
        rc, out, _ = run(capsys, "path", "length", "--in", p)
        assert rc == 0 and "2" in json.dumps(json.loads(out)["result"])

    def test_jordan(self, capsys, files):
        rc, out, _ = run(capsys, "measures", "jordan", "--measure", files("m.json", {"weights": [2, -3, 1]}))
        assert rc == 0 and json.loads(out)["summary"]["status"] == "pass"


class TestExitCodes:
    def test_unknown_command(self, capsys):
        assert run(capsys, "nope")[0] == cli.EXIT_USAGE

    def test_missing_argument(self, capsys):
        assert run(capsys, "norms", "lp")[0] == cli.EXIT_USAGE

    def test_malformed_json(self, capsys, files):
        rc, _, err = run(capsys, "sums", "ynorm", "--terms", files("bad.json", "{oops"))
        assert rc == cli.EXIT_INPUT and "input error" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "sums", "ynorm", "--terms", str(tmp_path / "none.json"))[0] == cli.EXIT_INPUT

    def test_guard(self, capsys, files):
        rc, _, err = run(capsys, "sums", "ynorm", "--terms", files("f.json", [1, 2, 3]), "--guard-subsets", "2")
        assert rc == cli.EXIT_GUARD and "guard" in err

    def test_domain_error(self, capsys):
        assert run(capsys, "convexity", "modulus", "--norm", "l2", "--eps", "3")[0] == cli.EXIT_USAGE

    def test_settings_restored(self, capsys, files):
        tol, guard = norms.get_tolerance(), sums.SUBSET_GUARD
        run(capsys, "sums", "ynorm", "--terms", files("f.json", [1, 2, 3]), "--guard-subsets", "2", "--tol", "1e-3")
        assert norms.get_tolerance() == tol and sums.SUBSET_GUARD == guard


class TestDeterminism:
    def test_flag_position_and_out(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(capsys, "suite", "measures", "--seed", "3", "--out", str(a))[0] == 0
        assert run(capsys, "--seed", "3", "--out", str(b), "suite", "measures")[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("SUMMA_SEED", "5")
        _, env_out, _ = run(capsys, "suite", "dyadic")
        monkeypatch.delenv("SUMMA_SEED")
        _, flag_out, _ = run(capsys, "suite", "dyadic", "--seed", "5")
        assert json.loads(env_out)["result"] == json.loads(flag_out)["result"]
        assert json.loads(env_out)["result"]["seed"] == "5"

    def test_format_after_subcommand(self, capsys):
        rc, out, _ = run(capsys, "dyadic", "khintchine", "--coeffs", "1,1", "--format", "csv")
        assert rc == 0 and out.startswith("key,value\r\n")

    def test_console_script_entry(self):
        proc = subprocess.run([sys.executable, "-m", "summa.cli", "norms", "lp", "--vec", "1,1", "--p", "1"],
                              capture_output=True, text=True)
        assert proc.returncode == 0 and json.loads(proc.stdout)["result"]
